#include "spinergo/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <json.hpp>
#include <thread>
#include <tuple>

#include "spinergo/errors.hpp"

namespace spinergo {

namespace {

constexpr int kFormatVersion = 1;

// Runs tasks on a bounded pool; each task owns its output slot.
void run_pool(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < count; k = next++) task(k);
    });
}

std::string sanitize(std::string text) {
  for (char& c : text)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
  return text;
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += '|';
    out += f;
  }
  return out;
}

std::size_t measure_rank(const RunConfig& cfg, Measure m) {
  return static_cast<std::size_t>(std::find(cfg.measures.begin(), cfg.measures.end(), m) -
                                  cfg.measures.begin());
}

std::vector<std::string> common_flags(const BondGraph& graph) {
  std::vector<std::string> flags;
  if (graph.geometry() == Geometry::Torus) flags.push_back("torus_aspect_assumed=" + graph.dims_string());
  return flags;
}

ResultRow to_row(const ErgodicityReport& r, const BondGraph& graph, double zero_threshold,
                 bool refinement) {
  std::vector<std::string> flags = common_flags(graph);
  flags.push_back("fluct=" + to_string(r.fluctuation));
  if (!r.optimizer_converged) flags.push_back("nonconverged");
  if (r.score >= zero_threshold) flags.push_back("nonergodic");
  if (refinement) flags.push_back("refine");
  return {r.geometry, r.dims,        r.gamma,       r.delta,        r.a,     r.jalpha,
          r.measure,  r.q_time_avg,  r.q_can_max,   r.argmax_beta,  r.score, join_flags(flags)};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

template <typename Row>
std::string render_csv(Subcommand subcommand, const std::string& header, const std::vector<Row>& rows) {
  std::string text = "# spin-ergo " + to_string(subcommand) + " csv v" +
                     std::to_string(kFormatVersion) + "\n" + header + "\n";
  for (const auto& row : rows) text += to_csv_line(row) + "\n";
  return text;
}

nlohmann::json manifest(const RunConfig& cfg, Subcommand subcommand, const BondGraph& graph,
                        const SweepOutput& out) {
  using nlohmann::json;
  const auto& p = cfg.protocol;
  json m;
  m["tool"] = "spin-ergo";
  m["format_version"] = kFormatVersion;
  m["subcommand"] = to_string(subcommand);
  const auto pair = graph.pair(p.pair);
  m["lattice"] = {{"geometry", graph.tag()},
                  {"dims", cfg.dims},
                  {"n_sites", graph.n_sites()},
                  {"bonds", graph.bonds().size()},
                  {"pair_selector", to_string(p.pair)},
                  {"pair", {pair.first, pair.second}},
                  {"site_order", graph.geometry() == Geometry::Ladder  ? "rail-major"
                                 : graph.geometry() == Geometry::Torus ? "row-major"
                                                                       : "sequential"}};
  m["axes"] = {{"gamma", cfg.gamma}, {"delta", cfg.delta}, {"a", cfg.a}, {"jbeta", cfg.jbeta}};
  m["jalpha"] = cfg.jalpha ? json(*cfg.jalpha) : json(nullptr);
  json measures = json::array();
  for (Measure meas : cfg.measures) measures.push_back(to_string(meas));
  m["measures"] = measures;
  m["time_protocol"] = {{"t_max", p.time.t_max},
                        {"t_step", p.time.t_step},
                        {"t_large", p.time.t_large},
                        {"window", p.time.window},
                        {"window_only", p.time.window_only},
                        {"average", "trapezoidal mean over [t_large, t_large + window]"}};
  json beta = {{"points", p.beta.points},
               {"low_factor", p.beta.low_factor},
               {"high_factor", p.beta.high_factor},
               {"anchors", p.beta.anchors},
               {"spacing", "log"}};
  if (cfg.jalpha) beta["values"] = p.beta.values(*cfg.jalpha);
  m["beta_grid"] = beta;
  m["optimizer"] = {{"grid_theta", p.measure.optimizer.grid_theta},
                    {"grid_phi", p.measure.optimizer.grid_phi},
                    {"tolerance", p.measure.optimizer.tolerance},
                    {"max_steps", p.measure.optimizer.max_steps},
                    {"method", "grid scan then Nelder-Mead on (theta, phi)"}};
  m["discord_side"] = p.measure.discord_side == Side::A ? "A" : "B";
  m["work_deficit"] = "one-way projective dephasing, better of both sides";
  m["zero_threshold"] = p.zero_threshold;
  m["weight_tolerance"] = p.weight_tolerance;
  m["transition"] = cfg.transition;
  m["delta_resolution"] = cfg.delta_resolution;
  m["units"] = "J = hbar = k_B = 1; axes are J beta, J alpha, J t / hbar; entropies in bits";
  m["number_format"] = "%.12g";
  m["defaulted_keys"] = cfg.defaulted;
  json notes = json::array();
  if (graph.geometry() == Geometry::Torus)
    notes.push_back("torus aspect ratio " + graph.dims_string() + " is an assumption");
  notes.push_back("basis: site 0 is the most significant qubit, bit 0 = spin up");
  m["notes"] = notes;
  json files = json::array();
  for (const auto& f : out.files) files.push_back(f.filename().string());
  m["files"] = files;
  m["rows"] = out.rows.size() + out.equilibrium_rows.size() + out.evolve_rows.size();
  m["failed_points"] = out.failed_points;
  return m;
}

void require_dynamics_keys(const RunConfig& cfg) {
  if (cfg.a.empty()) throw ConfigError("missing required key 'a'");
  if (!cfg.jalpha) throw ConfigError("missing required key 'jalpha'");
}

}  // namespace

Subcommand parse_subcommand(std::string_view text) {
  if (text == "equilibrium") return Subcommand::Equilibrium;
  if (text == "evolve") return Subcommand::Evolve;
  if (text == "ergodicity") return Subcommand::Ergodicity;
  throw InvalidArgument("unknown subcommand '" + std::string(text) + "'");
}

std::string to_string(Subcommand subcommand) {
  switch (subcommand) {
    case Subcommand::Equilibrium:
      return "equilibrium";
    case Subcommand::Evolve:
      return "evolve";
    case Subcommand::Ergodicity:
      return "ergodicity";
  }
  return "?";
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drops the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string csv_header(Subcommand subcommand) {
  switch (subcommand) {
    case Subcommand::Equilibrium:
      return "geometry,dims,gamma,delta,jbeta,measure,value,flags";
    case Subcommand::Evolve:
      return "geometry,dims,gamma,delta,a,jalpha,t,measure,value,flags";
    case Subcommand::Ergodicity:
      return "geometry,dims,gamma,delta,a,jalpha,measure,q_time_avg,q_can_max,argmax_jbeta,score,"
             "flags";
  }
  return {};
}

std::string to_csv_line(const ResultRow& r) {
  return r.geometry + ',' + r.dims + ',' + format_number(r.gamma) + ',' + format_number(r.delta) +
         ',' + format_number(r.a) + ',' + format_number(r.jalpha) + ',' + to_string(r.measure) +
         ',' + format_number(r.q_time_avg) + ',' + format_number(r.q_can_max) + ',' +
         format_number(r.argmax_jbeta) + ',' + format_number(r.score) + ',' + r.flags;
}

std::string to_csv_line(const EquilibriumRow& r) {
  return r.geometry + ',' + r.dims + ',' + format_number(r.gamma) + ',' + format_number(r.delta) +
         ',' + format_number(r.jbeta) + ',' + to_string(r.measure) + ',' + format_number(r.value) +
         ',' + r.flags;
}

std::string to_csv_line(const EvolveRow& r) {
  return r.geometry + ',' + r.dims + ',' + format_number(r.gamma) + ',' + format_number(r.delta) +
         ',' + format_number(r.a) + ',' + format_number(r.jalpha) + ',' + format_number(r.t) + ',' +
         to_string(r.measure) + ',' + format_number(r.value) + ',' + r.flags;
}

std::string to_csv_line(const TransitionRow& r) {
  return r.geometry + ',' + r.dims + ',' + format_number(r.gamma) + ',' + format_number(r.a) + ',' +
         format_number(r.jalpha) + ',' + to_string(r.measure) + ',' + (r.found ? "1" : "0") + ',' +
         (r.found ? format_number(r.delta_c) : std::string()) + ',' + format_number(r.resolution) +
         ',' + r.note;
}

SweepOutput run_sweep(const RunConfig& cfg, Subcommand subcommand,
                      const std::filesystem::path& out_dir, int threads) {
  const BondGraph graph = build_lattice(cfg.geometry, cfg.dims);
  const auto& protocol = cfg.protocol;
  // Fail on an unusable output directory before any computation.
  std::filesystem::create_directories(out_dir);
  SweepOutput out;
  std::mutex guard;

  // (gamma, delta) groups share the post-quench diagonalization.
  struct Group {
    double gamma;
    double delta;
  };
  std::vector<Group> groups;
  for (double g : cfg.gamma)
    for (double d : cfg.delta) groups.push_back({g, d});

  auto record_failure = [&](std::vector<std::string>& flags, const std::exception& e) {
    flags.push_back("failed=" + sanitize(e.what()));
    const std::lock_guard lock(guard);
    ++out.failed_points;
  };

  if (subcommand == Subcommand::Equilibrium) {
    if (cfg.jbeta.empty()) throw ConfigError("missing required key 'jbeta'");
    std::vector<std::vector<EquilibriumRow>> slots(groups.size());
    run_pool(groups.size(), threads, [&](std::size_t k) {
      const Group g = groups[k];
      std::optional<QuenchSetup> setup;
      std::string failure;
      try {
        setup.emplace(graph, g.gamma, g.delta, protocol.pair);
      } catch (const std::exception& e) {
        failure = e.what();
      }
      for (double beta : cfg.jbeta)
        for (Measure m : cfg.measures) {
          EquilibriumRow row{graph.tag(), graph.dims_string(), g.gamma, g.delta, beta, m, 0.0, {}};
          std::vector<std::string> flags = common_flags(graph);
          try {
            if (!setup) throw NumericalError(failure);
            const MeasureValue v = evaluate(m, setup->thermal.at(beta), protocol.measure);
            row.value = v.value;
            if (v.optimizer && !v.optimizer->converged) flags.push_back("nonconverged");
          } catch (const std::exception& e) {
            record_failure(flags, e);
          }
          row.flags = join_flags(flags);
          slots[k].push_back(std::move(row));
        }
    });
    for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(out.equilibrium_rows));
    std::stable_sort(out.equilibrium_rows.begin(), out.equilibrium_rows.end(),
                     [&cfg](const EquilibriumRow& x, const EquilibriumRow& y) {
                       return std::make_tuple(x.gamma, x.delta, x.jbeta, measure_rank(cfg, x.measure)) <
                              std::make_tuple(y.gamma, y.delta, y.jbeta, measure_rank(cfg, y.measure));
                     });
  } else if (subcommand == Subcommand::Evolve) {
    require_dynamics_keys(cfg);
    const std::vector<double> times = time_grid(0.0, protocol.time.t_max, protocol.time.t_step);
    std::vector<std::vector<EvolveRow>> slots(groups.size());
    run_pool(groups.size(), threads, [&](std::size_t k) {
      const Group g = groups[k];
      std::optional<QuenchSetup> setup;
      std::string failure;
      try {
        setup.emplace(graph, g.gamma, g.delta, protocol.pair);
      } catch (const std::exception& e) {
        failure = e.what();
      }
      for (double a : cfg.a) {
        std::vector<Eigen::Matrix4cd> states;
        try {
          if (!setup) throw NumericalError(failure);
          states = evolved_pair_states(*setup, a, *cfg.jalpha, times, protocol);
        } catch (const std::exception& e) {
          std::vector<std::string> flags = common_flags(graph);
          record_failure(flags, e);
          for (Measure m : cfg.measures)
            slots[k].push_back({graph.tag(), graph.dims_string(), g.gamma, g.delta, a, *cfg.jalpha,
                                0.0, m, 0.0, join_flags(flags)});
          continue;
        }
        for (std::size_t t = 0; t < times.size(); ++t)
          for (Measure m : cfg.measures) {
            EvolveRow row{graph.tag(), graph.dims_string(), g.gamma, g.delta, a, *cfg.jalpha,
                          times[t], m, 0.0, {}};
            std::vector<std::string> flags = common_flags(graph);
            try {
              const MeasureValue v = evaluate(m, states[t], protocol.measure);
              row.value = v.value;
              if (v.optimizer && !v.optimizer->converged) flags.push_back("nonconverged");
            } catch (const std::exception& e) {
              record_failure(flags, e);
            }
            row.flags = join_flags(flags);
            slots[k].push_back(std::move(row));
          }
      }
    });
    for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(out.evolve_rows));
    std::stable_sort(out.evolve_rows.begin(), out.evolve_rows.end(),
                     [&cfg](const EvolveRow& x, const EvolveRow& y) {
                       return std::make_tuple(x.gamma, x.delta, x.a, x.t, measure_rank(cfg, x.measure)) <
                              std::make_tuple(y.gamma, y.delta, y.a, y.t, measure_rank(cfg, y.measure));
                     });
  } else if (cfg.transition) {
    require_dynamics_keys(cfg);
    if (cfg.delta.size() < 2) throw ConfigError("transition search needs a delta range");
    struct Task {
      double gamma;
      double a;
    };
    std::vector<Task> tasks;
    for (double g : cfg.gamma)
      for (double a : cfg.a) tasks.push_back({g, a});
    std::vector<std::vector<ResultRow>> rows(tasks.size());
    std::vector<std::vector<TransitionRow>> found(tasks.size());
    run_pool(tasks.size(), threads, [&](std::size_t k) {
      const Task t = tasks[k];
      try {
        const auto results = find_transitions(graph, t.gamma, t.a, *cfg.jalpha, cfg.measures,
                                              cfg.delta, cfg.delta_resolution, protocol);
        for (const auto& res : results) {
          found[k].push_back({graph.tag(), graph.dims_string(), t.gamma, t.a, *cfg.jalpha,
                              res.measure, res.delta_c.has_value(), res.delta_c.value_or(0.0),
                              cfg.delta_resolution, sanitize(res.note)});
          for (const auto& [delta, report] : res.reports) {
            const bool refine = std::find(res.scan_grid.begin(), res.scan_grid.end(), delta) ==
                                res.scan_grid.end();
            rows[k].push_back(to_row(report, graph, protocol.zero_threshold, refine));
          }
        }
      } catch (const std::exception& e) {
        for (Measure m : cfg.measures) {
          std::vector<std::string> flags = common_flags(graph);
          record_failure(flags, e);
          found[k].push_back({graph.tag(), graph.dims_string(), t.gamma, t.a, *cfg.jalpha, m,
                              false, 0.0, cfg.delta_resolution, join_flags(flags)});
        }
      }
    });
    for (auto& r : rows) std::move(r.begin(), r.end(), std::back_inserter(out.rows));
    for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(out.transitions));
  } else {
    require_dynamics_keys(cfg);
    std::vector<std::vector<ResultRow>> slots(groups.size());
    run_pool(groups.size(), threads, [&](std::size_t k) {
      const Group g = groups[k];
      std::optional<QuenchSetup> setup;
      std::string failure;
      try {
        setup.emplace(graph, g.gamma, g.delta, protocol.pair);
      } catch (const std::exception& e) {
        failure = e.what();
      }
      for (double a : cfg.a) {
        try {
          if (!setup) throw NumericalError(failure);
          for (const auto& report : ergodicity_scores(*setup, a, *cfg.jalpha, cfg.measures, protocol))
            slots[k].push_back(to_row(report, graph, protocol.zero_threshold, false));
        } catch (const std::exception& e) {
          for (Measure m : cfg.measures) {
            std::vector<std::string> flags = common_flags(graph);
            record_failure(flags, e);
            slots[k].push_back({graph.tag(), graph.dims_string(), g.gamma, g.delta, a, *cfg.jalpha,
                                m, 0.0, 0.0, 0.0, 0.0, join_flags(flags)});
          }
        }
      }
    });
    for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(out.rows));
  }

  std::stable_sort(out.rows.begin(), out.rows.end(), [&cfg](const ResultRow& x, const ResultRow& y) {
    return std::make_tuple(x.gamma, x.delta, x.a, measure_rank(cfg, x.measure)) <
           std::make_tuple(y.gamma, y.delta, y.a, measure_rank(cfg, y.measure));
  });
  std::stable_sort(out.transitions.begin(), out.transitions.end(),
                   [&cfg](const TransitionRow& x, const TransitionRow& y) {
                     return std::make_tuple(x.gamma, x.a, measure_rank(cfg, x.measure)) <
                            std::make_tuple(y.gamma, y.a, measure_rank(cfg, y.measure));
                   });

  const auto csv_path = out_dir / (cfg.output + ".csv");
  const std::string header = csv_header(subcommand);
  switch (subcommand) {
    case Subcommand::Equilibrium:
      write_file(csv_path, render_csv(subcommand, header, out.equilibrium_rows));
      break;
    case Subcommand::Evolve:
      write_file(csv_path, render_csv(subcommand, header, out.evolve_rows));
      break;
    case Subcommand::Ergodicity:
      write_file(csv_path, render_csv(subcommand, header, out.rows));
      break;
  }
  out.files.push_back(csv_path);
  if (subcommand == Subcommand::Ergodicity && cfg.transition) {
    const auto path = out_dir / (cfg.output + "_transitions.csv");
    write_file(path, render_csv(subcommand,
                                "geometry,dims,gamma,a,jalpha,measure,found,delta_c,resolution,note",
                                out.transitions));
    out.files.push_back(path);
  }
  const auto manifest_path = out_dir / (cfg.output + "_manifest.json");
  out.files.push_back(manifest_path);
  write_file(manifest_path, manifest(cfg, subcommand, graph, out).dump(2) + "\n");
  return out;
}

}  // namespace spinergo
