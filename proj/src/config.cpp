#include "spinergo/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "spinergo/errors.hpp"

namespace spinergo {

namespace {

struct Value {
  std::vector<std::string> items;  // scalar values hold one item
  bool list = false;
  std::optional<std::string> step;  // set for ranges
  int line = 0;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Value parse_value(const std::string& raw, int line) {
  Value v;
  v.line = line;
  if (raw.empty()) throw ConfigError("missing value", line);
  if (raw.front() != '[') {
    if (raw.find_first_of("[],") != std::string::npos) throw ConfigError("unexpected list syntax", line);
    v.items.push_back(raw);
    return v;
  }
  const auto close = raw.find(']');
  if (close == std::string::npos) throw ConfigError("unterminated list", line);
  v.list = true;
  std::stringstream body(raw.substr(1, close - 1));
  for (std::string item; std::getline(body, item, ',');) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list element", line);
    v.items.push_back(item);
  }
  if (v.items.empty()) throw ConfigError("empty list", line);
  const std::string rest = trim(std::string_view(raw).substr(close + 1));
  if (!rest.empty()) {
    if (rest.rfind("step", 0) != 0) throw ConfigError("expected 'step' after range", line);
    const std::string step = trim(std::string_view(rest).substr(4));
    if (step.empty()) throw ConfigError("range step is missing", line);
    if (v.items.size() != 2) throw ConfigError("a range needs exactly [lo, hi]", line);
    v.step = step;
  }
  return v;
}

double to_number(const std::string& text, const std::string& key, int line) {
  double out = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ConfigError("key '" + key + "': '" + text + "' is not a finite number", line);
  return out;
}

int to_int(const std::string& text, const std::string& key, int line) {
  int out = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("key '" + key + "': '" + text + "' is not an integer", line);
  return out;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Value> values) : values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  const Value& get(const std::string& key) const { return values_.at(key); }

  std::vector<double> axis(const std::string& key) const {
    const Value& v = get(key);
    std::vector<double> out;
    if (v.step) {
      const double lo = to_number(v.items[0], key, v.line);
      const double hi = to_number(v.items[1], key, v.line);
      const double step = to_number(*v.step, key, v.line);
      if (!(step > 0.0)) throw ConfigError("key '" + key + "': range step must be positive", v.line);
      if (hi < lo) throw ConfigError("key '" + key + "': range is empty", v.line);
      const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
      for (long long k = 0; k <= n; ++k) {
        // Snap to 12 significant digits so 0.1 + 2 * 0.05 reads as 0.2.
        const double x = lo + static_cast<double>(k) * step;
        out.push_back(std::stod(format_12(x)));
      }
      return out;
    }
    for (const auto& item : v.items) out.push_back(to_number(item, key, v.line));
    return out;
  }

  double scalar(const std::string& key) const {
    const Value& v = get(key);
    if (v.list) throw ConfigError("key '" + key + "' expects a single number", v.line);
    return to_number(v.items[0], key, v.line);
  }

  int integer(const std::string& key) const {
    const Value& v = get(key);
    if (v.list) throw ConfigError("key '" + key + "' expects a single integer", v.line);
    return to_int(v.items[0], key, v.line);
  }

  std::string word(const std::string& key) const {
    const Value& v = get(key);
    if (v.list) throw ConfigError("key '" + key + "' expects a single word", v.line);
    return v.items[0];
  }

  bool flag(const std::string& key) const {
    const std::string w = word(key);
    if (w == "true") return true;
    if (w == "false") return false;
    throw ConfigError("key '" + key + "' expects true or false", get(key).line);
  }

  std::vector<std::string> words(const std::string& key) const { return get(key).items; }

 private:
  static std::string format_12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
  }

  std::map<std::string, Value> values_;
};

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "geometry",        "dims",           "pair",           "gamma",
      "delta",           "a",              "jalpha",         "jbeta",
      "measures",        "beta_points",    "beta_low_factor", "beta_high_factor",
      "beta_anchors",    "t_max",          "t_step",         "t_large",
      "window",          "window_only",    "zero_threshold", "weight_tolerance",
      "opt_grid_theta",  "opt_grid_phi",   "opt_tolerance",  "opt_max_steps",
      "discord_side",    "transition",     "delta_resolution", "output"};
  return keys;
}

RunConfig parse_config(std::string_view text) {
  std::map<std::string, Value> values;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) throw ConfigError("missing key", line_no);
    const auto& known = config_keys();
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("unknown key '" + key + "'", line_no);
    if (values.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
    values.emplace(key, parse_value(trim(std::string_view(line).substr(eq + 1)), line_no));
  }

  const Reader r(std::move(values));
  RunConfig cfg;
  for (const auto& key : config_keys())
    if (!r.has(key)) cfg.defaulted.insert(key);

  auto require = [&r](const std::string& key) {
    if (!r.has(key)) throw ConfigError("missing required key '" + key + "'");
  };
  auto semantic = [&r](const std::string& key, const std::string& what) {
    return ConfigError("key '" + key + "': " + what, r.get(key).line);
  };

  require("geometry");
  try {
    cfg.geometry = parse_geometry(r.word("geometry"));
  } catch (const InvalidGeometry& e) {
    throw semantic("geometry", e.what());
  }
  require("dims");
  for (const auto& d : r.words("dims")) cfg.dims.push_back(to_int(d, "dims", r.get("dims").line));
  try {
    (void)build_lattice(cfg.geometry, cfg.dims);
  } catch (const std::exception& e) {
    throw semantic("dims", e.what());
  }
  if (r.has("pair")) {
    try {
      cfg.protocol.pair = parse_pair_selector(r.word("pair"));
    } catch (const std::exception& e) {
      throw semantic("pair", e.what());
    }
    if (cfg.protocol.pair == PairSelector::Rung && cfg.geometry != Geometry::Ladder)
      throw semantic("pair", "rung pairs exist only on the ladder");
  }

  require("gamma");
  cfg.gamma = r.axis("gamma");
  require("delta");
  cfg.delta = r.axis("delta");
  if (r.has("a")) cfg.a = r.axis("a");
  if (r.has("jalpha")) {
    cfg.jalpha = r.scalar("jalpha");
    if (!(*cfg.jalpha > 0.0)) throw semantic("jalpha", "must be positive");
  }
  if (r.has("jbeta")) {
    cfg.jbeta = r.axis("jbeta");
    for (double b : cfg.jbeta)
      if (!(b >= 0.0)) throw semantic("jbeta", "inverse temperatures must be non-negative");
  }

  require("measures");
  for (const auto& m : r.words("measures")) {
    try {
      const Measure parsed = parse_measure(m);
      if (std::find(cfg.measures.begin(), cfg.measures.end(), parsed) == cfg.measures.end())
        cfg.measures.push_back(parsed);
    } catch (const InvalidArgument&) {
      throw semantic("measures", "unknown measure '" + m + "'");
    }
  }

  auto& beta = cfg.protocol.beta;
  if (r.has("beta_points")) beta.points = r.integer("beta_points");
  if (r.has("beta_low_factor")) beta.low_factor = r.scalar("beta_low_factor");
  if (r.has("beta_high_factor")) beta.high_factor = r.scalar("beta_high_factor");
  if (r.has("beta_anchors")) beta.anchors = r.axis("beta_anchors");
  if (beta.points < 1) throw semantic("beta_points", "must be at least 1");
  if (!(beta.low_factor > 0.0) || !(beta.high_factor >= beta.low_factor))
    throw ConfigError("beta factors need 0 < beta_low_factor <= beta_high_factor");

  auto& time = cfg.protocol.time;
  if (r.has("t_max")) time.t_max = r.scalar("t_max");
  if (r.has("t_step")) time.t_step = r.scalar("t_step");
  if (r.has("t_large")) time.t_large = r.scalar("t_large");
  if (r.has("window")) time.window = r.scalar("window");
  if (r.has("window_only")) time.window_only = r.flag("window_only");
  if (!(time.t_step > 0.0)) throw ConfigError("t_step must be positive");
  if (!(time.window > 0.0) || time.t_large < 0.0)
    throw ConfigError("window must be positive and t_large non-negative");
  if (time.t_large + time.window > time.t_max + 1e-9)
    throw ConfigError("t_large + window exceeds t_max");

  if (r.has("zero_threshold")) cfg.protocol.zero_threshold = r.scalar("zero_threshold");
  if (r.has("weight_tolerance")) cfg.protocol.weight_tolerance = r.scalar("weight_tolerance");
  auto& opt = cfg.protocol.measure.optimizer;
  if (r.has("opt_grid_theta")) opt.grid_theta = r.integer("opt_grid_theta");
  if (r.has("opt_grid_phi")) opt.grid_phi = r.integer("opt_grid_phi");
  if (r.has("opt_tolerance")) opt.tolerance = r.scalar("opt_tolerance");
  if (r.has("opt_max_steps")) opt.max_steps = r.integer("opt_max_steps");
  if (opt.grid_theta < 2 || opt.grid_phi < 1 || opt.max_steps < 0 || !(opt.tolerance > 0.0))
    throw ConfigError("optimizer settings out of range");
  if (r.has("discord_side")) {
    try {
      cfg.protocol.measure.discord_side = parse_side(r.word("discord_side"));
    } catch (const InvalidArgument& e) {
      throw semantic("discord_side", e.what());
    }
  }

  if (r.has("transition")) cfg.transition = r.flag("transition");
  if (r.has("delta_resolution")) cfg.delta_resolution = r.scalar("delta_resolution");
  if (!(cfg.delta_resolution > 0.0)) throw semantic("delta_resolution", "must be positive");
  if (r.has("output")) cfg.output = r.word("output");
  if (cfg.output.empty() || cfg.output.find('/') != std::string::npos)
    throw ConfigError("output must be a plain file stem");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace spinergo
