#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spinergo/config.hpp"

namespace spinergo {

enum class Subcommand { Equilibrium, Evolve, Ergodicity };

Subcommand parse_subcommand(std::string_view text);
std::string to_string(Subcommand subcommand);

/// One CSV record of an ergodicity sweep.
struct ResultRow {
  std::string geometry;
  std::string dims;
  double gamma = 0.0;
  double delta = 0.0;
  double a = 0.0;
  double jalpha = 0.0;
  Measure measure = Measure::Discord;
  double q_time_avg = 0.0;
  double q_can_max = 0.0;
  double argmax_jbeta = 0.0;
  double score = 0.0;
  std::string flags;
};

/// Measure of a canonical state at one inverse temperature.
struct EquilibriumRow {
  std::string geometry;
  std::string dims;
  double gamma = 0.0;
  double delta = 0.0;
  double jbeta = 0.0;
  Measure measure = Measure::Discord;
  double value = 0.0;
  std::string flags;
};

/// Measure of the evolved state at one time.
struct EvolveRow {
  std::string geometry;
  std::string dims;
  double gamma = 0.0;
  double delta = 0.0;
  double a = 0.0;
  double jalpha = 0.0;
  double t = 0.0;
  Measure measure = Measure::Discord;
  double value = 0.0;
  std::string flags;
};

struct TransitionRow {
  std::string geometry;
  std::string dims;
  double gamma = 0.0;
  double a = 0.0;
  double jalpha = 0.0;
  Measure measure = Measure::Discord;
  bool found = false;
  double delta_c = 0.0;
  double resolution = 0.0;
  std::string note;
};

struct SweepOutput {
  std::vector<ResultRow> rows;
  std::vector<EquilibriumRow> equilibrium_rows;
  std::vector<EvolveRow> evolve_rows;
  std::vector<TransitionRow> transitions;
  std::vector<std::filesystem::path> files;
  std::size_t failed_points = 0;
};

/// Fixed-format number used in every emitted file: 12 significant digits,
/// no negative zero.
std::string format_number(double value);

std::string csv_header(Subcommand subcommand);
std::string to_csv_line(const ResultRow& row);
std::string to_csv_line(const EquilibriumRow& row);
std::string to_csv_line(const EvolveRow& row);
std::string to_csv_line(const TransitionRow& row);

/// Runs every parameter point of the config, writes `<output>.csv` (plus
/// `<output>_transitions.csv` when requested) and `<output>_manifest.json`
/// into out_dir. Rows are sorted by the sweep axes, so output does not
/// depend on scheduling. Per-point failures are recorded in the flags
/// column; I/O failures throw.
SweepOutput run_sweep(const RunConfig& config, Subcommand subcommand,
                      const std::filesystem::path& out_dir, int threads = 1);

}  // namespace spinergo
