#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spinergo/ergodicity.hpp"
#include "spinergo/lattice.hpp"
#include "spinergo/qcorr.hpp"

namespace spinergo {

/// Validated run configuration.
///
/// Text format: one `key = value` per line, `#` starts a comment. Values are
/// numbers, identifiers, booleans, lists `[v1, v2, ...]` or ranges
/// `[lo, hi] step s` (inclusive, lo + k s). Sweep axes accept a scalar, a
/// list or a range.
struct RunConfig {
  Geometry geometry = Geometry::Ring;
  std::vector<int> dims;
  std::vector<double> gamma;
  std::vector<double> delta;
  std::vector<double> a;       // initial fields; required by evolve and ergodicity
  std::optional<double> jalpha;
  std::vector<double> jbeta;   // equilibrium grid
  std::vector<Measure> measures;
  ProtocolConfig protocol;
  bool transition = false;     // also search delta_c over the delta axis
  double delta_resolution = 0.05;
  std::string output = "spin_ergo";

  /// Keys the text left unset and that therefore carry defaults.
  std::set<std::string> defaulted;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Every recognised key, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace spinergo
