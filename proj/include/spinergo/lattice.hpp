#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace spinergo {

enum class Geometry { Ring, Ladder, Torus };

/// Which nearest-neighbour pair a reduced state is taken on.
enum class PairSelector { Auto, Rail, Rung };

enum class BondKind { Chain, Rail, Rung, Horizontal, Vertical };

struct Bond {
  int i = 0;  // i < j
  int j = 0;
  BondKind kind = BondKind::Chain;

  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Nearest-neighbour bond graph with periodic boundaries.
///
/// Site numbering: ring sites 0..L-1; ladder rail-major (rail 0 holds
/// 0..L-1, rail 1 holds L..2L-1, rung partners are s and s+L); torus
/// row-major with site = row * Lx + col.
class BondGraph {
 public:
  BondGraph(Geometry geometry, std::vector<int> dims, int n_sites, std::vector<Bond> bonds);

  int n_sites() const noexcept { return n_sites_; }
  Geometry geometry() const noexcept { return geometry_; }
  const std::vector<int>& dims() const noexcept { return dims_; }
  const std::vector<Bond>& bonds() const noexcept { return bonds_; }

  int degree(int site) const;

  /// Representative nearest-neighbour pair for reduced states. Auto picks a
  /// rail pair on the ladder and a horizontal pair on the torus; Rung is
  /// only valid on the ladder.
  std::pair<int, int> pair(PairSelector selector = PairSelector::Auto) const;

  /// "ring", "ladder" or "torus".
  std::string tag() const;
  /// Human readable dims, e.g. "8", "2x4", "4x3".
  std::string dims_string() const;

 private:
  Geometry geometry_;
  std::vector<int> dims_;
  int n_sites_;
  std::vector<Bond> bonds_;
};

BondGraph build_ring(int length);
BondGraph build_ladder(int length);
BondGraph build_torus(int lx, int ly);

/// Dispatch on geometry; dims are {L} for ring and ladder, {Lx, Ly} for torus.
BondGraph build_lattice(Geometry geometry, const std::vector<int>& dims);

Geometry parse_geometry(std::string_view text);
PairSelector parse_pair_selector(std::string_view text);
std::string to_string(Geometry geometry);
std::string to_string(PairSelector selector);

}  // namespace spinergo
