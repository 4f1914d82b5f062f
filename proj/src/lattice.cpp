#include "spinergo/lattice.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "spinergo/errors.hpp"

namespace spinergo {

namespace {

// Adds (a, b) normalized to a < b unless the pair is already present.
void add_bond(std::vector<Bond>& bonds, std::set<std::pair<int, int>>& seen, int a, int b,
              BondKind kind) {
  if (a == b) return;
  if (a > b) std::swap(a, b);
  if (!seen.insert({a, b}).second) return;
  bonds.push_back({a, b, kind});
}

}  // namespace

BondGraph::BondGraph(Geometry geometry, std::vector<int> dims, int n_sites,
                     std::vector<Bond> bonds)
    : geometry_(geometry), dims_(std::move(dims)), n_sites_(n_sites), bonds_(std::move(bonds)) {}

int BondGraph::degree(int site) const {
  if (site < 0 || site >= n_sites_) throw InvalidArgument("site index out of range");
  return static_cast<int>(std::count_if(bonds_.begin(), bonds_.end(), [site](const Bond& b) {
    return b.i == site || b.j == site;
  }));
}

std::pair<int, int> BondGraph::pair(PairSelector selector) const {
  switch (geometry_) {
    case Geometry::Ring:
      if (selector == PairSelector::Rung) throw InvalidArgument("rung pair requires a ladder");
      return {0, 1};
    case Geometry::Ladder:
      if (selector == PairSelector::Rung) return {0, dims_[0]};
      return {0, 1};
    case Geometry::Torus:
      if (selector == PairSelector::Rung) throw InvalidArgument("rung pair requires a ladder");
      return {0, 1};
  }
  return {0, 1};
}

std::string BondGraph::tag() const { return to_string(geometry_); }

std::string BondGraph::dims_string() const {
  std::ostringstream out;
  switch (geometry_) {
    case Geometry::Ring:
      out << dims_[0];
      break;
    case Geometry::Ladder:
      out << "2x" << dims_[0];
      break;
    case Geometry::Torus:
      out << dims_[0] << 'x' << dims_[1];
      break;
  }
  return out.str();
}

BondGraph build_ring(int length) {
  if (length < 3) throw InvalidGeometry("ring needs at least 3 sites, got " + std::to_string(length));
  std::vector<Bond> bonds;
  std::set<std::pair<int, int>> seen;
  for (int i = 0; i < length; ++i) add_bond(bonds, seen, i, (i + 1) % length, BondKind::Chain);
  return BondGraph(Geometry::Ring, {length}, length, std::move(bonds));
}

BondGraph build_ladder(int length) {
  if (length < 3)
    throw InvalidGeometry("ladder needs at least 3 rungs, got " + std::to_string(length));
  std::vector<Bond> bonds;
  std::set<std::pair<int, int>> seen;
  for (int rail = 0; rail < 2; ++rail) {
    const int offset = rail * length;
    for (int i = 0; i < length; ++i)
      add_bond(bonds, seen, offset + i, offset + (i + 1) % length, BondKind::Rail);
  }
  for (int i = 0; i < length; ++i) add_bond(bonds, seen, i, i + length, BondKind::Rung);
  return BondGraph(Geometry::Ladder, {length}, 2 * length, std::move(bonds));
}

BondGraph build_torus(int lx, int ly) {
  if (lx < 2 || ly < 2)
    throw InvalidGeometry("torus needs both sides >= 2, got " + std::to_string(lx) + "x" +
                          std::to_string(ly));
  std::vector<Bond> bonds;
  std::set<std::pair<int, int>> seen;
  auto site = [lx](int row, int col) { return row * lx + col; };
  for (int row = 0; row < ly; ++row)
    for (int col = 0; col < lx; ++col)
      add_bond(bonds, seen, site(row, col), site(row, (col + 1) % lx), BondKind::Horizontal);
  for (int row = 0; row < ly; ++row)
    for (int col = 0; col < lx; ++col)
      add_bond(bonds, seen, site(row, col), site((row + 1) % ly, col), BondKind::Vertical);
  return BondGraph(Geometry::Torus, {lx, ly}, lx * ly, std::move(bonds));
}

BondGraph build_lattice(Geometry geometry, const std::vector<int>& dims) {
  switch (geometry) {
    case Geometry::Ring:
      if (dims.size() != 1) throw InvalidGeometry("ring dims must be [L]");
      return build_ring(dims[0]);
    case Geometry::Ladder:
      if (dims.size() != 1) throw InvalidGeometry("ladder dims must be [L] (rungs)");
      return build_ladder(dims[0]);
    case Geometry::Torus:
      if (dims.size() != 2) throw InvalidGeometry("torus dims must be [Lx, Ly]");
      return build_torus(dims[0], dims[1]);
  }
  throw InvalidGeometry("unknown geometry");
}

Geometry parse_geometry(std::string_view text) {
  if (text == "ring") return Geometry::Ring;
  if (text == "ladder") return Geometry::Ladder;
  if (text == "torus") return Geometry::Torus;
  throw InvalidGeometry("unknown geometry '" + std::string(text) + "'");
}

PairSelector parse_pair_selector(std::string_view text) {
  if (text == "auto") return PairSelector::Auto;
  if (text == "rail") return PairSelector::Rail;
  if (text == "rung") return PairSelector::Rung;
  throw InvalidArgument("unknown pair selector '" + std::string(text) + "'");
}

std::string to_string(Geometry geometry) {
  switch (geometry) {
    case Geometry::Ring:
      return "ring";
    case Geometry::Ladder:
      return "ladder";
    case Geometry::Torus:
      return "torus";
  }
  return "?";
}

std::string to_string(PairSelector selector) {
  switch (selector) {
    case PairSelector::Auto:
      return "auto";
    case PairSelector::Rail:
      return "rail";
    case PairSelector::Rung:
      return "rung";
  }
  return "?";
}

}  // namespace spinergo
