#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "spinergo/errors.hpp"
#include "spinergo/lattice.hpp"

using namespace spinergo;

namespace {

std::set<std::pair<int, int>> bond_set(const BondGraph& g) {
  std::set<std::pair<int, int>> out;
  for (const auto& b : g.bonds()) out.insert({b.i, b.j});
  return out;
}

void expect_well_formed(const BondGraph& g) {
  std::set<std::pair<int, int>> seen;
  for (const auto& b : g.bonds()) {
    EXPECT_LE(0, b.i);
    EXPECT_LT(b.i, b.j);
    EXPECT_LT(b.j, g.n_sites());
    EXPECT_TRUE(seen.insert({b.i, b.j}).second) << "duplicate bond " << b.i << "-" << b.j;
  }
}

// Relabels sites through `map` and checks the bond set is unchanged.
template <typename Map>
bool invariant_under(const BondGraph& g, Map map) {
  std::set<std::pair<int, int>> moved;
  for (const auto& b : g.bonds()) {
    int i = map(b.i), j = map(b.j);
    moved.insert({std::min(i, j), std::max(i, j)});
  }
  return moved == bond_set(g);
}

}  // namespace

TEST(Lattice, SmallestRing) {
  const BondGraph g = build_ring(3);
  const std::vector<Bond> expected = {{0, 1, BondKind::Chain}, {1, 2, BondKind::Chain}, {0, 2, BondKind::Chain}};
  EXPECT_EQ(g.bonds(), expected);
}

TEST(Lattice, RingCountsAndDegrees) {
  for (int l = 3; l <= 14; ++l) {
    const BondGraph g = build_ring(l);
    expect_well_formed(g);
    EXPECT_EQ(g.n_sites(), l);
    EXPECT_EQ(g.bonds().size(), static_cast<std::size_t>(l));
    for (int s = 0; s < l; ++s) EXPECT_EQ(g.degree(s), 2);
    EXPECT_TRUE(invariant_under(g, [l](int s) { return (s + 1) % l; }));
  }
  EXPECT_EQ(build_ring(8).bonds().size(), 8u);
  EXPECT_EQ(build_ring(12).bonds().size(), 12u);
}

TEST(Lattice, LadderCountsAndDegrees) {
  for (int l = 3; l <= 7; ++l) {
    const BondGraph g = build_ladder(l);
    expect_well_formed(g);
    EXPECT_EQ(g.n_sites(), 2 * l);
    EXPECT_EQ(g.bonds().size(), static_cast<std::size_t>(3 * l));
    const auto rails = std::count_if(g.bonds().begin(), g.bonds().end(),
                                     [](const Bond& b) { return b.kind == BondKind::Rail; });
    EXPECT_EQ(rails, 2 * l);
    for (int s = 0; s < 2 * l; ++s) EXPECT_EQ(g.degree(s), 3);
    // Translation along the rails and exchange of the rails.
    EXPECT_TRUE(invariant_under(g, [l](int s) { return (s / l) * l + (s % l + 1) % l; }));
    EXPECT_TRUE(invariant_under(g, [l](int s) { return (s + l) % (2 * l); }));
  }
  const BondGraph g = build_ladder(4);
  EXPECT_EQ(g.n_sites(), 8);
  EXPECT_EQ(g.bonds().size(), 12u);
  EXPECT_EQ(build_ladder(3).bonds().size(), 9u);
  EXPECT_EQ(g.pair(PairSelector::Auto), std::make_pair(0, 1));
  EXPECT_EQ(g.pair(PairSelector::Rail), std::make_pair(0, 1));
  EXPECT_EQ(g.pair(PairSelector::Rung), std::make_pair(0, 4));
}

TEST(Lattice, TorusCountsAndDegrees) {
  for (int lx = 3; lx <= 5; ++lx)
    for (int ly = 3; ly <= 4; ++ly) {
      const BondGraph g = build_torus(lx, ly);
      expect_well_formed(g);
      EXPECT_EQ(g.n_sites(), lx * ly);
      EXPECT_EQ(g.bonds().size(), static_cast<std::size_t>(2 * lx * ly));
      for (int s = 0; s < lx * ly; ++s) EXPECT_EQ(g.degree(s), 4);
      EXPECT_TRUE(invariant_under(g, [lx](int s) { return (s / lx) * lx + (s % lx + 1) % lx; }));
      EXPECT_TRUE(invariant_under(g, [lx, ly](int s) { return (s + lx) % (lx * ly); }));
    }
  EXPECT_EQ(build_torus(3, 3).bonds().size(), 18u);
  EXPECT_EQ(build_torus(4, 3).bonds().size(), 24u);
  EXPECT_EQ(build_torus(4, 4).bonds().size(), 32u);
  EXPECT_EQ(build_torus(4, 3).dims_string(), "4x3");
}

TEST(Lattice, TorusLengthTwoCollapsesWrapBonds) {
  const BondGraph g = build_torus(6, 2);
  expect_well_formed(g);
  // 12 horizontal bonds plus 6 vertical: the wrap bond coincides with the interior one.
  EXPECT_EQ(g.bonds().size(), 18u);
  for (int s = 0; s < 12; ++s) EXPECT_EQ(g.degree(s), 3);
}

TEST(Lattice, Deterministic) {
  EXPECT_EQ(build_torus(4, 3).bonds(), build_torus(4, 3).bonds());
  EXPECT_EQ(build_ladder(5).bonds(), build_ladder(5).bonds());
}

TEST(Lattice, RejectsDegenerateSizes) {
  EXPECT_THROW(build_ring(2), InvalidGeometry);
  EXPECT_THROW(build_ladder(2), InvalidGeometry);
  EXPECT_THROW(build_torus(1, 4), InvalidGeometry);
  EXPECT_THROW(build_torus(4, 1), InvalidGeometry);
  EXPECT_THROW(build_lattice(Geometry::Torus, {4}), InvalidGeometry);
  EXPECT_THROW(build_ring(8).pair(PairSelector::Rung), InvalidArgument);
  EXPECT_THROW(parse_geometry("cube"), InvalidGeometry);
}
