#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "aklt/errors.hpp"
#include "aklt/lattice.hpp"

namespace aklt {
namespace {

bool adjacent(const HoneycombLattice& lat, int s, int t) {
  const auto nb = lat.neighbors(s);
  return std::find(nb.begin(), nb.end(), t) != nb.end();
}

TEST(Lattice, SmallestTorusHasTripleBond) {
  HoneycombLattice lat(1, 1);
  EXPECT_EQ(lat.site_count(), 2);
  EXPECT_EQ(lat.bond_count(), 3);
  for (const Bond& b : lat.bonds()) {
    EXPECT_EQ(b.a_site, 0);
    EXPECT_EQ(b.b_site, 1);
  }
  const auto nb = lat.neighbors(0);
  EXPECT_EQ(std::count(nb.begin(), nb.end(), 1), 3);
}

TEST(Lattice, Counting) {
  HoneycombLattice l22(2, 2);
  EXPECT_EQ(l22.site_count(), 8);
  EXPECT_EQ(l22.bond_count(), 12);
  HoneycombLattice l60(60, 60);
  EXPECT_EQ(l60.site_count(), 7200);
  EXPECT_EQ(l60.bond_count(), 10800);
}

TEST(Lattice, TwoByTwoNeighboursOnOppositeSublattice) {
  HoneycombLattice lat(2, 2);
  for (int s = 0; s < lat.site_count(); ++s) {
    const auto nb = lat.neighbors(s);
    EXPECT_EQ(std::set<int>(nb.begin(), nb.end()).size(), 3u);
    for (int t : nb) EXPECT_NE(lat.sublattice(s), lat.sublattice(t));
  }
}

TEST(Lattice, IndexingIsCellMajorAThenB) {
  HoneycombLattice lat(3, 2);
  for (int c = 0; c < 6; ++c) {
    EXPECT_EQ(lat.sublattice(2 * c), Sublattice::A);
    EXPECT_EQ(lat.sublattice(2 * c + 1), Sublattice::B);
    EXPECT_EQ(lat.cell_of(2 * c), (CellVector{c % 3, c / 3}));
    EXPECT_EQ(lat.cell_of(2 * c + 1), (CellVector{c % 3, c / 3}));
  }
}

TEST(Lattice, ArgumentErrors) {
  EXPECT_THROW(HoneycombLattice(0, 3), ArgumentError);
  EXPECT_THROW(HoneycombLattice(2, -1), ArgumentError);
  HoneycombLattice lat(2, 2);
  EXPECT_THROW(lat.neighbors(-1), ArgumentError);
  EXPECT_THROW(lat.neighbors(8), ArgumentError);
}

class LatticeSweep : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(LatticeSweep, StructuralInvariants) {
  const auto [nu, nv] = GetParam();
  HoneycombLattice lat(nu, nv);
  const int n = lat.site_count();
  ASSERT_EQ(n, 2 * nu * nv);
  ASSERT_EQ(lat.bond_count(), 3 * n / 2);

  std::vector<int> degree(n, 0);
  std::set<std::tuple<int, int, int, int>> distinct;
  for (int bi = 0; bi < lat.bond_count(); ++bi) {
    const Bond& b = lat.bond(bi);
    EXPECT_EQ(lat.sublattice(b.a_site), Sublattice::A);
    EXPECT_EQ(lat.sublattice(b.b_site), Sublattice::B);
    const bool allowed = b.shift == CellVector{0, 0} || b.shift == CellVector{-1, 0} || b.shift == CellVector{0, -1};
    EXPECT_TRUE(allowed);
    // B's wrapped cell is A's cell plus the shift.
    const CellVector ca = lat.cell_of(b.a_site), cb = lat.cell_of(b.b_site);
    EXPECT_EQ(((ca.u + b.shift.u) % nu + nu) % nu, cb.u);
    EXPECT_EQ(((ca.v + b.shift.v) % nv + nv) % nv, cb.v);
    EXPECT_TRUE(distinct.insert({b.a_site, b.b_site, b.shift.u, b.shift.v}).second);
    ++degree[b.a_site];
    ++degree[b.b_site];
    EXPECT_EQ(lat.other_end(bi, b.a_site), b.b_site);
    EXPECT_EQ(lat.other_end(bi, b.b_site), b.a_site);
    EXPECT_EQ(lat.step(bi, b.a_site), b.shift);
    EXPECT_EQ(lat.step(bi, b.b_site), -b.shift);
  }
  for (int s = 0; s < n; ++s) {
    EXPECT_EQ(degree[s], 3);
    const auto& inc = lat.incident_bonds(s);
    EXPECT_EQ(std::set<int>(inc.begin(), inc.end()).size(), 3u);
    const auto nb = lat.neighbors(s);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(lat.other_end(inc[k], s), nb[k]);
    // Neighbour multisets are symmetric.
    for (int t : nb) {
      const auto back = lat.neighbors(t);
      EXPECT_EQ(std::count(nb.begin(), nb.end(), t), std::count(back.begin(), back.end(), s));
    }
    const bool all_distinct = std::set<int>(nb.begin(), nb.end()).size() == 3;
    EXPECT_EQ(all_distinct, nu >= 2 && nv >= 2);
  }
}

TEST_P(LatticeSweep, FacesCloseWithZeroDisplacement) {
  const auto [nu, nv] = GetParam();
  HoneycombLattice lat(nu, nv);
  ASSERT_EQ(static_cast<int>(lat.faces().size()), nu * nv);
  std::vector<int> bond_uses(lat.bond_count(), 0);
  for (const Face& f : lat.faces()) {
    EXPECT_EQ(lat.sublattice(f.vertices[0]), Sublattice::A);
    CellVector total;
    for (int k = 0; k < 6; ++k) {
      const int from = f.vertices[k], to = f.vertices[(k + 1) % 6];
      EXPECT_EQ(lat.other_end(f.bonds[k], from), to);
      total += lat.step(f.bonds[k], from);
      ++bond_uses[f.bonds[k]];
    }
    EXPECT_TRUE(total.is_zero());
  }
  for (int u : bond_uses) EXPECT_EQ(u, 2);
}

TEST_P(LatticeSweep, DetoursAreValidWalks) {
  const auto [nu, nv] = GetParam();
  HoneycombLattice lat(nu, nv);
  for (int s = 0; s < lat.site_count(); ++s) {
    const auto nb = lat.neighbors(s);
    for (int s1 = 0; s1 < 3; ++s1) {
      for (int s2 = s1 + 1; s2 < 3; ++s2) {
        const DetourPath& d = lat.detours(s)[slot_pair_index(s1, s2)];
        if (!d.valid) continue;
        // The walk follows face order, so it may run from either neighbour.
        auto valid_from = [&](int start, int end) {
          const std::array<int, 5> walk{start, d.sites[0], d.sites[1], d.sites[2], end};
          for (int k = 0; k < 4; ++k) {
            if (!adjacent(lat, walk[k], walk[k + 1])) return false;
          }
          return true;
        };
        EXPECT_TRUE(valid_from(nb[s1], nb[s2]) || valid_from(nb[s2], nb[s1]));
        for (int k = 0; k < 3; ++k) EXPECT_NE(d.sites[k], s);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllSmallTori, LatticeSweep,
                         ::testing::Combine(::testing::Range(1, 9), ::testing::Range(1, 9)));

TEST(Lattice, DetoursPresentOnLargeTorus) {
  HoneycombLattice lat(6, 6);
  for (int s = 0; s < lat.site_count(); ++s) {
    for (const DetourPath& d : lat.detours(s)) EXPECT_TRUE(d.valid);
  }
}

TEST(Lattice, SlotPairIndex) {
  EXPECT_EQ(slot_pair_index(0, 1), 0);
  EXPECT_EQ(slot_pair_index(1, 0), 0);
  EXPECT_EQ(slot_pair_index(0, 2), 1);
  EXPECT_EQ(slot_pair_index(2, 1), 2);
}

}  // namespace
}  // namespace aklt
