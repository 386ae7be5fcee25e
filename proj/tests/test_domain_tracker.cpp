#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "aklt/domain_tracker.hpp"
#include "test_support.hpp"

namespace aklt {
namespace {

using testing_support::make_lattice;
using testing_support::random_configuration;
using testing_support::recount;

void expect_matches_recount(const TrackedConfiguration& t) {
  const auto r = recount(t.configuration());
  ASSERT_EQ(t.n_z(), r.n_z);
  ASSERT_EQ(t.n_domains(), r.n_domains);
  ASSERT_EQ(t.n_interdomain_bonds(), r.n_inter);
  // Tracked ids and recount components must induce the same partition.
  std::map<int, int> fwd, back;
  std::map<int, int> comp_size;
  for (int c : r.component) ++comp_size[c];
  for (int s = 0; s < t.lattice().site_count(); ++s) {
    const auto [it, fresh] = fwd.emplace(t.domain_id(s), r.component[s]);
    ASSERT_EQ(it->second, r.component[s]);
    const auto [jt, fresh2] = back.emplace(r.component[s], t.domain_id(s));
    ASSERT_EQ(jt->second, t.domain_id(s));
    ASSERT_EQ(t.domain_size_of(s), comp_size[r.component[s]]);
  }
}

Label other_label(Label l, std::uint64_t pick) { return static_cast<Label>((static_cast<int>(l) + 1 + pick) % 3); }

TEST(AcceptanceTable, MatchesClosedForm) {
  for (double a2 : {1.0, 2.0, 3.0, 5.0, 6.46, 40.0}) {
    const AcceptanceTable table{DeformationParam(a2)};
    for (int dz = -1; dz <= 1; ++dz) {
      for (int d = -AcceptanceTable::kMaxInt; d <= AcceptanceTable::kMaxInt; ++d) {
        const double r = std::pow((a2 - 1.0) / 2.0, dz) * std::pow(2.0, d);
        const double expected = a2 == 1.0 && dz == 1 ? 0.0 : std::min(1.0, r);
        if (a2 == 1.0 && dz == -1) continue;  // Z never present at a^2 = 1
        EXPECT_NEAR(table.probability(dz, d), expected, 1e-15) << a2 << ' ' << dz << ' ' << d;
      }
    }
  }
}

TEST(TrackedConfiguration, InitialCountsMatchRecount) {
  Xoshiro256 rng(4);
  for (auto [nu, nv] : {std::pair{1, 1}, {1, 4}, {3, 2}, {9, 9}}) {
    TrackedConfiguration t(random_configuration(make_lattice(nu, nv), rng));
    expect_matches_recount(t);
    EXPECT_NO_THROW(t.verify());
  }
}

TEST(TrackedConfiguration, EvaluateAgreesWithFlipDelta) {
  Xoshiro256 rng(12);
  const auto lat = make_lattice(7, 6);
  TrackedConfiguration t(random_configuration(lat, rng));
  for (int k = 0; k < 3000; ++k) {
    const int s = static_cast<int>(rng.below(lat->site_count()));
    const Label nl = other_label(t[s], rng.below(2));
    const FlipDelta ref = flip_delta(t.configuration(), s, nl);
    const FlipDelta got = t.evaluate(s, nl);
    ASSERT_EQ(got.d_n_z, ref.d_n_z);
    ASSERT_EQ(got.d_domains, ref.d_domains);
    ASSERT_EQ(got.d_interdomain_bonds, ref.d_interdomain_bonds);
    if (rng.below(2)) t.apply(s, nl);
  }
}

// Random relabellings on many lattice shapes, checked against a BFS recount after every flip.
TEST(TrackedConfiguration, ApplyTracksDomainsExactly) {
  Xoshiro256 rng(77);
  int flips = 0;
  for (auto [nu, nv] : {std::pair{1, 1}, {2, 1}, {1, 3}, {2, 2}, {3, 3}, {4, 7}, {10, 10}}) {
    const auto lat = make_lattice(nu, nv);
    TrackedConfiguration t(random_configuration(lat, rng, rng.below(2) == 0));
    for (int k = 0; k < 2000; ++k, ++flips) {
      const int s = static_cast<int>(rng.below(lat->site_count()));
      t.apply(s, other_label(t[s], rng.below(2)));
      expect_matches_recount(t);
      if (::testing::Test::HasFatalFailure()) return;
    }
    EXPECT_NO_THROW(t.verify());
  }
  EXPECT_GE(flips, 10000);
}

// Biased label choice grows large winding domains, exercising long split searches.
TEST(TrackedConfiguration, LargeDomainsSplitAndMerge) {
  Xoshiro256 rng(5);
  const auto lat = make_lattice(12, 12);
  TrackedConfiguration t(FilterConfiguration(lat, Label::Z));
  for (int k = 0; k < 4000; ++k) {
    const int s = static_cast<int>(rng.below(lat->site_count()));
    const Label nl = t[s] == Label::Z ? static_cast<Label>(rng.below(2)) : Label::Z;
    if (nl == Label::Z && rng.below(4) != 0) continue;
    t.apply(s, nl);
    if (k % 50 == 0) expect_matches_recount(t);
  }
  expect_matches_recount(t);
}

TEST(TrackedConfiguration, AttemptMatchesEagerMetropolis) {
  Xoshiro256 rng(99);
  for (double a2 : {1.0, 3.0, 6.46, 12.0}) {
    const DeformationParam a(a2);
    const AcceptanceTable table(a);
    const auto lat = make_lattice(6, 6);
    TrackedConfiguration t(random_configuration(lat, rng, a2 != 1.0));
    FilterConfiguration shadow = t.configuration();
    for (int k = 0; k < 5000; ++k) {
      const int s = static_cast<int>(rng.below(lat->site_count()));
      Label nl = other_label(t[s], rng.below(2));
      if (a2 == 1.0) nl = t[s] == Label::X ? Label::Y : Label::X;
      const double u = rng.uniform();
      const double p = std::min(1.0, std::exp2(flip_log_weight_delta(shadow, s, nl, a)));
      const bool expect = u < p;
      ASSERT_EQ(t.attempt(s, nl, u, table), expect);
      if (expect) shadow.set(s, nl);
      ASSERT_EQ(t.configuration(), shadow);
    }
    expect_matches_recount(t);
  }
}

TEST(TrackedConfiguration, StatisticsAgreeWithComputeStatistics) {
  Xoshiro256 rng(6);
  const auto lat = make_lattice(5, 5);
  TrackedConfiguration t(random_configuration(lat, rng));
  for (int k = 0; k < 200; ++k) {
    const int s = static_cast<int>(rng.below(lat->site_count()));
    t.apply(s, other_label(t[s], rng.below(2)));
  }
  const DeformationParam a(4.5);
  EXPECT_EQ(t.statistics(a), compute_statistics(t.configuration(), a));
}

}  // namespace
}  // namespace aklt
