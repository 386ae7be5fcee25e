#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "aklt/analysis.hpp"
#include "aklt/domain_reduction.hpp"
#include "aklt/exact_oracle.hpp"
#include "aklt/percolation.hpp"
#include "aklt/worker_pool.hpp"
#include "test_support.hpp"

namespace aklt {
namespace {

using testing_support::make_lattice;

CellSummary cell(double a2, LatticeDims d, int spanning, int n) {
  CellSummary c;
  c.a_squared = a2;
  c.dims = d;
  c.spanning_count = spanning;
  c.n_samples = n;
  return c;
}

TEST(Wilson, ReferenceInterval) {
  const auto e = wilson_interval(5, 10);
  EXPECT_DOUBLE_EQ(e.p, 0.5);
  EXPECT_NEAR(e.lower, 0.2366, 5e-5);
  EXPECT_NEAR(e.upper, 0.7634, 5e-5);
}

TEST(Wilson, ContainsPointAndStaysInUnitInterval) {
  for (int n : {1, 2, 7, 100, 5000}) {
    for (int k = 0; k <= n; k += std::max(1, n / 13)) {
      const auto e = wilson_interval(k, n);
      EXPECT_LE(e.lower, e.p);
      EXPECT_GE(e.upper, e.p);
      EXPECT_GE(e.lower, 0.0);
      EXPECT_LE(e.upper, 1.0);
    }
  }
  EXPECT_EQ(wilson_interval(0, 20).lower, 0.0);
  EXPECT_EQ(wilson_interval(20, 20).upper, 1.0);
}

TEST(FitLine, ExactLine) {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{3, 5, 7, 9, 11};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(FitLine, NoisyRSquaredInRange) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> noise(0, 3);
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(i);
    y.push_back(0.1 * i + noise(gen));
  }
  const auto f = fit_line(x, y);
  EXPECT_GT(f.r_squared, 0.0);
  EXPECT_LT(f.r_squared, 1.0);
  EXPECT_THROW(fit_line(std::vector<double>{1, 1}, std::vector<double>{2, 3}), ArgumentError);
  EXPECT_THROW(fit_line(std::vector<double>{1}, std::vector<double>{2}), ArgumentError);
}

TEST(Isotonic, PoolsViolators) {
  const std::vector<double> y{1, 3, 2, 4}, w{1, 1, 1, 1};
  EXPECT_EQ(isotonic_fit(y, w), (std::vector<double>{1, 2.5, 2.5, 4}));
  const std::vector<double> y2{3, 1}, w2{1, 3};
  EXPECT_EQ(isotonic_fit(y2, w2), (std::vector<double>{1.5, 1.5}));
}

TEST(Isotonic, MonotoneAndMeanPreserving) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> y(12), w(12);
    for (int i = 0; i < 12; ++i) {
      y[i] = u(gen);
      w[i] = 0.5 + u(gen);
    }
    const auto f = isotonic_fit(y, w);
    double s0 = 0, s1 = 0;
    for (int i = 0; i < 12; ++i) {
      if (i > 0) EXPECT_LE(f[i - 1], f[i] + 1e-15);
      s0 += w[i] * y[i];
      s1 += w[i] * f[i];
    }
    EXPECT_NEAR(s0, s1, 1e-12);
  }
}

TEST(CriticalPoint, StepBracket) {
  const LatticeDims small{20, 20}, large{40, 40};
  const std::vector<CellSummary> cells{cell(6.36, small, 400, 1000), cell(6.56, small, 600, 1000),
                                       cell(6.36, large, 0, 1000), cell(6.56, large, 1000, 1000)};
  const auto curve = curve_from_cells(cells);
  ASSERT_EQ(curve.lattice_sizes, (std::vector<int>{800, 3200}));
  const auto est = estimate_critical_point(curve, 200, 3);
  EXPECT_NEAR(est.a_squared_c, 6.46, 1e-12);
  EXPECT_NEAR(est.slope_small, 1.0, 1e-9);
  EXPECT_NEAR(est.slope_large, 5.0, 1e-9);
  EXPECT_NEAR(est.slope_ratio, 5.0, 1e-9);
  EXPECT_EQ(est.n_small, 800);
  EXPECT_EQ(est.n_large, 3200);
  EXPECT_GE(est.uncertainty, 0.0);
}

TEST(CriticalPoint, LogisticCurvesCrossBetweenGridPoints) {
  const LatticeDims small{10, 10}, large{20, 20};
  const int n = 1000000;
  std::vector<CellSummary> cells;
  for (int i = 0; i < 10; ++i) {
    const double a2 = 5.55 + 0.1 * i;
    auto p = [&](double k) { return 1.0 / (1.0 + std::exp(-k * (a2 - 6.0))); };
    cells.push_back(cell(a2, small, static_cast<int>(std::lround(p(2.0) * n)), n));
    cells.push_back(cell(a2, large, static_cast<int>(std::lround(p(6.0) * n)), n));
  }
  const auto est = estimate_critical_point(curve_from_cells(cells), 50, 1);
  EXPECT_NEAR(est.a_squared_c, 6.0, 1e-4);
  EXPECT_GT(est.slope_ratio, 1.0);
  EXPECT_LT(est.uncertainty, 0.01);
}

TEST(CriticalPoint, NoCrossingIsAnEstimationError) {
  const LatticeDims small{10, 10}, large{20, 20};
  std::vector<CellSummary> cells;
  for (int i = 0; i < 5; ++i) {
    cells.push_back(cell(6.0 + 0.2 * i, small, 100 + 50 * i, 1000));
    cells.push_back(cell(6.0 + 0.2 * i, large, 400 + 50 * i, 1000));
  }
  EXPECT_THROW(estimate_critical_point(curve_from_cells(cells)), EstimationError);
  EXPECT_THROW(estimate_critical_point(curve_from_cells(std::vector<CellSummary>{cell(6, small, 1, 2)})),
               EstimationError);
}

TEST(Autocorrelation, ConstantAndWhiteNoise) {
  EXPECT_EQ(integrated_autocorrelation_time(std::vector<double>(100, 2.0)), 0.5);
  std::mt19937_64 gen(9);
  std::normal_distribution<double> g(0, 1);
  std::vector<double> x(100000);
  for (auto& v : x) v = g(gen);
  EXPECT_NEAR(integrated_autocorrelation_time(x), 0.5, 0.05);
}

TEST(Autocorrelation, Ar1) {
  std::mt19937_64 gen(10);
  std::normal_distribution<double> g(0, 1);
  for (double rho : {0.5, 0.8}) {
    std::vector<double> x(200000);
    double v = 0;
    for (auto& s : x) s = v = rho * v + g(gen);
    const double expected = 0.5 * (1 + rho) / (1 - rho);
    EXPECT_NEAR(integrated_autocorrelation_time(x), expected, 0.1 * expected);
  }
}

TEST(Summaries, FromRecords) {
  std::vector<SampleRecord> recs(4);
  const int maxdom[4] = {2, 4, 6, 8};
  for (int i = 0; i < 4; ++i) {
    recs[i].max_domain_size = maxdom[i];
    recs[i].spanning_flag = i % 2 == 1;
    recs[i].spanning_is_z = i == 3;
    recs[i].crossing_flag = true;
    recs[i].statistics.n_z = i;
    recs[i].statistics.n_domains = 10;
  }
  const auto c = summarize_records(3.0, {2, 2}, recs);
  EXPECT_EQ(c.n_samples, 4);
  EXPECT_EQ(c.spanning_count, 2);
  EXPECT_EQ(c.crossing_count, 4);
  EXPECT_DOUBLE_EQ(c.mean_max_domain, 5.0);
  EXPECT_NEAR(c.std_err_max_domain, std::sqrt(20.0 / 3.0 / 4.0), 1e-12);
  EXPECT_DOUBLE_EQ(c.mean_n_z_fraction, 1.5 / 8.0);
  EXPECT_DOUBLE_EQ(c.mean_n_domains, 10.0);
  EXPECT_DOUBLE_EQ(c.spanning_z_fraction, 0.5);
}

TEST(Studies, RunCellsIndependentOfWorkers) {
  StudySettings s;
  s.seed = 12;
  s.burn_in_sweeps = 10;
  s.thinning_sweeps = 2;
  s.n_samples = 20;
  const std::vector<double> a{3.0, 7.0};
  const std::vector<LatticeDims> d{{3, 3}, {4, 2}};
  s.workers = 1;
  const auto one = run_cells(a, d, s);
  s.workers = 3;
  const auto three = run_cells(a, d, s);
  ASSERT_EQ(one.size(), 4u);
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].a_squared, a[k / 2]);
    EXPECT_EQ(one[k].dims, d[k % 2]);
    EXPECT_EQ(one[k].mean_max_domain, three[k].mean_max_domain);
    EXPECT_EQ(one[k].spanning_count, three[k].spanning_count);
    EXPECT_EQ(one[k].mean_n_domains, three[k].mean_n_domains);
  }
}

TEST(Studies, ParallelForPropagatesExceptions) {
  std::vector<int> done(16, 0);
  EXPECT_THROW(parallel_for(
                   16,
                   [&](std::size_t i) {
                     if (i == 5) throw std::runtime_error("boom");
                     done[i] = 1;
                   },
                   4),
               std::runtime_error);
  std::vector<int> all(100, 0);
  parallel_for(100, [&](std::size_t i) { all[i] = static_cast<int>(i); }, 3);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(all[i], i);
}

TEST(Studies, ScalingStudyPreconditions) {
  StudySettings s;
  s.burn_in_sweeps = 5;
  s.thinning_sweeps = 1;
  s.n_samples = 5;
  const std::vector<double> a{3.0};
  EXPECT_THROW(domain_scaling_study(a, std::vector<LatticeDims>{{2, 2}, {4, 4}}, s), ArgumentError);
  EXPECT_THROW(domain_scaling_study(a, std::vector<LatticeDims>{{2, 2}}, s), ArgumentError);
  const std::vector<LatticeDims> sizes{{1, 1}, {3, 2}, {4, 4}};
  const auto res = domain_scaling_study(a, sizes, s);
  ASSERT_EQ(res.size(), 1u);
  ASSERT_EQ(res[0].points.size(), 3u);
  EXPECT_EQ(res[0].points[0].n_sites, 2);
  EXPECT_EQ(res[0].points[2].n_sites, 32);
  s.n_samples = 1;
  try {
    domain_scaling_study(a, sizes, s);
    ADD_FAILURE() << "expected InsufficientSamplesError";
  } catch (const InsufficientSamplesError& e) {
    ASSERT_EQ(e.partial().size(), 1u);
    EXPECT_EQ(e.partial()[0].points.size(), 3u);
  }
}

TEST(Studies, PercolationGridMustStraddle) {
  StudySettings s;
  s.n_samples = 2;
  s.burn_in_sweeps = 1;
  const std::vector<LatticeDims> d{{2, 2}, {3, 3}};
  EXPECT_THROW(percolation_study(std::vector<double>{5.0, 6.0}, d, s), ArgumentError);
  EXPECT_THROW(percolation_study(std::vector<double>{}, d, s), ArgumentError);
  const auto c = percolation_study(std::vector<double>{6.0, 7.0}, d, s);
  EXPECT_EQ(c.a_squared_grid, (std::vector<double>{6.0, 7.0}));
  EXPECT_EQ(c.spanning_probability.size(), 2u);
}

double exact_mean_max_domain(int nu, int nv, double a2) {
  const auto lat = make_lattice(nu, nv);
  const auto ex = oracle::enumerate_distribution(lat, DeformationParam(a2));
  double m = 0;
  for (std::uint64_t i = 0; i < ex.probabilities.size(); ++i) {
    if (ex.probabilities[i] == 0) continue;
    m += ex.probabilities[i] * max_domain_size(reduce(oracle::config_from_index(lat, i)));
  }
  return m;
}

TEST(Studies, A1DomainsLargerThanA3) {
  // Without Z outcomes the X and Y domains coarsen; exact on a tiny torus and
  // sampled on a larger one.
  EXPECT_GT(exact_mean_max_domain(2, 2, 1.0), exact_mean_max_domain(2, 2, 3.0));
  StudySettings s;
  s.seed = 6;
  s.burn_in_sweeps = 300;
  s.thinning_sweeps = 5;
  s.n_samples = 100;
  const auto cells = run_cells(std::vector<double>{1.0, 3.0}, std::vector<LatticeDims>{{10, 10}}, s);
  EXPECT_GT(cells[0].mean_max_domain, cells[1].mean_max_domain);
}

}  // namespace
}  // namespace aklt
