#include "aklt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "aklt/worker_pool.hpp"

namespace aklt {

double integrated_autocorrelation_time(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 2) return 0.5;
  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;
  double c0 = 0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  c0 /= n;
  if (c0 <= 0) return 0.5;
  double tau = 0.5;
  for (std::size_t t = 1; t < n; ++t) {
    double ct = 0;
    for (std::size_t i = 0; i + t < n; ++i) ct += (series[i] - mean) * (series[i + t] - mean);
    ct /= n;
    tau += ct / c0;
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  return std::max(tau, 0.5);
}

CellSummary summarize_records(double a_squared, LatticeDims dims, std::span<const SampleRecord> records) {
  CellSummary c;
  c.a_squared = a_squared;
  c.dims = dims;
  c.n_samples = static_cast<int>(records.size());
  if (records.empty()) return c;
  std::vector<double> maxdom;
  maxdom.reserve(records.size());
  int spanning_z = 0;
  double nz = 0, nv = 0;
  for (const SampleRecord& r : records) {
    c.spanning_count += r.spanning_flag;
    c.crossing_count += r.crossing_flag;
    spanning_z += r.spanning_flag && r.spanning_is_z;
    maxdom.push_back(r.max_domain_size);
    nz += r.statistics.n_z;
    nv += r.statistics.n_domains;
  }
  const double n = static_cast<double>(records.size());
  c.mean_max_domain = std::accumulate(maxdom.begin(), maxdom.end(), 0.0) / n;
  if (records.size() > 1) {
    double ss = 0;
    for (double x : maxdom) ss += (x - c.mean_max_domain) * (x - c.mean_max_domain);
    c.std_err_max_domain = std::sqrt(ss / (n - 1) / n);
  }
  c.tau_int_max_domain = integrated_autocorrelation_time(maxdom);
  c.mean_n_z_fraction = nz / n / dims.site_count();
  c.mean_n_domains = nv / n;
  c.spanning_z_fraction = c.spanning_count > 0 ? static_cast<double>(spanning_z) / c.spanning_count : -1.0;
  return c;
}

std::vector<CellSummary> run_cells(std::span<const double> a_list, std::span<const LatticeDims> dims_list,
                                   const StudySettings& settings) {
  const std::size_t n_cells = a_list.size() * dims_list.size();
  std::vector<CellSummary> out(n_cells);
  std::vector<std::shared_ptr<const HoneycombLattice>> lattices;
  for (const LatticeDims& d : dims_list) {
    lattices.push_back(std::make_shared<const HoneycombLattice>(d.n_cells_u, d.n_cells_v));
  }
  parallel_for(
      n_cells,
      [&](std::size_t k) {
        const std::size_t ia = k / dims_list.size();
        const std::size_t id = k % dims_list.size();
        SamplerSettings s;
        s.a_squared = a_list[ia];
        s.seed = derive_seed(settings.seed, k);
        s.burn_in_sweeps = settings.burn_in_sweeps;
        s.thinning_sweeps = settings.thinning_sweeps;
        s.n_samples = settings.n_samples;
        const auto records = run(s, lattices[id]);
        out[k] = summarize_records(a_list[ia], dims_list[id], records);
      },
      settings.workers);
  return out;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ArgumentError("fit_line needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) throw ArgumentError("fit_line needs at least two distinct x values");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return f;
}

ScalingResult scaling_from_cells(double a_squared, std::span<const CellSummary> cells) {
  ScalingResult r;
  r.a_squared = a_squared;
  for (const CellSummary& c : cells) {
    if (c.a_squared != a_squared) continue;
    r.points.push_back({c.dims.site_count(), c.mean_max_domain, c.std_err_max_domain, c.tau_int_max_domain});
  }
  std::sort(r.points.begin(), r.points.end(), [](const auto& p, const auto& q) { return p.n_sites < q.n_sites; });
  if (r.points.size() >= 2) {
    std::vector<double> logn, n, y;
    for (const ScalingPoint& p : r.points) {
      logn.push_back(std::log(static_cast<double>(p.n_sites)));
      n.push_back(p.n_sites);
      y.push_back(p.mean_max_domain);
    }
    r.log_fit = fit_line(logn, y);
    r.linear_fit = fit_line(n, y);
  }
  return r;
}

std::vector<ScalingResult> domain_scaling_study(std::span<const double> a_list, std::span<const LatticeDims> sizes,
                                                const StudySettings& settings) {
  if (sizes.size() < 2) throw ArgumentError("domain scaling needs at least two lattice sizes");
  int nmin = std::numeric_limits<int>::max(), nmax = 0;
  for (const LatticeDims& d : sizes) {
    nmin = std::min(nmin, d.site_count());
    nmax = std::max(nmax, d.site_count());
  }
  if (nmax < 10 * nmin) throw ArgumentError("lattice sizes must span at least one decade in N");

  const auto cells = run_cells(a_list, sizes, settings);
  std::vector<ScalingResult> out;
  for (double a : a_list) out.push_back(scaling_from_cells(a, cells));
  if (settings.n_samples < 2) {
    throw InsufficientSamplesError("standard errors need >= 2 samples per cell", std::move(out));
  }
  return out;
}

ProbabilityEstimate wilson_interval(int successes, int trials, double z) {
  ProbabilityEstimate e;
  e.successes = successes;
  e.trials = trials;
  if (trials <= 0) {
    e.upper = 1.0;
    return e;
  }
  const double n = trials;
  const double p = successes / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  e.p = p;
  e.lower = std::clamp(std::min(centre - half, p), 0.0, 1.0);
  e.upper = std::clamp(std::max(centre + half, p), 0.0, 1.0);
  return e;
}

PercolationCurve curve_from_cells(std::span<const CellSummary> cells) {
  PercolationCurve c;
  for (const CellSummary& cell : cells) {
    if (std::find(c.a_squared_grid.begin(), c.a_squared_grid.end(), cell.a_squared) == c.a_squared_grid.end()) {
      c.a_squared_grid.push_back(cell.a_squared);
    }
    if (std::find(c.dims.begin(), c.dims.end(), cell.dims) == c.dims.end()) c.dims.push_back(cell.dims);
  }
  std::sort(c.a_squared_grid.begin(), c.a_squared_grid.end());
  std::stable_sort(c.dims.begin(), c.dims.end(),
                   [](const LatticeDims& p, const LatticeDims& q) { return p.site_count() < q.site_count(); });
  for (const LatticeDims& d : c.dims) c.lattice_sizes.push_back(d.site_count());

  const std::size_t ns = c.dims.size(), na = c.a_squared_grid.size();
  c.spanning_probability.assign(ns, std::vector<ProbabilityEstimate>(na, wilson_interval(0, 0)));
  c.crossing_probability = c.spanning_probability;
  std::vector<std::vector<std::pair<int, int>>> span(ns, std::vector<std::pair<int, int>>(na)), cross = span;
  for (const CellSummary& cell : cells) {
    const auto is = std::find(c.dims.begin(), c.dims.end(), cell.dims) - c.dims.begin();
    const auto ia = std::find(c.a_squared_grid.begin(), c.a_squared_grid.end(), cell.a_squared) -
                    c.a_squared_grid.begin();
    span[is][ia].first += cell.spanning_count;
    span[is][ia].second += cell.n_samples;
    cross[is][ia].first += cell.crossing_count;
    cross[is][ia].second += cell.n_samples;
  }
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      c.spanning_probability[i][j] = wilson_interval(span[i][j].first, span[i][j].second);
      c.crossing_probability[i][j] = wilson_interval(cross[i][j].first, cross[i][j].second);
    }
  }
  return c;
}

PercolationCurve percolation_study(std::span<const double> a_grid, std::span<const LatticeDims> sizes,
                                   const StudySettings& settings) {
  if (a_grid.empty()) throw ArgumentError("empty a^2 grid");
  const auto [lo, hi] = std::minmax_element(a_grid.begin(), a_grid.end());
  if (!(*lo < 6.46 && *hi > 6.46)) throw ArgumentError("a^2 grid must straddle 6.46");
  const auto cells = run_cells(a_grid, sizes, settings);
  return curve_from_cells(cells);
}

std::vector<double> isotonic_fit(std::span<const double> y, std::span<const double> weights) {
  struct Block {
    double value, weight;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({y[i], std::max(weights[i], 1e-300), 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].value > blocks.back().value) {
      const Block b = blocks.back();
      blocks.pop_back();
      Block& a = blocks.back();
      a.value = (a.value * a.weight + b.value * b.weight) / (a.weight + b.weight);
      a.weight += b.weight;
      a.count += b.count;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const Block& b : blocks) out.insert(out.end(), b.count, b.value);
  return out;
}

namespace {

struct Crossing {
  double a_c;
  double slope_small;
  double slope_large;
};

std::optional<Crossing> find_crossing(std::span<const double> grid, std::span<const double> p_small,
                                      std::span<const double> w_small, std::span<const double> p_large,
                                      std::span<const double> w_large) {
  const auto s = isotonic_fit(p_small, w_small);
  const auto l = isotonic_fit(p_large, w_large);
  std::optional<Crossing> best;
  double best_jump = -1;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double d0 = l[i] - s[i];
    const double d1 = l[i + 1] - s[i + 1];
    if (!(d0 < 0 && d1 >= 0)) continue;
    const double jump = d1 - d0;
    if (jump <= best_jump) continue;
    best_jump = jump;
    const double h = grid[i + 1] - grid[i];
    best = Crossing{grid[i] + h * (-d0) / (d1 - d0), (s[i + 1] - s[i]) / h, (l[i + 1] - l[i]) / h};
  }
  return best;
}

}  // namespace

CriticalPointEstimate estimate_critical_point(const PercolationCurve& curve, int bootstrap_resamples,
                                              std::uint64_t seed) {
  const std::size_t ns = curve.lattice_sizes.size();
  if (ns < 2) throw EstimationError("critical point needs spanning curves for >= 2 lattice sizes");
  if (curve.a_squared_grid.size() < 2) throw EstimationError("critical point needs >= 2 grid points");
  const auto& small = curve.spanning_probability[ns - 2];
  const auto& large = curve.spanning_probability[ns - 1];
  const std::size_t na = curve.a_squared_grid.size();

  auto extract = [&](const std::vector<ProbabilityEstimate>& row, std::vector<double>& p, std::vector<double>& w) {
    p.resize(na);
    w.resize(na);
    for (std::size_t j = 0; j < na; ++j) {
      p[j] = row[j].p;
      w[j] = std::max(row[j].trials, 1);
    }
  };
  std::vector<double> ps, ws, pl, wl;
  extract(small, ps, ws);
  extract(large, pl, wl);

  const auto point = find_crossing(curve.a_squared_grid, ps, ws, pl, wl);
  if (!point) {
    std::ostringstream msg;
    msg << "spanning curves for N=" << curve.lattice_sizes[ns - 2] << " and N=" << curve.lattice_sizes[ns - 1]
        << " do not cross on the grid; differences (large - small):";
    for (std::size_t j = 0; j < na; ++j) msg << ' ' << curve.a_squared_grid[j] << ':' << (pl[j] - ps[j]);
    throw EstimationError(msg.str());
  }

  CriticalPointEstimate est;
  est.a_squared_c = point->a_c;
  est.slope_small = point->slope_small;
  est.slope_large = point->slope_large;
  est.slope_ratio = point->slope_small > 0 ? point->slope_large / point->slope_small
                                           : std::numeric_limits<double>::infinity();
  est.n_small = curve.lattice_sizes[ns - 2];
  est.n_large = curve.lattice_sizes[ns - 1];
  est.bootstrap_resamples = bootstrap_resamples;

  Xoshiro256 rng(seed);
  auto resample = [&](const std::vector<ProbabilityEstimate>& row, std::vector<double>& p) {
    for (std::size_t j = 0; j < na; ++j) {
      int hits = 0;
      for (int t = 0; t < row[j].trials; ++t) hits += rng.uniform() < row[j].p;
      p[j] = row[j].trials > 0 ? static_cast<double>(hits) / row[j].trials : 0.0;
    }
  };
  std::vector<double> estimates;
  std::vector<double> bs(na), bl(na);
  for (int r = 0; r < bootstrap_resamples; ++r) {
    resample(small, bs);
    resample(large, bl);
    const auto b = find_crossing(curve.a_squared_grid, bs, ws, bl, wl);
    if (b) {
      estimates.push_back(b->a_c);
    } else {
      ++est.bootstrap_failures;
    }
  }
  if (estimates.size() > 1) {
    const double m = std::accumulate(estimates.begin(), estimates.end(), 0.0) / estimates.size();
    double ss = 0;
    for (double e : estimates) ss += (e - m) * (e - m);
    est.uncertainty = std::sqrt(ss / (estimates.size() - 1));
  }
  return est;
}

}  // namespace aklt
