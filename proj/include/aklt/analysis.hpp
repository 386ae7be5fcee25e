#pragma once

// Universality diagnostics over many chains: maximum-domain-size scaling,
// spanning and crossing probabilities, and the critical point where the
// spanning curves of two lattice sizes intersect.

#include <cstdint>
#include <span>
#include <vector>

#include "aklt/errors.hpp"
#include "aklt/sampler.hpp"

namespace aklt {

struct LatticeDims {
  int n_cells_u;
  int n_cells_v;

  int site_count() const { return 2 * n_cells_u * n_cells_v; }
  bool operator==(const LatticeDims&) const = default;
};

struct StudySettings {
  std::uint64_t seed = 0;
  int burn_in_sweeps = 1000;
  int thinning_sweeps = 10;
  int n_samples = 100;
  unsigned workers = 0;  // 0: default_worker_count()
};

/// Aggregate of one chain at one (a^2, lattice) point.
struct CellSummary {
  double a_squared = 0;
  LatticeDims dims{1, 1};
  int n_samples = 0;
  int spanning_count = 0;
  int crossing_count = 0;
  double mean_max_domain = 0;
  double std_err_max_domain = 0;  // naive standard error, s / sqrt(n)
  double tau_int_max_domain = 0;  // integrated autocorrelation time, in samples
  double mean_n_z_fraction = 0;
  double mean_n_domains = 0;
  // Share of spanning samples whose wrapping domain is Z; -1 when unknown
  // (records read back from CSV) or when nothing spanned.
  double spanning_z_fraction = -1;
};

CellSummary summarize_records(double a_squared, LatticeDims dims, std::span<const SampleRecord> records);

/// Runs one independent chain per (a^2, dims) pair, in a_list-major order.
/// Cell k uses seed derive_seed(settings.seed, k), so results do not depend
/// on the worker count.
std::vector<CellSummary> run_cells(std::span<const double> a_list, std::span<const LatticeDims> dims_list,
                                   const StudySettings& settings);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

/// Ordinary least squares y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct ScalingPoint {
  int n_sites;
  double mean_max_domain;
  double std_err;
  double tau_int;
};

struct ScalingResult {
  double a_squared;
  std::vector<ScalingPoint> points;  // ascending n_sites
  LinearFit log_fit;                 // mean max domain vs ln N
  LinearFit linear_fit;              // mean max domain vs N
};

ScalingResult scaling_from_cells(double a_squared, std::span<const CellSummary> cells);

/// Thrown when a study cannot produce statistics; carries what was computed.
class InsufficientSamplesError : public EstimationError {
 public:
  InsufficientSamplesError(const std::string& what, std::vector<ScalingResult> partial)
      : EstimationError(what), partial_(std::move(partial)) {}
  const std::vector<ScalingResult>& partial() const noexcept { return partial_; }

 private:
  std::vector<ScalingResult> partial_;
};

/// Requires the sizes to span at least a factor of 10 in N. Throws
/// InsufficientSamplesError when n_samples < 2.
std::vector<ScalingResult> domain_scaling_study(std::span<const double> a_list, std::span<const LatticeDims> sizes,
                                                const StudySettings& settings);

struct ProbabilityEstimate {
  int successes = 0;
  int trials = 0;
  double p = 0;
  double lower = 0;  // 95% Wilson score interval
  double upper = 0;
};

ProbabilityEstimate wilson_interval(int successes, int trials, double z = 1.959963984540054);

struct PercolationCurve {
  std::vector<LatticeDims> dims;            // ascending site count
  std::vector<int> lattice_sizes;           // N per row
  std::vector<double> a_squared_grid;       // ascending
  // [size index][grid index]
  std::vector<std::vector<ProbabilityEstimate>> spanning_probability;
  std::vector<std::vector<ProbabilityEstimate>> crossing_probability;
};

PercolationCurve curve_from_cells(std::span<const CellSummary> cells);

/// Requires the grid to straddle a^2 = 6.46.
PercolationCurve percolation_study(std::span<const double> a_grid, std::span<const LatticeDims> sizes,
                                   const StudySettings& settings);

struct CriticalPointEstimate {
  double a_squared_c = 0;
  double uncertainty = 0;     // bootstrap standard deviation
  double slope_small = 0;     // d p / d a^2 of the smaller lattice at the bracket
  double slope_large = 0;
  double slope_ratio = 0;     // slope_large / slope_small
  int bootstrap_resamples = 0;
  int bootstrap_failures = 0; // resamples whose curves did not cross
  int n_small = 0;
  int n_large = 0;
};

/// Non-decreasing least-squares fit (pool adjacent violators) with weights.
std::vector<double> isotonic_fit(std::span<const double> y, std::span<const double> weights);

/// Crossing of the two largest-N spanning curves: both are smoothed to be
/// monotone, then the difference (large minus small) is interpolated
/// linearly across its negative-to-non-negative sign change; when there are
/// several, the one with the largest jump wins. The uncertainty comes from
/// parametric bootstrap resampling of every cell. Throws EstimationError if
/// the curves do not cross.
CriticalPointEstimate estimate_critical_point(const PercolationCurve& curve, int bootstrap_resamples = 1000,
                                              std::uint64_t seed = 0);

/// Sokal's windowed estimate, tau = 1/2 + sum_{t=1}^{W} rho(t) with the
/// smallest W >= 5 tau(W). Returns 0.5 for constant series.
double integrated_autocorrelation_time(std::span<const double> series);

}  // namespace aklt
