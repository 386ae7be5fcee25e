#include "aklt/exact_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "aklt/errors.hpp"
#include "aklt/sampler.hpp"

namespace aklt::oracle {

std::uint64_t outcome_count(int n_sites) {
  std::uint64_t n = 1;
  for (int i = 0; i < n_sites; ++i) n *= 3;
  return n;
}

std::uint64_t config_index(const FilterConfiguration& config) {
  std::uint64_t idx = 0;
  for (int s = config.size() - 1; s >= 0; --s) idx = idx * 3 + static_cast<std::uint64_t>(config[s]);
  return idx;
}

FilterConfiguration config_from_index(std::shared_ptr<const HoneycombLattice> lattice, std::uint64_t index) {
  const int n = lattice->site_count();
  std::vector<Label> labels(n);
  for (int s = 0; s < n; ++s) {
    labels[s] = static_cast<Label>(index % 3);
    index /= 3;
  }
  return FilterConfiguration(std::move(lattice), std::move(labels));
}

ExactDistribution enumerate_distribution(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a) {
  const int n = lattice->site_count();
  if (n > kMaxEnumerationSites) {
    throw SizeError("exhaustive enumeration limited to " + std::to_string(kMaxEnumerationSites) + " sites, got " +
                    std::to_string(n));
  }
  if (a.a_squared() < 1.0) throw DomainError("the filter-outcome distribution is defined for a^2 >= 1");
  ExactDistribution d;
  d.lattice = lattice;
  d.a_squared = a.a_squared();
  const std::uint64_t total = outcome_count(n);
  d.log2_weights.resize(total);
  double max_w = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < total; ++i) {
    const ConfigStatistics st = compute_statistics(config_from_index(lattice, i), a);
    d.log2_weights[i] = st.log2_weight;
    max_w = std::max(max_w, st.log2_weight);
  }
  double sum = 0;
  for (double w : d.log2_weights) sum += std::exp2(w - max_w);
  d.partition_log2 = max_w + std::log2(sum);
  d.probabilities.resize(total);
  for (std::uint64_t i = 0; i < total; ++i) d.probabilities[i] = std::exp2(d.log2_weights[i] - d.partition_log2);
  return d;
}

namespace {

struct PhysicalImage {
  int m_index;
  double sign;
};

// Table of label (number of 1s on the virtual legs) -> S_z state, per sublattice.
PhysicalImage physical_image(Sublattice sub, int ones) {
  static constexpr PhysicalImage kA[4] = {{0, 1.0}, {1, -1.0}, {2, 1.0}, {3, -1.0}};
  static constexpr PhysicalImage kB[4] = {{3, 1.0}, {2, 1.0}, {1, 1.0}, {0, 1.0}};
  return sub == Sublattice::A ? kA[ones] : kB[ones];
}

}  // namespace

PepsState build_peps_state(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a) {
  const int n = lattice->site_count();
  if (n > kMaxPepsSites) {
    throw SizeError("dense PEPS assembly limited to " + std::to_string(kMaxPepsSites) + " sites, got " +
                    std::to_string(n));
  }
  const int nb = lattice->bond_count();
  const double inv_a = 1.0 / a.a();
  PepsState st;
  st.lattice = lattice;
  st.a_squared = a.a_squared();
  st.amplitudes = Eigen::VectorXcd::Zero(std::int64_t{1} << (2 * n));

  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << nb); ++bits) {
    double coeff = 1.0;
    std::uint64_t index = 0;
    for (int s = n - 1; s >= 0; --s) {
      int ones = 0;
      for (int b : lattice->incident_bonds(s)) ones += static_cast<int>((bits >> b) & 1u);
      if (ones == 1 || ones == 2) coeff *= inv_a;
      const PhysicalImage img = physical_image(lattice->sublattice(s), ones);
      coeff *= img.sign;
      index = index * 4 + static_cast<std::uint64_t>(img.m_index);
    }
    st.amplitudes(static_cast<Eigen::Index>(index)) += coeff;
  }
  st.raw_norm = st.amplitudes.norm();
  if (!(st.raw_norm > 0)) throw DomainError("PEPS contraction produced the zero vector");
  st.amplitudes /= st.raw_norm;
  return st;
}

namespace {

// Row factor K with K^dagger K = E, dropping null directions.
Eigen::MatrixXcd kraus_factor(const SpinOperator& e) {
  Eigen::SelfAdjointEigenSolver<SpinOperator> solver(e);
  std::vector<int> keep;
  for (int i = 0; i < 4; ++i) {
    if (solver.eigenvalues()(i) > 1e-14) keep.push_back(i);
  }
  Eigen::MatrixXcd k(static_cast<Eigen::Index>(keep.size()), 4);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    k.row(static_cast<Eigen::Index>(r)) =
        std::sqrt(solver.eigenvalues()(keep[r])) * solver.eigenvectors().col(keep[r]).adjoint();
  }
  return k;
}

// Applies `k` (r x d) on the tensor factor `site` of a vector with local dims `dims`.
Eigen::VectorXcd apply_local(const Eigen::VectorXcd& in, const std::vector<int>& dims, int site,
                             const Eigen::MatrixXcd& k) {
  Eigen::Index low = 1, high = 1;
  for (int j = 0; j < site; ++j) low *= dims[j];
  for (std::size_t j = site + 1; j < dims.size(); ++j) high *= dims[j];
  const Eigen::Index mid = dims[site];
  const Eigen::Index r = k.rows();
  Eigen::VectorXcd out(low * r * high);
  if (r == 0) return out;
  for (Eigen::Index h = 0; h < high; ++h) {
    Eigen::Map<const Eigen::MatrixXcd> block(in.data() + h * low * mid, low, mid);
    Eigen::Map<Eigen::MatrixXcd> dst(out.data() + h * low * r, low, r);
    dst.noalias() = block * k.transpose();
  }
  return out;
}

std::array<Eigen::MatrixXcd, 3> factors_for(double a_squared) {
  const DeformationParam a(a_squared);
  return {kraus_factor(povm_element(Axis::x, a)), kraus_factor(povm_element(Axis::y, a)),
          kraus_factor(povm_element(Axis::z, a))};
}

void descend(const Eigen::VectorXcd& vec, std::vector<int>& dims, int site, std::uint64_t index,
             std::uint64_t place, const std::array<Eigen::MatrixXcd, 3>& factors, std::vector<double>& out) {
  const int n = static_cast<int>(dims.size());
  if (site == n) {
    out[index] = vec.squaredNorm();
    return;
  }
  for (int b = 0; b < 3; ++b) {
    const Eigen::MatrixXcd& k = factors[b];
    const std::uint64_t child = index + place * static_cast<std::uint64_t>(b);
    if (k.rows() == 0) {
      // Zero filter: every completion of this prefix has probability 0.
      std::uint64_t block = 1;
      for (int j = site + 1; j < n; ++j) block *= 3;
      for (std::uint64_t t = 0; t < block; ++t) out[child + place * 3 * t] = 0.0;
      continue;
    }
    const int saved = dims[site];
    Eigen::VectorXcd next = apply_local(vec, dims, site, k);
    dims[site] = static_cast<int>(k.rows());
    descend(next, dims, site + 1, child, place * 3, factors, out);
    dims[site] = saved;
  }
}

}  // namespace

double quantum_outcome_probability(const PepsState& state, const FilterConfiguration& outcome) {
  const int n = state.lattice->site_count();
  if (outcome.size() != n) throw ArgumentError("outcome and state live on different lattices");
  const auto factors = factors_for(state.a_squared);
  std::vector<int> dims(n, 4);
  Eigen::VectorXcd vec = state.amplitudes;
  for (int s = 0; s < n; ++s) {
    const Eigen::MatrixXcd& k = factors[static_cast<int>(outcome[s])];
    if (k.rows() == 0) return 0.0;
    vec = apply_local(vec, dims, s, k);
    dims[s] = static_cast<int>(k.rows());
  }
  return vec.squaredNorm();
}

std::vector<double> quantum_outcome_distribution(const PepsState& state) {
  const int n = state.lattice->site_count();
  const auto factors = factors_for(state.a_squared);
  std::vector<double> out(outcome_count(n), 0.0);
  std::vector<int> dims(n, 4);
  descend(state.amplitudes, dims, 0, 0, 1, factors, out);
  return out;
}

double total_sz_expectation(const PepsState& state) {
  const int n = state.lattice->site_count();
  double total = 0;
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    const double w = std::norm(state.amplitudes(i));
    if (w == 0) continue;
    double m = 0;
    std::uint64_t idx = static_cast<std::uint64_t>(i);
    for (int s = 0; s < n; ++s) {
      m += 1.5 - static_cast<double>(idx % 4);
      idx /= 4;
    }
    total += w * m;
  }
  return total;
}

double ghz_fidelity(const PepsState& state) {
  const HoneycombLattice& lat = *state.lattice;
  const int n = lat.site_count();
  std::uint64_t up_down = 0, down_up = 0;
  for (int s = n - 1; s >= 0; --s) {
    const bool a_site = lat.sublattice(s) == Sublattice::A;
    up_down = up_down * 4 + (a_site ? 0 : 3);
    down_up = down_up * 4 + (a_site ? 3 : 0);
  }
  const double sign = (n / 2) % 2 == 0 ? 1.0 : -1.0;
  const cplx overlap = (state.amplitudes(static_cast<Eigen::Index>(up_down)) +
                        sign * state.amplitudes(static_cast<Eigen::Index>(down_up))) /
                       std::sqrt(2.0);
  return std::norm(overlap);
}

Discrepancy compare_distributions(const std::vector<double>& reference, const std::vector<double>& other) {
  if (reference.size() != other.size()) throw ArgumentError("distributions have different supports");
  Discrepancy d;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i] > 0) {
      d.max_relative = std::max(d.max_relative, std::abs(other[i] - reference[i]) / reference[i]);
    } else {
      d.max_on_zero = std::max(d.max_on_zero, std::abs(other[i]));
    }
  }
  return d;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw ArgumentError("distributions have different supports");
  double tv = 0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

std::vector<double> empirical_distribution(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a,
                                           std::int64_t n_samples, int thinning_sweeps, int burn_in_sweeps,
                                           std::uint64_t seed) {
  const int n = lattice->site_count();
  if (n > kMaxEnumerationSites) throw SizeError("empirical histogram limited to 14 sites");
  if (n_samples < 1 || thinning_sweeps < 1 || burn_in_sweeps < 0) {
    throw ArgumentError("empirical_distribution needs n_samples >= 1, thinning >= 1, burn-in >= 0");
  }
  std::vector<std::int64_t> counts(outcome_count(n), 0);
  MetropolisChain chain(lattice, a, seed);
  for (int s = 0; s < burn_in_sweeps; ++s) chain.sweep();
  for (std::int64_t k = 0; k < n_samples; ++k) {
    for (int t = 0; t < thinning_sweeps; ++t) chain.sweep();
    ++counts[config_index(chain.state().configuration())];
  }
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / n_samples;
  return p;
}

}  // namespace aklt::oracle
