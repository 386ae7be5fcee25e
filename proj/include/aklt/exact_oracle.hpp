#pragma once

// Ground truth for tiny tori, kept out of the simulator proper:
//  * exhaustive enumeration of all 3^N outcomes under the closed-form weight;
//  * a dense PEPS state built from the local tensors, measured with the
//    deformed filters, giving outcome probabilities from first principles.

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "aklt/config_model.hpp"
#include "aklt/lattice.hpp"

namespace aklt::oracle {

/// Outcome index sum_k label_k * 3^k (site 0 least significant).
std::uint64_t config_index(const FilterConfiguration& config);
FilterConfiguration config_from_index(std::shared_ptr<const HoneycombLattice> lattice, std::uint64_t index);
std::uint64_t outcome_count(int n_sites);

struct ExactDistribution {
  std::shared_ptr<const HoneycombLattice> lattice;
  double a_squared = 0;
  std::vector<double> probabilities;  // by config_index
  std::vector<double> log2_weights;   // unnormalised, by config_index
  double partition_log2 = 0;

  double probability(const FilterConfiguration& config) const { return probabilities[config_index(config)]; }
};

inline constexpr int kMaxEnumerationSites = 14;
inline constexpr int kMaxPepsSites = 8;

/// Throws SizeError for N > 14 and DomainError for a^2 < 1.
ExactDistribution enumerate_distribution(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a);

struct PepsState {
  std::shared_ptr<const HoneycombLattice> lattice;
  double a_squared = 0;
  /// Index sum_k m_k 4^k with m_k the S_z basis index of site k.
  Eigen::VectorXcd amplitudes;
  double raw_norm = 0;  // norm before normalisation
};

/// Contracts the site tensors
///   A[z up]   = |000>,            A[z wedge] = (|100> + |010> + |001>)/a,
///   A[z vee]  = (|110> + |011> + |101>)/a,  A[z down] = |111>
/// over every bond (both legs of a bond carry the same virtual index) and
/// maps labels to S_z states with the sublattice-dependent table
///   A: z up -> |3/2>, z wedge -> -|1/2>, z vee -> |-1/2>, z down -> -|-3/2>
///   B: z up -> |-3/2>, z wedge -> |-1/2>, z vee -> |1/2>, z down -> |3/2>.
/// Throws SizeError for N > 8.
PepsState build_peps_state(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a);

/// <psi| (x)_i E_{sigma_i}(a) |psi> with E_b(a) = F_b(a)^dagger F_b(a).
double quantum_outcome_probability(const PepsState& state, const FilterConfiguration& outcome);

/// All 3^N outcome probabilities, by config_index.
std::vector<double> quantum_outcome_distribution(const PepsState& state);

/// <psi| sum_i S_z,i |psi>.
double total_sz_expectation(const PepsState& state);

/// |<GHZ|psi>|^2 with GHZ = (|up,down,up,...> + (-1)^{N/2} |down,up,down,...>)/sqrt(2),
/// up = |3/2> on A sites, down = |-3/2> on B sites in the first term.
double ghz_fidelity(const PepsState& state);

/// max_sigma |q - p| / p over outcomes with p > 0, and max q over outcomes with p = 0.
struct Discrepancy {
  double max_relative = 0;
  double max_on_zero = 0;
};
Discrepancy compare_distributions(const std::vector<double>& reference, const std::vector<double>& other);

double total_variation(const std::vector<double>& p, const std::vector<double>& q);

/// Normalised histogram of a Metropolis chain over all 3^N outcomes. One
/// sample every `thinning_sweeps` sweeps after `burn_in_sweeps`.
std::vector<double> empirical_distribution(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a,
                                           std::int64_t n_samples, int thinning_sweeps, int burn_in_sweeps,
                                           std::uint64_t seed);

}  // namespace aklt::oracle
