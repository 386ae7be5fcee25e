#pragma once

// Single-spin-flip Metropolis sampling of the filter-outcome distribution.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aklt/config_model.hpp"
#include "aklt/domain_tracker.hpp"
#include "aklt/rng.hpp"

namespace aklt {

struct SamplerSettings {
  double a_squared = 3.0;
  std::uint64_t seed = 0;
  int burn_in_sweeps = 1000;
  int thinning_sweeps = 10;
  int n_samples = 1;
  bool keep_snapshots = false;
  /// Run TrackedConfiguration::verify() every this many proposals (0 = never).
  std::int64_t consistency_check_interval = 0;

  /// Throws DomainError / ArgumentError on invalid values.
  void validate() const;
};

struct SampleRecord {
  std::int64_t sweep_index = 0;
  ConfigStatistics statistics;
  int max_domain_size = 0;
  bool spanning_flag = false;
  bool crossing_flag = false;
  /// Some wrapping domain carries label Z. Not part of the CSV stream.
  bool spanning_is_z = false;
  std::optional<std::string> config_snapshot;

  bool operator==(const SampleRecord&) const = default;
};

struct LabelProbabilities {
  double p_x, p_y, p_z;
};

/// Product-measure start: p_z = |a^2/4 - 1/4| / (1 + |a^2/4 - 1/4|), p_x = p_y = (1 - p_z)/2.
LabelProbabilities initial_label_probabilities(DeformationParam a);

FilterConfiguration initial_configuration(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a,
                                          Xoshiro256& rng);

/// Proposes a uniform site and a uniform different label (X <-> Y only at
/// a^2 = 1), accepts with probability min(1, r). Always consumes the same
/// number of random draws.
bool metropolis_step(TrackedConfiguration& state, const AcceptanceTable& table, Xoshiro256& rng);

/// One Markov chain with exclusive ownership of its configuration.
class MetropolisChain {
 public:
  MetropolisChain(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a, std::uint64_t seed);
  MetropolisChain(FilterConfiguration start, DeformationParam a, std::uint64_t seed);

  bool step();
  /// N proposals.
  void sweep();

  const TrackedConfiguration& state() const noexcept { return state_; }
  DeformationParam param() const noexcept { return table_.param(); }
  std::int64_t proposals() const noexcept { return proposals_; }
  std::int64_t accepted() const noexcept { return accepted_; }

  void set_consistency_check_interval(std::int64_t every) { check_every_ = every; }

 private:
  TrackedConfiguration state_;
  AcceptanceTable table_;
  Xoshiro256 rng_;
  std::int64_t proposals_ = 0;
  std::int64_t accepted_ = 0;
  std::int64_t check_every_ = 0;
};

/// Statistics, reduction-based flags and (optionally) snapshot of the current state.
SampleRecord make_record(const TrackedConfiguration& state, DeformationParam a, std::int64_t sweep, bool snapshot);

/// Burn-in, then n_samples records spaced by thinning_sweeps. Deterministic in
/// (settings, lattice).
std::vector<SampleRecord> run(const SamplerSettings& settings, std::shared_ptr<const HoneycombLattice> lattice);

}  // namespace aklt
