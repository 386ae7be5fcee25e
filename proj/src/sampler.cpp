#include "aklt/sampler.hpp"

#include <cmath>
#include <string>

#include "aklt/domain_reduction.hpp"
#include "aklt/errors.hpp"
#include "aklt/percolation.hpp"

namespace aklt {

void SamplerSettings::validate() const {
  if (!(a_squared >= 1.0) || !std::isfinite(a_squared)) {
    throw DomainError("sampling requires a^2 >= 1, got " + std::to_string(a_squared));
  }
  if (burn_in_sweeps < 0) throw ArgumentError("burn_in_sweeps must be >= 0");
  if (thinning_sweeps < 1) throw ArgumentError("thinning_sweeps must be >= 1");
  if (n_samples < 1) throw ArgumentError("n_samples must be >= 1");
  if (consistency_check_interval < 0) throw ArgumentError("consistency_check_interval must be >= 0");
}

LabelProbabilities initial_label_probabilities(DeformationParam a) {
  const double t = std::abs(a.a_squared() / 4.0 - 0.25);
  const double pz = t / (1.0 + t);
  return {(1.0 - pz) / 2.0, (1.0 - pz) / 2.0, pz};
}

FilterConfiguration initial_configuration(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a,
                                          Xoshiro256& rng) {
  if (a.a_squared() < 1.0) throw DomainError("sampling requires a^2 >= 1");
  const LabelProbabilities p = initial_label_probabilities(a);
  const int n = lattice->site_count();
  std::vector<Label> labels(n);
  for (int s = 0; s < n; ++s) {
    const double u = rng.uniform();
    labels[s] = u < p.p_z ? Label::Z : (u < p.p_z + p.p_x ? Label::X : Label::Y);
  }
  return FilterConfiguration(std::move(lattice), std::move(labels));
}

bool metropolis_step(TrackedConfiguration& state, const AcceptanceTable& table, Xoshiro256& rng) {
  const int n = state.lattice().site_count();
  const int site = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const Label current = state[site];
  Label proposal;
  if (table.param().a_squared() == 1.0) {
    proposal = current == Label::X ? Label::Y : Label::X;
  } else {
    // The two labels other than `current`, in X, Y, Z order.
    const int pick = static_cast<int>(rng.below(2));
    const int c = static_cast<int>(current);
    proposal = static_cast<Label>(pick < c ? pick : pick + 1);
  }
  const double u = rng.uniform();
  return state.attempt(site, proposal, u, table);
}

MetropolisChain::MetropolisChain(std::shared_ptr<const HoneycombLattice> lattice, DeformationParam a,
                                 std::uint64_t seed)
    : MetropolisChain(
          [&] {
            Xoshiro256 init_rng(derive_seed(seed, 0));
            return initial_configuration(lattice, a, init_rng);
          }(),
          a, seed) {}

MetropolisChain::MetropolisChain(FilterConfiguration start, DeformationParam a, std::uint64_t seed)
    : state_(std::move(start)), table_(a), rng_(derive_seed(seed, 1)) {
  if (a.a_squared() < 1.0) throw DomainError("sampling requires a^2 >= 1");
  if (a.a_squared() == 1.0 && state_.n_z() > 0) {
    throw DomainError("a^2 = 1 chains cannot start from a configuration containing Z");
  }
}

bool MetropolisChain::step() {
  const bool ok = metropolis_step(state_, table_, rng_);
  ++proposals_;
  accepted_ += ok;
  if (check_every_ > 0 && proposals_ % check_every_ == 0) state_.verify();
  return ok;
}

void MetropolisChain::sweep() {
  const int n = state_.lattice().site_count();
  for (int i = 0; i < n; ++i) step();
}

SampleRecord make_record(const TrackedConfiguration& state, DeformationParam a, std::int64_t sweep, bool snapshot) {
  SampleRecord rec;
  rec.sweep_index = sweep;
  rec.statistics = state.statistics(a);
  const StochasticGraph g = reduce(state.configuration());
  rec.max_domain_size = max_domain_size(g);
  rec.spanning_flag = spanning_domain(g);
  rec.crossing_flag = graph_crossing(g);
  for (const DomainVertex& v : g.vertices()) rec.spanning_is_z = rec.spanning_is_z || (v.wraps() && v.label == Label::Z);
  if (snapshot) rec.config_snapshot = state.configuration().to_text();
  return rec;
}

std::vector<SampleRecord> run(const SamplerSettings& settings, std::shared_ptr<const HoneycombLattice> lattice) {
  settings.validate();
  const DeformationParam a(settings.a_squared);
  MetropolisChain chain(std::move(lattice), a, settings.seed);
  chain.set_consistency_check_interval(settings.consistency_check_interval);

  std::int64_t sweep = 0;
  for (; sweep < settings.burn_in_sweeps; ++sweep) chain.sweep();

  std::vector<SampleRecord> records;
  records.reserve(settings.n_samples);
  for (int k = 0; k < settings.n_samples; ++k) {
    for (int t = 0; t < settings.thinning_sweeps; ++t, ++sweep) chain.sweep();
    records.push_back(make_record(chain.state(), a, sweep, settings.keep_snapshots));
  }
  return records;
}

}  // namespace aklt
