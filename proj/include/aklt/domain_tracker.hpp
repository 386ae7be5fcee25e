#pragma once

// Single-site relabelling with incremental domain bookkeeping.
//
// Every site carries the id of its domain. A relabelling merges the
// new-label domains around the site (ids answer that in O(1)) and may split
// the old domain; splits are resolved by a local search that races one BFS
// per candidate piece and stops as soon as all but one piece is exhausted or
// all pieces meet. An intact hexagon around the site proves connectivity
// without any search.

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "aklt/config_model.hpp"

namespace aklt {

/// min(1, 2^(d_n_z log2((a^2-1)/2) + d_int)) for d_n_z in {-1,0,1} and a
/// bounded integer part d_int = d_domains - d_interdomain_bonds.
class AcceptanceTable {
 public:
  static constexpr int kMaxInt = 8;

  explicit AcceptanceTable(DeformationParam a);

  double probability(int d_n_z, int d_int) const {
    return table_[d_n_z + 1][d_int + kMaxInt];
  }
  DeformationParam param() const noexcept { return a_; }

 private:
  DeformationParam a_;
  std::array<std::array<double, 2 * kMaxInt + 1>, 3> table_{};
};

class TrackedConfiguration {
 public:
  explicit TrackedConfiguration(FilterConfiguration config);

  const FilterConfiguration& configuration() const noexcept { return config_; }
  const HoneycombLattice& lattice() const noexcept { return config_.lattice(); }
  Label operator[](int site) const { return config_[site]; }

  int n_z() const noexcept { return n_z_; }
  int n_domains() const noexcept { return n_domains_; }
  int n_interdomain_bonds() const noexcept { return n_inter_; }
  ConfigStatistics statistics(DeformationParam a) const;

  int domain_id(int site) const { return domain_id_[site]; }
  int domain_size_of(int site) const { return domain_size_[domain_id_[site]]; }

  /// Exact statistics change for a relabelling, without applying it.
  FlipDelta evaluate(int site, Label new_label);

  /// Metropolis decision: accept iff u < min(1, r). Applies the change on
  /// acceptance. The split search runs only when u falls between the bounds
  /// implied by the unresolved piece count.
  bool attempt(int site, Label new_label, double u, const AcceptanceTable& table);

  /// Unconditionally relabel.
  void apply(int site, Label new_label);

  /// Cross-checks ids, sizes and counters against a from-scratch recount.
  /// Throws std::logic_error on any mismatch.
  void verify() const;

 private:
  struct LocalView {
    Label old_label;
    int d_n_z;
    int d_inter;
    int merge_count;                 // m: distinct new-label domains touched
    std::array<int, 3> merge_ids;
    int group_count;                 // candidate pieces after local unions
    std::array<int, 3> group_seed;   // one neighbour site per candidate piece
  };

  LocalView inspect(int site, Label new_label) const;
  /// Number of pieces the old domain splits into; leaves finished pieces in finished_.
  int resolve_split(int site, const LocalView& view);
  void commit(int site, Label new_label, const LocalView& view, int pieces);

  void rebuild_domains();
  int take_id();

  FilterConfiguration config_;
  std::vector<std::array<int, 3>> nbr_;
  std::vector<int> domain_id_;
  std::vector<int> domain_size_;
  std::vector<int> free_ids_;
  int n_z_ = 0;
  int n_domains_ = 0;
  int n_inter_ = 0;

  // Search scratch.
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> owner_;
  std::uint32_t epoch_ = 0;
  std::array<std::vector<int>, 3> queue_;
  std::vector<std::vector<int>> finished_;
  std::vector<int> relabel_stack_;
};

}  // namespace aklt
