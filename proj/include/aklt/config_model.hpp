#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aklt/lattice.hpp"
#include "aklt/spin_algebra.hpp"

namespace aklt {

/// Filter outcome at one site.
enum class Label : std::uint8_t { X = 0, Y = 1, Z = 2 };

char label_char(Label l) noexcept;
/// Throws ArgumentError for anything but 'X', 'Y', 'Z'.
Label label_from_char(char c);

/// One outcome sigma of the three-outcome filter on every site.
class FilterConfiguration {
 public:
  FilterConfiguration(std::shared_ptr<const HoneycombLattice> lattice, Label fill);
  /// Throws ArgumentError if labels.size() differs from the site count.
  FilterConfiguration(std::shared_ptr<const HoneycombLattice> lattice, std::vector<Label> labels);

  const HoneycombLattice& lattice() const noexcept { return *lattice_; }
  const std::shared_ptr<const HoneycombLattice>& lattice_ptr() const noexcept { return lattice_; }
  int size() const noexcept { return static_cast<int>(labels_.size()); }

  Label operator[](int site) const { return labels_[site]; }
  void set(int site, Label l) { labels_[site] = l; }
  std::span<const Label> labels() const noexcept { return labels_; }

  int count(Label l) const;

  /// One label character per site, in site-index order.
  std::string to_text() const;
  static FilterConfiguration from_text(std::shared_ptr<const HoneycombLattice> lattice, std::string_view text);

  bool operator==(const FilterConfiguration& o) const { return labels_ == o.labels_; }

 private:
  std::shared_ptr<const HoneycombLattice> lattice_;
  std::vector<Label> labels_;
};

struct ConfigStatistics {
  int n_z = 0;
  int n_domains = 0;
  int n_interdomain_bonds = 0;
  double log2_weight = 0.0;

  bool operator==(const ConfigStatistics&) const = default;
};

/// log2 of the per-Z factor (a^2 - 1)/2; -inf at a^2 = 1.
double log2_z_factor(DeformationParam a);

/// Unnormalised log2 weight n_z log2((a^2-1)/2) + (n_domains - n_interdomain_bonds).
/// With n_z = 0 the Z term is zero for every a^2 >= 1; at a^2 = 1 any Z gives -inf.
double log2_weight(int n_z, int n_domains, int n_interdomain_bonds, DeformationParam a);

/// Domains are maximal connected sets of like-labelled sites; an inter-domain
/// bond is any bond whose endpoints carry different labels (parallel bonds
/// counted separately). Throws DomainError for a^2 < 1.
ConfigStatistics compute_statistics(const FilterConfiguration& config, DeformationParam a);

struct PottsParameters {
  double beta;            // ln 2, independent of a
  double field_strength;  // log2(a^2 - 1) - 1
};

/// Throws DomainError for a^2 <= 1.
PottsParameters potts_parameters(DeformationParam a);

/// Changes to the sufficient statistics caused by relabelling one site.
struct FlipDelta {
  int d_n_z = 0;
  int d_domains = 0;
  int d_interdomain_bonds = 0;

  double log2_ratio(DeformationParam a) const;
};

/// Statistics change for relabelling `site` to `new_label`, found by searching
/// only the domains touching that site. Throws ArgumentError when new_label
/// equals the current label.
FlipDelta flip_delta(const FilterConfiguration& config, int site, Label new_label);

/// log2 of the Metropolis ratio p(sigma')/p(sigma) for the single-site change.
double flip_log_weight_delta(const FilterConfiguration& config, int site, Label new_label, DeformationParam a);

}  // namespace aklt
