#include "aklt/config_model.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "aklt/errors.hpp"

namespace aklt {

char label_char(Label l) noexcept {
  switch (l) {
    case Label::X: return 'X';
    case Label::Y: return 'Y';
    case Label::Z: return 'Z';
  }
  return '?';
}

Label label_from_char(char c) {
  switch (c) {
    case 'X': return Label::X;
    case 'Y': return Label::Y;
    case 'Z': return Label::Z;
    default: throw ArgumentError(std::string("invalid label character '") + c + "'");
  }
}

FilterConfiguration::FilterConfiguration(std::shared_ptr<const HoneycombLattice> lattice, Label fill)
    : lattice_(std::move(lattice)), labels_(lattice_->site_count(), fill) {}

FilterConfiguration::FilterConfiguration(std::shared_ptr<const HoneycombLattice> lattice, std::vector<Label> labels)
    : lattice_(std::move(lattice)), labels_(std::move(labels)) {
  if (static_cast<int>(labels_.size()) != lattice_->site_count()) {
    throw ArgumentError("configuration has " + std::to_string(labels_.size()) + " labels for " +
                        std::to_string(lattice_->site_count()) + " sites");
  }
}

int FilterConfiguration::count(Label l) const {
  int n = 0;
  for (Label x : labels_) n += (x == l);
  return n;
}

std::string FilterConfiguration::to_text() const {
  std::string s(labels_.size(), '?');
  for (std::size_t i = 0; i < labels_.size(); ++i) s[i] = label_char(labels_[i]);
  return s;
}

FilterConfiguration FilterConfiguration::from_text(std::shared_ptr<const HoneycombLattice> lattice,
                                                   std::string_view text) {
  std::vector<Label> labels;
  labels.reserve(text.size());
  for (char c : text) labels.push_back(label_from_char(c));
  return FilterConfiguration(std::move(lattice), std::move(labels));
}

double log2_z_factor(DeformationParam a) {
  const double f = (a.a_squared() - 1.0) / 2.0;
  return f > 0 ? std::log2(f) : -std::numeric_limits<double>::infinity();
}

double log2_weight(int n_z, int n_domains, int n_interdomain_bonds, DeformationParam a) {
  const double z_term = n_z == 0 ? 0.0 : n_z * log2_z_factor(a);
  return z_term + static_cast<double>(n_domains - n_interdomain_bonds);
}

ConfigStatistics compute_statistics(const FilterConfiguration& config, DeformationParam a) {
  if (a.a_squared() < 1.0) {
    throw DomainError("the filter-outcome distribution is defined for a^2 >= 1");
  }
  const HoneycombLattice& lat = config.lattice();
  const int n = lat.site_count();
  ConfigStatistics st;
  st.n_z = config.count(Label::Z);

  for (const Bond& b : lat.bonds()) {
    st.n_interdomain_bonds += (config[b.a_site] != config[b.b_site]);
  }

  std::vector<char> seen(n, 0);
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++st.n_domains;
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (int nb : lat.neighbors(cur)) {
        if (!seen[nb] && config[nb] == config[cur]) {
          seen[nb] = 1;
          stack.push_back(nb);
        }
      }
    }
  }
  st.log2_weight = log2_weight(st.n_z, st.n_domains, st.n_interdomain_bonds, a);
  return st;
}

PottsParameters potts_parameters(DeformationParam a) {
  if (a.a_squared() <= 1.0) {
    throw DomainError("the Potts field log2(a^2-1)-1 diverges for a^2 <= 1");
  }
  return {std::log(2.0), std::log2(a.a_squared() - 1.0) - 1.0};
}

double FlipDelta::log2_ratio(DeformationParam a) const {
  const double z_term = d_n_z == 0 ? 0.0 : d_n_z * log2_z_factor(a);
  return z_term + static_cast<double>(d_domains - d_interdomain_bonds);
}

namespace {

// Number of distinct components containing the given seeds within the
// subgraph of `label` sites, with `excluded` removed.
int count_components(const FilterConfiguration& config, const std::vector<int>& seeds, Label label, int excluded) {
  const HoneycombLattice& lat = config.lattice();
  std::vector<int> owner(lat.site_count(), -1);
  std::vector<int> stack;
  int components = 0;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (owner[seeds[i]] >= 0) continue;
    ++components;
    owner[seeds[i]] = static_cast<int>(i);
    stack.push_back(seeds[i]);
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      for (int nb : lat.neighbors(cur)) {
        if (nb != excluded && owner[nb] < 0 && config[nb] == label) {
          owner[nb] = static_cast<int>(i);
          stack.push_back(nb);
        }
      }
    }
  }
  return components;
}

}  // namespace

FlipDelta flip_delta(const FilterConfiguration& config, int site, Label new_label) {
  const HoneycombLattice& lat = config.lattice();
  if (site < 0 || site >= lat.site_count()) {
    throw ArgumentError("site index " + std::to_string(site) + " out of range");
  }
  const Label old_label = config[site];
  if (old_label == new_label) {
    throw ArgumentError("proposed label equals the current label");
  }
  FlipDelta d;
  d.d_n_z = (new_label == Label::Z) - (old_label == Label::Z);

  std::vector<int> old_nbrs;
  std::vector<int> new_nbrs;
  for (int nb : lat.neighbors(site)) {
    if (config[nb] != new_label) ++d.d_interdomain_bonds;
    if (config[nb] != old_label) --d.d_interdomain_bonds;
    if (config[nb] == old_label) old_nbrs.push_back(nb);
    if (config[nb] == new_label) new_nbrs.push_back(nb);
  }
  // Leaving: the old domain minus `site` falls into k pieces (k = 0 if it was a singleton).
  const int k = old_nbrs.empty() ? 0 : count_components(config, old_nbrs, old_label, site);
  // Joining: the m new-label domains around `site` merge into one.
  const int m = new_nbrs.empty() ? 0 : count_components(config, new_nbrs, new_label, site);
  d.d_domains = (k - 1) + (1 - m);
  return d;
}

double flip_log_weight_delta(const FilterConfiguration& config, int site, Label new_label, DeformationParam a) {
  return flip_delta(config, site, new_label).log2_ratio(a);
}

}  // namespace aklt
