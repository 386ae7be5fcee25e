#pragma once

// Independent recounts used as oracles by several suites.

#include <cmath>
#include <memory>
#include <vector>

#include "aklt/config_model.hpp"
#include "aklt/lattice.hpp"
#include "aklt/rng.hpp"

namespace aklt::testing_support {

inline std::shared_ptr<const HoneycombLattice> make_lattice(int nu, int nv) {
  return std::make_shared<const HoneycombLattice>(nu, nv);
}

inline FilterConfiguration random_configuration(std::shared_ptr<const HoneycombLattice> lat, Xoshiro256& rng,
                                                bool allow_z = true) {
  std::vector<Label> labels(lat->site_count());
  for (auto& l : labels) l = static_cast<Label>(rng.below(allow_z ? 3 : 2));
  return FilterConfiguration(std::move(lat), std::move(labels));
}

struct Recount {
  int n_z = 0;
  int n_domains = 0;
  int n_inter = 0;
  std::vector<int> component;  // per site
};

// Breadth-first recount straight from the bond list.
inline Recount recount(const FilterConfiguration& c) {
  const HoneycombLattice& lat = c.lattice();
  const int n = lat.site_count();
  std::vector<std::vector<int>> adj(n);
  Recount r;
  for (const Bond& b : lat.bonds()) {
    if (c[b.a_site] == c[b.b_site]) {
      adj[b.a_site].push_back(b.b_site);
      adj[b.b_site].push_back(b.a_site);
    } else {
      ++r.n_inter;
    }
  }
  r.component.assign(n, -1);
  for (int s = 0; s < n; ++s) {
    if (c[s] == Label::Z) ++r.n_z;
    if (r.component[s] >= 0) continue;
    std::vector<int> queue{s};
    r.component[s] = r.n_domains;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (int t : adj[queue[h]]) {
        if (r.component[t] < 0) {
          r.component[t] = r.n_domains;
          queue.push_back(t);
        }
      }
    }
    ++r.n_domains;
  }
  return r;
}

// Outcome weight in linear space; only usable on tiny lattices.
inline double linear_weight(const Recount& r, double a2) {
  return std::pow((a2 - 1.0) / 2.0, r.n_z) * std::pow(2.0, r.n_domains - r.n_inter);
}

}  // namespace aklt::testing_support
