#include "aklt/domain_reduction.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "aklt/errors.hpp"

namespace aklt {

namespace {

// Union-find over sites that also tracks each site's unwrapped position
// relative to its root, so that closing a cycle reveals torus winding.
class OffsetUnionFind {
 public:
  explicit OffsetUnionFind(int n) : parent_(n), size_(n, 1), offset_(n), wrap_u_(n, false), wrap_v_(n, false) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  // Returns the root; `off` receives pos(x) - pos(root).
  int find(int x, CellVector& off) {
    CellVector acc;
    int r = x;
    while (parent_[r] != r) {
      acc += offset_[r];
      r = parent_[r];
    }
    // Second pass: point every node on the path straight at the root.
    CellVector remaining = acc;
    while (parent_[x] != x) {
      const int next = parent_[x];
      const CellVector step = offset_[x];
      parent_[x] = r;
      offset_[x] = remaining;
      remaining -= step;
      x = next;
    }
    off = acc;
    return r;
  }

  // Records that pos(j) = pos(i) + d.
  void unite(int i, int j, CellVector d) {
    CellVector oi, oj;
    const int ri = find(i, oi);
    const int rj = find(j, oj);
    const CellVector rel = oi + d - oj;  // pos(rj) - pos(ri)
    if (ri == rj) {
      wrap_u_[ri] = wrap_u_[ri] || rel.u != 0;
      wrap_v_[ri] = wrap_v_[ri] || rel.v != 0;
      return;
    }
    if (size_[ri] >= size_[rj]) {
      attach(rj, ri, rel);
    } else {
      attach(ri, rj, -rel);
    }
  }

  bool wraps_u(int root) const { return wrap_u_[root]; }
  bool wraps_v(int root) const { return wrap_v_[root]; }

 private:
  void attach(int child, int root, CellVector child_minus_root) {
    parent_[child] = root;
    offset_[child] = child_minus_root;
    size_[root] += size_[child];
    wrap_u_[root] = wrap_u_[root] || wrap_u_[child];
    wrap_v_[root] = wrap_v_[root] || wrap_v_[child];
  }

  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<CellVector> offset_;
  std::vector<bool> wrap_u_;
  std::vector<bool> wrap_v_;
};

}  // namespace

StochasticGraph reduce(const FilterConfiguration& config) {
  const HoneycombLattice& lat = config.lattice();
  const int n = lat.site_count();
  StochasticGraph g;
  g.lattice_ = config.lattice_ptr();

  OffsetUnionFind uf(n);
  for (const Bond& b : lat.bonds()) {
    if (config[b.a_site] == config[b.b_site]) {
      uf.unite(b.a_site, b.b_site, b.shift);
      ++g.intra_bonds_;
    }
  }

  std::vector<int> root_vertex(n, -1);
  std::vector<CellVector> root_off(n);
  g.site_vertex_.resize(n);
  g.site_offset_.resize(n);
  for (int s = 0; s < n; ++s) {
    CellVector off;
    const int r = uf.find(s, off);
    root_off[s] = off;
    if (root_vertex[r] < 0) {
      root_vertex[r] = static_cast<int>(g.vertices_.size());
      DomainVertex v;
      v.label = config[s];
      v.wraps_u = uf.wraps_u(r);
      v.wraps_v = uf.wraps_v(r);
      g.vertices_.push_back(std::move(v));
    }
    const int vid = root_vertex[r];
    g.site_vertex_[s] = vid;
    g.vertices_[vid].members.push_back(s);
  }
  for (int s = 0; s < n; ++s) {
    const int anchor = g.vertices_[g.site_vertex_[s]].anchor();
    g.site_offset_[s] = root_off[s] - root_off[anchor];
  }

  struct Crossing {
    int u, v, bond;
    CellVector shift;
  };
  std::vector<Crossing> crossings;
  for (int bi = 0; bi < lat.bond_count(); ++bi) {
    const Bond& b = lat.bond(bi);
    if (config[b.a_site] == config[b.b_site]) continue;
    int u = g.site_vertex_[b.a_site];
    int v = g.site_vertex_[b.b_site];
    CellVector shift = g.site_offset_[b.a_site] + b.shift - g.site_offset_[b.b_site];
    if (u > v) {
      std::swap(u, v);
      shift = -shift;
    }
    crossings.push_back({u, v, bi, shift});
  }
  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& x, const Crossing& y) { return std::tie(x.u, x.v, x.bond) < std::tie(y.u, y.v, y.bond); });
  for (const Crossing& c : crossings) {
    if (!g.links_.empty() && g.links_.back().u == c.u && g.links_.back().v == c.v) {
      ++g.links_.back().multiplicity;
    } else {
      g.links_.push_back({c.u, c.v, 1, c.bond, c.shift});
    }
  }
  for (const DomainLink& l : g.links_) {
    if (l.is_parity_edge()) g.parity_edges_.push_back(l);
  }
  return g;
}

void StochasticGraph::add_parity_edge(int u, int v, CellVector shift) {
  if (u == v || u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count()) {
    throw ArgumentError("parity edge endpoints must be two distinct vertices");
  }
  if (u > v) {
    std::swap(u, v);
    shift = -shift;
  }
  parity_edges_.push_back({u, v, 1, -1, shift});
}

std::vector<int> domain_sizes(const StochasticGraph& graph) {
  std::vector<int> sizes;
  sizes.reserve(graph.vertices().size());
  for (const DomainVertex& v : graph.vertices()) sizes.push_back(v.size());
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

std::vector<std::vector<int>> parity_components(const StochasticGraph& graph) {
  const int nv = graph.vertex_count();
  std::vector<std::vector<int>> adj(nv);
  for (const DomainLink& e : graph.parity_edges()) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(nv, 0);
  std::vector<std::vector<int>> comps;
  for (int s = 0; s < nv; ++s) {
    if (seen[s]) continue;
    std::vector<int> comp{s};
    seen[s] = 1;
    for (std::size_t h = 0; h < comp.size(); ++h) {
      for (int w : adj[comp[h]]) {
        if (!seen[w]) {
          seen[w] = 1;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return comps;
}

}  // namespace aklt
