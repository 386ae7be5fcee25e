#include "aklt/percolation.hpp"

#include <algorithm>
#include <vector>

namespace aklt {

bool spanning_domain(const StochasticGraph& graph) {
  return std::any_of(graph.vertices().begin(), graph.vertices().end(),
                     [](const DomainVertex& v) { return v.wraps(); });
}

bool graph_crossing(const StochasticGraph& graph) {
  const int nv = graph.vertex_count();
  struct Arc {
    int to;
    CellVector shift;
  };
  std::vector<std::vector<Arc>> adj(nv);
  for (const DomainLink& e : graph.parity_edges()) {
    adj[e.u].push_back({e.v, e.shift});
    adj[e.v].push_back({e.u, -e.shift});
  }
  std::vector<char> placed(nv, 0);
  std::vector<CellVector> pos(nv);
  std::vector<int> queue;
  for (int s = 0; s < nv; ++s) {
    if (placed[s] || adj[s].empty()) continue;
    placed[s] = 1;
    pos[s] = {};
    queue.assign(1, s);
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int cur = queue[h];
      for (const Arc& a : adj[cur]) {
        const CellVector expect = pos[cur] + a.shift;
        if (!placed[a.to]) {
          placed[a.to] = 1;
          pos[a.to] = expect;
          queue.push_back(a.to);
        } else if (!(pos[a.to] == expect)) {
          return true;
        }
      }
    }
  }
  return false;
}

int max_domain_size(const StochasticGraph& graph) {
  int best = 0;
  for (const DomainVertex& v : graph.vertices()) best = std::max(best, v.size());
  return best;
}

std::vector<WrapClass> component_wrap_classes(const StochasticGraph& graph) {
  const int nv = graph.vertex_count();
  struct Arc {
    int to;
    CellVector shift;
  };
  std::vector<std::vector<Arc>> adj(nv);
  for (const DomainLink& e : graph.parity_edges()) {
    adj[e.u].push_back({e.v, e.shift});
    adj[e.v].push_back({e.u, -e.shift});
  }
  const auto comps = parity_components(graph);
  std::vector<WrapClass> out(comps.size());
  std::vector<char> placed(nv, 0);
  std::vector<CellVector> pos(nv);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    WrapClass& w = out[c];
    const int root = comps[c].front();
    placed[root] = 1;
    std::vector<int> queue{root};
    for (std::size_t h = 0; h < queue.size(); ++h) {
      const int cur = queue[h];
      const DomainVertex& vx = graph.vertices()[cur];
      w.wraps_u = w.wraps_u || vx.wraps_u;
      w.wraps_v = w.wraps_v || vx.wraps_v;
      for (const Arc& a : adj[cur]) {
        const CellVector expect = pos[cur] + a.shift;
        if (!placed[a.to]) {
          placed[a.to] = 1;
          pos[a.to] = expect;
          queue.push_back(a.to);
        } else {
          const CellVector d = pos[a.to] - expect;
          w.wraps_u = w.wraps_u || d.u != 0;
          w.wraps_v = w.wraps_v || d.v != 0;
        }
      }
    }
  }
  return out;
}

}  // namespace aklt
