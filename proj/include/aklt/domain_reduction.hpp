#pragma once

// Contraction of a filter outcome into its encoded stochastic graph state:
// each domain becomes one vertex, and two vertices share a graph edge when
// an odd number of lattice bonds joins their domains.

#include <memory>
#include <vector>

#include "aklt/config_model.hpp"
#include "aklt/lattice.hpp"

namespace aklt {

struct DomainVertex {
  Label label;
  std::vector<int> members;  // ascending; members.front() is the anchor site
  bool wraps_u = false;      // domain winds around the torus along e_u
  bool wraps_v = false;

  int size() const { return static_cast<int>(members.size()); }
  int anchor() const { return members.front(); }
  bool wraps() const { return wraps_u || wraps_v; }
};

/// All lattice bonds between one pair of domains.
struct DomainLink {
  int u;                 // u < v
  int v;
  int multiplicity;
  int first_bond;        // lowest bond index joining the pair
  CellVector shift;      // anchor(v) - anchor(u), unwrapped through first_bond

  bool is_parity_edge() const { return multiplicity % 2 == 1; }
};

class StochasticGraph {
 public:
  StochasticGraph() = default;

  const std::vector<DomainVertex>& vertices() const noexcept { return vertices_; }
  /// Every inter-domain pair with its bond multiplicity, sorted by (u, v).
  const std::vector<DomainLink>& links() const noexcept { return links_; }
  /// Graph-state edges: the links with odd multiplicity.
  const std::vector<DomainLink>& parity_edges() const noexcept { return parity_edges_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int vertex_of(int site) const { return site_vertex_[site]; }
  /// Unwrapped cell position of a site relative to its domain anchor.
  CellVector offset_of(int site) const { return site_offset_[site]; }
  int intra_domain_bonds() const noexcept { return intra_bonds_; }
  const std::shared_ptr<const HoneycombLattice>& lattice_ptr() const noexcept { return lattice_; }

  /// Fixture support: adds a parity edge (u != v) with the given anchor-to-anchor shift.
  void add_parity_edge(int u, int v, CellVector shift);

  friend StochasticGraph reduce(const FilterConfiguration& config);

 private:
  std::shared_ptr<const HoneycombLattice> lattice_;
  std::vector<DomainVertex> vertices_;
  std::vector<DomainLink> links_;
  std::vector<DomainLink> parity_edges_;
  std::vector<int> site_vertex_;
  std::vector<CellVector> site_offset_;
  int intra_bonds_ = 0;
};

/// Vertices are numbered in order of their lowest member site.
StochasticGraph reduce(const FilterConfiguration& config);

/// Vertex sizes, descending.
std::vector<int> domain_sizes(const StochasticGraph& graph);

/// Connected components of the parity-edge graph, each a sorted vertex list,
/// ordered by size descending then by lowest vertex.
std::vector<std::vector<int>> parity_components(const StochasticGraph& graph);

}  // namespace aklt
