#pragma once

// Torus-winding diagnostics on a reduced graph. A periodic lattice has no
// boundary, so "spanning" and "crossing" are both read as nontrivial winding.

#include <vector>

#include "aklt/domain_reduction.hpp"

namespace aklt {

/// True iff a single domain winds around the torus in either direction.
bool spanning_domain(const StochasticGraph& graph);

/// True iff some connected component of the parity-edge graph contains a
/// cycle whose accumulated displacement (anchor-to-anchor shifts along the
/// edges) is nonzero. A domain's own winding does not count.
bool graph_crossing(const StochasticGraph& graph);

int max_domain_size(const StochasticGraph& graph);

struct WrapClass {
  bool wraps_u = false;
  bool wraps_v = false;
  bool operator==(const WrapClass&) const = default;
};

/// Winding of each parity-edge component, aligned with parity_components().
/// Unlike graph_crossing, a member domain's own winding counts.
std::vector<WrapClass> component_wrap_classes(const StochasticGraph& graph);

}  // namespace aklt
