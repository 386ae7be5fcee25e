#pragma once

// Static SVG figures: stochastic graphs drawn over the honeycomb embedding,
// and simple line plots for the scaling and percolation studies.

#include <string>
#include <vector>

#include "aklt/domain_reduction.hpp"

namespace aklt::io {

struct Point {
  double x = 0;
  double y = 0;
};

/// Unit bond length; e_u = (sqrt3/2, 3/2), e_v = (-sqrt3/2, 3/2), B(r) = A(r) + (0, 1).
Point site_position(const HoneycombLattice& lattice, int site, CellVector unwrapped_cell);

/// Domain centroids in the drawing plane, folded into the fundamental cell.
/// Winding domains use a circular mean along each torus axis.
std::vector<Point> domain_centers(const StochasticGraph& graph);

/// Z cyan, X magenta, Y yellow.
const char* label_color(Label l) noexcept;

struct GraphStyle {
  double scale = 24;              // pixels per bond length
  bool highlight_largest = false; // dim everything outside the largest parity component
  bool show_sites = false;        // underlay the lattice sites coloured by label
};

/// One <circle class="node"> per domain and one <line class="edge"> per parity edge.
std::string render_graph(const StochasticGraph& graph, const GraphStyle& style = {});

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_err;  // empty or one per point
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  std::vector<PlotSeries> series;
  std::vector<double> vertical_markers;
};

std::string render_plot(const PlotSpec& spec);

}  // namespace aklt::io
