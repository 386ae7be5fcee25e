#include "aklt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "aklt/percolation.hpp"

namespace aklt::io {

namespace {

constexpr double kHalfRoot3 = 0.8660254037844386;

Point cell_xy(CellVector c) { return {kHalfRoot3 * (c.u - c.v), 1.5 * (c.u + c.v)}; }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Fixed precision keeps documents byte-stable.
std::string num(double x) { return fmt::format("{:.2f}", x); }

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(Point p) {
    x0 = std::min(x0, p.x);
    y0 = std::min(y0, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  bool empty() const { return x0 > x1; }
};

}  // namespace

Point site_position(const HoneycombLattice& lattice, int site, CellVector unwrapped_cell) {
  Point p = cell_xy(unwrapped_cell);
  if (lattice.sublattice(site) == Sublattice::B) p.y += 1.0;
  return p;
}

std::vector<Point> domain_centers(const StochasticGraph& graph) {
  std::vector<Point> out(graph.vertices().size());
  const auto& lat = graph.lattice_ptr();
  if (!lat) {
    const double n = static_cast<double>(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double t = 2 * M_PI * static_cast<double>(i) / n;
      out[i] = {n * std::cos(t), n * std::sin(t)};
    }
    return out;
  }
  // Centres live in fractional cell coordinates; B sites sit at (1/3, 1/3).
  const double nu = lat->n_cells_u(), nv = lat->n_cells_v();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const DomainVertex& v = graph.vertices()[i];
    double cu = 0, cv = 0;
    if (!v.wraps()) {
      const CellVector base = lat->cell_of(v.anchor());
      for (int s : v.members) {
        const CellVector c = base + graph.offset_of(s);
        const double b = lat->sublattice(s) == Sublattice::B ? 1.0 / 3.0 : 0.0;
        cu += c.u + b;
        cv += c.v + b;
      }
      cu /= v.size();
      cv /= v.size();
    } else {
      // A winding domain has no unwrapped centroid; take the circular mean on each axis.
      double su = 0, ku = 0, sv = 0, kv = 0;
      for (int s : v.members) {
        const CellVector c = lat->cell_of(s);
        const double b = lat->sublattice(s) == Sublattice::B ? 1.0 / 3.0 : 0.0;
        su += std::sin(2 * M_PI * (c.u + b) / nu);
        ku += std::cos(2 * M_PI * (c.u + b) / nu);
        sv += std::sin(2 * M_PI * (c.v + b) / nv);
        kv += std::cos(2 * M_PI * (c.v + b) / nv);
      }
      cu = std::atan2(su, ku) / (2 * M_PI) * nu;
      cv = std::atan2(sv, kv) / (2 * M_PI) * nv;
    }
    cu -= std::floor(cu / nu) * nu;
    cv -= std::floor(cv / nv) * nv;
    out[i] = {kHalfRoot3 * (cu - cv), 1.5 * (cu + cv)};
  }
  return out;
}

const char* label_color(Label l) noexcept {
  switch (l) {
    case Label::Z: return "#00ffff";
    case Label::X: return "#ff00ff";
    case Label::Y: return "#ffff00";
  }
  return "#000000";
}

std::string render_graph(const StochasticGraph& graph, const GraphStyle& style) {
  const auto centers = domain_centers(graph);
  const auto& lat = graph.lattice_ptr();
  const auto& verts = graph.vertices();

  std::vector<char> in_largest(verts.size(), 1);
  if (style.highlight_largest && !verts.empty()) {
    std::fill(in_largest.begin(), in_largest.end(), 0);
    const auto comps = parity_components(graph);
    for (int v : comps.front()) in_largest[v] = 1;
  }

  struct Segment {
    Point from, to;
    bool lit;
  };
  std::vector<Segment> edges;
  for (const DomainLink& e : graph.parity_edges()) {
    const Point from = centers[e.u];
    Point to = centers[e.v];
    if (lat) {
      // Nearest periodic image of the far endpoint.
      double best = std::numeric_limits<double>::infinity();
      const Point base = to;
      for (int du = -1; du <= 1; ++du) {
        for (int dv = -1; dv <= 1; ++dv) {
          const Point d = cell_xy({du * lat->n_cells_u(), dv * lat->n_cells_v()});
          const Point cand{base.x + d.x, base.y + d.y};
          const double dist = std::hypot(cand.x - from.x, cand.y - from.y);
          if (dist < best - 1e-9) {
            best = dist;
            to = cand;
          }
        }
      }
    }
    edges.push_back({from, to, in_largest[e.u] && in_largest[e.v]});
  }

  Box box;
  for (Point p : centers) box.add(p);
  for (const Segment& s : edges) {
    box.add(s.from);
    box.add(s.to);
  }
  if (style.show_sites && lat) {
    for (int s = 0; s < lat->site_count(); ++s) box.add(site_position(*lat, s, lat->cell_of(s)));
  }
  if (box.empty()) box.add({0, 0});
  const double margin = 2.0;
  const double k = style.scale;
  const double w = (box.x1 - box.x0 + 2 * margin) * k;
  const double h = (box.y1 - box.y0 + 2 * margin) * k;
  auto tx = [&](Point p) { return Point{(p.x - box.x0 + margin) * k, (p.y - box.y0 + margin) * k}; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
      << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(w) << "\" height=\"" << num(h) << "\" fill=\"#ffffff\"/>\n";

  if (style.show_sites && lat) {
    const auto& keep = in_largest;
    out << "<g id=\"sites\">\n";
    for (int s = 0; s < lat->site_count(); ++s) {
      const Point p = tx(site_position(*lat, s, lat->cell_of(s)));
      const DomainVertex& v = verts[graph.vertex_of(s)];
      out << "<circle class=\"site\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(0.18 * k)
          << "\" fill=\"" << label_color(v.label) << "\" opacity=\"" << (keep[graph.vertex_of(s)] ? "0.5" : "0.15")
          << "\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g id=\"edges\" stroke=\"#333333\">\n";
  for (const Segment& s : edges) {
    const Point a = tx(s.from), b = tx(s.to);
    out << "<line class=\"edge\" x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\"" << num(b.x)
        << "\" y2=\"" << num(b.y) << "\" stroke-width=\"" << num(s.lit ? 0.08 * k : 0.04 * k) << "\" opacity=\""
        << (s.lit ? "1" : "0.2") << "\"/>\n";
  }
  out << "</g>\n<g id=\"nodes\" stroke=\"#222222\">\n";
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const Point p = tx(centers[i]);
    const double r = (0.25 + 0.12 * std::sqrt(static_cast<double>(verts[i].size()))) * k;
    out << "<circle class=\"node\" data-id=\"" << i << "\" data-label=\"" << label_char(verts[i].label)
        << "\" data-size=\"" << verts[i].size() << "\" cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\""
        << num(r) << "\" fill=\"" << label_color(verts[i].label) << "\" stroke-width=\""
        << num((style.highlight_largest && in_largest[i] ? 0.08 : 0.03) * k) << "\" opacity=\""
        << (in_largest[i] ? "1" : "0.2") << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

namespace {

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-9 * step ? 0.0 : t);
  }
  return ticks;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

}  // namespace

std::string render_plot(const PlotSpec& spec) {
  const double width = 640, height = 420;
  const double left = 70, right = 150, top = 40, bottom = 55;
  auto fx = [&](double x) { return spec.log_x ? std::log10(x) : x; };

  Box box;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double e = i < s.y_err.size() ? s.y_err[i] : 0.0;
      box.add({fx(s.x[i]), s.y[i] - e});
      box.add({fx(s.x[i]), s.y[i] + e});
    }
  }
  for (double m : spec.vertical_markers) box.add({fx(m), box.empty() ? 0.0 : box.y0});
  if (box.empty()) box = Box{0, 0, 1, 1};
  if (box.x1 == box.x0) {
    box.x0 -= 0.5;
    box.x1 += 0.5;
  }
  if (box.y1 == box.y0) {
    box.y0 -= 0.5;
    box.y1 += 0.5;
  }
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (fx(x) - box.x0) / (box.x1 - box.x0) * pw; };
  auto py = [&](double y) { return top + (box.y1 - y) / (box.y1 - box.y0) * ph; };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"#ffffff\"/>\n"
      << "<text x=\"" << num(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << xml_escape(spec.title) << "</text>\n"
      << "<rect class=\"frame\" x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw)
      << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#000000\"/>\n";

  for (double t : nice_ticks(box.x0, box.x1, 6)) {
    const double x = left + (t - box.x0) / (box.x1 - box.x0) * pw;
    const std::string label = spec.log_x ? fmt::format("{:g}", std::pow(10.0, t)) : fmt::format("{:g}", t);
    out << "<line class=\"tick\" x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\"" << num(x)
        << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"#000000\"/>\n"
        << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18) << "\" text-anchor=\"middle\">" << label
        << "</text>\n";
  }
  for (double t : nice_ticks(box.y0, box.y1, 6)) {
    const double y = py(t);
    out << "<line class=\"tick\" x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(y) << "\" stroke=\"#000000\"/>\n"
        << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
        << fmt::format("{:g}", t) << "</text>\n";
  }
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(height - 12) << "\" text-anchor=\"middle\">"
      << xml_escape(spec.x_label) << "</text>\n"
      << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << xml_escape(spec.y_label) << "</text>\n";

  for (double m : spec.vertical_markers) {
    out << "<line class=\"marker\" x1=\"" << num(px(m)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(m))
        << "\" y2=\"" << num(top + ph) << "\" stroke=\"#777777\" stroke-dasharray=\"4 3\"/>\n";
  }

  for (std::size_t k = 0; k < spec.series.size(); ++k) {
    const PlotSeries& s = spec.series[k];
    const char* color = kPalette[k % std::size(kPalette)];
    out << "<g class=\"series\" data-name=\"" << xml_escape(s.name) << "\" stroke=\"" << color << "\" fill=\""
        << color << "\">\n<polyline fill=\"none\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << ' ';
      out << num(px(s.x[i])) << ',' << num(py(s.y[i]));
    }
    out << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i < s.y_err.size() && s.y_err[i] > 0) {
        out << "<line class=\"errorbar\" x1=\"" << num(px(s.x[i])) << "\" y1=\"" << num(py(s.y[i] - s.y_err[i]))
            << "\" x2=\"" << num(px(s.x[i])) << "\" y2=\"" << num(py(s.y[i] + s.y_err[i])) << "\"/>\n";
      }
      out << "<circle class=\"point\" cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
          << "\" r=\"3\"/>\n";
    }
    const double ly = top + 14 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << num(left + pw + 12) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 32)
        << "\" y2=\"" << num(ly) << "\"/>\n<text x=\"" << num(left + pw + 38) << "\" y=\"" << num(ly + 4)
        << "\" stroke=\"none\" fill=\"#000000\">" << xml_escape(s.name) << "</text>\n</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace aklt::io
