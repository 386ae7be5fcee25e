#include "aklt/export.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "aklt/errors.hpp"
#include "aklt/percolation.hpp"
#include "aklt/svg.hpp"

namespace aklt::io {

namespace {

long long parse_int(const std::string& s, const char* what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw IoError(std::string("bad integer in column ") + what + ": '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s, const char* what) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw IoError(std::string("bad number in column ") + what + ": '" + s + "'");
  return v;
}

}  // namespace

std::vector<std::string> sample_csv_header(bool with_snapshot) {
  std::vector<std::string> h{"sweep", "n_z", "n_domains", "n_interdomain_bonds", "log2_weight",
                             "max_domain", "spanning", "crossing"};
  if (with_snapshot) h.emplace_back("config");
  return h;
}

std::vector<std::string> sample_csv_row(const SampleRecord& r, bool with_snapshot) {
  std::vector<std::string> row{format_number(static_cast<long long>(r.sweep_index)),
                               format_number(r.statistics.n_z),
                               format_number(r.statistics.n_domains),
                               format_number(r.statistics.n_interdomain_bonds),
                               format_number(r.statistics.log2_weight),
                               format_number(r.max_domain_size),
                               format_bool(r.spanning_flag),
                               format_bool(r.crossing_flag)};
  if (with_snapshot) row.push_back(r.config_snapshot.value_or(""));
  return row;
}

std::string sample_csv(const std::vector<SampleRecord>& records, bool with_snapshot) {
  std::ostringstream out;
  CsvWriter w(out);
  w.row(sample_csv_header(with_snapshot));
  for (const auto& r : records) w.row(sample_csv_row(r, with_snapshot));
  return out.str();
}

std::vector<SampleRecord> records_from_csv(const CsvTable& table) {
  const std::size_t c_sweep = table.column("sweep"), c_nz = table.column("n_z"),
                    c_dom = table.column("n_domains"), c_int = table.column("n_interdomain_bonds"),
                    c_w = table.column("log2_weight"), c_max = table.column("max_domain"),
                    c_span = table.column("spanning"), c_cross = table.column("crossing");
  const bool snap = table.has_column("config");
  const std::size_t c_cfg = snap ? table.column("config") : 0;
  std::vector<SampleRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    SampleRecord r;
    r.sweep_index = parse_int(row[c_sweep], "sweep");
    r.statistics.n_z = static_cast<int>(parse_int(row[c_nz], "n_z"));
    r.statistics.n_domains = static_cast<int>(parse_int(row[c_dom], "n_domains"));
    r.statistics.n_interdomain_bonds = static_cast<int>(parse_int(row[c_int], "n_interdomain_bonds"));
    r.statistics.log2_weight = parse_double(row[c_w], "log2_weight");
    r.max_domain_size = static_cast<int>(parse_int(row[c_max], "max_domain"));
    r.spanning_flag = parse_int(row[c_span], "spanning") != 0;
    r.crossing_flag = parse_int(row[c_cross], "crossing") != 0;
    if (snap) r.config_snapshot = row[c_cfg];
    out.push_back(std::move(r));
  }
  return out;
}

json lattice_to_json(const HoneycombLattice& lattice) {
  json sites = json::array();
  for (int s = 0; s < lattice.site_count(); ++s) {
    const CellVector c = lattice.cell_of(s);
    const Point p = site_position(lattice, s, c);
    sites.push_back({{"id", s},
                     {"sublattice", lattice.sublattice(s) == Sublattice::A ? "A" : "B"},
                     {"cell", {c.u, c.v}},
                     {"position", {p.x, p.y}}});
  }
  json bonds = json::array();
  for (int b = 0; b < lattice.bond_count(); ++b) {
    const Bond& bond = lattice.bond(b);
    bonds.push_back({{"id", b}, {"a", bond.a_site}, {"b", bond.b_site}, {"displacement", {bond.shift.u, bond.shift.v}}});
  }
  const double r3 = std::sqrt(3.0);
  return {{"n_cells_u", lattice.n_cells_u()},
          {"n_cells_v", lattice.n_cells_v()},
          {"e_u", {r3 / 2, 1.5}},
          {"e_v", {-r3 / 2, 1.5}},
          {"b_offset", {0.0, 1.0}},
          {"sites", std::move(sites)},
          {"bonds", std::move(bonds)}};
}

json graph_to_json(const StochasticGraph& graph) {
  json j;
  if (const auto& lat = graph.lattice_ptr()) {
    j["lattice"] = {{"n_cells_u", lat->n_cells_u()}, {"n_cells_v", lat->n_cells_v()}, {"n_sites", lat->site_count()}};
  }
  json vertices = json::array();
  for (std::size_t i = 0; i < graph.vertices().size(); ++i) {
    const DomainVertex& v = graph.vertices()[i];
    vertices.push_back({{"id", i},
                        {"label", std::string(1, label_char(v.label))},
                        {"size", v.size()},
                        {"members", v.members},
                        {"wraps_u", v.wraps_u},
                        {"wraps_v", v.wraps_v}});
  }
  json edges = json::array();
  for (const DomainLink& e : graph.links()) {
    edges.push_back({{"pair", {e.u, e.v}},
                     {"multiplicity", e.multiplicity},
                     {"parity", e.is_parity_edge()},
                     {"shift", {e.shift.u, e.shift.v}}});
  }
  json components = json::array();
  const auto comps = parity_components(graph);
  const auto wraps = component_wrap_classes(graph);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    components.push_back({{"vertices", comps[c]}, {"wraps_u", wraps[c].wraps_u}, {"wraps_v", wraps[c].wraps_v}});
  }
  j["vertices"] = std::move(vertices);
  j["edges"] = std::move(edges);
  j["components"] = std::move(components);
  j["intra_domain_bonds"] = graph.intra_domain_bonds();
  return j;
}

json operator_to_json(const SpinOperator& op) {
  json rows = json::array();
  for (int r = 0; r < op.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < op.cols(); ++c) row.push_back({op(r, c).real(), op(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json operators_to_json(DeformationParam a) {
  json j;
  j["a_squared"] = a.a_squared();
  j["basis"] = {1.5, 0.5, -0.5, -1.5};
  if (a.a_squared() >= 1.0) {
    for (Axis b : kAxes) {
      const std::string name(1, axis_name(b));
      j["filters"][name] = operator_to_json(filter_deformed(b, a));
      j["povm"][name] = operator_to_json(povm_element(b, a));
    }
  } else {
    const auto ops = subunit_operators(a);
    j["subunits"] = json::array();
    for (const auto& op : ops) j["subunits"].push_back(operator_to_json(op));
  }
  return j;
}

json RunManifest::to_json() const {
  return {{"subcommand", subcommand},
          {"settings", settings},
          {"tool_version", tool_version},
          {"output_paths", output_paths}};
}

RunManifest RunManifest::from_json(const json& j) {
  try {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.settings = j.at("settings");
    m.tool_version = j.value("tool_version", std::string(kToolVersion));
    m.output_paths = j.value("output_paths", std::vector<std::string>{});
    return m;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_file(path, manifest.to_json().dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return RunManifest::from_json(json::parse(text));
  } catch (const json::parse_error& e) {
    throw IoError("cannot parse manifest '" + path.string() + "': " + e.what());
  }
}

}  // namespace aklt::io
