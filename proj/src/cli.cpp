#include "aklt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "aklt/analysis.hpp"
#include "aklt/csv.hpp"
#include "aklt/exact_oracle.hpp"
#include "aklt/export.hpp"
#include "aklt/percolation.hpp"
#include "aklt/sampler.hpp"
#include "aklt/spin_algebra.hpp"
#include "aklt/svg.hpp"

namespace aklt::io {

namespace fs = std::filesystem;

int exit_code_for(ErrorCategory category) noexcept {
  switch (category) {
    case ErrorCategory::usage: return 2;
    case ErrorCategory::domain: return 3;
    case ErrorCategory::argument: return 4;
    case ErrorCategory::size: return 5;
    case ErrorCategory::estimation: return 6;
    case ErrorCategory::io: return 7;
    case ErrorCategory::check_failed: return 8;
  }
  return 1;
}

namespace {

// ---- configuration files -------------------------------------------------

struct ConfigEntry {
  std::string key;
  std::vector<std::string> values;
};

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

void collect_json(const json& obj, const std::string& subcommand, std::vector<ConfigEntry>& out) {
  for (const auto& [key, value] : obj.items()) {
    if (value.is_null()) continue;
    if (value.is_object()) {
      if (key == subcommand) collect_json(value, subcommand, out);
      continue;
    }
    ConfigEntry e{key, {}};
    if (value.is_array()) {
      for (const auto& x : value) e.values.push_back(json_scalar(x));
      if (e.values.empty()) continue;
    } else {
      e.values.push_back(json_scalar(value));
    }
    out.push_back(std::move(e));
  }
}

std::vector<ConfigEntry> load_config(const fs::path& path, const std::string& subcommand) {
  const std::string text = read_file(path);
  std::vector<ConfigEntry> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw UsageError("cannot parse JSON config '" + path.string() + "': " + e.what());
    }
    if (j.contains("settings") && j["settings"].is_object()) {
      const std::string sub = j.value("subcommand", subcommand);
      if (sub != subcommand) {
        throw UsageError("manifest '" + path.string() + "' belongs to subcommand '" + sub + "'");
      }
      collect_json(j["settings"], subcommand, out);
    } else {
      collect_json(j, subcommand, out);
    }
    return out;
  }
  std::istringstream in(text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::ParseError& e) {
    throw UsageError("cannot parse TOML config '" + path.string() + "': " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    if (!item.parents.empty() && item.parents.front() != subcommand) continue;
    if (item.inputs.empty()) continue;
    out.push_back({item.name, item.inputs});
  }
  return out;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

// Splices config entries in front of the user's own arguments so that every
// flag on the command line wins.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  if (args.size() < 2) return args;
  const std::string subcommand = args[1];
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file name");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config_path.empty()) return args;
  std::vector<std::string> out{args[0], subcommand};
  for (const ConfigEntry& e : load_config(config_path, subcommand)) {
    if (e.key == "config" || given_on_command_line(rest, e.key)) continue;
    if (e.values.size() == 1) {
      out.push_back("--" + e.key + "=" + e.values.front());
    } else {
      out.push_back("--" + e.key);
      out.insert(out.end(), e.values.begin(), e.values.end());
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// ---- shared helpers -----------------------------------------------------

std::vector<LatticeDims> dims_from_flat(const std::vector<int>& flat) {
  if (flat.empty() || flat.size() % 2 != 0) throw UsageError("--cells takes pairs of unit-cell extents");
  std::vector<LatticeDims> dims;
  for (std::size_t i = 0; i < flat.size(); i += 2) {
    if (flat[i] < 1 || flat[i + 1] < 1) throw UsageError("--cells extents must be positive");
    dims.push_back({flat[i], flat[i + 1]});
  }
  return dims;
}

DeformationParam sampling_param(double a2) {
  if (!(a2 >= 1.0) || !std::isfinite(a2)) {
    throw UsageError(fmt::format("--a2 must be a finite value >= 1 for sampling, got {}", a2));
  }
  return DeformationParam(a2);
}

fs::path sibling(const fs::path& out, const std::string& suffix) { return fs::path(out.string() + suffix); }

void write_output(const std::string& out, const std::string& content, std::ostream& stdout_stream) {
  if (out == "-") {
    stdout_stream << content;
  } else {
    write_file(out, content);
  }
}

json a2_list_json(const std::vector<double>& v) {
  json j = json::array();
  for (double x : v) j.push_back(x);
  return j;
}

// ---- sample --------------------------------------------------------------

struct SampleArgs {
  double a2 = 3.0;
  std::vector<int> cells{20, 20};
  std::uint64_t seed = 0;
  int samples = 100;
  int burn_in = 1000;
  int thin = 10;
  bool snapshots = false;
  std::string out = "sample.csv";
  std::string graph_json;
  std::int64_t check_interval = 0;
};

void run_sample(const SampleArgs& args, std::ostream& out) {
  const DeformationParam a = sampling_param(args.a2);
  const auto dims = dims_from_flat(args.cells);
  if (dims.size() != 1) throw UsageError("sample takes exactly one --cells pair");
  SamplerSettings s;
  s.a_squared = a.a_squared();
  s.seed = args.seed;
  s.burn_in_sweeps = args.burn_in;
  s.thinning_sweeps = args.thin;
  s.n_samples = args.samples;
  s.keep_snapshots = args.snapshots || !args.graph_json.empty();
  s.consistency_check_interval = args.check_interval;
  try {
    s.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  auto lattice = std::make_shared<const HoneycombLattice>(dims[0].n_cells_u, dims[0].n_cells_v);
  const auto records = run(s, lattice);
  write_output(args.out, sample_csv(records, args.snapshots), out);

  RunManifest m;
  m.subcommand = "sample";
  m.settings = {{"a2", args.a2},           {"cells", args.cells},   {"seed", args.seed},
                {"samples", args.samples}, {"burn-in", args.burn_in}, {"thin", args.thin},
                {"snapshots", args.snapshots}, {"out", args.out},   {"check-interval", args.check_interval}};
  if (args.out != "-") m.output_paths.push_back(args.out);
  if (!args.graph_json.empty()) {
    m.settings["graph-json"] = args.graph_json;
    const auto cfg = FilterConfiguration::from_text(lattice, *records.back().config_snapshot);
    write_file(args.graph_json, graph_to_json(reduce(cfg)).dump(2) + "\n");
    m.output_paths.push_back(args.graph_json);
  }
  if (args.out != "-") write_manifest(manifest_path_for(args.out), m);
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::vector<double> a2;
  std::vector<int> cells;
  std::vector<std::string> inputs;
  std::uint64_t seed = 0;
  int samples = 100;
  int burn_in = 1000;
  int thin = 10;
  unsigned workers = 0;
  int bootstrap = 1000;
  std::string out_dir = "analysis";
};

std::string cells_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream s;
  CsvWriter w(s);
  w.row({"a2", "n_cells_u", "n_cells_v", "n_sites", "n_samples", "spanning_count", "spanning_p", "spanning_lower",
         "spanning_upper", "crossing_count", "crossing_p", "mean_max_domain", "std_err_max_domain",
         "tau_int_max_domain", "mean_n_z_fraction", "mean_n_domains", "spanning_z_fraction"});
  for (const CellSummary& c : cells) {
    const auto sp = wilson_interval(c.spanning_count, c.n_samples);
    const auto cr = wilson_interval(c.crossing_count, c.n_samples);
    w.row({format_number(c.a_squared), format_number(c.dims.n_cells_u), format_number(c.dims.n_cells_v),
           format_number(c.dims.site_count()), format_number(c.n_samples), format_number(c.spanning_count),
           format_number(sp.p), format_number(sp.lower), format_number(sp.upper), format_number(c.crossing_count),
           format_number(cr.p), format_number(c.mean_max_domain), format_number(c.std_err_max_domain),
           format_number(c.tau_int_max_domain), format_number(c.mean_n_z_fraction), format_number(c.mean_n_domains),
           c.spanning_z_fraction < 0 ? std::string() : format_number(c.spanning_z_fraction)});
  }
  return s.str();
}

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

void run_analyze(const AnalyzeArgs& args, std::ostream& out) {
  std::vector<CellSummary> cells;
  RunManifest m;
  m.subcommand = "analyze";
  m.settings = {{"seed", args.seed}, {"bootstrap", args.bootstrap}, {"out-dir", args.out_dir}};

  if (!args.inputs.empty()) {
    if (!args.a2.empty() || !args.cells.empty()) throw UsageError("--input excludes --a2 and --cells");
    m.settings["input"] = args.inputs;
    for (const std::string& path : args.inputs) {
      const RunManifest src = read_manifest(manifest_path_for(path));
      if (src.subcommand != "sample") throw IoError("'" + path + "' was not produced by sample");
      const double a2 = src.settings.at("a2").get<double>();
      const auto dims = dims_from_flat(src.settings.at("cells").get<std::vector<int>>());
      const auto records = records_from_csv(parse_csv(read_file(path)));
      cells.push_back(summarize_records(a2, dims.front(), records));
    }
  } else {
    if (args.a2.empty() || args.cells.empty()) throw UsageError("analyze needs --input files or --a2 and --cells");
    for (double a : args.a2) sampling_param(a);
    const auto dims = dims_from_flat(args.cells);
    if (args.samples < 1 || args.burn_in < 0 || args.thin < 1) {
      throw UsageError("--samples and --thin must be >= 1, --burn-in >= 0");
    }
    StudySettings st;
    st.seed = args.seed;
    st.n_samples = args.samples;
    st.burn_in_sweeps = args.burn_in;
    st.thinning_sweeps = args.thin;
    st.workers = args.workers;
    m.settings["a2"] = a2_list_json(args.a2);
    m.settings["cells"] = args.cells;
    m.settings["samples"] = args.samples;
    m.settings["burn-in"] = args.burn_in;
    m.settings["thin"] = args.thin;
    cells = run_cells(args.a2, dims, st);
  }

  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(dir / name, content);
    m.output_paths.push_back((dir / name).string());
  };

  emit("cells.csv", cells_csv(cells));

  std::vector<double> a_values;
  for (const CellSummary& c : cells) {
    if (std::find(a_values.begin(), a_values.end(), c.a_squared) == a_values.end()) a_values.push_back(c.a_squared);
  }
  std::sort(a_values.begin(), a_values.end());

  json summary;
  summary["scaling"] = json::array();
  std::ostringstream scaling_table;
  CsvWriter sw(scaling_table);
  sw.row({"a2", "n_sites", "mean_max_domain", "std_err", "tau_int"});
  PlotSpec fig4{"Mean maximum domain size", "N (spins)", "mean max domain size", true, {}, {}};
  for (double a : a_values) {
    const ScalingResult r = scaling_from_cells(a, cells);
    PlotSeries series{fmt::format("a2 = {}", a), {}, {}, {}};
    for (const ScalingPoint& p : r.points) {
      sw.row({format_number(a), format_number(p.n_sites), format_number(p.mean_max_domain), format_number(p.std_err),
              format_number(p.tau_int)});
      series.x.push_back(p.n_sites);
      series.y.push_back(p.mean_max_domain);
      series.y_err.push_back(p.std_err);
    }
    fig4.series.push_back(std::move(series));
    if (r.points.size() >= 2) {
      summary["scaling"].push_back({{"a2", a},
                                    {"log_fit", fit_json(r.log_fit)},
                                    {"linear_fit", fit_json(r.linear_fit)},
                                    {"log_preferred", r.log_fit.r_squared > r.linear_fit.r_squared}});
    }
  }
  emit("scaling.csv", scaling_table.str());
  emit("domain_scaling.svg", render_plot(fig4));

  const PercolationCurve curve = curve_from_cells(cells);
  std::ostringstream perc_table;
  CsvWriter pw(perc_table);
  pw.row({"n_sites", "a2", "spanning_p", "spanning_lower", "spanning_upper", "crossing_p", "crossing_lower",
          "crossing_upper", "trials"});
  PlotSpec fig5{"Spanning probability", "a^2", "P(spanning domain)", false, {}, {}};
  for (std::size_t i = 0; i < curve.dims.size(); ++i) {
    PlotSeries series{fmt::format("N = {}", curve.lattice_sizes[i]), {}, {}, {}};
    for (std::size_t j = 0; j < curve.a_squared_grid.size(); ++j) {
      const auto& sp = curve.spanning_probability[i][j];
      const auto& cr = curve.crossing_probability[i][j];
      if (sp.trials == 0) continue;
      pw.row({format_number(curve.lattice_sizes[i]), format_number(curve.a_squared_grid[j]), format_number(sp.p),
              format_number(sp.lower), format_number(sp.upper), format_number(cr.p), format_number(cr.lower),
              format_number(cr.upper), format_number(sp.trials)});
      series.x.push_back(curve.a_squared_grid[j]);
      series.y.push_back(sp.p);
      series.y_err.push_back(0.5 * (sp.upper - sp.lower));
    }
    fig5.series.push_back(std::move(series));
  }
  emit("percolation.csv", perc_table.str());

  if (curve.dims.size() >= 2 && curve.a_squared_grid.size() >= 2) {
    try {
      const auto est = estimate_critical_point(curve, args.bootstrap, derive_seed(args.seed, 0x5eed));
      summary["critical_point"] = {{"a2_c", est.a_squared_c},
                                   {"uncertainty", est.uncertainty},
                                   {"slope_small", est.slope_small},
                                   {"slope_large", est.slope_large},
                                   {"slope_ratio", est.slope_ratio},
                                   {"bootstrap_resamples", est.bootstrap_resamples},
                                   {"bootstrap_failures", est.bootstrap_failures},
                                   {"n_small", est.n_small},
                                   {"n_large", est.n_large}};
      fig5.vertical_markers.push_back(est.a_squared_c);
      out << fmt::format("critical point a2_c = {:.4f} +- {:.4f} (N = {} vs {})\n", est.a_squared_c,
                         est.uncertainty, est.n_small, est.n_large);
    } catch (const EstimationError& e) {
      summary["critical_point"] = nullptr;
      summary["critical_point_error"] = e.what();
    }
  }
  emit("spanning_probability.svg", render_plot(fig5));
  for (const auto& s : summary["scaling"]) {
    out << fmt::format("a2 = {}: r2(log) = {:.4f}, r2(linear) = {:.4f}\n", s["a2"].get<double>(),
                       s["log_fit"]["r_squared"].get<double>(), s["linear_fit"]["r_squared"].get<double>());
  }
  emit("summary.json", summary.dump(2) + "\n");
  write_manifest(dir / "manifest.json", m);
}

// ---- oracle-compare ------------------------------------------------------

struct OracleArgs {
  std::vector<int> cells{1, 1};
  std::vector<double> a2{3.0};
  std::int64_t mc_samples = 0;
  int thin = 1;
  int burn_in = 1000;
  std::uint64_t seed = 0;
  double rel_tol = 1e-9;
  double tv_tol = 0.01;
  std::string out;
};

void run_oracle(const OracleArgs& args, std::ostream& out) {
  const auto dims = dims_from_flat(args.cells);
  if (dims.size() != 1) throw UsageError("oracle-compare takes exactly one --cells pair");
  auto lattice = std::make_shared<const HoneycombLattice>(dims[0].n_cells_u, dims[0].n_cells_v);
  std::ostringstream table;
  CsvWriter w(table);
  std::vector<std::string> header{"a2", "index", "config", "p_enumeration", "p_peps"};
  if (args.mc_samples > 0) header.emplace_back("p_metropolis");
  w.row(header);
  std::vector<std::string> failures;
  for (std::size_t k = 0; k < args.a2.size(); ++k) {
    const double a2 = args.a2[k];
    const DeformationParam a = sampling_param(a2);
    const auto exact = oracle::enumerate_distribution(lattice, a);
    const auto peps = oracle::quantum_outcome_distribution(oracle::build_peps_state(lattice, a));
    const auto disc = oracle::compare_distributions(exact.probabilities, peps);
    std::vector<double> mc;
    double tv = 0;
    if (args.mc_samples > 0) {
      mc = oracle::empirical_distribution(lattice, a, args.mc_samples, args.thin, args.burn_in,
                                          derive_seed(args.seed, k));
      tv = oracle::total_variation(exact.probabilities, mc);
    }
    for (std::size_t i = 0; i < exact.probabilities.size(); ++i) {
      std::vector<std::string> row{format_number(a2), format_number(static_cast<long long>(i)),
                                   oracle::config_from_index(lattice, i).to_text(),
                                   format_number(exact.probabilities[i]), format_number(peps[i])};
      if (!mc.empty()) row.push_back(format_number(mc[i]));
      w.row(row);
    }
    out << fmt::format("a2 = {}: max relative discrepancy = {:.3e}, max on zero = {:.3e}", a2, disc.max_relative,
                       disc.max_on_zero);
    if (!mc.empty()) out << fmt::format(", total variation (n = {}) = {:.5f}", args.mc_samples, tv);
    out << '\n';
    if (!(disc.max_relative < args.rel_tol) || !(disc.max_on_zero < args.rel_tol)) {
      failures.push_back(fmt::format("PEPS vs enumeration at a2 = {}", a2));
    }
    if (!mc.empty() && !(tv < args.tv_tol)) failures.push_back(fmt::format("Metropolis TV at a2 = {}", a2));
  }
  if (!args.out.empty()) {
    write_output(args.out, table.str(), out);
    if (args.out != "-") {
      RunManifest m;
      m.subcommand = "oracle-compare";
      m.settings = {{"cells", args.cells}, {"a2", a2_list_json(args.a2)}, {"mc-samples", args.mc_samples},
                    {"thin", args.thin},   {"burn-in", args.burn_in},   {"seed", args.seed},
                    {"rel-tol", args.rel_tol}, {"tv-tol", args.tv_tol}, {"out", args.out}};
      m.output_paths.push_back(args.out);
      write_manifest(manifest_path_for(args.out), m);
    }
  }
  if (!failures.empty()) {
    std::string msg = "tolerance exceeded:";
    for (const auto& f : failures) msg += " [" + f + "]";
    throw CheckFailedError(msg);
  }
}

// ---- povm-check ---------------------------------------------------------

struct PovmArgs {
  std::vector<double> a2{1.0, 1.5, 2.0, 3.0, 5.0, 6.46, 10.0};
  double tol = 1e-12;
  std::string out;
  std::string operators_json;
};

double max_abs(const SpinOperator& m) { return m.cwiseAbs().maxCoeff(); }

void run_povm(const PovmArgs& args, std::ostream& out) {
  std::ostringstream table;
  CsvWriter w(table);
  w.row({"a2", "completeness_residual", "projector_residual", "basis_residual", "fz_max_abs"});
  json ops = json::array();
  std::vector<std::string> failures;
  for (double a2 : args.a2) {
    DeformationParam a = [&] {
      try {
        return DeformationParam(a2);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
    }();
    double residual = 0;
    std::string projector, basis, fz;
    if (a2 >= 1.0) {
      const std::array<SpinOperator, 3> f{filter_deformed(Axis::x, a), filter_deformed(Axis::y, a),
                                          filter_deformed(Axis::z, a)};
      residual = completeness_residual(f);
      if (a2 == 1.0) {
        double pr = 0;
        for (int b = 0; b < 2; ++b) {
          pr = std::max(pr, (f[b] * f[b] - f[b]).norm());
          pr = std::max(pr, (f[b] - f[b].adjoint()).norm());
        }
        pr = std::max(pr, (f[0] * f[1]).norm());
        const auto basis_states = projective_basis_a1();
        Eigen::Matrix4cd gram;
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) gram(i, j) = basis_states[i].dot(basis_states[j]);
        }
        auto proj = [&](int k) -> SpinOperator { return basis_states[k] * basis_states[k].adjoint(); };
        double br = (gram - Eigen::Matrix4cd::Identity()).norm();
        br = std::max(br, (f[0] - proj(0) - proj(1)).norm());
        br = std::max(br, (f[1] - proj(2) - proj(3)).norm());
        const double z = max_abs(f[2]);
        projector = format_number(pr);
        basis = format_number(br);
        fz = format_number(z);
        out << fmt::format("a2 = 1: projector residual = {:.3e}, basis residual = {:.3e}, max |F_z(1)| = {}\n", pr,
                           br, z);
        if (!(pr < args.tol) || !(br < args.tol) || z != 0.0) failures.push_back("projective structure at a2 = 1");
      }
    } else {
      residual = completeness_residual(subunit_operators(a));
    }
    out << fmt::format("a2 = {}: completeness residual = {:.3e}\n", a2, residual);
    if (!(residual < args.tol)) failures.push_back(fmt::format("completeness at a2 = {}", a2));
    w.row({format_number(a2), format_number(residual), projector, basis, fz});
    if (!args.operators_json.empty()) ops.push_back(operators_to_json(a));
  }
  RunManifest m;
  m.subcommand = "povm-check";
  m.settings = {{"a2", a2_list_json(args.a2)}, {"tol", args.tol}};
  if (!args.out.empty()) {
    m.settings["out"] = args.out;
    write_output(args.out, table.str(), out);
    if (args.out != "-") m.output_paths.push_back(args.out);
  }
  if (!args.operators_json.empty()) {
    m.settings["operators-json"] = args.operators_json;
    write_file(args.operators_json, ops.dump(2) + "\n");
    m.output_paths.push_back(args.operators_json);
  }
  if (!args.out.empty() && args.out != "-") write_manifest(manifest_path_for(args.out), m);
  if (!failures.empty()) {
    std::string msg = "tolerance exceeded:";
    for (const auto& f : failures) msg += " [" + f + "]";
    throw CheckFailedError(msg);
  }
}

// ---- render ----------------------------------------------------------------

struct RenderArgs {
  double a2 = 3.0;
  std::vector<int> cells{10, 10};
  std::uint64_t seed = 0;
  int burn_in = 1000;
  std::string labels;
  bool highlight_largest = false;
  bool show_sites = false;
  std::string out = "graph.svg";
};

void run_render(const RenderArgs& args, std::ostream& out) {
  const auto dims = dims_from_flat(args.cells);
  if (dims.size() != 1) throw UsageError("render takes exactly one --cells pair");
  auto lattice = std::make_shared<const HoneycombLattice>(dims[0].n_cells_u, dims[0].n_cells_v);
  RunManifest m;
  m.subcommand = "render";
  m.settings = {{"cells", args.cells},
                {"highlight-largest", args.highlight_largest},
                {"show-sites", args.show_sites},
                {"out", args.out}};
  std::optional<FilterConfiguration> config;
  if (!args.labels.empty()) {
    std::string text = read_file(args.labels);
    text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }), text.end());
    try {
      config = FilterConfiguration::from_text(lattice, text);
    } catch (const ArgumentError& e) {
      throw UsageError(std::string("--labels: ") + e.what());
    }
    m.settings["labels"] = args.labels;
  } else {
    if (args.burn_in < 0) throw UsageError("--burn-in must be >= 0");
    MetropolisChain chain(lattice, sampling_param(args.a2), args.seed);
    for (int s = 0; s < args.burn_in; ++s) chain.sweep();
    config = chain.state().configuration();
    m.settings["a2"] = args.a2;
    m.settings["seed"] = args.seed;
    m.settings["burn-in"] = args.burn_in;
  }
  const StochasticGraph graph = reduce(*config);
  GraphStyle style;
  style.highlight_largest = args.highlight_largest;
  style.show_sites = args.show_sites;
  write_output(args.out, render_graph(graph, style), out);

  if (args.out == "-") return;
  const auto centers = domain_centers(graph);
  const auto comps = parity_components(graph);
  std::vector<int> comp_of(graph.vertex_count());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
  }
  std::ostringstream table;
  CsvWriter w(table);
  w.row({"vertex", "label", "size", "anchor", "wraps_u", "wraps_v", "component", "degree", "x", "y"});
  std::vector<int> degree(graph.vertex_count(), 0);
  for (const DomainLink& e : graph.parity_edges()) {
    ++degree[e.u];
    ++degree[e.v];
  }
  for (int i = 0; i < graph.vertex_count(); ++i) {
    const DomainVertex& v = graph.vertices()[i];
    w.row({format_number(i), std::string(1, label_char(v.label)), format_number(v.size()), format_number(v.anchor()),
           format_bool(v.wraps_u), format_bool(v.wraps_v), format_number(comp_of[i]), format_number(degree[i]),
           format_number(centers[i].x), format_number(centers[i].y)});
  }
  const fs::path csv_path = sibling(args.out, ".csv");
  const fs::path json_path = sibling(args.out, ".json");
  const fs::path lattice_path = sibling(args.out, ".lattice.json");
  write_file(csv_path, table.str());
  write_file(json_path, graph_to_json(graph).dump(2) + "\n");
  write_file(lattice_path, lattice_to_json(config->lattice()).dump(2) + "\n");
  m.output_paths = {args.out, csv_path.string(), json_path.string(), lattice_path.string()};
  write_manifest(manifest_path_for(args.out), m);
  out << fmt::format("{} domains, {} parity edges, largest component {} domains\n", graph.vertex_count(),
                     graph.parity_edges().size(), comps.empty() ? 0 : comps.front().size());
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto report = [&](ErrorCategory c, const std::string& msg) {
    err << "aklt: error[" << category_name(c) << "]: " << msg << '\n';
    return exit_code_for(c);
  };
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = expand_config(std::move(args));
  } catch (const Error& e) {
    return report(e.category(), e.what());
  }

  CLI::App app{"Filter-outcome sampling and universality diagnostics for deformed AKLT states"};
  app.name("aklt");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  const std::string config_help = "TOML or JSON file supplying defaults for any option (a run manifest works)";

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Run one Metropolis chain and write per-sample statistics as CSV");
  sample->add_option("--config", config_help);
  sample->add_option("--a2", sa.a2, "Deformation a^2 (>= 1)")->capture_default_str();
  sample->add_option("--cells", sa.cells, "Unit cells along e_u and e_v")->expected(2)->capture_default_str();
  sample->add_option("--seed", sa.seed)->capture_default_str();
  sample->add_option("--samples", sa.samples)->capture_default_str();
  sample->add_option("--burn-in", sa.burn_in, "Sweeps before the first sample")->capture_default_str();
  sample->add_option("--thin", sa.thin, "Sweeps between samples")->capture_default_str();
  sample->add_flag("--snapshots", sa.snapshots, "Add a config column with the label string");
  sample->add_option("--out", sa.out, "CSV path, '-' for stdout")->capture_default_str();
  sample->add_option("--graph-json", sa.graph_json, "Also export the reduced graph of the last sample");
  sample->add_option("--check-interval", sa.check_interval, "Verify tracked domains every this many proposals");

  AnalyzeArgs aa;
  auto* analyze = app.add_subcommand("analyze", "Domain-size scaling, percolation curves and the critical point");
  analyze->add_option("--config", config_help);
  analyze->add_option("--a2", aa.a2, "Grid of a^2 values");
  analyze->add_option("--cells", aa.cells, "One or more unit-cell pairs")->expected(2, 64);
  analyze->add_option("--input", aa.inputs, "CSV files written by sample (with manifests)");
  analyze->add_option("--seed", aa.seed)->capture_default_str();
  analyze->add_option("--samples", aa.samples)->capture_default_str();
  analyze->add_option("--burn-in", aa.burn_in)->capture_default_str();
  analyze->add_option("--thin", aa.thin)->capture_default_str();
  analyze->add_option("--workers", aa.workers, "Worker threads (0: AKLT_WORKERS or hardware)");
  analyze->add_option("--bootstrap", aa.bootstrap, "Bootstrap resamples for the critical point")
      ->capture_default_str();
  analyze->add_option("--out-dir", aa.out_dir)->capture_default_str();

  OracleArgs oa;
  auto* oracle_cmd = app.add_subcommand("oracle-compare", "Check the sampler's distribution against exact oracles");
  oracle_cmd->add_option("--config", config_help);
  oracle_cmd->add_option("--cells", oa.cells)->expected(2)->capture_default_str();
  oracle_cmd->add_option("--a2", oa.a2)->capture_default_str();
  oracle_cmd->add_option("--mc-samples", oa.mc_samples, "Metropolis samples for the TV check (0 skips it)");
  oracle_cmd->add_option("--thin", oa.thin)->capture_default_str();
  oracle_cmd->add_option("--burn-in", oa.burn_in)->capture_default_str();
  oracle_cmd->add_option("--seed", oa.seed)->capture_default_str();
  oracle_cmd->add_option("--rel-tol", oa.rel_tol)->capture_default_str();
  oracle_cmd->add_option("--tv-tol", oa.tv_tol)->capture_default_str();
  oracle_cmd->add_option("--out", oa.out, "Per-outcome CSV");

  PovmArgs pa;
  auto* povm = app.add_subcommand("povm-check", "Completeness and projector residuals of the filter operators");
  povm->add_option("--config", config_help);
  povm->add_option("--a2", pa.a2)->capture_default_str();
  povm->add_option("--tol", pa.tol)->capture_default_str();
  povm->add_option("--out", pa.out, "Residual CSV");
  povm->add_option("--operators-json", pa.operators_json, "Export the operators as JSON");

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "Draw the stochastic graph of one sample as SVG");
  render->add_option("--config", config_help);
  render->add_option("--a2", ra.a2)->capture_default_str();
  render->add_option("--cells", ra.cells)->expected(2)->capture_default_str();
  render->add_option("--seed", ra.seed)->capture_default_str();
  render->add_option("--burn-in", ra.burn_in)->capture_default_str();
  render->add_option("--labels", ra.labels, "File holding one X/Y/Z character per site instead of sampling");
  render->add_flag("--highlight-largest", ra.highlight_largest);
  render->add_flag("--show-sites", ra.show_sites);
  render->add_option("--out", ra.out)->capture_default_str();

  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report(ErrorCategory::usage, e.what());
  }

  try {
    if (sample->parsed()) run_sample(sa, out);
    else if (analyze->parsed()) run_analyze(aa, out);
    else if (oracle_cmd->parsed()) run_oracle(oa, out);
    else if (povm->parsed()) run_povm(pa, out);
    else if (render->parsed()) run_render(ra, out);
  } catch (const Error& e) {
    return report(e.category(), e.what());
  } catch (const json::exception& e) {
    return report(ErrorCategory::io, e.what());
  } catch (const std::exception& e) {
    err << "aklt: error[internal]: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace aklt::io
