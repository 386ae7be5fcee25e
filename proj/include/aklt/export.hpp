#pragma once

// Serialized forms of samples, graphs, operators and run manifests.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "aklt/csv.hpp"
#include "aklt/domain_reduction.hpp"
#include "aklt/sampler.hpp"
#include "aklt/spin_algebra.hpp"

namespace aklt::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";

/// sweep,n_z,n_domains,n_interdomain_bonds,log2_weight,max_domain,spanning,crossing[,config]
std::vector<std::string> sample_csv_header(bool with_snapshot);
std::vector<std::string> sample_csv_row(const SampleRecord& record, bool with_snapshot);
std::string sample_csv(const std::vector<SampleRecord>& records, bool with_snapshot);
/// Inverse of sample_csv; spanning_is_z is not stored and comes back false.
std::vector<SampleRecord> records_from_csv(const CsvTable& table);

/// Sites (sublattice, cell, drawing position), bonds (endpoints, cell
/// displacement B - A) and the primitive vectors of the embedding.
json lattice_to_json(const HoneycombLattice& lattice);

/// Vertices (id, label, size, members, wrap flags), every inter-domain pair
/// (multiplicity, parity) and the winding class of each parity component.
json graph_to_json(const StochasticGraph& graph);

/// Operators as rows of [re, im] pairs.
json operator_to_json(const SpinOperator& op);
/// F_b(a) and E_b(a) for a^2 >= 1, the rescaled subunits for a^2 < 1.
json operators_to_json(DeformationParam a);

struct RunManifest {
  std::string subcommand;
  json settings = json::object();
  std::string tool_version = kToolVersion;
  std::vector<std::string> output_paths;

  json to_json() const;
  static RunManifest from_json(const json& j);
};

std::filesystem::path manifest_path_for(const std::filesystem::path& output);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace aklt::io
