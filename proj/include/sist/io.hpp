#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sist/field.hpp"
#include "sist/geometry.hpp"

namespace sist {

/// Shortest form that reads back bit-identically (17 significant digits).
std::string format_double(double v);

/// Comma-separated table with one header line.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path, std::vector<std::string>* header = nullptr);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Writes `stem`.bin (little-endian float64, row-major with y outer) and
/// `stem`.json (grid dimensions, spacing, bounding box, ordering, extras).
void write_field(const std::filesystem::path& stem, const GridField& field, const nlohmann::json& extra = {});
GridField read_field(const std::filesystem::path& stem);

/// Shape parameter names accepted for a family, in declaration order.
std::vector<std::string> shape_keys(Family family);
/// {"family": ..., parameters...}; unknown families or non-numeric values throw ConfigError.
ShapeConfig shape_from_json(const nlohmann::json& j);
nlohmann::json shape_to_json(const ShapeConfig& shape);

struct RunManifest {
  std::string tool_version;
  nlohmann::json config;                            ///< fully resolved
  std::map<std::string, std::string> input_hashes;  ///< input name -> sha256
  std::vector<std::string> outputs;                 ///< file names relative to the output directory
  double wall_time_s = 0.0;
};

/// Writes manifest.json into `dir`, checksumming every listed output.
void write_manifest(const std::filesystem::path& dir, const RunManifest& manifest);

/// The requested directory, unless SIST_OUT is set; created if missing.
std::filesystem::path resolve_output_dir(const std::string& requested);

}  // namespace sist
