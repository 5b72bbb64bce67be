#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "himap/point_cloud.hpp"
#include "himap/quantile_map.hpp"

namespace himap {

/// Shortest decimal form that parses back to the same double, at most 17
/// significant digits.
std::string format_real(double value);

/// Strict decimal parse of a whole field. Throws DataError naming `context`.
double parse_real(std::string_view text, std::string_view context = "value");

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or throws DataError.
  std::size_t column(std::string_view name) const;
};

/// Comma-separated, first line is the header; double quotes may wrap fields.
/// Throws DataError on ragged rows.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

/// Header `x1,...,xd`, one point per line.
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);
void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_cloud_csv(std::istream& in);
PointCloud read_cloud_csv(const std::filesystem::path& path);

/// Header `t,q1,...,qd`, one grid level per line.
void write_grid_csv(std::ostream& out, const QuantileGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const QuantileGrid& grid);
QuantileGrid read_grid_csv(std::istream& in);
QuantileGrid read_grid_csv(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// One member distribution of a generated or loaded dataset.
struct ManifestMember {
  std::string file;        // relative to the manifest's directory
  std::string key;
  std::vector<double> x;   // predictor row; empty when not a regression set
};

struct DatasetManifest {
  std::string kind;
  std::uint64_t seed = 0;
  std::string params_json = "{}";
  std::vector<ManifestMember> members;
  std::vector<double> heldout_x;
};

std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const std::string& text);

}  // namespace himap
