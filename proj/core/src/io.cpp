#include "himap/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "himap/error.hpp"
#include "json.hpp"

namespace himap {
namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view text, std::string_view context) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc() || res.ptr != last || text.empty()) {
    throw DataError("non-numeric " + std::string(context) + ": '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) throw DataError("non-finite " + std::string(context));
  return value;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw DataError("missing column '" + std::string(name) + "'");
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw DataError("CSV input is empty");
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_csv(in);
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t j = 0; j < cloud.dim(); ++j) out << (j ? ",x" : "x") << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = 0; j < cloud.dim(); ++j) out << (j ? "," : "") << format_real(cloud(i, j));
    out << '\n';
  }
}

void write_cloud_csv(const std::filesystem::path& path, const PointCloud& cloud) {
  auto out = open_out(path);
  write_cloud_csv(out, cloud);
}

PointCloud read_cloud_csv(std::istream& in) {
  const CsvTable table = parse_csv(in);
  const std::size_t d = table.header.size();
  std::vector<double> coords;
  coords.reserve(table.rows.size() * d);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    for (std::size_t j = 0; j < d; ++j) {
      coords.push_back(parse_real(table.rows[r][j], "cell in row " + std::to_string(r + 1)));
    }
  }
  if (coords.empty()) throw DataError("point cloud CSV has no rows");
  return PointCloud(d, std::move(coords));
}

PointCloud read_cloud_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_cloud_csv(in);
}

void write_grid_csv(std::ostream& out, const QuantileGrid& grid) {
  out << 't';
  for (std::size_t j = 0; j < grid.dim; ++j) out << ",q" << j + 1;
  out << '\n';
  for (std::size_t g = 0; g < grid.resolution; ++g) {
    out << format_real(grid.level(g));
    for (std::size_t j = 0; j < grid.dim; ++j) out << ',' << format_real(grid.values[g * grid.dim + j]);
    out << '\n';
  }
}

void write_grid_csv(const std::filesystem::path& path, const QuantileGrid& grid) {
  auto out = open_out(path);
  write_grid_csv(out, grid);
}

QuantileGrid read_grid_csv(std::istream& in) {
  const CsvTable table = parse_csv(in);
  if (table.header.size() < 2 || table.header[0] != "t") throw DataError("grid CSV needs a header t,q1,...");
  QuantileGrid grid;
  grid.dim = table.header.size() - 1;
  grid.resolution = table.rows.size();
  if (grid.resolution == 0) throw DataError("grid CSV has no rows");
  grid.values.reserve(grid.resolution * grid.dim);
  for (std::size_t g = 0; g < table.rows.size(); ++g) {
    const double t = parse_real(table.rows[g][0], "grid level");
    if (std::abs(t - grid.level(g)) > 1e-12) {
      throw DataError("row " + std::to_string(g + 1) + " is not at level (g+1/2)/G");
    }
    for (std::size_t j = 1; j <= grid.dim; ++j) grid.values.push_back(parse_real(table.rows[g][j], "grid value"));
  }
  return grid;
}

QuantileGrid read_grid_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_grid_csv(in);
}

std::string read_text_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  auto out = open_out(path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError("failed writing " + path.string());
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  json j;
  j["format"] = "himap-dataset";
  j["version"] = 1;
  j["kind"] = manifest.kind;
  j["seed"] = manifest.seed;
  j["params"] = json::parse(manifest.params_json);
  j["members"] = json::array();
  for (const auto& m : manifest.members) {
    json e{{"file", m.file}, {"key", m.key}};
    if (!m.x.empty()) e["x"] = m.x;
    j["members"].push_back(std::move(e));
  }
  if (!manifest.heldout_x.empty()) j["heldout_x"] = manifest.heldout_x;
  return j.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text) {
  DatasetManifest m;
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "himap-dataset") throw DataError("not a himap dataset manifest");
    m.kind = j.at("kind").get<std::string>();
    m.seed = j.value("seed", std::uint64_t{0});
    m.params_json = j.value("params", json::object()).dump();
    for (const auto& e : j.at("members")) {
      ManifestMember member;
      member.file = e.at("file").get<std::string>();
      member.key = e.value("key", "");
      if (e.contains("x")) {
        member.x = e["x"].is_array() ? e["x"].get<std::vector<double>>()
                                     : std::vector<double>{e["x"].get<double>()};
      }
      m.members.push_back(std::move(member));
    }
    if (j.contains("heldout_x")) m.heldout_x = j["heldout_x"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

}  // namespace himap
