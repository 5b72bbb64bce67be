#include "report.hpp"

#include "CLI11.hpp"
#include "himap/error.hpp"
#include "himap/io.hpp"

namespace himap::cli {

json versions() {
  return json{{"himap", kVersion},
              {"compiler", __VERSION__},
              {"cplusplus", __cplusplus},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"cli11", CLI11_VERSION}};
}

json make_report(const std::string& command, const json& config, std::uint64_t seed) {
  return json{{"command", command},
              {"config", config},
              {"seed", seed},
              {"versions", versions()},
              {"timings", json::object()}};
}

void write_json(const std::filesystem::path& path, const json& value) {
  write_text_file(path, value.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace himap::cli
