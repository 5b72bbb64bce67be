#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include "json.hpp"

namespace himap::cli {

using nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Monotonic wall clock around one phase.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Runs `body` and records its wall clock under timings[name].
template <class Body>
auto timed(json& timings, const std::string& name, Body&& body) {
  Stopwatch sw;
  if constexpr (std::is_void_v<decltype(body())>) {
    body();
    timings[name] = sw.seconds();
  } else {
    auto result = body();
    timings[name] = sw.seconds();
    return result;
  }
}

json versions();

/// Common report envelope: command, config echo, seed, versions, timings.
json make_report(const std::string& command, const json& config, std::uint64_t seed);

void write_json(const std::filesystem::path& path, const json& value);
json read_json(const std::filesystem::path& path);

}  // namespace himap::cli
