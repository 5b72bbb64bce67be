#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "himap/error.hpp"
#include "json.hpp"
#include "report.hpp"

namespace {

enum Exit { kOk = 0, kInternal = 1, kUsage = 2, kData = 3, kNumeric = 4 };

int exit_code(himap::ErrorKind kind) {
  using himap::ErrorKind;
  switch (kind) {
    case ErrorKind::domain:
    case ErrorKind::config:
      return kUsage;
    case ErrorKind::data:
    case ErrorKind::resource:
      return kData;
    case ErrorKind::weight:
    case ErrorKind::linalg:
    case ErrorKind::bandwidth:
    case ErrorKind::convergence:
      return kNumeric;
    case ErrorKind::internal:
      return kInternal;
  }
  return kInternal;
}

int report_error(const std::string& kind, const std::string& message, int code) {
  nlohmann::json err{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
  std::cerr << err.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hilbert mass-aligned quantile maps, barycenters and regression"};
  app.set_version_flag("--version", himap::cli::kVersion);
  app.require_subcommand(1);

  himap::cli::Action action;
  himap::cli::register_gen(app, action);
  himap::cli::register_fit(app, action);
  himap::cli::register_eval(app, action);
  himap::cli::register_distance(app, action);
  himap::cli::register_barycenter(app, action);
  himap::cli::register_regress(app, action);
  himap::cli::register_bench(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what(), kUsage);
  }

  try {
    if (action) action();
  } catch (const himap::Error& e) {
    return report_error(std::string(himap::to_string(e.kind())), e.what(), exit_code(e.kind()));
  } catch (const nlohmann::json::exception& e) {
    return report_error("data", e.what(), kData);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), kInternal);
  }
  return kOk;
}
