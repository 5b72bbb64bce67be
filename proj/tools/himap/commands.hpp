#pragma once

#include <functional>

namespace CLI {
class App;
}

namespace himap::cli {

/// Work selected by the parsed command line; set by subcommand callbacks.
using Action = std::function<void()>;

void register_gen(CLI::App& app, Action& action);
void register_fit(CLI::App& app, Action& action);
void register_eval(CLI::App& app, Action& action);
void register_distance(CLI::App& app, Action& action);
void register_barycenter(CLI::App& app, Action& action);
void register_regress(CLI::App& app, Action& action);
void register_bench(CLI::App& app, Action& action);

}  // namespace himap::cli
