#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "experiments.hpp"
#include "himap/barycenter.hpp"
#include "himap/datagen.hpp"
#include "himap/error.hpp"
#include "himap/io.hpp"
#include "himap/ot.hpp"
#include "himap/quantile_map.hpp"
#include "report.hpp"

namespace himap::cli {
namespace fs = std::filesystem;

namespace {

struct BenchOptions {
  std::string config;
  std::string out;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  json cfg = read_json(path);
  if (!cfg.is_object()) throw ConfigError(path + ": bench config must be a JSON object");
  return cfg;
}

template <class T>
T get_or(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bench config key '") + key + "' has the wrong type");
  }
}

fs::path output_dir(const json& cfg, const std::string& out) {
  if (cfg.contains("out_dir")) return fs::path(cfg.at("out_dir").get<std::string>());
  const fs::path base = out.empty() ? fs::current_path() : fs::path(out).parent_path();
  return base.empty() ? fs::path(".") : base;
}

void finish(const json& report, const std::string& out) {
  if (out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    write_json(out, report);
  }
}

void bench_ellipses(const BenchOptions& o) {
  const json cfg = load_config(o.config);
  const auto count = get_or<std::size_t>(cfg, "count", 30);
  const auto n = get_or<std::size_t>(cfg, "n", 1000);
  const auto grid = get_or<std::size_t>(cfg, "grid", 1000);
  const auto seed = get_or<std::uint64_t>(cfg, "seed", 0);
  const auto depth = get_or<int>(cfg, "depth", 0);
  // "exact" (linear assignment), "sinkhorn" or "none".
  const auto proxy = get_or<std::string>(cfg, "ot_proxy", "exact");
  const json echo{{"count", count}, {"n", n}, {"grid", grid}, {"depth", depth}, {"ot_proxy", proxy}};
  json report = make_report("bench ellipses", echo, seed);
  json& timings = report["timings"];

  const auto clouds = timed(timings, "generate", [&] { return gen_nested_ellipses(count, n, seed); });
  Stopwatch total;
  const auto maps = timed(timings, "fit", [&] {
    std::vector<QuantileMap> out;
    out.reserve(clouds.size());
    for (const auto& c : clouds) out.push_back(QuantileMap::fit(c, depth));
    return out;
  });
  const AffineWeights weights = AffineWeights::uniform(clouds.size());
  const QuantileGrid bary = timed(timings, "combine", [&] { return barycenter_map(maps, weights, grid); });
  const double elapsed = total.seconds();
  timings["barycenter"] = elapsed;
  report["runtime_s"] = elapsed;
  report["within_budget"] = elapsed < 1.0;

  const PointCloud cloud = grid_cloud(bary);
  if (!o.out.empty() || cfg.contains("out_dir")) {
    const fs::path dir = output_dir(cfg, o.out);
    fs::create_directories(dir);
    write_cloud_csv(dir / "ellipses_barycenter.csv", cloud);
    report["barycenter_file"] = (dir / "ellipses_barycenter.csv").string();
  }

  if (proxy != "none") {
    // Weighted transport cost from the barycenter to every input, the
    // quantity a barycenter minimizes.
    if (proxy != "exact" && proxy != "sinkhorn") throw ConfigError("ot_proxy must be exact, sinkhorn or none");
    double objective = 0.0;
    json costs = json::array();
    timed(timings, "ot_proxy", [&] {
      for (std::size_t i = 0; i < clouds.size(); ++i) {
        double c = 0.0;
        if (proxy == "exact" && clouds[i].size() == cloud.size()) {
          const double w = w2_exact_assignment(cloud, clouds[i]);
          c = w * w;
        } else {
          c = sinkhorn_cost(cloud, clouds[i]).cost;
        }
        costs.push_back(c);
        objective += weights[i] * c;
      }
    });
    report["ot_proxy"] = {{"method", proxy}, {"objective", objective}, {"costs", costs}};
  }
  report["points"] = bary.resolution;
  finish(report, o.out);
}

void bench_interp(const BenchOptions& o) {
  const json cfg = load_config(o.config);
  const auto seed = get_or<std::uint64_t>(cfg, "seed", 0);
  const auto depth = get_or<int>(cfg, "depth", 0);
  const auto grid = get_or<std::size_t>(cfg, "grid", 0);
  const auto lambdas =
      get_or<std::vector<double>>(cfg, "weights", std::vector<double>{1.0, 0.75, 0.5, 0.25, 0.0});
  const json echo{{"depth", depth}, {"grid", grid}, {"weights", lambdas}};
  json report = make_report("bench interp", echo, seed);
  json& timings = report["timings"];

  const PointCloud left = gen_ring_clusters(RingVariant::left, seed);
  const PointCloud right = gen_ring_clusters(RingVariant::right, seed);
  const std::vector<QuantileMap> maps = timed(timings, "fit", [&] {
    return std::vector<QuantileMap>{QuantileMap::fit(left, depth), QuantileMap::fit(right, depth)};
  });
  const std::size_t g = grid > 0 ? grid : common_resolution(maps[0], maps[1]);
  const QuantileGrid grid_left = sample_grid(maps[0], g);
  const QuantileGrid grid_right = sample_grid(maps[1], g);

  const fs::path dir = output_dir(cfg, o.out);
  fs::create_directories(dir);
  json frames = json::array();
  Stopwatch sw;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double lam = lambdas[k];
    const AffineWeights w({lam, 1.0 - lam});
    const QuantileGrid frame = barycenter_map(maps, w, g);
    const std::string file = "interp_" + std::to_string(k) + ".csv";
    write_cloud_csv(dir / file, grid_cloud(frame));
    frames.push_back({{"weights", {lam, 1.0 - lam}},
                      {"file", (dir / file).string()},
                      {"distance_to_left", grid_distance(frame, grid_left)},
                      {"distance_to_right", grid_distance(frame, grid_right)}});
  }
  timings["interpolate"] = sw.seconds();
  report["resolution"] = g;
  report["frames"] = frames;
  report["endpoint_distance"] = grid_distance(grid_left, grid_right);
  finish(report, o.out);
}

RegressionRunConfig run_config(const json& cfg, Scheme scheme) {
  RegressionRunConfig rc;
  rc.scheme = scheme;
  rc.resolution = get_or<std::size_t>(cfg, "grid", 256);
  rc.truth_draws = get_or<std::size_t>(cfg, "truth_draws", std::size_t{1} << 16);
  rc.epsilon = get_or<double>(cfg, "epsilon", 0.0);
  if (cfg.contains("bandwidth") && !cfg.at("bandwidth").is_null()) rc.bandwidth = get_or<double>(cfg, "bandwidth", 0.0);
  return rc;
}

json run_setting(RegressionSetting setting, std::size_t m, std::size_t n, std::uint64_t seed, int depth,
                 const RegressionRunConfig& rc, json& timings) {
  const GeneratedRegression g = timed(timings, "generate", [&] { return gen_regression(setting, m, n, seed); });
  const RegressionDataset data =
      timed(timings, "fit", [&] { return RegressionDataset::fit(1, g.x, g.clouds, depth); });
  const RegressionRun run = run_regression(data, g.heldout_x, rc, TruthSource{setting, g.rotation, seed});
  for (auto& [k, v] : run.timings.items()) timings[k] = v;
  json out{{"setting", to_string(setting)}, {"m", m}, {"n", n}, {"mise", *run.mise},
           {"mean_abs_deviation", *run.mean_abs_deviation}, {"per_x", run.per_x}};
  if (run.bandwidth) out["bandwidth"] = *run.bandwidth;
  return out;
}

void bench_regress_global(const BenchOptions& o) {
  const json cfg = load_config(o.config);
  const auto seed = get_or<std::uint64_t>(cfg, "seed", 0);
  const auto m = get_or<std::size_t>(cfg, "m", 101);
  const auto n = get_or<std::size_t>(cfg, "n", 10000);
  const auto depth = get_or<int>(cfg, "depth", 0);
  const RegressionRunConfig rc = run_config(cfg, Scheme::global);
  json report = make_report("bench regress-global",
                            json{{"m", m}, {"n", n}, {"depth", depth}, {"grid", rc.resolution},
                                 {"truth_draws", rc.truth_draws}, {"epsilon", rc.epsilon}},
                            seed);
  const json result = run_setting(RegressionSetting::bivariate, m, n, seed, depth, rc, report["timings"]);
  for (auto& [k, v] : result.items()) report[k] = v;
  finish(report, o.out);
}

void bench_regress_scale(const BenchOptions& o) {
  const json cfg = load_config(o.config);
  const auto seed = get_or<std::uint64_t>(cfg, "seed", 0);
  const auto n = get_or<std::size_t>(cfg, "n", 10000);
  const auto depth = get_or<int>(cfg, "depth", 0);
  const auto ms = get_or<std::vector<std::size_t>>(cfg, "m", std::vector<std::size_t>{50, 100, 200});
  const auto reps = get_or<std::size_t>(cfg, "replicates", 1);
  const auto names = get_or<std::vector<std::string>>(
      cfg, "settings", std::vector<std::string>{"p2-global", "p2-local", "p5-global", "p5-local"});
  const RegressionRunConfig base = run_config(cfg, Scheme::global);
  json report = make_report("bench regress-scale",
                            json{{"m", ms}, {"n", n}, {"depth", depth}, {"settings", names},
                                 {"replicates", reps}, {"grid", base.resolution},
                                 {"truth_draws", base.truth_draws}},
                            seed);
  json rows = json::array();
  Stopwatch total;
  for (const auto& name : names) {
    const RegressionSetting setting = parse_regression_setting(name);
    if (setting == RegressionSetting::bivariate) throw ConfigError("regress-scale takes the p2/p5 settings");
    RegressionRunConfig rc = base;
    rc.scheme = (setting == RegressionSetting::p2_local || setting == RegressionSetting::p5_local)
                    ? Scheme::local
                    : Scheme::global;
    for (const std::size_t m : ms) {
      json mises = json::array();
      json timings = json::object();
      double sum = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        json one = json::object();
        const json res = run_setting(setting, m, n, seed + r, depth, rc, one);
        mises.push_back(res["mise"]);
        sum += res["mise"].get<double>();
        for (auto& [k, v] : one.items()) timings[k] = timings.value(k, 0.0) + v.get<double>();
      }
      rows.push_back({{"setting", name}, {"m", m}, {"mise_mean", sum / static_cast<double>(reps)},
                      {"mise", mises}, {"timings", timings}});
    }
  }
  report["timings"]["total"] = total.seconds();
  report["results"] = rows;
  finish(report, o.out);
}

}  // namespace

void register_bench(CLI::App& app, Action& action) {
  auto* bench = app.add_subcommand("bench", "Reproducible experiment drivers");
  bench->require_subcommand(1);
  auto o = std::make_shared<BenchOptions>();
  const std::pair<const char*, const char*> subs[] = {
      {"ellipses", "Barycenter of nested-ellipse clouds with timing and transport cost"},
      {"interp", "Interpolation between the two ring datasets"},
      {"regress-global", "Global regression on bivariate Gaussian responses"},
      {"regress-scale", "Regression error across sample sizes"},
  };
  for (const auto& [name, help] : subs) {
    auto* sub = bench->add_subcommand(name, help);
    sub->add_option("--config", o->config, "JSON config overriding defaults");
    sub->add_option("--out", o->out, "Report JSON (default stdout)");
    const std::string which = name;
    sub->callback([&action, o, which] {
      action = [o, which] {
        if (which == "ellipses") bench_ellipses(*o);
        else if (which == "interp") bench_interp(*o);
        else if (which == "regress-global") bench_regress_global(*o);
        else bench_regress_scale(*o);
      };
    });
  }
}

}  // namespace himap::cli
