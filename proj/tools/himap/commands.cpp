#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
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

std::string member_name(const std::string& stem, std::size_t i, std::size_t count) {
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::string idx = std::to_string(i);
  if (idx.size() < std::max<std::size_t>(width, 3)) idx.insert(0, std::max<std::size_t>(width, 3) - idx.size(), '0');
  return stem + "_" + idx + ".csv";
}

void write_manifest(const fs::path& dir, const DatasetManifest& m) {
  write_text_file(dir / "manifest.json", manifest_to_json(m));
}

void emit(const json& report, const std::string& out) {
  if (out.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    write_json(out, report);
  }
}

// A .json path is a serialized tree; anything else is a point-cloud CSV.
QuantileMap load_map(const fs::path& path, int depth) {
  if (path.extension() == ".json") return QuantileMap(tree_from_json(read_text_file(path)));
  return QuantileMap::fit(read_cloud_csv(path), depth);
}

std::vector<fs::path> resolve_inputs(const fs::path& list) {
  const json doc = read_json(list);
  const fs::path base = list.parent_path();
  std::vector<fs::path> out;
  if (doc.is_array()) {
    for (const auto& e : doc) out.push_back(base / e.get<std::string>());
  } else if (doc.is_object() && doc.contains("members")) {
    for (const auto& m : manifest_from_json(doc.dump()).members) out.push_back(base / m.file);
  } else {
    throw DataError(list.string() + ": expected an array of paths or a dataset manifest");
  }
  if (out.empty()) throw DataError(list.string() + " lists no inputs");
  return out;
}

std::vector<double> read_weights(const fs::path& path) {
  const json doc = read_json(path);
  const json& arr = doc.is_object() ? doc.at("weights") : doc;
  return arr.get<std::vector<double>>();
}

// ---- gen -----------------------------------------------------------------

struct GenOptions {
  std::uint64_t seed = 0;
  std::string out;
  std::string variant = "both";
  RingParams ring;
  std::size_t count = 30;
  std::size_t n = 1000;
  EllipseParams ellipse;
  std::string setting = "bivariate";
  std::size_t m = 101;
  std::size_t reg_n = 10000;
  std::string input;
  std::string key = "month";
  std::vector<std::string> columns;
  bool standardize = false;
};

void gen_ring(const GenOptions& o) {
  const fs::path dir(o.out);
  fs::create_directories(dir);
  DatasetManifest m;
  m.kind = "ring";
  m.seed = o.seed;
  m.params_json = json{{"radius", o.ring.radius}, {"spread", o.ring.spread}, {"variant", o.variant}}.dump();
  for (auto [name, v] : {std::pair{"left", RingVariant::left}, std::pair{"right", RingVariant::right}}) {
    if (o.variant != "both" && o.variant != name) continue;
    const std::string file = std::string("ring_") + name + ".csv";
    write_cloud_csv(dir / file, gen_ring_clusters(v, o.seed, o.ring));
    m.members.push_back({file, name, {}});
  }
  if (m.members.empty()) throw ConfigError("--variant must be left, right or both");
  write_manifest(dir, m);
}

void gen_ellipses(const GenOptions& o) {
  const fs::path dir(o.out);
  fs::create_directories(dir);
  const auto clouds = gen_nested_ellipses(o.count, o.n, o.seed, o.ellipse);
  DatasetManifest m;
  m.kind = "ellipses";
  m.seed = o.seed;
  m.params_json = json{{"count", o.count}, {"n", o.n}}.dump();
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    const std::string file = member_name("ellipse", i, clouds.size());
    write_cloud_csv(dir / file, clouds[i]);
    m.members.push_back({file, std::to_string(i), {}});
  }
  write_manifest(dir, m);
}

void gen_regression_set(const GenOptions& o) {
  const fs::path dir(o.out);
  fs::create_directories(dir);
  const RegressionSetting setting = parse_regression_setting(o.setting);
  const auto g = gen_regression(setting, o.m, o.reg_n, o.seed);
  DatasetManifest m;
  m.kind = "regression";
  m.seed = o.seed;
  m.params_json =
      json{{"setting", to_string(setting)}, {"m", o.m}, {"n", o.reg_n}, {"rotation", g.rotation}}.dump();
  for (std::size_t i = 0; i < g.clouds.size(); ++i) {
    const std::string file = member_name("y", i, g.clouds.size());
    write_cloud_csv(dir / file, g.clouds[i]);
    m.members.push_back({file, std::to_string(i), {g.x[i]}});
  }
  m.heldout_x = g.heldout_x;
  write_manifest(dir, m);
}

void gen_indicators(const GenOptions& o) {
  const fs::path dir(o.out);
  fs::create_directories(dir);
  const auto groups = load_indicator_csv(fs::path(o.input), o.key, o.columns, o.standardize);
  DatasetManifest m;
  m.kind = "indicators";
  m.seed = o.seed;
  json params{{"source", o.input}, {"key", o.key}, {"columns", groups.columns},
              {"standardized", groups.standardized}};
  if (groups.standardized) {
    params["center"] = groups.center;
    params["scale"] = groups.scale;
  }
  m.params_json = params.dump();
  for (std::size_t i = 0; i < groups.clouds.size(); ++i) {
    const std::string file = member_name("group", i, groups.clouds.size());
    write_cloud_csv(dir / file, groups.clouds[i]);
    // Numeric keys double as scalar predictors.
    std::vector<double> x;
    try {
      x = {parse_real(groups.keys[i])};
    } catch (const DataError&) {
      x = {static_cast<double>(i)};
    }
    m.members.push_back({file, groups.keys[i], x});
  }
  write_manifest(dir, m);
}

// ---- regress -------------------------------------------------------------

struct RegressOptions {
  std::string data;
  std::string scheme = "global";
  std::string bandwidth = "auto";
  std::string eval_x;
  std::string out;
  std::string grid_dir;
  std::size_t grid = 256;
  int depth = 0;
  double epsilon = 0.0;
  std::size_t truth_draws = std::size_t{1} << 16;
};

std::vector<double> read_queries(const fs::path& path, std::size_t p) {
  const CsvTable t = read_csv_file(path);
  if (t.header.size() != p) {
    throw DataError(path.string() + " has " + std::to_string(t.header.size()) + " columns, predictors have " +
                    std::to_string(p));
  }
  std::vector<double> q;
  for (const auto& row : t.rows) {
    for (const auto& cell : row) q.push_back(parse_real(cell, "evaluation covariate"));
  }
  if (q.empty()) throw DataError(path.string() + " has no rows");
  return q;
}

void run_regress(const RegressOptions& o) {
  const json config{{"data", o.data}, {"scheme", o.scheme}, {"bandwidth", o.bandwidth},
                    {"eval_x", o.eval_x}, {"grid", o.grid}, {"depth", o.depth},
                    {"epsilon", o.epsilon}, {"truth_draws", o.truth_draws}};
  const fs::path manifest_path(o.data);
  const DatasetManifest manifest = manifest_from_json(read_text_file(manifest_path));
  json report = make_report("regress", config, manifest.seed);

  std::vector<PointCloud> clouds;
  std::vector<double> x;
  std::size_t p = 0;
  for (const auto& member : manifest.members) {
    if (member.x.empty()) throw DataError("manifest member " + member.file + " has no predictor x");
    if (p == 0) p = member.x.size();
    if (member.x.size() != p) throw DataError("manifest predictors differ in dimension");
    clouds.push_back(read_cloud_csv(manifest_path.parent_path() / member.file));
    x.insert(x.end(), member.x.begin(), member.x.end());
  }
  const auto data = timed(report["timings"], "fit", [&] {
    return RegressionDataset::fit(p, x, clouds, o.depth);
  });

  std::vector<double> queries = o.eval_x.empty() ? manifest.heldout_x : read_queries(o.eval_x, p);
  if (queries.empty()) throw ConfigError("no evaluation covariates: pass --eval-x");

  RegressionRunConfig rc;
  if (o.scheme == "global") {
    rc.scheme = Scheme::global;
  } else if (o.scheme == "local") {
    rc.scheme = Scheme::local;
    if (o.bandwidth != "auto") rc.bandwidth = parse_real(o.bandwidth, "bandwidth");
  } else {
    throw ConfigError("--scheme must be global or local");
  }
  rc.resolution = o.grid;
  rc.epsilon = o.epsilon;
  rc.truth_draws = o.truth_draws;

  std::optional<TruthSource> truth;
  if (manifest.kind == "regression") {
    const json params = json::parse(manifest.params_json);
    truth = TruthSource{parse_regression_setting(params.at("setting").get<std::string>()),
                        params.at("rotation").get<std::vector<double>>(), manifest.seed};
  }
  Stopwatch sw;
  RegressionRun run = run_regression(data, queries, rc, truth);
  for (auto& [k, v] : run.timings.items()) report["timings"][k] = v;

  if (!o.grid_dir.empty()) {
    fs::create_directories(o.grid_dir);
    for (std::size_t k = 0; k < run.grids.size(); ++k) {
      const std::string file = member_name("grid", k, run.grids.size());
      write_grid_csv(fs::path(o.grid_dir) / file, run.grids[k]);
      run.per_x[k]["grid_file"] = file;
    }
  }
  report["per_x"] = run.per_x;
  report["mise"] = run.mise ? json(*run.mise) : json(nullptr);
  if (run.mean_abs_deviation) report["mean_abs_deviation"] = *run.mean_abs_deviation;
  if (run.bandwidth) report["bandwidth"] = *run.bandwidth;
  report["runtime_s"] = report["timings"].value("fit", 0.0) + report["timings"].value("predict", 0.0) +
                        report["timings"].value("bandwidth_selection", 0.0);
  emit(report, o.out);
}

}  // namespace

void register_gen(CLI::App& app, Action& action) {
  auto* gen = app.add_subcommand("gen", "Generate synthetic datasets");
  gen->require_subcommand(1);
  auto o = std::make_shared<GenOptions>();
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o->seed, "RNG seed")->default_val(0);
    sub->add_option("--out", o->out, "Output directory")->required();
  };

  auto* ring = gen->add_subcommand("ring", "Ring of Gaussian clusters (left) and ring plus center (right)");
  common(ring);
  ring->add_option("--variant", o->variant, "left, right or both")->default_val("both");
  ring->add_option("--radius", o->ring.radius, "Ring radius")->default_val(o->ring.radius);
  ring->add_option("--spread", o->ring.spread, "Cluster standard deviation")->default_val(o->ring.spread);
  ring->callback([&action, o] { action = [o] { gen_ring(*o); }; });

  auto* ell = gen->add_subcommand("ellipses", "Point clouds on nested ellipses");
  common(ell);
  ell->add_option("--count", o->count, "Number of clouds")->default_val(30);
  ell->add_option("--n", o->n, "Points per cloud")->default_val(1000);
  ell->callback([&action, o] { action = [o] { gen_ellipses(*o); }; });

  auto* reg = gen->add_subcommand("regression", "Gaussian distribution-valued regression data");
  common(reg);
  reg->add_option("--setting", o->setting, "bivariate, p2-global, p2-local, p5-global, p5-local")
      ->default_val("bivariate");
  reg->add_option("--m", o->m, "Number of covariate values")->default_val(101);
  reg->add_option("--n", o->reg_n, "Samples per response")->default_val(10000);
  reg->callback([&action, o] { action = [o] { gen_regression_set(*o); }; });

  auto* ind = gen->add_subcommand("indicators", "Group an indicator CSV into per-key point clouds");
  common(ind);
  ind->add_option("--in", o->input, "Indicator CSV")->required();
  ind->add_option("--key", o->key, "Grouping column")->default_val("month");
  ind->add_option("--columns", o->columns, "Indicator columns (default: all but key)")->delimiter(',');
  ind->add_flag("--standardize", o->standardize, "Center and scale each column");
  ind->callback([&action, o] { action = [o] { gen_indicators(*o); }; });
}

void register_fit(CLI::App& app, Action& action) {
  struct Options {
    std::string in, out;
    int depth = 0;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("fit", "Fit a mass-aligned tree to a point cloud");
  sub->add_option("--in", o->in, "Point-cloud CSV")->required();
  sub->add_option("--depth", o->depth, "Tree depth L (0: floor(log2 n))")->default_val(0);
  sub->add_option("--out", o->out, "Tree JSON output")->required();
  sub->callback([&action, o] {
    action = [o] {
      const PointCloud cloud = read_cloud_csv(fs::path(o->in));
      json report = make_report("fit", json{{"in", o->in}, {"depth", o->depth}, {"out", o->out}}, 0);
      const int depth = o->depth > 0 ? o->depth : default_depth(cloud.size());
      const HimapTree tree = timed(report["timings"], "fit", [&] { return build_tree(cloud, depth); });
      write_text_file(o->out, tree_to_json(tree));
      report["n"] = cloud.size();
      report["dim"] = cloud.dim();
      report["depth"] = depth;
      report["nodes"] = tree.nodes().size();
      std::cout << report.dump(2) << '\n';
    };
  });
}

void register_eval(CLI::App& app, Action& action) {
  struct Options {
    std::string tree, out;
    std::size_t grid = 0;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("eval", "Evaluate a fitted tree on the grid t_g = (g + 1/2) / G");
  sub->add_option("--tree", o->tree, "Tree JSON")->required();
  sub->add_option("--grid", o->grid, "Grid size G (0: 2^L)")->default_val(0);
  sub->add_option("--out", o->out, "Quantile grid CSV output")->required();
  sub->callback([&action, o] {
    action = [o] {
      const QuantileMap map(tree_from_json(read_text_file(o->tree)));
      const std::size_t g = o->grid > 0 ? o->grid : std::size_t{1} << map.depth();
      json report = make_report("eval", json{{"tree", o->tree}, {"grid", g}, {"out", o->out}}, 0);
      const QuantileGrid grid = timed(report["timings"], "eval", [&] { return sample_grid(map, g); });
      write_grid_csv(fs::path(o->out), grid);
      std::cout << report.dump(2) << '\n';
    };
  });
}

void register_distance(CLI::App& app, Action& action) {
  struct Options {
    std::string metric = "himap", a, b, out;
    double r = 2.0;
    std::size_t grid = 0;
    double epsilon = 0.0;
    int depth = 0;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("distance", "Distance between two point clouds (or fitted trees)");
  sub->add_option("--metric", o->metric, "himap, w2-exact, w2-1d or sinkhorn")
      ->check(CLI::IsMember({"himap", "w2-exact", "w2-1d", "sinkhorn"}))
      ->default_val("himap");
  sub->add_option("--a", o->a, "First cloud CSV (or tree JSON for himap)")->required();
  sub->add_option("--b", o->b, "Second cloud CSV (or tree JSON for himap)")->required();
  sub->add_option("--r", o->r, "Order r of the himap distance")->default_val(2.0);
  sub->add_option("--grid", o->grid, "Grid size G for himap (0: 2^max L)")->default_val(0);
  sub->add_option("--epsilon", o->epsilon, "Sinkhorn epsilon (0: scale-relative default)")->default_val(0.0);
  sub->add_option("--depth", o->depth, "Tree depth when fitting CSV inputs (0: default)")->default_val(0);
  sub->add_option("--out", o->out, "JSON output (default stdout)");
  sub->callback([&action, o] {
    action = [o] {
      const json config{{"metric", o->metric}, {"a", o->a}, {"b", o->b}, {"r", o->r},
                        {"grid", o->grid}, {"epsilon", o->epsilon}, {"depth", o->depth}};
      json report = make_report("distance", config, 0);
      report["metric"] = o->metric;
      Stopwatch sw;
      if (o->metric == "himap") {
        const QuantileMap a = load_map(o->a, o->depth);
        const QuantileMap b = load_map(o->b, o->depth);
        sw = Stopwatch();
        report["value"] = himap_distance(a, b, o->r, o->grid);
      } else {
        const PointCloud a = read_cloud_csv(fs::path(o->a));
        const PointCloud b = read_cloud_csv(fs::path(o->b));
        sw = Stopwatch();
        if (o->metric == "w2-exact") {
          report["value"] = w2_exact_assignment(a, b);
        } else if (o->metric == "w2-1d") {
          report["value"] = w2_exact_1d(a, b);
        } else {
          SinkhornOptions so;
          so.epsilon = o->epsilon;
          const SinkhornResult r = sinkhorn_cost(a, b, so);
          report["value"] = r.cost;
          report["epsilon"] = r.epsilon;
          report["converged"] = r.converged;
          report["marginal_violation"] = r.marginal_violation;
          report["iterations"] = r.iterations;
        }
      }
      report["runtime_s"] = sw.seconds();
      report["timings"]["distance"] = report["runtime_s"];
      emit(report, o->out);
    };
  });
}

void register_barycenter(CLI::App& app, Action& action) {
  struct Options {
    std::string inputs, weights, out, report;
    std::size_t grid = 0;
    int depth = 0;
  };
  auto o = std::make_shared<Options>();
  auto* sub = app.add_subcommand("barycenter", "Closed-form barycenter of several point clouds");
  sub->add_option("--inputs", o->inputs, "JSON array of cloud CSV paths, or a dataset manifest")->required();
  sub->add_option("--weights", o->weights, "JSON array of weights (default uniform)");
  sub->add_option("--grid", o->grid, "Output size G (0: 2^max L)")->default_val(0);
  sub->add_option("--depth", o->depth, "Tree depth per input (0: default)")->default_val(0);
  sub->add_option("--out", o->out, "Barycenter cloud CSV")->required();
  sub->add_option("--report", o->report, "JSON report path (default stdout)");
  sub->callback([&action, o] {
    action = [o] {
      const json config{{"inputs", o->inputs}, {"weights", o->weights}, {"grid", o->grid},
                        {"depth", o->depth}, {"out", o->out}};
      json report = make_report("barycenter", config, 0);
      std::vector<PointCloud> clouds;
      for (const auto& path : resolve_inputs(o->inputs)) clouds.push_back(read_cloud_csv(path));
      const AffineWeights weights = o->weights.empty() ? AffineWeights::uniform(clouds.size())
                                                       : AffineWeights(read_weights(o->weights));
      Stopwatch total;
      const auto maps = timed(report["timings"], "fit", [&] {
        std::vector<QuantileMap> out;
        for (const auto& c : clouds) out.push_back(QuantileMap::fit(c, o->depth));
        return out;
      });
      const QuantileGrid grid = timed(report["timings"], "combine", [&] {
        return barycenter_map(maps, weights, o->grid);
      });
      report["timings"]["barycenter"] = total.seconds();
      write_cloud_csv(fs::path(o->out), grid_cloud(grid));
      report["inputs"] = clouds.size();
      report["points"] = grid.resolution;
      report["weights"] = std::vector<double>(weights.lambdas().begin(), weights.lambdas().end());
      emit(report, o->report);
    };
  });
}

void register_regress(CLI::App& app, Action& action) {
  auto o = std::make_shared<RegressOptions>();
  auto* sub = app.add_subcommand("regress", "Global or local Frechet regression on a dataset manifest");
  sub->add_option("--data", o->data, "Dataset manifest JSON with predictor x per member")->required();
  sub->add_option("--scheme", o->scheme, "global or local")
      ->check(CLI::IsMember({"global", "local"}))
      ->default_val("global");
  sub->add_option("--bandwidth", o->bandwidth, "Local bandwidth h, or auto")->default_val("auto");
  sub->add_option("--eval-x", o->eval_x, "CSV of evaluation covariates (default: manifest held-out x)");
  sub->add_option("--grid", o->grid, "Grid size G of predictions")->default_val(256);
  sub->add_option("--depth", o->depth, "Tree depth per response (0: default)")->default_val(0);
  sub->add_option("--epsilon", o->epsilon, "Sinkhorn epsilon for MISE (0: scale-relative)")->default_val(0.0);
  sub->add_option("--truth-draws", o->truth_draws, "Draws per truth representative")
      ->default_val(std::size_t{1} << 16);
  sub->add_option("--grid-dir", o->grid_dir, "Directory for per-x grid CSVs");
  sub->add_option("--out", o->out, "Results JSON (default stdout)");
  sub->callback([&action, o] { action = [o] { run_regress(*o); }; });
}

}  // namespace himap::cli
