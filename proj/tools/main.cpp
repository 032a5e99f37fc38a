// Command-line front end: distance evaluation, orbit and attractor
// experiments, horoball grids, flow experiments and the named verification
// suites. Configs are JSON; traces are CSV with 17-significant-digit floats;
// reports are JSON on stdout. Exit codes: 0 pass, 1 violation, 2
// inconclusive, 64 malformed config, 70 numeric failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "horodyn/dynamics.hpp"
#include "horodyn/geometry.hpp"
#include "horodyn/horoball.hpp"
#include "horodyn/io.hpp"
#include "horodyn/metrics.hpp"
#include "horodyn/verify.hpp"

namespace {

using horodyn::io::ConfigError;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitConfig = 64;
constexpr int kExitNumeric = 70;

int thread_cap() {
  if (const char* env = std::getenv("HD_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

void write_artifact(const std::string& out_dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(out_dir);
  horodyn::io::atomic_write(std::filesystem::path(out_dir) / name, content);
}

horodyn::Vec require_vec(const json& config, const char* key) {
  if (!config.contains(key)) throw ConfigError(std::string("missing config key: ") + key);
  return horodyn::io::parse_vec(config.at(key), key);
}

int run_dist(const json& config) {
  const horodyn::MetricInstance metric = horodyn::io::parse_metric(config);
  const horodyn::Vec x = require_vec(config, "x");
  const horodyn::Vec y = require_vec(config, "y");
  std::cout << horodyn::io::format_double(metric.distance(x, y)) << "\n";
  return kExitPass;
}

int run_orbit(const json& config, std::uint64_t seed, const std::string& out_dir,
              const std::string& format) {
  const horodyn::MetricInstance metric = horodyn::io::parse_metric(config);
  const horodyn::Map map = horodyn::io::parse_map(
      config.at("map"), metric.body() ? std::optional<horodyn::ConvexBody>(*metric.body()) : std::nullopt);
  const json params = config.value("params", json::object());
  const int n_steps = params.value("n_steps", 10000);

  horodyn::Vec x0;
  if (config.contains("x0")) {
    x0 = horodyn::io::parse_vec(config.at("x0"), "x0");
  } else {
    x0 = horodyn::io::parse_seeds(config, *metric.body(), seed).front();
  }

  const horodyn::OrbitTrace trace = horodyn::iterate(metric, map, x0, n_steps);
  horodyn::Boundedness verdict = horodyn::Boundedness::Undecided;
  if (trace.truncated ||
      trace.d_to_start.size() >= static_cast<std::size_t>(horodyn::BoundednessParams{}.window)) {
    verdict = horodyn::classify_boundedness(trace);
  }

  if (format == "json") {
    json points = json::array();
    for (const auto& p : trace.points) points.push_back(p);
    write_artifact(out_dir, "orbit.json",
                   json{{"points", points}, {"d_to_start", trace.d_to_start}, {"step_d", trace.step_d}}
                       .dump(2) +
                       "\n");
  } else {
    write_artifact(out_dir, "orbit.csv", horodyn::io::orbit_csv(trace));
  }
  const json result = horodyn::io::orbit_result_json(trace, verdict, config, seed);
  write_artifact(out_dir, "orbit_result.json", result.dump(2) + "\n");
  std::cout << result.dump(2) << "\n";
  return kExitPass;
}

int run_attractor(const json& config, std::uint64_t seed, const std::string& out_dir) {
  const horodyn::MetricInstance metric = horodyn::io::parse_metric(config);
  const horodyn::Map map = horodyn::io::parse_map(
      config.at("map"), metric.body() ? std::optional<horodyn::ConvexBody>(*metric.body()) : std::nullopt);
  const auto seeds = horodyn::io::parse_seeds(config, *metric.body(), seed);
  horodyn::AttractorParams params = horodyn::io::parse_attractor_params(config);
  params.n_threads = thread_cap();

  const horodyn::AttractorEstimate est = horodyn::attractor(metric, map, seeds, params);
  json result{{"boundedness", horodyn::to_string(est.boundedness)},
              {"clusters", horodyn::io::clusters_to_json(est.clusters)},
              {"config_digest", horodyn::io::config_digest(config, seed)},
              {"low_confidence", est.low_confidence},
              {"n_seeds", seeds.size()},
              {"seed", seed}};
  if (est.dw_point) result["dw_point"] = *est.dw_point;
  write_artifact(out_dir, "attractor_result.json", result.dump(2) + "\n");
  std::cout << result.dump(2) << "\n";
  return kExitPass;
}

int run_horoball(const json& config, const std::string& out_dir) {
  const horodyn::MetricInstance metric = horodyn::io::parse_metric(config);
  if (!config.contains("horoball")) throw ConfigError("missing config key: horoball");
  const json h = config.at("horoball");
  horodyn::HoroballSpec spec;
  spec.pole = horodyn::io::parse_vec(h.at("pole"), "horoball.pole");
  spec.center = horodyn::io::parse_vec(h.at("center"), "horoball.center");
  spec.radius = h.value("radius", 0.0);
  spec.kind = h.value("kind", std::string("big")) == "small" ? horodyn::HoroballKind::Small
                                                             : horodyn::HoroballKind::Big;
  const int grid = h.value("grid", 64);
  const horodyn::ApproachPolicy policy = horodyn::io::parse_approach_policy(config);
  write_artifact(out_dir, "horoball.csv", horodyn::io::horoball_grid_csv(metric, spec, grid, policy));
  std::cout << "wrote horoball.csv (" << grid << " cells per axis)\n";
  return kExitPass;
}

int run_semigroup(const json& config, std::uint64_t seed, const std::string& out_dir) {
  const horodyn::MetricInstance metric = horodyn::io::parse_metric(config);
  const horodyn::Semigroup sg = horodyn::io::parse_semigroup(config);
  const auto seeds = horodyn::io::parse_seeds(config, *metric.body(), seed);
  horodyn::AttractorParams params = horodyn::io::parse_attractor_params(config);
  params.n_threads = thread_cap();
  const double t0 = config.value("t0", 1.0);

  const horodyn::SemigroupAttractorResult result =
      horodyn::semigroup_attractor(metric, sg, t0, seeds, params);

  // Flow orbit of the first seed on the t0-grid, for plotting.
  const int n_grid = config.value("params", json::object()).value("n_grid", 256);
  std::vector<double> t_grid;
  for (int k = 0; k <= n_grid; ++k) t_grid.push_back(t0 * k);
  const horodyn::OrbitTrace flow = horodyn::semigroup_orbit(metric, sg, seeds.front(), t_grid);
  write_artifact(out_dir, "semigroup_orbit.csv", horodyn::io::orbit_csv(flow));

  const json out{{"config_digest", horodyn::io::config_digest(config, seed)},
                 {"dense_clusters", horodyn::io::clusters_to_json(result.dense.clusters)},
                 {"hausdorff", result.hausdorff},
                 {"seed", seed},
                 {"skeleton_boundedness", horodyn::to_string(result.skeleton.boundedness)},
                 {"skeleton_clusters", horodyn::io::clusters_to_json(result.skeleton.clusters)},
                 {"t0", t0}};
  write_artifact(out_dir, "semigroup_result.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

horodyn::MetricInstance suite_metric(const json& config) {
  if (config.contains("body") || config.contains("metric")) return horodyn::io::parse_metric(config);
  return horodyn::MetricInstance::hilbert(horodyn::ConvexBody::box({-1, -1}, {1, 1}));
}

horodyn::Map suite_map(const json& config, const horodyn::MetricInstance& metric, const char* fallback) {
  if (config.contains("map")) {
    return horodyn::io::parse_map(config.at("map"), metric.body()
                                                        ? std::optional<horodyn::ConvexBody>(*metric.body())
                                                        : std::nullopt);
  }
  if (std::string(fallback) == "parabolic") return horodyn::Map::projective_linear({{1, 1}, {0, 1}});
  return horodyn::Map::projective_linear({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
}

int run_verify(const std::string& suite, const json& config, std::uint64_t seed) {
  namespace hv = horodyn::verify;
  const json params = config.value("params", json::object());
  const long n = params.value("n", 100000L);
  hv::CheckReport report;

  if (suite == "condition-C") {
    report = hv::check_condition_c(suite_metric(config), n, seed);
  } else if (suite == "condition-C-negative") {
    report = hv::check_condition_c_negative(std::min<long>(n, 20000), seed);
  } else if (suite == "axiom5") {
    report = hv::check_axiom5(suite_metric(config), n, seed);
  } else if (suite == "axiom5-negative") {
    const horodyn::MetricInstance metric = suite_metric(config);
    report = hv::check_axiom5(metric, std::min<long>(n, 20000), seed, 1e-9,
                              metric.body()->diameter() / 5.0);
  } else if (suite == "axiom2star") {
    report = hv::check_axiom2star(suite_metric(config), static_cast<int>(params.value("n_pairs", 50)), seed);
  } else if (suite == "axiom2star-negative") {
    hv::Axiom2StarParams a2;
    a2.distance_override = [](const horodyn::Vec& a, const horodyn::Vec& b) {
      return horodyn::distance2(a, b);
    };
    report = hv::check_axiom2star(suite_metric(config), static_cast<int>(params.value("n_pairs", 50)),
                                  seed, a2);
  } else if (suite == "kobayashi") {
    report = hv::check_kobayashi_bound(params.value("n", 10000L), seed);
  } else if (suite == "kobayashi-negative") {
    report = hv::check_kobayashi_bound(params.value("n", 10000L), seed, 1e-12, 1.0);
  } else if (suite == "wolff-denjoy") {
    const horodyn::MetricInstance metric =
        config.contains("body") ? horodyn::io::parse_metric(config)
                                : horodyn::MetricInstance::hilbert(horodyn::ConvexBody::simplex(1));
    report = hv::check_wolff_denjoy(metric, suite_map(config, metric, "parabolic"), seed);
  } else if (suite == "wolff-denjoy-semigroup") {
    const horodyn::Semigroup sg = config.contains("generator")
                                      ? horodyn::io::parse_semigroup(config)
                                      : horodyn::Semigroup(horodyn::Mat{{0, 1}, {0, 0}});
    const horodyn::MetricInstance metric = horodyn::MetricInstance::hilbert(sg.domain());
    report = hv::check_wolff_denjoy_semigroup(metric, sg, config.value("t_step", 1.0),
                                              params.value("n_times", 1000), seed);
  } else if (suite == "attractor-inclusions") {
    const horodyn::MetricInstance metric =
        config.contains("body") ? horodyn::io::parse_metric(config)
                                : horodyn::MetricInstance::hilbert(horodyn::ConvexBody::simplex(2));
    report = hv::check_attractor_inclusions(metric, suite_map(config, metric, "jordan"), seed);
  } else if (suite == "attractor-inclusions-negative") {
    report = hv::check_attractor_inclusions_negative(seed);
  } else if (suite == "semigroup-attractor") {
    const horodyn::Semigroup sg = config.contains("generator")
                                      ? horodyn::io::parse_semigroup(config)
                                      : horodyn::Semigroup(horodyn::Mat{{0, 1}, {0, 0}});
    const horodyn::MetricInstance metric = horodyn::MetricInstance::hilbert(sg.domain());
    report = hv::check_semigroup_attractor_equality(metric, sg, config.value("t0", 1.0), seed);
  } else if (suite == "semigroup-attractor-negative") {
    report = hv::check_semigroup_attractor_negative(seed);
  } else {
    throw ConfigError("unknown verify suite: " + suite);
  }

  std::cout << hv::report_string(report);
  switch (report.status) {
    case hv::CheckStatus::Pass: return kExitPass;
    case hv::CheckStatus::Fail: return kExitViolation;
    case hv::CheckStatus::Inconclusive: return kExitInconclusive;
  }
  return kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"horodyn: metric geometry and nonexpansive dynamics laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "csv";
  std::string suite;

  const auto add_common = [&](CLI::App* cmd, bool with_format = false) {
    cmd->add_option("--config", config_path, "JSON experiment configuration");
    cmd->add_option("--seed", seed, "master seed for all derived random streams");
    cmd->add_option("--out", out_dir, "output directory for artifacts");
    if (with_format) {
      cmd->add_option("--format", format, "trace format: csv or json")
          ->check(CLI::IsMember({"csv", "json"}));
    }
  };

  CLI::App* dist = app.add_subcommand("dist", "distance between two points under the configured metric");
  add_common(dist);
  CLI::App* orbit = app.add_subcommand(
      "orbit",
      "iterate a map; writes orbit.csv (step, coordinates, d_to_start, step_d) and orbit_result.json");
  add_common(orbit, true);
  CLI::App* attractor_cmd = app.add_subcommand(
      "attractor", "omega-limit clusters over a seed family; writes attractor_result.json");
  add_common(attractor_cmd);
  CLI::App* horoball = app.add_subcommand(
      "horoball",
      "horofunction grid; writes horoball.csv (x1..xn, horofunction_lo, horofunction_hi, member)");
  add_common(horoball);
  CLI::App* semigroup = app.add_subcommand(
      "semigroup", "flow attractor vs time-map attractor; writes semigroup_result.json");
  add_common(semigroup);
  CLI::App* verify = app.add_subcommand("verify", "run a named check suite; report JSON on stdout");
  verify
      ->add_option("suite", suite,
                   "one of: condition-C[-negative], axiom5[-negative], axiom2star[-negative], "
                   "kobayashi[-negative], wolff-denjoy, wolff-denjoy-semigroup, "
                   "attractor-inclusions[-negative], semigroup-attractor[-negative]")
      ->required();
  add_common(verify);

  CLI11_PARSE(app, argc, argv);

  try {
    const json config = load_config(config_path);
    if (dist->parsed()) return run_dist(config);
    if (orbit->parsed()) return run_orbit(config, seed, out_dir, format);
    if (attractor_cmd->parsed()) return run_attractor(config, seed, out_dir);
    if (horoball->parsed()) return run_horoball(config, out_dir);
    if (semigroup->parsed()) return run_semigroup(config, seed, out_dir);
    if (verify->parsed()) return run_verify(suite, config, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitConfig;
}
