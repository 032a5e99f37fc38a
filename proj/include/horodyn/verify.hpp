#pragma once

// Named, reproducible property suites with pass/fail verdicts and margins.
// Each check samples with streams derived from one seed, so identical
// (seed, config) pairs reproduce reports bit for bit. Hypotheses are never
// asserted: checks run on instances where they hold analytically, and
// negative-control variants feed each suite a constructed violation to
// guard against vacuous passes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "horodyn/dynamics.hpp"
#include "horodyn/geometry.hpp"
#include "horodyn/horoball.hpp"
#include "horodyn/metrics.hpp"
#include "horodyn/rng.hpp"

namespace horodyn::verify {

using nlohmann::json;

enum class CheckStatus { Pass, Fail, Inconclusive };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct CheckReport {
  std::string check_name;
  std::uint64_t seed = 0;
  std::string config_digest;
  long n_samples = 0;
  long n_violations = 0;
  double worst_margin = 0.0;  // positive means a violation by that amount
  CheckStatus status = CheckStatus::Inconclusive;
  json details = json::object();
};

inline std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_digest(const std::string& name, const json& config, std::uint64_t seed) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(name + "\n" + config.dump() + "\n" + std::to_string(seed))));
  return buf;
}

inline json to_json(const CheckReport& r) {
  return json{{"check_name", r.check_name},
              {"config_digest", r.config_digest},
              {"details", r.details},
              {"n_samples", r.n_samples},
              {"n_violations", r.n_violations},
              {"seed", r.seed},
              {"status", to_string(r.status)},
              {"worst_margin", r.worst_margin}};
}

inline std::string report_string(const CheckReport& r) { return to_json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Condition (C): d(sx + (1-s)y, z) <= max{d(x,z), d(y,z)}.

namespace detail {

inline CheckReport condition_c_core(const std::string& name, const json& cfg,
                                    const std::function<Vec(Rng&)>& sample,
                                    const std::function<double(const Vec&, const Vec&)>& dist, long n,
                                    std::uint64_t seed, double tol) {
  CheckReport report;
  report.check_name = name;
  report.seed = seed;
  report.config_digest = config_digest(name, cfg, seed);
  report.worst_margin = -std::numeric_limits<double>::infinity();
  Rng rng = derive_stream(seed, 0);
  for (long i = 0; i < n; ++i) {
    const Vec x = sample(rng);
    const Vec y = sample(rng);
    const Vec z = sample(rng);
    const double s = rng.next_unit();
    const double lhs = dist(lerp(x, y, s), z);
    const double rhs = std::max(dist(x, z), dist(y, z));
    const double margin = lhs - rhs - tol;
    report.worst_margin = std::max(report.worst_margin, margin);
    if (margin > 0.0) ++report.n_violations;
    ++report.n_samples;
  }
  report.status = report.n_violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  report.details["tolerance"] = tol;
  return report;
}

}  // namespace detail

inline CheckReport check_condition_c(const MetricInstance& metric, long n, std::uint64_t seed,
                                     double tol = 1e-9) {
  const json cfg{{"n", n}, {"tol", tol}, {"dim", metric.point_dimension()}};
  return detail::condition_c_core(
      "condition-C", cfg, [&](Rng& rng) { return metric.sample_point(rng); },
      [&](const Vec& a, const Vec& b) { return metric.distance(a, b); }, n, seed, tol);
}

// Negative control: the pullback of the Euclidean distance under a parabolic
// shear has bent balls, so the segment condition fails on sampled triples.
inline CheckReport check_condition_c_negative(long n, std::uint64_t seed, double tol = 1e-9) {
  const ConvexBody square = ConvexBody::box(Vec{-1, -1}, Vec{1, 1});
  const auto warp = [](const Vec& x) { return Vec{x[0], x[1] + 1.5 * x[0] * x[0]}; };
  const json cfg{{"n", n}, {"tol", tol}, {"warp", "parabolic-shear"}};
  CheckReport report = detail::condition_c_core(
      "condition-C-negative", cfg, [&](Rng& rng) { return square.sample_interior(rng); },
      [&](const Vec& a, const Vec& b) { return distance2(warp(a), warp(b)); }, n, seed, tol);
  // The control passes when the violation is caught.
  report.details["expects_violations"] = true;
  report.status = report.n_violations > 0 ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

// ---------------------------------------------------------------------------
// Quantitative escape bound: d_H(x, y) >= 2 log(1 + |x-y|/diam).

inline CheckReport check_axiom5(const MetricInstance& metric, long n, std::uint64_t seed,
                                double tol = 1e-9, std::optional<double> diam_override = std::nullopt) {
  const ConvexBody* body = metric.body();
  if (body == nullptr) throw std::invalid_argument("check_axiom5: domain-backed metric required");
  const double diam = diam_override.value_or(body->diameter());
  const bool negative = diam_override.has_value();
  const std::string name = negative ? "axiom5-negative" : "axiom5";
  const json cfg{{"n", n}, {"tol", tol}, {"diam", diam}};

  CheckReport report;
  report.check_name = name;
  report.seed = seed;
  report.config_digest = config_digest(name, cfg, seed);
  report.worst_margin = -std::numeric_limits<double>::infinity();
  Rng rng = derive_stream(seed, 0);
  for (long i = 0; i < n; ++i) {
    const Vec x = body->sample_interior(rng);
    const Vec y = body->sample_interior(rng);
    const double margin = hilbert_norm_lower_bound(diam, x, y) - metric.distance(x, y) - tol;
    report.worst_margin = std::max(report.worst_margin, margin);
    if (margin > 0.0) ++report.n_violations;
    ++report.n_samples;
  }
  report.details["diameter"] = diam;
  if (negative) {
    report.details["expects_violations"] = true;
    report.status = report.n_violations > 0 ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    report.status = report.n_violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Divergence on sequences toward boundary points with an interior chord:
// D_k = d(x_k, y_k) - max{d(x_k, z), d(y_k, z)} must blow up.

struct Axiom2StarParams {
  int k_max = 30;
  double growth_threshold = 5.0;
  int tail_window = 5;
  double tail_tol = 1e-9;
  // Boundary limits closer than this fraction of the diameter are skipped:
  // the divergence onset is delayed by ~2 log2(1/gap) halvings, beyond what
  // k_max steps can certify for near-coincident pairs.
  double min_pair_gap_rel = 0.02;
  // Distance override for negative controls; the body still shapes the
  // sequences.
  std::function<double(const Vec&, const Vec&)> distance_override;
};

inline CheckReport check_axiom2star(const MetricInstance& metric, int n_pairs, std::uint64_t seed,
                                    const Axiom2StarParams& params = {}) {
  const ConvexBody* body = metric.body();
  if (body == nullptr) throw std::invalid_argument("check_axiom2star: domain-backed metric required");
  const bool negative = static_cast<bool>(params.distance_override);
  const std::string name = negative ? "axiom2star-negative" : "axiom2star";
  const json cfg{{"n_pairs", n_pairs},
                 {"k_max", params.k_max},
                 {"growth_threshold", params.growth_threshold},
                 {"dim", body->dimension()}};
  const auto dist = params.distance_override
                        ? params.distance_override
                        : [&metric](const Vec& a, const Vec& b) { return metric.distance(a, b); };

  CheckReport report;
  report.check_name = name;
  report.seed = seed;
  report.config_digest = config_digest(name, cfg, seed);
  report.worst_margin = -std::numeric_limits<double>::infinity();
  Rng rng = derive_stream(seed, 0);
  int skipped = 0;
  int attempts = 0;
  while (report.n_samples < n_pairs && attempts < 50 * n_pairs) {
    ++attempts;
    Vec d1(body->dimension()), d2(body->dimension());
    for (double& v : d1) v = rng.uniform(-1.0, 1.0);
    for (double& v : d2) v = rng.uniform(-1.0, 1.0);
    if (norm2(d1) < 0.1 || norm2(d2) < 0.1) continue;
    const Vec x = body->boundary_ray(body->interior_point(), d1);
    const Vec y = body->boundary_ray(body->interior_point(), d2);
    if (distance2(x, y) < params.min_pair_gap_rel * body->diameter()) continue;
    // The premise excludes chords lying on the boundary.
    if (body->segment_on_boundary(x, y)) {
      ++skipped;
      continue;
    }
    const Vec z = body->sample_interior(rng);

    std::vector<double> dvals;
    double factor = 0.5;
    for (int k = 1; k <= params.k_max; ++k, factor *= 0.5) {
      const Vec xk = lerp(x, z, factor);
      const Vec yk = lerp(y, z, factor);
      dvals.push_back(dist(xk, yk) - std::max(dist(xk, z), dist(yk, z)));
    }
    bool tail_increasing = true;
    for (int j = static_cast<int>(dvals.size()) - params.tail_window;
         j + 1 < static_cast<int>(dvals.size()); ++j) {
      if (j < 0) continue;
      if (dvals[static_cast<std::size_t>(j) + 1] <= dvals[static_cast<std::size_t>(j)] - params.tail_tol) {
        tail_increasing = false;
      }
    }
    const double growth = dvals.back() - dvals.front();
    const double margin = params.growth_threshold - growth;  // > 0 means too little growth
    report.worst_margin = std::max(report.worst_margin, margin);
    if (!tail_increasing || growth <= params.growth_threshold) ++report.n_violations;
    ++report.n_samples;
  }
  report.details["skipped_common_facet_pairs"] = skipped;
  if (negative) {
    report.details["expects_violations"] = true;
    report.status = report.n_violations > 0 ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    report.status = report.n_violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  }
  if (report.n_samples == 0) report.status = CheckStatus::Inconclusive;
  return report;
}

// ---------------------------------------------------------------------------
// arg tanh(|x-y|/diam) lower bound on the disc and the bidisc.

inline CheckReport check_kobayashi_bound(long n, std::uint64_t seed, double slack = 1e-12,
                                         std::optional<double> diam_override = std::nullopt) {
  const bool negative = diam_override.has_value();
  const std::string name = negative ? "kobayashi-negative" : "kobayashi";
  const json cfg{{"n", n}, {"slack", slack}, {"diam_override", diam_override.value_or(0.0)}};

  CheckReport report;
  report.check_name = name;
  report.seed = seed;
  report.config_digest = config_digest(name, cfg, seed);
  report.worst_margin = -std::numeric_limits<double>::infinity();

  const MetricInstance disc = MetricInstance::poincare();
  const MetricInstance bidisc = MetricInstance::polydisc(2);
  const MetricInstance* instances[] = {&disc, &bidisc};
  int stream = 0;
  for (const MetricInstance* m : instances) {
    Rng rng = derive_stream(seed, static_cast<std::uint64_t>(stream++));
    const double diam = diam_override.value_or(*m->norm_diameter());
    for (long i = 0; i < n; ++i) {
      const Vec z = m->sample_point(rng);
      const Vec w = m->sample_point(rng);
      if (distance2(z, w) >= diam * (1.0 - 1e-12)) continue;
      const double margin = kobayashi_lower_bound(diam, z, w) - m->distance(z, w) - slack;
      report.worst_margin = std::max(report.worst_margin, margin);
      if (margin > 0.0) ++report.n_violations;
      ++report.n_samples;
    }
  }
  if (negative) {
    report.details["expects_violations"] = true;
    report.status = report.n_violations > 0 ? CheckStatus::Pass : CheckStatus::Fail;
  } else {
    report.status = report.n_violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Uniform convergence of escaping iterates to a single boundary point.

struct WolffDenjoyConfig {
  int n_seeds = 5;
  int n_test_points = 100;
  double test_radius = 2.5;  // metric radius of the bounded test set
  DenjoyWolffParams dw;
  double tol_dw = 1e-3;
  double tail_tol = 1e-6;
  double tail_fraction = 0.25;  // portion of the curve checked for monotonicity
};

inline CheckReport check_wolff_denjoy(const MetricInstance& metric, const Map& map,
                                      std::uint64_t seed, const WolffDenjoyConfig& cfg = {}) {
  const json cfg_json{{"n_seeds", cfg.n_seeds},
                      {"n_test_points", cfg.n_test_points},
                      {"test_radius", cfg.test_radius},
                      {"n_steps_curve", cfg.dw.n_steps_curve},
                      {"n_steps_omega", cfg.dw.n_steps_omega},
                      {"tol_dw", cfg.tol_dw}};
  CheckReport report;
  report.check_name = "wolff-denjoy";
  report.seed = seed;
  report.config_digest = config_digest(report.check_name, cfg_json, seed);

  const ConvexBody& body = *metric.body();
  Rng seed_rng = derive_stream(seed, 0);
  std::vector<Vec> seeds;
  for (int i = 0; i < cfg.n_seeds; ++i) {
    for (;;) {
      const Vec x = body.sample_interior(seed_rng);
      if (metric.distance(x, body.interior_point()) <= cfg.test_radius) {
        seeds.push_back(x);
        break;
      }
    }
  }
  Rng test_rng = derive_stream(seed, 1);
  std::vector<Vec> test_set;
  while (static_cast<int>(test_set.size()) < cfg.n_test_points) {
    const Vec x = body.sample_interior(test_rng);
    if (metric.distance(x, body.interior_point()) <= cfg.test_radius) test_set.push_back(x);
  }

  try {
    const DenjoyWolffResult dw = denjoy_wolff(metric, map, seeds, test_set, cfg.dw);
    report.n_samples = static_cast<long>(dw.sup_curve.size());
    const double final_sup = dw.sup_curve.back();
    double worst_tail_increase = -std::numeric_limits<double>::infinity();
    const std::size_t tail_start = static_cast<std::size_t>(
        (1.0 - cfg.tail_fraction) * static_cast<double>(dw.sup_curve.size()));
    long tail_violations = 0;
    for (std::size_t i = std::max<std::size_t>(tail_start, 1); i < dw.sup_curve.size(); ++i) {
      const double increase = dw.sup_curve[i] - dw.sup_curve[i - 1] - cfg.tail_tol;
      worst_tail_increase = std::max(worst_tail_increase, increase);
      if (increase > 0.0) ++tail_violations;
    }
    report.n_violations = tail_violations + (final_sup < cfg.tol_dw ? 0 : 1);
    report.worst_margin = std::max(final_sup - cfg.tol_dw, worst_tail_increase);
    report.details["xi"] = dw.xi;
    report.details["final_sup"] = final_sup;
    report.status = report.n_violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  } catch (const RegimeError& e) {
    report.status = CheckStatus::Inconclusive;
    report.details["reason"] = e.what();
  } catch (const ClusterError& e) {
    report.status = CheckStatus::Fail;
    report.n_violations = 1;
    report.details["reason"] = e.what();
  }
  return report;
}

inline CheckReport check_wolff_denjoy_semigroup(const MetricInstance& metric, const Semigroup& sg,
                                                double t_step, int n_times, std::uint64_t seed,
                                                WolffDenjoyConfig cfg = {}) {
  cfg.dw.n_steps_curve = n_times;
  cfg.dw.n_steps_omega = std::max(cfg.dw.n_steps_omega, 10 * n_times);
  CheckReport report = check_wolff_denjoy(metric, sg.time_map(t_step), seed, cfg);
  report.check_name = "wolff-denjoy-semigroup";
  report.details["t_step"] = t_step;
  return report;
}

// ---------------------------------------------------------------------------
// Attractor inclusions: every estimated omega point, projected to the
// boundary, must lie in ch(xi) and ch(ch(xi)); additionally the deep
// horoball boundary trace must lie in ch(xi). Facet activation of estimated
// points is widened to the cluster resolution.

struct InclusionConfig {
  std::vector<Vec> seeds;        // explicit attractor seeds; sampled when empty
  int n_seeds = 24;
  std::vector<Vec> probe_seeds;  // limit-point estimation seeds; sampled when empty
  int n_probe_seeds = 4;
  double probe_radius = 1.5;
  AttractorParams attractor_params{{100000, 0.25, 1e-3}, {}};
  DenjoyWolffParams dw;
  double face_tol = kDefaultFaceTol;
  double bridge_radius = -4.0;
  int bridge_grid = 96;
  double bridge_pull_rel = 5e-3;
};

inline CheckReport check_attractor_inclusions(const MetricInstance& metric, const Map& map,
                                              std::uint64_t seed, InclusionConfig cfg = {}) {
  const ConvexBody& body = *metric.body();
  if (!body.is_polytopal()) {
    throw std::invalid_argument("check_attractor_inclusions: polytopal body required");
  }
  const json cfg_json{{"n_seeds", cfg.n_seeds},
                      {"n_probe_seeds", cfg.n_probe_seeds},
                      {"n_steps", cfg.attractor_params.omega.n_steps},
                      {"bridge_radius", cfg.bridge_radius},
                      {"bridge_grid", cfg.bridge_grid}};
  CheckReport report;
  report.check_name = "attractor-inclusions";
  report.seed = seed;
  report.config_digest = config_digest(report.check_name, cfg_json, seed);
  report.worst_margin = 0.0;

  Rng rng = derive_stream(seed, 0);
  if (cfg.seeds.empty()) {
    for (int i = 0; i < cfg.n_seeds; ++i) cfg.seeds.push_back(body.sample_interior(rng));
  }
  if (cfg.probe_seeds.empty()) {
    while (static_cast<int>(cfg.probe_seeds.size()) < cfg.n_probe_seeds) {
      const Vec x = body.sample_interior(rng);
      if (metric.distance(x, body.interior_point()) <= cfg.probe_radius) cfg.probe_seeds.push_back(x);
    }
  }

  Vec xi;
  try {
    cfg.dw.n_steps_curve = 0;
    const DenjoyWolffResult dw = denjoy_wolff(metric, map, cfg.probe_seeds, {}, cfg.dw);
    xi = dw.xi;
  } catch (const RegimeError& e) {
    report.status = CheckStatus::Inconclusive;
    report.details["reason"] = e.what();
    return report;
  } catch (const ClusterError& e) {
    report.status = CheckStatus::Fail;
    report.n_violations = 1;
    report.details["reason"] = e.what();
    return report;
  }

  // Estimated points carry cluster-scale uncertainty, so their facet
  // activation is read at that resolution.
  const double loose_tol =
      std::max(cfg.face_tol, 2.0 * cfg.attractor_params.omega.cluster_radius);
  const AttractorEstimate est = attractor(metric, map, cfg.seeds, cfg.attractor_params);

  long in_ch_failures = 0;
  long ch_of_ch_failures = 0;
  json omega_records = json::array();
  for (const Cluster& c : est.clusters) {
    const Vec omega_b = body.project_to_boundary(c.representative);
    const bool direct = body.in_ch(omega_b, xi, loose_tol);
    const bool two_step = body.ch_of_ch_membership(omega_b, xi, loose_tol);
    if (!direct) ++in_ch_failures;
    if (!two_step) ++ch_of_ch_failures;
    omega_records.push_back(
        json{{"omega", omega_b}, {"in_ch", direct}, {"ch_of_ch", two_step}, {"multiplicity", c.multiplicity}});
    ++report.n_samples;
  }

  // Bridge: boundary shell members of the deep horoball must already lie in
  // ch(xi).
  long bridge_failures = 0;
  long bridge_members = 0;
  {
    const HoroballSpec spec{body.interior_point(), xi, cfg.bridge_radius, HoroballKind::Big};
    const double pull = cfg.bridge_pull_rel * body.diameter();
    Rng dir_rng = derive_stream(seed, 2);
    for (int k = 0; k < cfg.bridge_grid; ++k) {
      Vec dir(body.dimension());
      double len = 0.0;
      do {
        for (double& v : dir) v = dir_rng.uniform(-1.0, 1.0);
        len = norm2(dir);
      } while (len < 1e-3);
      const Vec w = body.boundary_ray(body.interior_point(), dir);
      const Vec to_pole = sub(spec.pole, w);
      const Vec probe = add(w, scale(to_pole, pull / norm2(to_pole)));
      const auto estimate = horofunction_estimate(metric, spec, probe);
      if (estimate.lo <= cfg.bridge_radius) {
        ++bridge_members;
        if (!body.in_ch(w, xi, loose_tol)) ++bridge_failures;
      }
    }
  }

  report.n_violations = in_ch_failures + ch_of_ch_failures + bridge_failures;
  report.worst_margin = static_cast<double>(report.n_violations);
  report.details["xi"] = xi;
  report.details["omega_points"] = omega_records;
  report.details["in_ch_failures"] = in_ch_failures;
  report.details["ch_of_ch_failures"] = ch_of_ch_failures;
  report.details["bridge_members"] = bridge_members;
  report.details["bridge_failures"] = bridge_failures;
  report.details["boundedness"] = horodyn::to_string(est.boundedness);
  report.status = report.n_violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

// Hand-built control: pushes most orbits toward the first vertex but sends a
// thin strip toward the opposite facet, so one omega point projects onto a
// facet sharing nothing with the estimated limit. Violates nonexpansiveness
// by construction.
inline Map stray_basin_control_map() {
  ConvexBody domain = ConvexBody::simplex(2);
  return Map::custom(
      domain,
      [](const Vec& x) {
        const Vec target = (x[0] < 0.05) ? Vec{0.001, 0.5} : Vec{1.0, 0.0};
        return lerp(x, target, 0.5);
      },
      "stray-basin-control", false);
}

inline CheckReport check_attractor_inclusions_negative(std::uint64_t seed) {
  const MetricInstance metric = MetricInstance::hilbert(ConvexBody::simplex(2));
  InclusionConfig cfg;
  cfg.seeds = {Vec{0.4, 0.3}, Vec{0.3, 0.2}, Vec{0.25, 0.5}, Vec{0.02, 0.5}};
  cfg.probe_seeds = {Vec{0.4, 0.3}, Vec{0.35, 0.25}};
  cfg.attractor_params.omega.n_steps = 4000;
  cfg.dw.n_steps_omega = 8000;
  CheckReport report = check_attractor_inclusions(metric, stray_basin_control_map(), seed, cfg);
  report.check_name = "attractor-inclusions-negative";
  report.details["expects_violations"] = true;
  report.status = report.n_violations > 0 ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

// ---------------------------------------------------------------------------
// Attractor of the flow equals the attractor of one time map.

struct SemigroupEqualityConfig {
  int n_seeds = 10;
  AttractorParams attractor_params{{20000, 0.25, 1e-3}, {}};
};

inline CheckReport check_semigroup_attractor_equality(const MetricInstance& metric,
                                                      const Semigroup& sg, double t0,
                                                      std::uint64_t seed,
                                                      const SemigroupEqualityConfig& cfg = {}) {
  const json cfg_json{{"t0", t0},
                      {"n_seeds", cfg.n_seeds},
                      {"n_steps", cfg.attractor_params.omega.n_steps},
                      {"cluster_radius", cfg.attractor_params.omega.cluster_radius}};
  CheckReport report;
  report.check_name = "semigroup-attractor";
  report.seed = seed;
  report.config_digest = config_digest(report.check_name, cfg_json, seed);

  const ConvexBody& body = *metric.body();
  Rng rng = derive_stream(seed, 0);
  std::vector<Vec> seeds;
  for (int i = 0; i < cfg.n_seeds; ++i) seeds.push_back(body.sample_interior(rng));

  const SemigroupAttractorResult result = semigroup_attractor(metric, sg, t0, seeds, cfg.attractor_params);
  const double tol = 2.0 * cfg.attractor_params.omega.cluster_radius;
  report.n_samples = static_cast<long>(seeds.size());
  report.worst_margin = result.hausdorff - tol;
  report.details["hausdorff"] = result.hausdorff;
  report.details["tolerance"] = tol;
  report.details["skeleton_clusters"] = result.skeleton.clusters.size();
  report.details["dense_clusters"] = result.dense.clusters.size();
  if (result.skeleton.low_confidence || result.dense.low_confidence) {
    report.status = CheckStatus::Inconclusive;
    return report;
  }
  report.n_violations = result.hausdorff < tol ? 0 : 1;
  report.status = report.n_violations == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

// Negative control: attractors of two different flows with different limits.
inline CheckReport check_semigroup_attractor_negative(std::uint64_t seed) {
  const MetricInstance metric = MetricInstance::hilbert(ConvexBody::simplex(1));
  const Semigroup toward_first(Mat{{0, 1}, {0, 0}});
  const Semigroup toward_second(Mat{{0, 0}, {1, 0}});
  const json cfg_json{{"control", "mismatched-generators"}};

  CheckReport report;
  report.check_name = "semigroup-attractor-negative";
  report.seed = seed;
  report.config_digest = config_digest(report.check_name, cfg_json, seed);

  Rng rng = derive_stream(seed, 0);
  std::vector<Vec> seeds;
  for (int i = 0; i < 8; ++i) seeds.push_back(metric.body()->sample_interior(rng));
  AttractorParams params;
  params.omega.n_steps = 20000;

  const AttractorEstimate a = attractor(metric, toward_first.time_map(1.0), seeds, params);
  const AttractorEstimate b = attractor(metric, toward_second.time_map(1.0), seeds, params);
  const double h = hausdorff_distance(a.representatives(), b.representatives());
  report.n_samples = static_cast<long>(seeds.size());
  report.worst_margin = h - 2e-3;
  report.n_violations = h < 2e-3 ? 0 : 1;
  report.details["hausdorff"] = h;
  report.details["expects_violations"] = true;
  report.status = report.n_violations > 0 ? CheckStatus::Pass : CheckStatus::Fail;
  return report;
}

}  // namespace horodyn::verify
