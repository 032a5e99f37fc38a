#pragma once

// Horoball membership through approach sequences. The defining limits
// quantify over all sequences converging to the boundary center; here a
// canonical radial family w_k = xi + lambda^k (anchor - xi) is used and the
// min/max over a tail window brackets the limit. That family is exact in the
// one-dimensional model and one-sided evidence elsewhere.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "horodyn/geometry.hpp"
#include "horodyn/metrics.hpp"
#include "horodyn/rng.hpp"

namespace horodyn {

enum class HoroballKind { Small, Big };

struct HoroballSpec {
  Vec pole;    // interior
  Vec center;  // on the boundary
  double radius = 0.0;
  HoroballKind kind = HoroballKind::Big;
};

// Depth is capped near lambda^steps ~ 1e-8: probing much closer to the
// boundary than that makes the facet margins indistinguishable from the
// coordinate quantization of the center point, and the estimates pick up
// noise far above the tolerances stacked on them.
struct ApproachPolicy {
  double lambda = 0.5;
  int steps = 26;
  int tail = 8;
};

struct HorofunctionEstimate {
  double lo = 0.0;  // tail min; brackets the liminf (big horoball)
  double hi = 0.0;  // tail max; brackets the limsup (small horoball)
  bool stable = true;

  double value_for(HoroballKind kind) const { return kind == HoroballKind::Big ? lo : hi; }
};

inline bool horoball_member(const HorofunctionEstimate& est, const HoroballSpec& spec) {
  return est.value_for(spec.kind) <= spec.radius;
}

// g_k = d(y, w_k) - d(w_k, pole) along the radial approach to the center.
// The family is anchored at the pole unless an explicit anchor is given
// (poles can then be compared along identical sequences).
inline HorofunctionEstimate horofunction_estimate(const MetricInstance& metric,
                                                  const HoroballSpec& spec, const Vec& y,
                                                  const ApproachPolicy& policy = {},
                                                  const Vec* anchor = nullptr) {
  const ConvexBody* body = metric.body();
  if (body == nullptr) {
    throw std::invalid_argument("horofunction_estimate: domain-backed metric required");
  }
  if (policy.tail < 1 || policy.steps < policy.tail || !(policy.lambda > 0.0) ||
      !(policy.lambda < 1.0)) {
    throw std::invalid_argument("horofunction_estimate: bad approach policy");
  }
  if (!body->strictly_inside(y)) {
    throw std::invalid_argument("horofunction_estimate: evaluation point must be interior");
  }
  if (!body->strictly_inside(spec.pole)) {
    throw std::invalid_argument("horofunction_estimate: pole must be interior");
  }
  const Vec& base = anchor ? *anchor : spec.pole;

  HorofunctionEstimate est;
  est.lo = std::numeric_limits<double>::infinity();
  est.hi = -std::numeric_limits<double>::infinity();
  double factor = policy.lambda;
  for (int k = 1; k <= policy.steps; ++k, factor *= policy.lambda) {
    if (k <= policy.steps - policy.tail) continue;
    const Vec w = lerp(spec.center, base, factor);
    if (!body->strictly_inside(w)) {
      throw std::invalid_argument("horofunction_estimate: approach point left the domain");
    }
    const double g = metric.distance(y, w) - metric.distance(w, spec.pole);
    est.lo = std::min(est.lo, g);
    est.hi = std::max(est.hi, g);
  }
  est.stable = (est.hi - est.lo) <= 1e-6;
  return est;
}

struct StarShapeParams {
  double eps_pull_rel = 1e-7;  // inward pull, relative to the diameter
  double tol_star = 1e-6;      // acceptance slack for segment membership
  int max_candidates = 4000;   // interior samples inspected for members
  ApproachPolicy policy;
};

struct StarShapeViolation {
  Vec eta;
  double s = 0.0;
  double margin = 0.0;  // estimate.lo - radius at the probed point
};

struct StarShapeReport {
  int n_members = 0;
  int n_probes = 0;
  bool no_members = false;
  double worst_margin = -std::numeric_limits<double>::infinity();
  std::vector<StarShapeViolation> violations;
};

// Star-shapedness of a big horoball about its center: for members eta, the
// segment [eta, center] should stay inside the closed horoball. Segment
// points are pulled inward toward the pole before evaluation because the
// horofunction only exists at interior points.
inline StarShapeReport star_shape_check(const MetricInstance& metric, const HoroballSpec& spec,
                                        int n_eta, int n_s, std::uint64_t seed,
                                        const StarShapeParams& params = {}) {
  if (spec.kind != HoroballKind::Big) {
    throw std::invalid_argument("star_shape_check: big horoballs only");
  }
  const ConvexBody* body = metric.body();
  if (body == nullptr) throw std::invalid_argument("star_shape_check: domain-backed metric required");

  const double pull = params.eps_pull_rel * body->diameter();
  StarShapeReport report;
  Rng rng = derive_stream(seed, 0);

  std::vector<Vec> members;
  for (int attempt = 0; attempt < params.max_candidates && static_cast<int>(members.size()) < n_eta;
       ++attempt) {
    const Vec candidate = body->sample_interior(rng);
    const auto est = horofunction_estimate(metric, spec, candidate, params.policy);
    if (est.lo <= spec.radius) members.push_back(candidate);
  }
  report.n_members = static_cast<int>(members.size());
  if (members.empty()) {
    report.no_members = true;
    return report;
  }

  for (const Vec& eta : members) {
    for (int i = 1; i <= n_s; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n_s + 1);
      const Vec on_segment = lerp(eta, spec.center, s);
      Vec probe = on_segment;
      const Vec to_pole = sub(spec.pole, on_segment);
      const double dist_to_pole = norm2(to_pole);
      if (dist_to_pole > pull) {
        probe = add(on_segment, scale(to_pole, pull / dist_to_pole));
      }
      const auto est = horofunction_estimate(metric, spec, probe, params.policy);
      const double margin = est.lo - spec.radius;
      report.worst_margin = std::max(report.worst_margin, margin);
      ++report.n_probes;
      if (margin > params.tol_star) {
        report.violations.push_back({eta, s, margin});
      }
    }
  }
  return report;
}

struct ShrinkParams {
  double pull_rel = 5e-3;  // inward offset of the boundary shell, relative to the diameter
  ApproachPolicy policy;
};

// Diameter of the boundary trace of the big horoball at each radius in a
// decreasing list: boundary points are sampled by rays from the pole, pulled
// inward onto a thin shell, and kept when their horofunction estimate stays
// below r. The trace always includes the center, so a diameter of zero means
// the trace has collapsed onto it.
inline std::vector<double> intersection_shrink_check(const MetricInstance& metric, const Vec& pole,
                                                     const Vec& zeta,
                                                     const std::vector<double>& r_list, int grid,
                                                     std::uint64_t seed = 0,
                                                     const ShrinkParams& params = {}) {
  const ConvexBody* body = metric.body();
  if (body == nullptr) {
    throw std::invalid_argument("intersection_shrink_check: domain-backed metric required");
  }
  for (std::size_t i = 1; i < r_list.size(); ++i) {
    if (!(r_list[i] < r_list[i - 1])) {
      throw std::invalid_argument("intersection_shrink_check: radii must strictly decrease");
    }
  }
  const std::size_t n = body->dimension();
  const double pull = params.pull_rel * body->diameter();

  std::vector<Vec> shell_points;   // boundary points
  if (n == 1) {
    shell_points.push_back(body->boundary_ray(pole, Vec{1.0}));
    shell_points.push_back(body->boundary_ray(pole, Vec{-1.0}));
  } else if (n == 2) {
    for (int k = 0; k < grid; ++k) {
      const double angle = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(grid);
      shell_points.push_back(body->boundary_ray(pole, Vec{std::cos(angle), std::sin(angle)}));
    }
  } else {
    Rng rng = derive_stream(seed, 1);
    for (int k = 0; k < grid; ++k) {
      Vec dir(n);
      double len = 0.0;
      do {
        for (double& v : dir) v = rng.uniform(-1.0, 1.0);
        len = norm2(dir);
      } while (len < 1e-3);
      shell_points.push_back(body->boundary_ray(pole, dir));
    }
  }

  HoroballSpec spec{pole, zeta, 0.0, HoroballKind::Big};
  std::vector<double> lo_values;
  lo_values.reserve(shell_points.size());
  for (const Vec& w : shell_points) {
    const Vec to_pole = sub(pole, w);
    const Vec probe = add(w, scale(to_pole, pull / norm2(to_pole)));
    lo_values.push_back(horofunction_estimate(metric, spec, probe, params.policy).lo);
  }

  std::vector<double> diameters;
  diameters.reserve(r_list.size());
  for (double r : r_list) {
    std::vector<const Vec*> members;
    for (std::size_t i = 0; i < shell_points.size(); ++i) {
      if (lo_values[i] <= r) members.push_back(&shell_points[i]);
    }
    members.push_back(&zeta);
    double diam = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        diam = std::max(diam, distance2(*members[i], *members[j]));
      }
    }
    diameters.push_back(diam);
  }
  return diameters;
}

}  // namespace horodyn
