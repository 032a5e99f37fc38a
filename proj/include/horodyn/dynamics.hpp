#pragma once

// Nonexpansive map families and one-parameter flows on convex domains, with
// orbit diagnostics, boundedness classification, omega-limit estimation,
// attractor merging and boundary limit (Denjoy-Wolff style) estimates.
//
// Projective-linear maps act on the corner simplex through barycentric
// coordinates: x -> drop(normalize(A lift(x))). Flows are generated by
// matrices with nonnegative off-diagonal entries, so exp(tA) is nonnegative
// and f_t is the induced projective map.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "horodyn/expm.hpp"
#include "horodyn/geometry.hpp"
#include "horodyn/metrics.hpp"
#include "horodyn/rng.hpp"

namespace horodyn {

struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClusterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_nonnegative_no_zero_column(const Mat& a) {
  if (a.rows != a.cols || a.rows < 2) {
    throw std::invalid_argument("projective map: square matrix of size >= 2 required");
  }
  for (double v : a.a) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("projective map: matrix must be nonnegative");
    }
  }
  for (std::size_t j = 0; j < a.cols; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i) col += a(i, j);
    if (col <= 0.0) throw std::invalid_argument("projective map: zero column");
  }
}

// exp(t * metzler) is nonnegative; sweep out the fp dust before using it as
// a projective map.
inline Mat clamp_nonnegative(Mat m, double tol = 1e-12) {
  const double scale = mat_norm_inf(m) + 1.0;
  for (double& v : m.a) {
    if (v < 0.0) {
      if (v < -tol * scale) throw std::logic_error("clamp_nonnegative: genuinely negative entry");
      v = 0.0;
    }
  }
  return m;
}

inline Vec projective_apply(const Mat& a, const Vec& x) {
  return simplex_from_barycentric(mat_vec(a, simplex_lift(x)));
}

}  // namespace detail

class Map {
 public:
  static Map projective_linear(Mat a) {
    detail::require_nonnegative_no_zero_column(a);
    const std::size_t dim = a.rows - 1;
    Map m(ConvexBody::simplex(dim), true);
    m.impl_ = ProjData{std::move(a)};
    return m;
  }

  static Map affine(Mat linear, Vec offset, ConvexBody domain, bool claimed_nonexpansive = true) {
    if (linear.rows != domain.dimension() || linear.cols != domain.dimension() ||
        offset.size() != domain.dimension()) {
      throw std::invalid_argument("affine map: dimension mismatch");
    }
    Map m(std::move(domain), claimed_nonexpansive);
    m.impl_ = AffineData{std::move(linear), std::move(offset)};
    return m;
  }

  static Map identity(ConvexBody domain) {
    const std::size_t n = domain.dimension();
    return affine(Mat::identity(n), Vec(n, 0.0), std::move(domain), true);
  }

  static Map compose(std::vector<Map> parts) {
    if (parts.empty()) throw std::invalid_argument("compose: empty composition");
    for (const Map& p : parts) {
      if (p.domain().dimension() != parts.front().domain().dimension()) {
        throw std::invalid_argument("compose: mixed dimensions");
      }
    }
    bool claimed = true;
    for (const Map& p : parts) claimed = claimed && p.claimed_nonexpansive();
    Map m(parts.front().domain(), claimed);
    m.impl_ = CompData{std::move(parts)};
    return m;
  }

  static Map custom(ConvexBody domain, std::function<Vec(const Vec&)> fn, std::string label,
                    bool claimed_nonexpansive) {
    Map m(std::move(domain), claimed_nonexpansive);
    m.impl_ = CustomData{std::move(fn), std::move(label)};
    return m;
  }

  const ConvexBody& domain() const { return domain_; }
  bool claimed_nonexpansive() const { return claimed_; }
  bool is_projective_linear() const { return std::holds_alternative<ProjData>(impl_); }
  const Mat& matrix() const { return std::get<ProjData>(impl_).a; }

  Vec apply(const Vec& x) const {
    require_dimension(x, domain_.dimension(), "map input");
    if (const auto* p = std::get_if<ProjData>(&impl_)) {
      // Image of the closed simplex stays in the closed simplex.
      return detail::projective_apply(p->a, x);
    }
    Vec image;
    if (const auto* a = std::get_if<AffineData>(&impl_)) {
      image = add(mat_vec(a->m, x), a->c);
    } else if (const auto* c = std::get_if<CustomData>(&impl_)) {
      image = c->fn(x);
    } else {
      image = x;
      for (const Map& part : std::get<CompData>(impl_).parts) image = part.apply(image);
      return image;
    }
    if (domain_.classify(image) == PointClass::Exterior) {
      throw std::runtime_error("map image left the closed domain");
    }
    return image;
  }

  Vec operator()(const Vec& x) const { return apply(x); }

 private:
  struct ProjData {
    Mat a;
  };
  struct AffineData {
    Mat m;
    Vec c;
  };
  struct CustomData {
    std::function<Vec(const Vec&)> fn;
    std::string label;
  };
  struct CompData {
    std::vector<Map> parts;
  };

  Map(ConvexBody domain, bool claimed) : domain_(std::move(domain)), claimed_(claimed) {}

  std::variant<ProjData, AffineData, CustomData, CompData> impl_;
  ConvexBody domain_;
  bool claimed_ = true;
};

// f_t(x) = drop(normalize(exp(tA) lift(x))) for a generator with nonnegative
// off-diagonal entries.
class Semigroup {
 public:
  explicit Semigroup(Mat generator) : generator_(std::move(generator)), domain_(ConvexBody::simplex(1)) {
    if (generator_.rows != generator_.cols || generator_.rows < 2) {
      throw std::invalid_argument("semigroup: square generator of size >= 2 required");
    }
    for (std::size_t i = 0; i < generator_.rows; ++i) {
      for (std::size_t j = 0; j < generator_.cols; ++j) {
        if (!std::isfinite(generator_(i, j))) {
          throw std::invalid_argument("semigroup: non-finite generator entry");
        }
        if (i != j && generator_(i, j) < 0.0) {
          throw std::invalid_argument("semigroup: off-diagonal entries must be nonnegative");
        }
      }
    }
    domain_ = ConvexBody::simplex(generator_.rows - 1);
  }

  const Mat& generator() const { return generator_; }
  const ConvexBody& domain() const { return domain_; }

  Vec apply(double t, const Vec& x) const {
    if (!(t >= 0.0)) throw std::invalid_argument("semigroup: t must be nonnegative");
    if (t == 0.0) return x;  // f_0 is the identity
    return detail::projective_apply(detail::clamp_nonnegative(expm(generator_, t)), x);
  }

  // f_t packaged as a projective-linear map.
  Map time_map(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("time_map: t must be positive");
    return Map::projective_linear(detail::clamp_nonnegative(expm(generator_, t)));
  }

 private:
  Mat generator_;
  ConvexBody domain_;
};

struct OrbitTrace {
  std::vector<Vec> points;        // points[0] is the start
  std::vector<double> d_to_start;  // metric distance of each point to the start
  std::vector<double> step_d;      // metric distance between consecutive points
  bool truncated = false;          // stopped within boundary_tol of the boundary
};

inline OrbitTrace iterate(const MetricInstance& metric, const Map& map, const Vec& x0, int n_steps) {
  const ConvexBody* body = metric.body();
  if (body == nullptr || body->dimension() != map.domain().dimension()) {
    throw std::invalid_argument("iterate: metric and map domains disagree");
  }
  if (body->classify(x0) != PointClass::Interior) {
    throw std::invalid_argument("iterate: start point must be interior");
  }
  OrbitTrace trace;
  trace.points.reserve(static_cast<std::size_t>(n_steps) + 1);
  trace.points.push_back(x0);
  trace.d_to_start.push_back(0.0);
  Vec current = x0;
  for (int n = 0; n < n_steps; ++n) {
    Vec next = map.apply(current);
    if (body->classify(next) != PointClass::Interior) {
      trace.truncated = true;
      break;
    }
    trace.step_d.push_back(metric.distance(current, next));
    trace.d_to_start.push_back(metric.distance(x0, next));
    trace.points.push_back(next);
    current = std::move(next);
  }
  return trace;
}

inline OrbitTrace semigroup_orbit(const MetricInstance& metric, const Semigroup& sg, const Vec& x0,
                                  const std::vector<double>& t_grid) {
  const ConvexBody* body = metric.body();
  if (body == nullptr || body->dimension() != sg.domain().dimension()) {
    throw std::invalid_argument("semigroup_orbit: metric and flow domains disagree");
  }
  if (t_grid.empty()) throw std::invalid_argument("semigroup_orbit: empty time grid");
  OrbitTrace trace;
  Vec prev;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (k > 0 && !(t_grid[k] > t_grid[k - 1])) {
      throw std::invalid_argument("semigroup_orbit: time grid must increase");
    }
    Vec p = sg.apply(t_grid[k], x0);
    if (body->classify(p) != PointClass::Interior) {
      trace.truncated = true;
      break;
    }
    if (k == 0) {
      trace.d_to_start.push_back(0.0);
    } else {
      trace.step_d.push_back(metric.distance(prev, p));
      trace.d_to_start.push_back(metric.distance(trace.points.front(), p));
    }
    trace.points.push_back(p);
    prev = std::move(p);
  }
  if (trace.points.empty()) throw std::invalid_argument("semigroup_orbit: start point not interior");
  return trace;
}

enum class Boundedness { Bounded, Unbounded, Undecided };

inline const char* to_string(Boundedness b) {
  switch (b) {
    case Boundedness::Bounded: return "bounded";
    case Boundedness::Unbounded: return "unbounded";
    case Boundedness::Undecided: return "undecided";
  }
  return "undecided";
}

struct BoundednessParams {
  int window = 64;
  double r_bound = 10.0;   // a recent return below this radius means bounded
  double r_esc = 25.0;     // a window minimum beyond this means escape
  double r_growth = 2.0;   // total monotone window-min growth that counts as escape
  double growth_tol = 1e-6;
};

// Verdict from the distance-to-start diagnostic. A truncated trace reached
// the boundary band, which is escape outright. Otherwise a bounded
// subsequence forces a bounded orbit, so one recent small value decides
// Bounded; escape is declared either beyond r_esc or from persistent
// monotone growth of the window minima, which catches maps whose metric
// escape is only logarithmic in the step count.
inline Boundedness classify_boundedness(const OrbitTrace& trace, const BoundednessParams& params = {}) {
  if (trace.truncated) return Boundedness::Unbounded;
  const std::vector<double>& d = trace.d_to_start;
  const std::size_t window = static_cast<std::size_t>(params.window);
  if (d.size() < window) throw std::invalid_argument("classify_boundedness: trace shorter than one window");

  const std::size_t n_windows = d.size() / window;
  const std::size_t start = d.size() - n_windows * window;
  std::vector<double> mins(n_windows, std::numeric_limits<double>::infinity());
  for (std::size_t w = 0; w < n_windows; ++w) {
    for (std::size_t i = 0; i < window; ++i) {
      mins[w] = std::min(mins[w], d[start + w * window + i]);
    }
  }
  const double last_min = mins.back();

  bool exceeds_all = true;
  for (std::size_t w = 0; w + 1 < n_windows; ++w) {
    if (mins[w] >= last_min) exceeds_all = false;
  }
  bool monotone = n_windows >= 3;
  for (std::size_t w = 0; w + 1 < n_windows && monotone; ++w) {
    if (mins[w + 1] <= mins[w] + params.growth_tol) monotone = false;
  }
  const bool escape_trend = monotone && (mins.back() - mins.front() >= params.r_growth);

  if ((last_min > params.r_esc && exceeds_all) || escape_trend) return Boundedness::Unbounded;
  if (last_min < params.r_bound) return Boundedness::Bounded;
  return Boundedness::Undecided;
}

struct NonexpansiveViolation {
  Vec x;
  Vec y;
  double ratio = 0.0;
};

struct NonexpansiveReport {
  double max_ratio = 0.0;
  int n_pairs = 0;
  std::vector<NonexpansiveViolation> violations;
};

struct NonexpansiveParams {
  double min_pair_distance = 1e-8;
  double ratio_tol = 1e-9;
};

inline NonexpansiveReport verify_nonexpansive(const MetricInstance& metric, const Map& map,
                                              int n_pairs, std::uint64_t seed,
                                              const NonexpansiveParams& params = {}) {
  NonexpansiveReport report;
  Rng rng = derive_stream(seed, 0);
  for (int k = 0; k < n_pairs; ++k) {
    const Vec x = metric.sample_point(rng);
    const Vec y = metric.sample_point(rng);
    const double d = metric.distance(x, y);
    if (d <= params.min_pair_distance) continue;
    const double ratio = metric.distance(map.apply(x), map.apply(y)) / d;
    ++report.n_pairs;
    report.max_ratio = std::max(report.max_ratio, ratio);
    if (ratio > 1.0 + params.ratio_tol) report.violations.push_back({x, y, ratio});
  }
  return report;
}

struct Cluster {
  Vec representative;
  int multiplicity = 0;
};

// Greedy norm-ball clustering in input order; representatives are the first
// member seen. The result is sorted lexicographically, so merging is
// order-independent downstream.
inline std::vector<Cluster> cluster_points(const std::vector<Vec>& points, double radius) {
  std::vector<Cluster> clusters;
  for (const Vec& p : points) {
    bool placed = false;
    for (Cluster& c : clusters) {
      if (distance2(c.representative, p) <= radius) {
        ++c.multiplicity;
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({p, 1});
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return lex_less(a.representative, b.representative); });
  return clusters;
}

struct OmegaParams {
  int n_steps = 20000;
  double tail_fraction = 0.25;
  double cluster_radius = 1e-3;
};

inline std::vector<Cluster> omega_limit(const MetricInstance& metric, const Map& map, const Vec& x0,
                                        const OmegaParams& params = {}) {
  const OrbitTrace trace = iterate(metric, map, x0, params.n_steps);
  const std::size_t len = trace.points.size();
  const std::size_t tail =
      std::max<std::size_t>(1, static_cast<std::size_t>(params.tail_fraction * static_cast<double>(len)));
  std::vector<Vec> tail_points(trace.points.end() - static_cast<std::ptrdiff_t>(tail), trace.points.end());
  return cluster_points(tail_points, params.cluster_radius);
}

struct AttractorParams {
  OmegaParams omega;
  BoundednessParams bounded;
  int n_threads = 1;  // per-seed orbits are independent; results merge by index
};

struct AttractorEstimate {
  std::vector<Cluster> clusters;
  Boundedness boundedness = Boundedness::Undecided;
  bool low_confidence = false;
  std::optional<Vec> dw_point;  // boundary projection of the single cluster, unbounded regime only

  std::vector<Vec> representatives() const {
    std::vector<Vec> out;
    out.reserve(clusters.size());
    for (const Cluster& c : clusters) out.push_back(c.representative);
    return out;
  }
};

inline AttractorEstimate attractor(const MetricInstance& metric, const Map& map,
                                   const std::vector<Vec>& seeds, const AttractorParams& params = {}) {
  if (seeds.empty()) throw std::invalid_argument("attractor: at least one seed required");

  struct PerSeed {
    std::vector<Vec> reps;
    Boundedness verdict = Boundedness::Undecided;
  };
  std::vector<PerSeed> per_seed(seeds.size());
  const auto run_seed = [&](std::size_t idx) {
    const OrbitTrace trace = iterate(metric, map, seeds[idx], params.omega.n_steps);
    const std::size_t len = trace.points.size();
    const std::size_t tail = std::max<std::size_t>(
        1, static_cast<std::size_t>(params.omega.tail_fraction * static_cast<double>(len)));
    std::vector<Vec> tail_points(trace.points.end() - static_cast<std::ptrdiff_t>(tail),
                                 trace.points.end());
    for (const auto& c : cluster_points(tail_points, params.omega.cluster_radius)) {
      per_seed[idx].reps.push_back(c.representative);
    }
    if (trace.truncated || trace.d_to_start.size() >= static_cast<std::size_t>(params.bounded.window)) {
      per_seed[idx].verdict = classify_boundedness(trace, params.bounded);
    }
  };
  const int n_threads = std::max(1, params.n_threads);
  if (n_threads == 1 || seeds.size() < 2) {
    for (std::size_t i = 0; i < seeds.size(); ++i) run_seed(i);
  } else {
    std::vector<std::thread> workers;
    const std::size_t stride = static_cast<std::size_t>(n_threads);
    for (std::size_t t = 0; t < stride; ++t) {
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < seeds.size(); i += stride) run_seed(i);
      });
    }
    for (auto& w : workers) w.join();
  }

  AttractorEstimate est;
  std::vector<Vec> reps;
  int n_bounded = 0, n_unbounded = 0, n_undecided = 0;
  for (const PerSeed& ps : per_seed) {
    reps.insert(reps.end(), ps.reps.begin(), ps.reps.end());
    switch (ps.verdict) {
      case Boundedness::Bounded: ++n_bounded; break;
      case Boundedness::Unbounded: ++n_unbounded; break;
      case Boundedness::Undecided: ++n_undecided; break;
    }
  }
  std::sort(reps.begin(), reps.end(), lex_less);
  est.clusters = cluster_points(reps, params.omega.cluster_radius);
  if (n_undecided == static_cast<int>(seeds.size())) {
    est.low_confidence = true;
    est.boundedness = Boundedness::Undecided;
  } else if (n_unbounded > 0 && n_bounded == 0) {
    est.boundedness = Boundedness::Unbounded;
  } else if (n_bounded > 0 && n_unbounded == 0) {
    est.boundedness = Boundedness::Bounded;
  } else {
    est.boundedness = Boundedness::Undecided;
  }
  if (est.boundedness == Boundedness::Unbounded && est.clusters.size() == 1) {
    est.dw_point = metric.body()->project_to_boundary(est.clusters.front().representative);
  }
  return est;
}

inline double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  const auto one_sided = [&](const std::vector<Vec>& from, const std::vector<Vec>& to) {
    for (const Vec& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& q : to) best = std::min(best, distance2(p, q));
      worst = std::max(worst, best);
    }
  };
  one_sided(a, b);
  one_sided(b, a);
  return worst;
}

struct SemigroupAttractorResult {
  AttractorEstimate skeleton;  // iterates of f_{t0}
  AttractorEstimate dense;     // golden-ratio time sampling, unaligned with t0
  double hausdorff = 0.0;
};

inline SemigroupAttractorResult semigroup_attractor(const MetricInstance& metric, const Semigroup& sg,
                                                    double t0, const std::vector<Vec>& seeds,
                                                    const AttractorParams& params = {}) {
  if (!(t0 > 0.0)) throw std::invalid_argument("semigroup_attractor: t0 must be positive");
  SemigroupAttractorResult result;
  const Map skeleton = sg.time_map(t0);
  result.skeleton = attractor(metric, skeleton, seeds, params);

  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  AttractorParams dense_params = params;
  dense_params.omega.n_steps =
      static_cast<int>(std::ceil(static_cast<double>(params.omega.n_steps) / golden));
  const Map dense_map = sg.time_map(t0 * golden);
  result.dense = attractor(metric, dense_map, seeds, dense_params);

  result.hausdorff = hausdorff_distance(result.skeleton.representatives(), result.dense.representatives());
  return result;
}

// Deviation norm for convergence-to-boundary statements: componentwise in
// barycentric coordinates on simplex domains, Euclidean elsewhere.
inline double convergence_norm(const ConvexBody& body, const Vec& x, const Vec& target) {
  if (body.is_simplex()) return distance_inf(simplex_lift(x), simplex_lift(target));
  return distance2(x, target);
}

struct DenjoyWolffParams {
  int n_steps_omega = 200000;  // horizon for the limit point estimate
  int n_steps_curve = 10000;   // horizon for the sup-distance curve
  double cluster_radius = 1e-3;
  double tail_fraction = 0.25;
  BoundednessParams bounded;
};

struct DenjoyWolffResult {
  Vec xi;      // boundary projection of the estimated limit
  Vec xi_raw;  // interior cluster representative
  std::vector<double> sup_curve;  // sup over the test set of the deviation from xi, per step
};

// Estimates the common boundary limit of an escaping map and tracks the
// uniform deviation of a bounded test set from it. The limit orbits run an
// order of magnitude past the curve horizon so the estimate sits deeper
// toward the boundary than any curve point.
inline DenjoyWolffResult denjoy_wolff(const MetricInstance& metric, const Map& map,
                                      const std::vector<Vec>& seeds, const std::vector<Vec>& test_set,
                                      const DenjoyWolffParams& params = {}) {
  if (seeds.empty()) throw std::invalid_argument("denjoy_wolff: at least one seed required");
  const ConvexBody& body = *metric.body();

  const OrbitTrace probe = iterate(metric, map, seeds.front(), std::max(params.n_steps_curve, 4096));
  if (classify_boundedness(probe, params.bounded) != Boundedness::Unbounded) {
    throw RegimeError("denjoy_wolff: probe orbit is not escaping");
  }

  OmegaParams omega{params.n_steps_omega, params.tail_fraction, params.cluster_radius};
  std::vector<Vec> reps;
  for (const Vec& seed : seeds) {
    for (const auto& c : omega_limit(metric, map, seed, omega)) reps.push_back(c.representative);
  }
  std::sort(reps.begin(), reps.end(), lex_less);
  const auto merged = cluster_points(reps, params.cluster_radius);
  if (merged.size() != 1) {
    throw ClusterError("denjoy_wolff: omega estimate has " + std::to_string(merged.size()) +
                       " clusters at this resolution");
  }

  DenjoyWolffResult result;
  // Mean over contributing representatives, then projected to the boundary.
  Vec mean(body.dimension(), 0.0);
  for (const Vec& r : reps) mean = add(mean, r);
  result.xi_raw = scale(mean, 1.0 / static_cast<double>(reps.size()));
  result.xi = body.project_to_boundary(result.xi_raw);

  if (!test_set.empty() && params.n_steps_curve > 0) {
    std::vector<Vec> points = test_set;
    result.sup_curve.reserve(static_cast<std::size_t>(params.n_steps_curve) + 1);
    for (int n = 0; n <= params.n_steps_curve; ++n) {
      double sup = 0.0;
      for (const Vec& p : points) sup = std::max(sup, convergence_norm(body, p, result.xi));
      result.sup_curve.push_back(sup);
      if (n < params.n_steps_curve) {
        for (Vec& p : points) p = map.apply(p);
      }
    }
  }
  return result;
}

struct FixedPointResult {
  Vec point;
  double residual = 0.0;
};

// Iterates each seed and reports an interior cluster point whose image
// displacement is below tol. Absence means the search found nothing, not
// that no fixed point exists.
inline std::optional<FixedPointResult> fixed_point_search(const MetricInstance& metric, const Map& map,
                                                          const std::vector<Vec>& seeds, double tol,
                                                          int n_steps = 5000) {
  const ConvexBody& body = *metric.body();
  for (const Vec& seed : seeds) {
    Vec current = seed;
    if (body.classify(current) != PointClass::Interior) continue;
    for (int n = 0; n < n_steps; ++n) {
      Vec next = map.apply(current);
      if (body.classify(next) != PointClass::Interior) break;
      const double step = distance2(current, next);
      current = std::move(next);
      if (step < 1e-15) break;
    }
    if (body.classify(current) != PointClass::Interior) continue;
    const double residual = distance2(map.apply(current), current);
    if (residual < tol) return FixedPointResult{current, residual};
  }
  return std::nullopt;
}

}  // namespace horodyn
