#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horodyn/dynamics.hpp"

using namespace horodyn;

namespace {

// Shear on barycentric coordinates of the 1-simplex; orbits drift to the
// first vertex like 1/n with no interior fixed point.
Map parabolic_map() { return Map::projective_linear(Mat{{1, 1}, {0, 1}}); }

// Strictly positive matrix; orbits converge to the interior point 1/2.
Map perron_map() { return Map::projective_linear(Mat{{2, 1}, {1, 2}}); }

Map jordan_map() { return Map::projective_linear(Mat{{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}); }

MetricInstance simplex_metric(std::size_t dim) {
  return MetricInstance::hilbert(ConvexBody::simplex(dim));
}

std::vector<Vec> sample_seeds(const ConvexBody& body, int count, std::uint64_t seed) {
  std::vector<Vec> seeds;
  Rng rng(seed);
  for (int i = 0; i < count; ++i) seeds.push_back(body.sample_interior(rng));
  return seeds;
}

}  // namespace

TEST_CASE("projective apply matches the barycentric closed form") {
  const Map f = parabolic_map();
  // (0.5, 0.5) -> (1.0, 0.5)/1.5 = (2/3, 1/3) in barycentric coordinates.
  const Vec image = f.apply(Vec{0.5});
  CHECK(image[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  const Vec lifted = simplex_lift(image);
  CHECK(lifted[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS(Map::projective_linear(Mat{{1, -1}, {0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Map::projective_linear(Mat{{1, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("semigroup evaluation matches the nilpotent closed form") {
  const Semigroup sg(Mat{{0, 1}, {0, 0}});
  // exp(tA) = [[1, t], [0, 1]].
  const Vec x{0.5};
  CHECK(sg.apply(0.0, x) == x);  // exact identity at t = 0
  CHECK(sg.apply(1.0, x)[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  const double t = 7.25;
  const double expected = (0.5 + t * 0.5) / (0.5 + (t + 1.0) * 0.5);
  CHECK(sg.apply(t, x)[0] == doctest::Approx(expected).epsilon(1e-12));

  CHECK_THROWS_AS(Semigroup(Mat{{0, -1}, {0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(sg.apply(-1.0, x), std::invalid_argument);
}

TEST_CASE("semigroup law holds on random triples") {
  const Semigroup sg(Mat{{-0.2, 0.7, 0.1}, {0.3, -0.5, 0.2}, {0.0, 0.4, -0.1}});
  const MetricInstance m = simplex_metric(2);
  Rng rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const double s = rng.uniform(0.0, 3.0);
    const double t = rng.uniform(0.0, 3.0);
    const Vec x = m.body()->sample_interior(rng);
    const Vec lhs = sg.apply(s + t, x);
    const Vec rhs = sg.apply(t, sg.apply(s, x));
    CHECK(m.distance(lhs, rhs) < 1e-9);
  }
  // Continuity at zero.
  const Vec x{0.2, 0.3};
  CHECK(distance2(sg.apply(1e-9, x), x) < 1e-8);
}

TEST_CASE("identity orbits are constant and classified bounded") {
  const MetricInstance m = simplex_metric(1);
  const Map id = Map::identity(*m.body());
  const OrbitTrace trace = iterate(m, id, Vec{0.3}, 200);
  CHECK(trace.points.size() == 201);
  for (double d : trace.d_to_start) CHECK(d == 0.0);
  CHECK(classify_boundedness(trace) == Boundedness::Bounded);

  const auto clusters = omega_limit(m, id, Vec{0.3}, {1000, 0.25, 1e-3});
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].representative[0] == doctest::Approx(0.3));
}

TEST_CASE("parabolic orbits escape to the vertex") {
  const MetricInstance m = simplex_metric(1);
  const Map f = parabolic_map();
  const OrbitTrace trace = iterate(m, f, Vec{0.5}, 8192);
  CHECK_FALSE(trace.truncated);
  // d_to_start grows without returning.
  CHECK(trace.d_to_start.back() > trace.d_to_start[100]);
  CHECK(classify_boundedness(trace) == Boundedness::Unbounded);

  const auto clusters = omega_limit(m, f, Vec{0.5}, {20000, 0.25, 1e-3});
  REQUIRE(clusters.size() == 1);
  CHECK(std::abs(clusters[0].representative[0] - 1.0) < 1e-3);
}

TEST_CASE("perron orbits settle at the interior eigen-direction") {
  const MetricInstance m = simplex_metric(1);
  const Map f = perron_map();
  const OrbitTrace trace = iterate(m, f, Vec{0.1}, 512);
  CHECK(classify_boundedness(trace) == Boundedness::Bounded);
  const auto clusters = omega_limit(m, f, Vec{0.1}, {512, 0.25, 1e-3});
  REQUIRE(clusters.size() == 1);
  CHECK(clusters[0].representative[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("step distances are nonincreasing for nonexpansive maps") {
  const MetricInstance m1 = simplex_metric(1);
  const MetricInstance m2 = simplex_metric(2);
  const struct {
    const MetricInstance* metric;
    Map map;
    Vec start;
  } cases[] = {
      {&m1, parabolic_map(), Vec{0.37}},
      {&m1, perron_map(), Vec{0.11}},
      {&m2, jordan_map(), Vec{0.2, 0.45}},
  };
  for (const auto& c : cases) {
    const OrbitTrace trace = iterate(*c.metric, c.map, c.start, 2000);
    for (std::size_t i = 1; i < trace.step_d.size(); ++i) {
      CHECK(trace.step_d[i] <= trace.step_d[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("semigroup orbit sampled at multiples of t0 equals the iterated time map") {
  const Semigroup sg(Mat{{0, 1}, {0, 0}});
  const MetricInstance m = simplex_metric(1);
  const double t0 = 0.7;
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(t0 * k);
  const OrbitTrace flow = semigroup_orbit(m, sg, Vec{0.4}, grid);
  const OrbitTrace discrete = iterate(m, sg.time_map(t0), Vec{0.4}, 40);
  REQUIRE(flow.points.size() == discrete.points.size());
  for (std::size_t k = 0; k < flow.points.size(); ++k) {
    CHECK(distance2(flow.points[k], discrete.points[k]) < 1e-10);
  }
}

TEST_CASE("verify_nonexpansive: identity, birkhoff bound, expansive control") {
  const MetricInstance m = simplex_metric(1);
  const auto id_report = verify_nonexpansive(m, Map::identity(*m.body()), 2000, 5);
  CHECK(id_report.max_ratio == 1.0);
  CHECK(id_report.violations.empty());

  // Contraction factor of a positive matrix: tanh(D/4) with D the projective
  // diameter of the column span; for [[2,1],[1,2]] that is exactly 1/3.
  const Map f = perron_map();
  const double delta = hilbert_cone(Vec{2, 1}, Vec{1, 2});
  CHECK(delta == doctest::Approx(std::log(4.0)));
  const double birkhoff = std::tanh(delta / 4.0);
  CHECK(birkhoff == doctest::Approx(1.0 / 3.0));
  const auto report = verify_nonexpansive(m, f, 5000, 6);
  CHECK(report.violations.empty());
  CHECK(report.max_ratio <= birkhoff + 1e-9);
  CHECK(report.max_ratio > 0.2);  // the bound is also nearly attained

  // Radial stretch toward the boundary expands the metric.
  const ConvexBody square = ConvexBody::box(Vec{-1, -1}, Vec{1, 1});
  const Map stretch = Map::custom(
      square,
      [](const Vec& x) {
        const double s = norm_inf(x);
        if (s < 1e-12) return x;
        const double rho = std::min(1.3 * s, 0.9 + 0.1 * s);
        return scale(x, rho / s);
      },
      "radial-stretch", false);
  const auto bad = verify_nonexpansive(MetricInstance::hilbert(square), stretch, 2000, 7);
  CHECK_FALSE(bad.violations.empty());
  CHECK(bad.max_ratio > 1.0 + 1e-6);
}

TEST_CASE("attractor merges per-seed omega estimates") {
  const MetricInstance m = simplex_metric(1);
  const ConvexBody& body = *m.body();

  // Identity: the attractor estimate is the clustered seed set itself.
  const auto seeds = sample_seeds(body, 12, 41);
  AttractorParams params;
  params.omega.n_steps = 256;
  const auto id_est = attractor(m, Map::identity(body), seeds, params);
  CHECK(id_est.boundedness == Boundedness::Bounded);
  CHECK(id_est.clusters.size() <= seeds.size());
  CHECK(id_est.clusters.size() >= 2);

  // Parabolic: all seeds share the vertex limit.
  AttractorParams long_params;
  long_params.omega.n_steps = 40000;
  const auto est = attractor(m, parabolic_map(), sample_seeds(body, 20, 42), long_params);
  CHECK(est.boundedness == Boundedness::Unbounded);
  REQUIRE(est.clusters.size() == 1);
  CHECK(std::abs(est.clusters[0].representative[0] - 1.0) < 1e-3);
  REQUIRE(est.dw_point.has_value());
  CHECK((*est.dw_point)[0] == 1.0);  // snaps onto the vertex exactly

  // Omega points of an escaping estimate project onto the boundary.
  for (const auto& c : est.clusters) {
    CHECK(body.classify(body.project_to_boundary(c.representative)) == PointClass::Boundary);
  }
}

TEST_CASE("discrete and dense-time semigroup attractors coincide") {
  const Semigroup sg(Mat{{0, 1}, {0, 0}});
  const MetricInstance m = simplex_metric(1);
  const auto seeds = sample_seeds(*m.body(), 10, 43);
  AttractorParams params;
  params.omega.n_steps = 20000;
  for (double t0 : {1.0, 0.37}) {
    const auto result = semigroup_attractor(m, sg, t0, seeds, params);
    CHECK(result.skeleton.boundedness == Boundedness::Unbounded);
    CHECK(result.hausdorff < 1e-3);
  }
}

TEST_CASE("denjoy-wolff estimate for the parabolic map") {
  const MetricInstance m = simplex_metric(1);
  const ConvexBody& body = *m.body();
  const auto seeds = sample_seeds(body, 5, 44);

  // Test set bounded in the metric: a fixed ball around the midpoint.
  std::vector<Vec> test_set;
  Rng rng(45);
  while (test_set.size() < 40) {
    const Vec x = body.sample_interior(rng);
    if (hilbert_cross_ratio(body, x, Vec{0.5}) <= 2.5) test_set.push_back(x);
  }

  DenjoyWolffParams params;
  params.n_steps_omega = 100000;
  params.n_steps_curve = 10000;
  const auto dw = denjoy_wolff(m, parabolic_map(), seeds, test_set, params);
  CHECK(dw.xi[0] == 1.0);
  REQUIRE(dw.sup_curve.size() == 10001);
  CHECK(dw.sup_curve.back() < 1e-3);
  for (std::size_t n = 1; n < dw.sup_curve.size(); ++n) {
    CHECK(dw.sup_curve[n] <= dw.sup_curve[n - 1] + 1e-6);
  }

  CHECK_THROWS_AS(denjoy_wolff(m, perron_map(), seeds, test_set, params), RegimeError);
}

TEST_CASE("denjoy-wolff for the jordan block on the 2-simplex") {
  const MetricInstance m = simplex_metric(2);
  const ConvexBody& body = *m.body();
  std::vector<Vec> seeds{Vec{0.3, 0.3}, Vec{0.25, 0.4}, Vec{0.4, 0.2}};
  std::vector<Vec> test_set;
  Rng rng(46);
  while (test_set.size() < 25) {
    const Vec x = body.sample_interior(rng);
    if (hilbert_cross_ratio(body, x, body.interior_point()) <= 2.5) test_set.push_back(x);
  }
  DenjoyWolffParams params;
  params.n_steps_omega = 400000;
  params.n_steps_curve = 50000;
  const auto dw = denjoy_wolff(m, jordan_map(), seeds, test_set, params);
  // The limit is the first barycentric vertex, (1, 0) in simplex coordinates.
  CHECK(distance2(dw.xi, Vec{1.0, 0.0}) < 2e-3);
  CHECK(dw.sup_curve.back() < 1e-3);
  for (std::size_t n = 1; n < dw.sup_curve.size(); ++n) {
    CHECK(dw.sup_curve[n] <= dw.sup_curve[n - 1] + 1e-6);
  }
}

TEST_CASE("fixed point search") {
  const MetricInstance m = simplex_metric(1);
  const ConvexBody& body = *m.body();
  const auto seeds = sample_seeds(body, 6, 47);

  const auto id_fp = fixed_point_search(m, Map::identity(body), seeds, 1e-10);
  REQUIRE(id_fp.has_value());
  CHECK(id_fp->residual == 0.0);
  CHECK(id_fp->point == seeds.front());

  const auto perron_fp = fixed_point_search(m, perron_map(), seeds, 1e-10);
  REQUIRE(perron_fp.has_value());
  CHECK(perron_fp->point[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(perron_fp->residual < 1e-10);

  CHECK_FALSE(fixed_point_search(m, parabolic_map(), seeds, 1e-10).has_value());
}

TEST_CASE("bounded images: flow segments of a bounded set stay in a computable ball") {
  const Semigroup sg(Mat{{-0.2, 0.7, 0.1}, {0.3, -0.5, 0.2}, {0.0, 0.4, -0.1}});
  const MetricInstance m = simplex_metric(2);
  const Vec ref = m.body()->interior_point();
  const auto points = sample_seeds(*m.body(), 15, 48);
  const double t0 = 2.0;

  double r = 0.0;
  for (const Vec& x : points) r = std::max(r, m.distance(x, ref));
  double r1 = 0.0;
  for (int k = 0; k <= 20; ++k) {
    r1 = std::max(r1, m.distance(sg.apply(t0 * k / 20.0, ref), ref));
  }
  for (const Vec& x : points) {
    for (int k = 0; k <= 20; ++k) {
      const double d = m.distance(sg.apply(t0 * k / 20.0, x), ref);
      CHECK(d <= r + r1 + 1e-9);
    }
  }
}

TEST_CASE("composition applies parts in order") {
  const Map f = parabolic_map();
  const Map ff = Map::compose({f, f});
  const Vec x{0.4};
  CHECK(ff.apply(x) == f.apply(f.apply(x)));
  CHECK(ff.claimed_nonexpansive());
  // Two shear steps equal the squared matrix map up to roundoff.
  const Map squared = Map::projective_linear(Mat{{1, 2}, {0, 1}});
  CHECK(ff.apply(x)[0] == doctest::Approx(squared.apply(x)[0]).epsilon(1e-14));
  CHECK_THROWS_AS(Map::compose({}), std::invalid_argument);
}

TEST_CASE("maps reject images escaping the domain") {
  const ConvexBody iv = ConvexBody::interval(-1, 1);
  const Map runaway = Map::custom(
      iv, [](const Vec& x) { return Vec{x[0] + 5.0}; }, "runaway", false);
  CHECK_THROWS_AS(runaway.apply(Vec{0.0}), std::runtime_error);
}
