#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "horodyn/expm.hpp"
#include "horodyn/linalg.hpp"
#include "horodyn/lp.hpp"
#include "horodyn/rng.hpp"

using namespace horodyn;

namespace {

Mat unit_square_rows() {
  return Mat{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
}

}  // namespace

TEST_CASE("lp maximizes a coordinate over the unit square") {
  const Mat g = unit_square_rows();
  const Vec h{1, 1, 1, 1};
  auto r = lp_maximize(g, h, Vec{1, 0});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  r = lp_maximize(g, h, Vec{-1, 0});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  r = lp_maximize(g, h, Vec{1, 1});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lp detects unbounded and infeasible problems") {
  // Half-plane x1 <= 1: maximizing x2 is unbounded.
  Mat g(1, 2, 0.0);
  g(0, 0) = 1.0;
  const auto unbounded = lp_maximize(g, Vec{1}, Vec{0, 1});
  CHECK(unbounded.status == LpStatus::Unbounded);

  // x <= -1 and -x <= 0 cannot both hold.
  Mat g2{{1}, {-1}};
  const auto infeasible = lp_maximize(g2, Vec{-1, 0}, Vec{1});
  CHECK(infeasible.status == LpStatus::Infeasible);
}

TEST_CASE("lp handles negative right-hand sides through phase one") {
  // x >= 2 and x <= 5, maximize -x: optimum at x = 2.
  Mat g{{-1}, {1}};
  const auto r = lp_maximize(g, Vec{-2, 5}, Vec{-1});
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("lp feasibility of facet intersections") {
  const Mat g = unit_square_rows();
  const Vec h{1, 1, 1, 1};
  // Right and top facets meet at (1, 1).
  Mat gi(6, 2, 0.0);
  Vec hi(6, 0.0);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 2; ++j) gi(i, j) = g(i, j);
    hi[i] = 1.0;
  }
  gi(4, 0) = -1.0;
  hi[4] = -1.0;  // x1 >= 1
  gi(5, 1) = -1.0;
  hi[5] = -1.0;  // x2 >= 1
  CHECK(lp_feasible(gi, hi));

  // Right and left facets are disjoint.
  gi(5, 0) = 1.0;
  gi(5, 1) = 0.0;
  hi[5] = -1.0;  // -x1 >= 1
  CHECK_FALSE(lp_feasible(gi, hi));
}

TEST_CASE("lp random boxes recover their corners") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(4);
    Vec lo(n), hi(n), c(n);
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = rng.uniform(-3.0, 0.0);
      hi[j] = rng.uniform(0.5, 4.0);
      c[j] = rng.uniform(-1.0, 1.0);
    }
    Mat g(2 * n, n, 0.0);
    Vec h(2 * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      g(2 * j, j) = 1.0;
      h[2 * j] = hi[j];
      g(2 * j + 1, j) = -1.0;
      h[2 * j + 1] = -lo[j];
    }
    const auto r = lp_maximize(g, h, c);
    REQUIRE(r.status == LpStatus::Optimal);
    double expected = 0.0;
    for (std::size_t j = 0; j < n; ++j) expected += c[j] > 0.0 ? c[j] * hi[j] : c[j] * lo[j];
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
  }
}

namespace {

// All vertices of a 2-D polytope by enumerating facet pairs.
std::vector<Vec> polygon_vertices(const Mat& g, const Vec& h) {
  std::vector<Vec> vertices;
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = i + 1; j < g.rows; ++j) {
      const double det = g(i, 0) * g(j, 1) - g(i, 1) * g(j, 0);
      if (std::abs(det) < 1e-9) continue;
      const Vec v{(h[i] * g(j, 1) - h[j] * g(i, 1)) / det,
                  (g(i, 0) * h[j] - g(j, 0) * h[i]) / det};
      bool feasible = true;
      for (std::size_t k = 0; k < g.rows && feasible; ++k) {
        if (g(k, 0) * v[0] + g(k, 1) * v[1] > h[k] + 1e-9) feasible = false;
      }
      if (feasible) vertices.push_back(v);
    }
  }
  return vertices;
}

}  // namespace

TEST_CASE("lp agrees with vertex enumeration on random polygons") {
  Rng rng(2718);
  for (int trial = 0; trial < 30; ++trial) {
    // Normals at jittered angles covering the circle keep the region bounded.
    const int m = 5 + static_cast<int>(rng.uniform_index(4));
    Mat g(m, 2, 0.0);
    Vec h(m, 0.0);
    for (int i = 0; i < m; ++i) {
      const double angle = 2.0 * M_PI * i / m + rng.uniform(-0.3, 0.3);
      g(i, 0) = std::cos(angle);
      g(i, 1) = std::sin(angle);
      h[i] = rng.uniform(0.5, 2.0);
    }
    const auto vertices = polygon_vertices(g, h);
    REQUIRE(vertices.size() >= 3);
    for (int obj = 0; obj < 5; ++obj) {
      const Vec c{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const auto r = lp_maximize(g, h, c);
      REQUIRE(r.status == LpStatus::Optimal);
      double best = -1e300;
      for (const Vec& v : vertices) best = std::max(best, dot(c, v));
      CHECK(r.value == doctest::Approx(best).epsilon(1e-8));
    }
  }
}

TEST_CASE("expm matches the closed form for a nilpotent generator") {
  const Mat a{{0, 1}, {0, 0}};
  for (double t : {0.0, 0.5, 1.0, 10.0, 1000.0}) {
    const Mat e = expm(a, t);
    CHECK(e(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e(0, 1) == doctest::Approx(t).epsilon(1e-13));
    CHECK(e(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("expm matches scalar exponentials on a diagonalizable matrix") {
  // A = [[a, b], [b, a]] has eigenvalues a +- b with known exponential.
  const double a = 0.7, b = 0.3, t = 1.3;
  const Mat m{{a, b}, {b, a}};
  const Mat e = expm(m, t);
  const double ep = std::exp(t * (a + b)), em = std::exp(t * (a - b));
  CHECK(e(0, 0) == doctest::Approx(0.5 * (ep + em)).epsilon(1e-12));
  CHECK(e(0, 1) == doctest::Approx(0.5 * (ep - em)).epsilon(1e-12));
}

TEST_CASE("expm satisfies the semigroup law") {
  const Mat a{{0.1, 0.8, 0.0}, {0.2, -0.3, 0.5}, {0.0, 0.4, 0.2}};
  const Mat e1 = expm(a, 0.7);
  const Mat e2 = expm(a, 1.9);
  const Mat sum = expm(a, 2.6);
  const Mat prod = mat_mul(e2, e1);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(prod.a[i] == doctest::Approx(sum.a[i]).epsilon(1e-11));
  }
}

TEST_CASE("cholesky solve round-trips") {
  const Mat q{{1.5, 0.3}, {0.3, 0.9}};
  const auto l = cholesky(q);
  REQUIRE(l.has_value());
  const Vec b{1.0, -2.0};
  const Vec x = cholesky_solve(*l, b);
  const Vec back = mat_vec(q, x);
  CHECK(back[0] == doctest::Approx(b[0]).epsilon(1e-12));
  CHECK(back[1] == doctest::Approx(b[1]).epsilon(1e-12));

  const Mat not_spd{{1.0, 2.0}, {2.0, 1.0}};
  CHECK_FALSE(cholesky(not_spd).has_value());
}

TEST_CASE("rng streams are deterministic and independent of order") {
  Rng a = derive_stream(42, 3);
  Rng b = derive_stream(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c = derive_stream(42, 4);
  CHECK(c.next_u64() != derive_stream(42, 3).next_u64());
}
