#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "horodyn/geometry.hpp"

using namespace horodyn;

namespace {

ConvexBody unit_square() { return ConvexBody::box(Vec{-1, -1}, Vec{1, 1}); }

}  // namespace

TEST_CASE("classify on the unit square") {
  const ConvexBody sq = unit_square();
  CHECK(sq.classify(Vec{0, 0}) == PointClass::Interior);
  CHECK(sq.classify(Vec{1, 0}) == PointClass::Boundary);
  CHECK(sq.classify(Vec{2, 0}) == PointClass::Exterior);
  CHECK(sq.classify(Vec{1.0 - 1e-12, 0}) == PointClass::Boundary);
  CHECK(sq.classify(Vec{1.0 - 1e-6, 0}) == PointClass::Interior);
  CHECK_THROWS_AS(sq.classify(Vec{0.0}), std::invalid_argument);
}

TEST_CASE("construction rejects degenerate polytopes") {
  // Empty interior: x <= 0 and -x <= 0 pin x = 0.
  CHECK_THROWS_AS(ConvexBody::hpolytope(Mat{{1}, {-1}}, Vec{0, 0}), std::invalid_argument);
  // Unbounded: single half-plane.
  Mat half(1, 2, 0.0);
  half(0, 0) = 1.0;
  CHECK_THROWS_AS(ConvexBody::hpolytope(half, Vec{1}), std::invalid_argument);
  // Infeasible.
  CHECK_THROWS_AS(ConvexBody::hpolytope(Mat{{1}, {-1}}, Vec{-2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexBody::ellipsoid(Vec{0, 0}, Mat{{1, 2}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexBody::ball(Vec{0}, -1.0), std::invalid_argument);
}

TEST_CASE("chord endpoints on interval, square, simplex") {
  const ConvexBody iv = ConvexBody::interval(-1, 1);
  Chord c = iv.chord_endpoints(Vec{0}, Vec{0.5});
  CHECK(c.a[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(c.b[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.t_lo < 0.0);
  CHECK(c.t_hi > 1.0);

  const ConvexBody sq = unit_square();
  c = sq.chord_endpoints(Vec{0, 0}, Vec{0.5, 0});
  CHECK(c.a[0] == doctest::Approx(-1.0));
  CHECK(c.a[1] == doctest::Approx(0.0));
  CHECK(c.b[0] == doctest::Approx(1.0));
  CHECK(c.b[1] == doctest::Approx(0.0));

  // Facet-by-facet clip of the corner simplex.
  const ConvexBody s2 = ConvexBody::simplex(2);
  c = s2.chord_endpoints(Vec{0.25, 0.25}, Vec{0.5, 0.25});
  CHECK(c.a[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(c.a[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(c.b[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(c.b[1] == doctest::Approx(0.25).epsilon(1e-12));

  CHECK_THROWS_AS(sq.chord_endpoints(Vec{0, 0}, Vec{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(sq.chord_endpoints(Vec{0, 0}, Vec{1.5, 0}), std::invalid_argument);
}

TEST_CASE("chord order and consistency properties") {
  const ConvexBody bodies[] = {unit_square(), ConvexBody::simplex(2),
                               ConvexBody::ellipsoid(Vec{0.1, -0.05}, Mat{{1.5, 0.3}, {0.3, 0.9}}),
                               ConvexBody::ball(Vec{0.0, 0.0}, 1.0)};
  Rng rng(11);
  for (const auto& body : bodies) {
    for (int trial = 0; trial < 200; ++trial) {
      const Vec x = body.sample_interior(rng);
      const Vec y = body.sample_interior(rng);
      if (distance2(x, y) < 1e-9) continue;
      const Chord c = body.chord_endpoints(x, y);
      CHECK(c.t_lo < 0.0);
      CHECK(c.t_hi > 1.0);
      CHECK(body.classify(c.a) == PointClass::Boundary);
      CHECK(body.classify(c.b) == PointClass::Boundary);
      const Chord r = body.chord_endpoints(y, x);
      CHECK(distance2(c.a, r.b) < 1e-9);
      CHECK(distance2(c.b, r.a) < 1e-9);
    }
  }
}

TEST_CASE("active facets on square and simplex") {
  const ConvexBody sq = unit_square();
  // Rows are ordered +x1, -x1, +x2, -x2.
  auto fs = sq.active_facets(Vec{1, 0});
  CHECK(fs.facet_indices == std::vector<int>{0});
  fs = sq.active_facets(Vec{1, 1});
  CHECK(fs.facet_indices == std::vector<int>{0, 2});

  const ConvexBody s2 = ConvexBody::simplex(2);
  fs = s2.active_facets(Vec{0.5, 0.5});
  CHECK(fs.facet_indices == std::vector<int>{2});  // hypotenuse row

  CHECK_THROWS_AS(sq.active_facets(Vec{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(sq.active_facets(Vec{2, 0}), std::invalid_argument);
}

TEST_CASE("in_ch shared-facet membership on the square") {
  const ConvexBody sq = unit_square();
  CHECK(sq.in_ch(Vec{1, 0.5}, Vec{1, 0}));
  CHECK_FALSE(sq.in_ch(Vec{-1, 0}, Vec{1, 0}));
  CHECK(sq.in_ch(Vec{1, 0}, Vec{1, 0}));  // [x,x] lies on the boundary

  // Symmetry over sampled boundary pairs.
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Vec d1{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vec d2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm2(d1) < 0.1 || norm2(d2) < 0.1) continue;
    const Vec p = sq.boundary_ray(sq.interior_point(), d1);
    const Vec q = sq.boundary_ray(sq.interior_point(), d2);
    CHECK(sq.in_ch(p, q) == sq.in_ch(q, p));
  }
}

TEST_CASE("ch_of_ch membership via facet intersection feasibility") {
  const ConvexBody sq = unit_square();
  const Vec xi{1, 0};
  CHECK(sq.ch_of_ch_membership(Vec{0, 1}, xi));        // top shares corner (1,1) with right
  CHECK_FALSE(sq.ch_of_ch_membership(Vec{-1, 0.5}, xi));  // left never meets right
  CHECK(sq.ch_of_ch_membership(xi, xi));
}

TEST_CASE("segment_on_boundary exact and sampled") {
  const ConvexBody sq = unit_square();
  CHECK(sq.segment_on_boundary(Vec{1, -1}, Vec{1, 1}));
  CHECK_FALSE(sq.segment_on_boundary(Vec{1, 0}, Vec{-1, 0}));
  CHECK_THROWS_AS(sq.segment_on_boundary(Vec{0, 0}, Vec{1, 0}), std::invalid_argument);

  const ConvexBody el = ConvexBody::ellipsoid(Vec{0, 0}, Mat{{1, 0}, {0, 4}});
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Vec d1{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Vec d2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm2(d1) < 0.1 || norm2(d2) < 0.1) continue;
    const Vec p = el.boundary_ray(el.interior_point(), d1);
    const Vec q = el.boundary_ray(el.interior_point(), d2);
    if (distance2(p, q) < 1e-3) continue;
    CHECK_FALSE(el.segment_on_boundary(p, q));
  }
}

TEST_CASE("diameter values and exactness flags") {
  CHECK(unit_square().diameter() == doctest::Approx(2.0 * std::sqrt(2.0)));
  CHECK(unit_square().diameter_exact());
  CHECK(ConvexBody::ball(Vec{0, 0}, 1.0).diameter() == doctest::Approx(2.0));
  CHECK(ConvexBody::ball(Vec{0, 0}, 1.0).diameter_exact());
  CHECK(ConvexBody::interval(-1, 1).diameter() == doctest::Approx(2.0));
  CHECK(ConvexBody::simplex(2).diameter() == doctest::Approx(std::sqrt(2.0)));
  CHECK(ConvexBody::simplex(1).diameter() == doctest::Approx(1.0));

  // Rotated half-spaces: bounding-box diagonal is only an upper bound.
  const double c = std::sqrt(0.5);
  const ConvexBody diamond = ConvexBody::hpolytope(
      Mat{{c, c}, {-c, c}, {c, -c}, {-c, -c}}, Vec{1, 1, 1, 1});
  CHECK_FALSE(diamond.diameter_exact());
  CHECK(diamond.diameter() >= 2.0 * std::sqrt(2.0) - 1e-9);
}

TEST_CASE("sample_interior is reproducible and lands inside") {
  const ConvexBody s3 = ConvexBody::simplex(3);
  Rng a(99), b(99);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = s3.sample_interior(a);
    const Vec y = s3.sample_interior(b);
    CHECK(x == y);  // bit-for-bit
    CHECK(s3.classify(x) == PointClass::Interior);
  }
}

TEST_CASE("project_to_boundary returns nearest boundary points") {
  const ConvexBody sq = unit_square();
  Vec p = sq.project_to_boundary(Vec{0.9, 0.2});
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(0.2));
  CHECK(sq.classify(p) == PointClass::Boundary);

  const ConvexBody ballb = ConvexBody::ball(Vec{0, 0}, 2.0);
  p = ballb.project_to_boundary(Vec{0.5, 0.0});
  CHECK(p[0] == doctest::Approx(2.0));

  // A boundary point projects to itself.
  p = sq.project_to_boundary(Vec{1.0, 0.3});
  CHECK(p == Vec{1.0, 0.3});
}

TEST_CASE("simplex lift round trip") {
  const Vec x{0.2, 0.3};
  const Vec p = simplex_lift(x);
  CHECK(p.size() == 3);
  CHECK(p[2] == doctest::Approx(0.5));
  const Vec back = simplex_from_barycentric(p);
  CHECK(back[0] == doctest::Approx(0.2));
  CHECK(back[1] == doctest::Approx(0.3));
}

TEST_CASE("mid-dimensional bodies behave like the planar ones") {
  // A 4-d box cut by two diagonal half-spaces.
  Mat a(10, 4, 0.0);
  Vec b(10, 1.0);
  for (int j = 0; j < 4; ++j) {
    a(2 * j, j) = 1.0;
    a(2 * j + 1, j) = -1.0;
  }
  for (int j = 0; j < 4; ++j) a(8, j) = 0.5;
  a(9, 0) = -0.3;
  a(9, 2) = 0.9;
  const ConvexBody body = ConvexBody::hpolytope(std::move(a), std::move(b));
  CHECK(body.classify(body.interior_point()) == PointClass::Interior);

  Rng rng(314);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = body.sample_interior(rng);
    const Vec y = body.sample_interior(rng);
    if (distance2(x, y) < 1e-6) continue;
    const Chord c = body.chord_endpoints(x, y);
    CHECK(body.classify(c.a) == PointClass::Boundary);
    CHECK(body.classify(c.b) == PointClass::Boundary);
    const Chord r = body.chord_endpoints(y, x);
    CHECK(distance2(c.a, r.b) < 1e-9);
  }

  const ConvexBody s6 = ConvexBody::simplex(6);
  Rng rng6(315);
  const Vec p = s6.sample_interior(rng6);
  CHECK(s6.classify(p) == PointClass::Interior);
  CHECK(s6.diameter() == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("chebyshev interior point of the square is the center") {
  const ConvexBody sq = unit_square();
  CHECK(std::abs(sq.interior_point()[0]) < 1e-9);
  CHECK(std::abs(sq.interior_point()[1]) < 1e-9);
  CHECK(sq.box_lo() == Vec{-1, -1});
  CHECK(sq.box_hi() == Vec{1, 1});
}
