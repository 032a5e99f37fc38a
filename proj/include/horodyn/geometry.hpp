#pragma once

// Bounded convex domains in R^n: H-polytopes, ellipsoids, balls and the open
// corner simplex, with interior/boundary classification, chord endpoints
// through the boundary, and the facet combinatorics behind the boundary
// segment operators ch(xi) and ch(ch(xi)).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "horodyn/linalg.hpp"
#include "horodyn/lp.hpp"
#include "horodyn/rng.hpp"

namespace horodyn {

constexpr double kDefaultBoundaryTol = 1e-10;
constexpr double kDefaultFaceTol = 1e-8;

enum class PointClass { Interior, Boundary, Exterior };

struct Chord {
  Vec a;  // boundary point behind x
  Vec b;  // boundary point beyond y
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct FaceSet {
  std::vector<int> facet_indices;  // sorted

  bool contains(int i) const {
    return std::binary_search(facet_indices.begin(), facet_indices.end(), i);
  }
  bool intersects(const FaceSet& other) const {
    std::size_t i = 0, j = 0;
    while (i < facet_indices.size() && j < other.facet_indices.size()) {
      if (facet_indices[i] == other.facet_indices[j]) return true;
      if (facet_indices[i] < other.facet_indices[j]) ++i;
      else ++j;
    }
    return false;
  }
  bool empty() const { return facet_indices.empty(); }
};

struct HPolytopeData {
  Mat a;
  Vec b;
};

struct EllipsoidData {
  Vec center;
  Mat shape;  // SPD; interior is (x-c)^T Q (x-c) < 1
};

struct BallData {
  Vec center;
  double radius = 0.0;
};

struct SimplexData {
  std::size_t dim = 0;  // { x : x_i > 0, sum x_i < 1 } in R^dim
};

// Barycentric coordinates of a corner-simplex point: (x_1..x_n, 1 - sum x_i).
inline Vec simplex_lift(const Vec& x) {
  Vec p(x.size() + 1);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    p[i] = x[i];
    s += x[i];
  }
  p[x.size()] = 1.0 - s;
  return p;
}

// Inverse of simplex_lift after normalization of a positive vector.
inline Vec simplex_from_barycentric(const Vec& p) {
  if (p.size() < 2) throw std::invalid_argument("simplex_from_barycentric: need >= 2 coordinates");
  double s = 0.0;
  for (double v : p) s += v;
  if (s <= 0.0) throw std::invalid_argument("simplex_from_barycentric: nonpositive mass");
  Vec x(p.size() - 1);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) x[i] = p[i] / s;
  return x;
}

class ConvexBody {
 public:
  static ConvexBody hpolytope(Mat a, Vec b, double boundary_tol = kDefaultBoundaryTol) {
    if (a.rows != b.size() || a.rows == 0 || a.cols == 0) {
      throw std::invalid_argument("hpolytope: inconsistent A, b");
    }
    require_finite(b, "hpolytope b");
    for (double v : a.a) {
      if (!std::isfinite(v)) throw std::invalid_argument("hpolytope A: non-finite entry");
    }
    ConvexBody body;
    body.boundary_tol_ = boundary_tol;
    body.dim_ = a.cols;
    body.shape_ = HPolytopeData{std::move(a), std::move(b)};
    body.init_polytope(std::get<HPolytopeData>(body.shape_));
    return body;
  }

  static ConvexBody box(const Vec& lo, const Vec& hi, double boundary_tol = kDefaultBoundaryTol) {
    if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("box: bad bounds");
    const std::size_t n = lo.size();
    Mat a(2 * n, n, 0.0);
    Vec b(2 * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!(lo[i] < hi[i])) throw std::invalid_argument("box: lo must be below hi");
      a(2 * i, i) = 1.0;
      b[2 * i] = hi[i];
      a(2 * i + 1, i) = -1.0;
      b[2 * i + 1] = -lo[i];
    }
    return hpolytope(std::move(a), std::move(b), boundary_tol);
  }

  static ConvexBody interval(double lo, double hi, double boundary_tol = kDefaultBoundaryTol) {
    return box(Vec{lo}, Vec{hi}, boundary_tol);
  }

  static ConvexBody ellipsoid(Vec center, Mat shape, double boundary_tol = kDefaultBoundaryTol) {
    require_finite(center, "ellipsoid center");
    if (shape.rows != shape.cols || shape.rows != center.size()) {
      throw std::invalid_argument("ellipsoid: shape must be n x n");
    }
    auto chol = cholesky(shape);
    if (!chol) throw std::invalid_argument("ellipsoid: shape matrix is not positive definite");
    ConvexBody body;
    body.boundary_tol_ = boundary_tol;
    body.dim_ = center.size();
    body.interior_point_ = center;
    body.chol_ = *chol;
    // Bounding half-width along axis j is sqrt((Q^-1)_jj).
    body.box_lo_.resize(body.dim_);
    body.box_hi_.resize(body.dim_);
    double diag = 0.0;
    for (std::size_t j = 0; j < body.dim_; ++j) {
      Vec e(body.dim_, 0.0);
      e[j] = 1.0;
      const double w = std::sqrt(cholesky_solve(body.chol_, e)[j]);
      body.box_lo_[j] = center[j] - w;
      body.box_hi_[j] = center[j] + w;
      diag += 4.0 * w * w;
    }
    body.diameter_ = std::sqrt(diag);
    body.diameter_exact_ = false;
    body.shape_ = EllipsoidData{std::move(center), std::move(shape)};
    return body;
  }

  static ConvexBody ball(Vec center, double radius, double boundary_tol = kDefaultBoundaryTol) {
    require_finite(center, "ball center");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball: radius must be positive");
    ConvexBody body;
    body.boundary_tol_ = boundary_tol;
    body.dim_ = center.size();
    body.interior_point_ = center;
    body.box_lo_.resize(body.dim_);
    body.box_hi_.resize(body.dim_);
    for (std::size_t j = 0; j < body.dim_; ++j) {
      body.box_lo_[j] = center[j] - radius;
      body.box_hi_[j] = center[j] + radius;
    }
    body.diameter_ = 2.0 * radius;
    body.diameter_exact_ = true;
    body.shape_ = BallData{std::move(center), radius};
    return body;
  }

  static ConvexBody simplex(std::size_t dim, double boundary_tol = kDefaultBoundaryTol) {
    if (dim == 0) throw std::invalid_argument("simplex: dimension must be >= 1");
    ConvexBody body;
    body.boundary_tol_ = boundary_tol;
    body.dim_ = dim;
    Mat a(dim + 1, dim, 0.0);
    Vec b(dim + 1, 0.0);
    for (std::size_t i = 0; i < dim; ++i) a(i, i) = -1.0;
    for (std::size_t j = 0; j < dim; ++j) a(dim, j) = 1.0;
    b[dim] = 1.0;
    body.hrep_ = HPolytopeData{std::move(a), std::move(b)};
    body.polytopal_ = true;
    body.interior_point_.assign(dim, 1.0 / static_cast<double>(dim + 1));
    body.box_lo_.assign(dim, 0.0);
    body.box_hi_.assign(dim, 1.0);
    body.diameter_ = (dim == 1) ? 1.0 : std::sqrt(2.0);  // farthest vertex pair
    body.diameter_exact_ = true;
    body.shape_ = SimplexData{dim};
    return body;
  }

  std::size_t dimension() const { return dim_; }
  double boundary_tol() const { return boundary_tol_; }
  bool is_polytopal() const { return polytopal_; }
  bool is_simplex() const { return std::holds_alternative<SimplexData>(shape_); }
  bool is_strictly_convex() const {
    return std::holds_alternative<EllipsoidData>(shape_) || std::holds_alternative<BallData>(shape_);
  }

  const HPolytopeData& facets() const {
    if (!polytopal_) throw std::logic_error("facets: body has no H-representation");
    return hrep_;
  }

  const Vec& interior_point() const { return interior_point_; }
  const Vec& box_lo() const { return box_lo_; }
  const Vec& box_hi() const { return box_hi_; }

  // Largest vertex-pair distance where that is cheap and exact (balls, the
  // simplex, axis-aligned boxes); otherwise the bounding-box diagonal, which
  // is an upper bound.
  double diameter() const { return diameter_; }
  bool diameter_exact() const { return diameter_exact_; }

  PointClass classify(const Vec& x) const {
    check_point(x);
    if (polytopal_) {
      bool on_face = false;
      for (std::size_t i = 0; i < hrep_.a.rows; ++i) {
        const double margin = hrep_.b[i] - row_dot(hrep_.a, i, x);
        const double tol = boundary_tol_ * (1.0 + std::abs(hrep_.b[i]));
        if (margin < -tol) return PointClass::Exterior;
        if (margin <= tol) on_face = true;
      }
      return on_face ? PointClass::Boundary : PointClass::Interior;
    }
    const double s = gauge(x);
    if (s > 1.0 + boundary_tol_) return PointClass::Exterior;
    if (s >= 1.0 - boundary_tol_) return PointClass::Boundary;
    return PointClass::Interior;
  }

  // Strict sign test with no tolerance band; distances stay evaluable on
  // points that sit inside the boundary band but off the boundary itself.
  bool strictly_inside(const Vec& x) const {
    check_point(x);
    if (polytopal_) {
      for (std::size_t i = 0; i < hrep_.a.rows; ++i) {
        if (row_dot(hrep_.a, i, x) >= hrep_.b[i]) return false;
      }
      return true;
    }
    return gauge(x) < 1.0;
  }

  // Parameter range {t : x + t*dir in closure(D)} for strictly interior x.
  // t_lo < 0 < t_hi always holds for a validated bounded body.
  std::pair<double, double> clip_line(const Vec& x, const Vec& dir) const {
    check_point(x);
    require_dimension(dir, dim_, "clip_line dir");
    if (polytopal_) {
      double t_lo = -std::numeric_limits<double>::infinity();
      double t_hi = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < hrep_.a.rows; ++i) {
        const double slope = row_dot(hrep_.a, i, dir);
        const double margin = hrep_.b[i] - row_dot(hrep_.a, i, x);
        if (slope > 0.0) t_hi = std::min(t_hi, margin / slope);
        else if (slope < 0.0) t_lo = std::max(t_lo, margin / slope);
        else if (margin < 0.0) throw std::logic_error("clip_line: base point outside facet");
      }
      if (!std::isfinite(t_lo) || !std::isfinite(t_hi)) {
        throw std::logic_error("clip_line: unbounded clip on a validated body");
      }
      return {t_lo, t_hi};
    }
    // (u + t d)^T Q (u + t d) = 1 with u = x - c, solved as a quadratic in t.
    const Vec u = sub(x, body_center());
    const Vec qu = apply_quadratic(u);
    const Vec qd = apply_quadratic(dir);
    const double alpha = dot(dir, qd);
    const double beta = 2.0 * dot(u, qd);
    const double gamma = dot(u, qu) - 1.0;
    const double disc = beta * beta - 4.0 * alpha * gamma;
    if (!(alpha > 0.0) || disc <= 0.0) throw std::logic_error("clip_line: degenerate quadratic clip");
    const double root = std::sqrt(disc);
    const double q = -0.5 * (beta + (beta >= 0.0 ? root : -root));
    double t1 = q / alpha;
    double t2 = (q != 0.0) ? gamma / q : -beta / alpha - t1;
    if (t1 > t2) std::swap(t1, t2);
    return {t1, t2};
  }

  // Both boundary points of the line through interior x and y, parametrized
  // as x + t (y - x): a at t_lo < 0, b at t_hi > 1.
  Chord chord_endpoints(const Vec& x, const Vec& y) const {
    check_point(x);
    check_point(y);
    const Vec d = sub(y, x);
    if (norm2(d) <= 1e-12) throw std::invalid_argument("chord_endpoints: coincident points");
    if (!strictly_inside(x) || !strictly_inside(y)) {
      throw std::invalid_argument("chord_endpoints: interior points required");
    }
    const auto [t_lo, t_hi] = clip_line(x, d);
    if (!(t_lo < 0.0) || !(t_hi > 1.0)) {
      throw std::logic_error("chord_endpoints: clip does not bracket the segment");
    }
    Chord c;
    c.t_lo = t_lo;
    c.t_hi = t_hi;
    c.a = add(x, scale(d, t_lo));
    c.b = add(x, scale(d, t_hi));
    return c;
  }

  // Indices i with |a_i . p - b_i| <= face_tol * (1 + |b_i|). The point must
  // lie on the boundary at that tolerance.
  FaceSet active_facets(const Vec& p, double face_tol = kDefaultFaceTol) const {
    const HPolytopeData& h = facets();
    check_point(p);
    FaceSet fs;
    for (std::size_t i = 0; i < h.a.rows; ++i) {
      const double residual = row_dot(h.a, i, p) - h.b[i];
      const double tol = face_tol * (1.0 + std::abs(h.b[i]));
      if (residual > tol) {
        throw std::invalid_argument("active_facets: point lies outside the body");
      }
      if (std::abs(residual) <= tol) fs.facet_indices.push_back(static_cast<int>(i));
    }
    if (fs.empty()) throw std::invalid_argument("active_facets: point is not on the boundary");
    return fs;
  }

  // [x, xi] subset of the boundary, decided by a shared facet.
  bool in_ch(const Vec& x, const Vec& xi, double face_tol = kDefaultFaceTol) const {
    return active_facets(x, face_tol).intersects(active_facets(xi, face_tol));
  }

  // True when some facet through x meets some facet through xi inside the
  // closed body, i.e. an eta on the boundary exists with [x,eta] and
  // [eta,xi] both on the boundary. Decided exactly by an LP feasibility
  // solve per facet pair.
  bool ch_of_ch_membership(const Vec& x, const Vec& xi, double face_tol = kDefaultFaceTol) const {
    const FaceSet fx = active_facets(x, face_tol);
    const FaceSet fxi = active_facets(xi, face_tol);
    const HPolytopeData& h = facets();
    for (int i : fx.facet_indices) {
      for (int j : fxi.facet_indices) {
        if (i == j) return true;
        if (facets_intersect_cache(i, j, h)) return true;
      }
    }
    return false;
  }

  // All sampled convex combinations classify as Boundary. Polytopes use the
  // exact shared-facet test instead of sampling.
  bool segment_on_boundary(const Vec& x, const Vec& y, int samples = 64) const {
    if (classify(x) != PointClass::Boundary || classify(y) != PointClass::Boundary) {
      throw std::invalid_argument("segment_on_boundary: boundary points required");
    }
    if (polytopal_) return in_ch(x, y);
    for (int k = 0; k <= samples; ++k) {
      const double s = static_cast<double>(k) / static_cast<double>(samples);
      if (classify(lerp(x, y, s)) != PointClass::Boundary) return false;
    }
    return true;
  }

  // Rejection sampling from the bounding box; identical seeds give identical
  // points bit for bit.
  Vec sample_interior(Rng& rng) const {
    for (int attempt = 0; attempt < 200000; ++attempt) {
      Vec x(dim_);
      for (std::size_t j = 0; j < dim_; ++j) x[j] = rng.uniform(box_lo_[j], box_hi_[j]);
      if (classify(x) == PointClass::Interior) return x;
    }
    throw std::runtime_error("sample_interior: rejection sampling failed");
  }

  Vec sample_interior(std::uint64_t seed) const {
    Rng rng(seed);
    return sample_interior(rng);
  }

  // Boundary point hit by the ray from the interior anchor through direction.
  Vec boundary_ray(const Vec& from, const Vec& direction) const {
    const auto [t_lo, t_hi] = clip_line(from, direction);
    (void)t_lo;
    return add(from, scale(direction, t_hi));
  }

  // Nearest boundary point. Interior points of a polytope project onto the
  // closest facet whose foot stays feasible, with a ray fallback; gauge
  // scaling is used for balls and ellipsoids.
  Vec project_to_boundary(const Vec& x) const {
    check_point(x);
    if (classify(x) == PointClass::Boundary) return x;
    if (classify(x) == PointClass::Exterior) {
      const Vec d = sub(x, interior_point_);
      return boundary_ray(interior_point_, d);
    }
    if (polytopal_) {
      double best = std::numeric_limits<double>::infinity();
      Vec best_point;
      for (std::size_t i = 0; i < hrep_.a.rows; ++i) {
        const Vec row = hrep_.a.row(i);
        const double nn = dot(row, row);
        if (nn == 0.0) continue;
        const double margin = hrep_.b[i] - dot(row, x);
        const Vec foot = add(x, scale(row, margin / nn));
        if (classify(foot) == PointClass::Exterior) continue;
        const double dist = margin / std::sqrt(nn);
        if (dist < best) {
          best = dist;
          best_point = foot;
        }
      }
      if (!best_point.empty()) return best_point;
      Vec d = sub(x, interior_point_);
      if (norm2(d) < 1e-14) {
        d.assign(dim_, 0.0);
        d[0] = 1.0;
      }
      return boundary_ray(x, d);
    }
    const Vec& center = body_center();
    Vec u = sub(x, center);
    const double s = gauge(x);
    if (s < 1e-14) {
      u.assign(dim_, 0.0);
      u[0] = 1.0;
      return boundary_ray(center, u);
    }
    return add(center, scale(u, 1.0 / s));
  }

 private:
  ConvexBody() = default;

  void check_point(const Vec& x) const {
    require_dimension(x, dim_, "point");
    require_finite(x, "point");
  }

  // Radial scale relative to the boundary along the ray from the center.
  double gauge(const Vec& x) const {
    if (const auto* e = std::get_if<EllipsoidData>(&shape_)) {
      const Vec u = sub(x, e->center);
      return std::sqrt(std::max(0.0, dot(u, mat_vec(e->shape, u))));
    }
    const auto& b = std::get<BallData>(shape_);
    return distance2(x, b.center) / b.radius;
  }

  const Vec& body_center() const {
    if (const auto* e = std::get_if<EllipsoidData>(&shape_)) return e->center;
    return std::get<BallData>(shape_).center;
  }

  Vec apply_quadratic(const Vec& v) const {
    if (const auto* e = std::get_if<EllipsoidData>(&shape_)) return mat_vec(e->shape, v);
    const auto& b = std::get<BallData>(shape_);
    return scale(v, 1.0 / (b.radius * b.radius));
  }

  bool facets_intersect_cache(int i, int j, const HPolytopeData& h) const {
    // Feasibility of { A p <= b, a_i p >= b_i, a_j p >= b_j }.
    const std::size_t m = h.a.rows;
    Mat g(m + 2, dim_, 0.0);
    Vec rhs(m + 2, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < dim_; ++c) g(r, c) = h.a(r, c);
      rhs[r] = h.b[r];
    }
    for (std::size_t c = 0; c < dim_; ++c) {
      g(m, c) = -h.a(static_cast<std::size_t>(i), c);
      g(m + 1, c) = -h.a(static_cast<std::size_t>(j), c);
    }
    rhs[m] = -h.b[static_cast<std::size_t>(i)];
    rhs[m + 1] = -h.b[static_cast<std::size_t>(j)];
    return lp_feasible(g, rhs);
  }

  void init_polytope(const HPolytopeData& h) {
    hrep_ = h;
    polytopal_ = true;

    // Chebyshev-style interior point: maximize r with a_i x + |a_i| r <= b_i.
    const std::size_t m = h.a.rows;
    Mat g(m, dim_ + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double nn = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) {
        g(i, j) = h.a(i, j);
        nn += h.a(i, j) * h.a(i, j);
      }
      g(i, dim_) = std::sqrt(nn);
    }
    Vec objective(dim_ + 1, 0.0);
    objective[dim_] = 1.0;
    const LpResult cheb = lp_maximize(g, h.b, objective);
    if (cheb.status == LpStatus::Infeasible || (cheb.status == LpStatus::Optimal && cheb.value <= 1e-9)) {
      throw std::invalid_argument("hpolytope: empty interior");
    }
    if (cheb.status == LpStatus::Optimal) {
      interior_point_ = Vec(cheb.x.begin(), cheb.x.begin() + static_cast<std::ptrdiff_t>(dim_));
    }

    box_lo_.resize(dim_);
    box_hi_.resize(dim_);
    bool axis_aligned = true;
    for (std::size_t i = 0; i < m; ++i) {
      int nonzero = 0;
      for (std::size_t j = 0; j < dim_; ++j) {
        if (h.a(i, j) != 0.0) ++nonzero;
      }
      if (nonzero != 1) axis_aligned = false;
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      Vec c(dim_, 0.0);
      c[j] = 1.0;
      const LpResult hi = lp_maximize(h.a, h.b, c);
      c[j] = -1.0;
      const LpResult lo = lp_maximize(h.a, h.b, c);
      if (hi.status != LpStatus::Optimal || lo.status != LpStatus::Optimal) {
        throw std::invalid_argument("hpolytope: unbounded domain");
      }
      box_hi_[j] = hi.value;
      box_lo_[j] = -lo.value;
    }
    if (cheb.status != LpStatus::Optimal) {
      // Chebyshev LP unbounded yet the box LPs succeeded cannot happen.
      throw std::invalid_argument("hpolytope: unbounded domain");
    }

    diameter_ = distance2(box_hi_, box_lo_);
    diameter_exact_ = axis_aligned;  // a box's diameter is its diagonal
  }

  std::variant<HPolytopeData, EllipsoidData, BallData, SimplexData> shape_;
  HPolytopeData hrep_;
  bool polytopal_ = false;
  std::size_t dim_ = 0;
  double boundary_tol_ = kDefaultBoundaryTol;
  Vec interior_point_;
  Vec box_lo_;
  Vec box_hi_;
  Mat chol_;  // ellipsoid only
  double diameter_ = 0.0;
  bool diameter_exact_ = false;
};

}  // namespace horodyn
