#pragma once

// Projective-type distances on convex domains: the chord cross-ratio form of
// the Hilbert metric, the cone form log(M/m) on the positive orthant, the
// Poincare distance on the unit disc and its coordinate-max extension to
// polydiscs, plus the quantitative lower bounds used by the check suites.
//
// Arguments to the symmetric distances are canonicalized (lexicographically
// ordered) before evaluation, so d(x, y) and d(y, x) are equal bit for bit.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "horodyn/geometry.hpp"
#include "horodyn/rng.hpp"

namespace horodyn {

// Relative chord factor below which a distance value has visibly lost
// precision; the value is still returned, callers that care inspect the
// status instead of catching an error, since the metric genuinely blows up
// at the boundary.
constexpr double kNearBoundaryChordFactor = 1e-13;

struct DistanceStatus {
  bool near_boundary = false;
  double min_chord_factor = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double cross_ratio_from_clip(double t_lo, double t_hi, DistanceStatus* status) {
  const double span = t_hi - t_lo;
  const double factor = std::min(-t_lo, t_hi - 1.0) / span;
  if (status) {
    status->min_chord_factor = std::min(status->min_chord_factor, factor);
    if (factor < kNearBoundaryChordFactor) status->near_boundary = true;
  }
  const double ratio = ((1.0 - t_lo) * t_hi) / ((-t_lo) * (t_hi - 1.0));
  return std::log(ratio);
}

}  // namespace detail

// Hilbert distance between interior points from the cross-ratio of the chord
// through them; zero when the points are closer than 1e-14 in norm.
inline double hilbert_cross_ratio(const ConvexBody& body, const Vec& x, const Vec& y,
                                  DistanceStatus* status = nullptr) {
  const Vec* p = &x;
  const Vec* q = &y;
  if (lex_less(*q, *p)) std::swap(p, q);
  if (distance2(*p, *q) <= 1e-14) return 0.0;
  if (!body.strictly_inside(*p) || !body.strictly_inside(*q)) {
    throw std::invalid_argument("hilbert_cross_ratio: interior points required");
  }
  const Vec d = sub(*q, *p);
  const auto [t_lo, t_hi] = body.clip_line(*p, d);
  if (!(t_lo < 0.0) || !(t_hi > 1.0)) {
    throw std::logic_error("hilbert_cross_ratio: chord clip failed on interior input");
  }
  return detail::cross_ratio_from_clip(t_lo, t_hi, status);
}

// Cone form on the strictly positive orthant: log(max_i x_i/y_i / min_i x_i/y_i).
inline double hilbert_cone(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("hilbert_cone: dimension mismatch");
  const Vec* p = &x;
  const Vec* q = &y;
  if (lex_less(*q, *p)) std::swap(p, q);
  double big = -std::numeric_limits<double>::infinity();
  double small = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p->size(); ++i) {
    if (!((*p)[i] > 0.0) || !((*q)[i] > 0.0)) {
      throw std::invalid_argument("hilbert_cone: entries must be strictly positive");
    }
    const double r = (*p)[i] / (*q)[i];
    big = std::max(big, r);
    small = std::min(small, r);
  }
  return std::log(big / small);
}

inline double poincare_disc(std::complex<double> z, std::complex<double> w) {
  if (!(std::abs(z) < 1.0) || !(std::abs(w) < 1.0)) {
    throw std::invalid_argument("poincare_disc: points must lie in the open unit disc");
  }
  const double num = std::abs(z - w);
  const double den = std::abs(1.0 - std::conj(z) * w);
  return std::atanh(num / den);
}

inline double polydisc_distance(const std::vector<std::complex<double>>& z,
                                const std::vector<std::complex<double>>& w) {
  if (z.size() != w.size() || z.empty()) {
    throw std::invalid_argument("polydisc_distance: dimension mismatch");
  }
  double best = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) best = std::max(best, poincare_disc(z[j], w[j]));
  return best;
}

// arg tanh(|x - y| / diam), valid for any bounded convex domain of that
// norm diameter.
inline double kobayashi_lower_bound(double diam, const Vec& x, const Vec& y) {
  const double gap = distance2(x, y);
  if (!(gap < diam)) {
    throw std::invalid_argument("kobayashi_lower_bound: separation reaches the claimed diameter");
  }
  return std::atanh(gap / diam);
}

// 2 log(1 + |x - y| / diam); a lower bound for the Hilbert distance whenever
// diam dominates the true norm diameter.
inline double hilbert_norm_lower_bound(double diam, const Vec& x, const Vec& y) {
  return 2.0 * std::log1p(distance2(x, y) / diam);
}

inline Vec complex_to_vec(const std::vector<std::complex<double>>& z) {
  Vec v(2 * z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    v[2 * j] = z[j].real();
    v[2 * j + 1] = z[j].imag();
  }
  return v;
}

inline std::vector<std::complex<double>> vec_to_complex(const Vec& v) {
  if (v.size() % 2 != 0) throw std::invalid_argument("vec_to_complex: odd dimension");
  std::vector<std::complex<double>> z(v.size() / 2);
  for (std::size_t j = 0; j < z.size(); ++j) z[j] = {v[2 * j], v[2 * j + 1]};
  return z;
}

enum class MetricKind { HilbertCrossRatio, HilbertCone, PoincareDisc, Polydisc };

// A domain paired with a distance. Points are real vectors throughout; disc
// factors occupy two coordinates each. kappa is the quasi-geodesic slack of
// the instance and is carried as metadata only.
class MetricInstance {
 public:
  static MetricInstance hilbert(ConvexBody body, double kappa = 0.0) {
    MetricInstance m;
    m.kind_ = MetricKind::HilbertCrossRatio;
    m.body_ = std::move(body);
    m.kappa_ = kappa;
    return m;
  }

  static MetricInstance hilbert_cone_orthant(std::size_t dim, double kappa = 0.0) {
    if (dim == 0) throw std::invalid_argument("hilbert_cone_orthant: dimension must be >= 1");
    MetricInstance m;
    m.kind_ = MetricKind::HilbertCone;
    m.dim_ = dim;
    m.kappa_ = kappa;
    return m;
  }

  static MetricInstance poincare(double kappa = 0.0) {
    MetricInstance m;
    m.kind_ = MetricKind::PoincareDisc;
    m.dim_ = 2;
    m.kappa_ = kappa;
    return m;
  }

  static MetricInstance polydisc(std::size_t factors, double kappa = 0.0) {
    if (factors == 0) throw std::invalid_argument("polydisc: need at least one factor");
    MetricInstance m;
    m.kind_ = MetricKind::Polydisc;
    m.dim_ = 2 * factors;
    m.kappa_ = kappa;
    return m;
  }

  MetricKind kind() const { return kind_; }
  double kappa() const { return kappa_; }
  const ConvexBody* body() const { return body_ ? &*body_ : nullptr; }

  std::size_t point_dimension() const { return body_ ? body_->dimension() : dim_; }

  double distance(const Vec& x, const Vec& y, DistanceStatus* status = nullptr) const {
    switch (kind_) {
      case MetricKind::HilbertCrossRatio:
        return hilbert_cross_ratio(*body_, x, y, status);
      case MetricKind::HilbertCone:
        return hilbert_cone(x, y);
      case MetricKind::PoincareDisc: {
        require_dimension(x, 2, "poincare point");
        require_dimension(y, 2, "poincare point");
        return poincare_disc({x[0], x[1]}, {y[0], y[1]});
      }
      case MetricKind::Polydisc:
        return polydisc_distance(vec_to_complex(x), vec_to_complex(y));
    }
    throw std::logic_error("distance: unknown metric kind");
  }

  bool in_domain(const Vec& x) const {
    switch (kind_) {
      case MetricKind::HilbertCrossRatio:
        return body_->classify(x) == PointClass::Interior;
      case MetricKind::HilbertCone: {
        if (x.size() != dim_) return false;
        for (double v : x) {
          if (!(v > 0.0)) return false;
        }
        return true;
      }
      case MetricKind::PoincareDisc:
      case MetricKind::Polydisc: {
        if (x.size() != dim_) return false;
        for (std::size_t j = 0; j + 1 < x.size(); j += 2) {
          if (!(std::hypot(x[j], x[j + 1]) < 1.0)) return false;
        }
        return true;
      }
    }
    return false;
  }

  Vec sample_point(Rng& rng) const {
    switch (kind_) {
      case MetricKind::HilbertCrossRatio:
        return body_->sample_interior(rng);
      case MetricKind::HilbertCone: {
        Vec x(dim_);
        for (double& v : x) v = std::exp(rng.uniform(-2.0, 2.0));
        return x;
      }
      case MetricKind::PoincareDisc:
      case MetricKind::Polydisc: {
        Vec x(dim_);
        for (std::size_t j = 0; j + 1 < dim_; j += 2) {
          for (;;) {
            const double re = rng.uniform(-1.0, 1.0);
            const double im = rng.uniform(-1.0, 1.0);
            if (std::hypot(re, im) < 1.0 - 1e-9) {
              x[j] = re;
              x[j + 1] = im;
              break;
            }
          }
        }
        return x;
      }
    }
    throw std::logic_error("sample_point: unknown metric kind");
  }

  // Norm diameter of the domain: exact or an upper bound for bodies, 2 for
  // the disc, the product-box diagonal for polydiscs, none for the cone.
  std::optional<double> norm_diameter() const {
    switch (kind_) {
      case MetricKind::HilbertCrossRatio:
        return body_->diameter();
      case MetricKind::HilbertCone:
        return std::nullopt;
      case MetricKind::PoincareDisc:
        return 2.0;
      case MetricKind::Polydisc:
        return 2.0 * std::sqrt(static_cast<double>(dim_ / 2));
    }
    return std::nullopt;
  }

 private:
  MetricInstance() = default;

  MetricKind kind_ = MetricKind::HilbertCrossRatio;
  std::optional<ConvexBody> body_;
  std::size_t dim_ = 0;
  double kappa_ = 0.0;
};

}  // namespace horodyn
