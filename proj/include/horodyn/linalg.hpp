#pragma once

// Small dense vectors and matrices for desk-scale computations (n <= ~20).

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace horodyn {

using Vec = std::vector<double>;

inline bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline void require_finite(const Vec& v, const char* what) {
  if (!all_finite(v)) {
    throw std::invalid_argument(std::string(what) + ": non-finite entry");
  }
}

inline void require_dimension(const Vec& v, std::size_t n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (got " +
                                std::to_string(v.size()) + ", expected " + std::to_string(n) + ")");
  }
}

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scale(const Vec& a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

// a + s * (b - a)
inline Vec lerp(const Vec& a, const Vec& b, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * (b[i] - a[i]);
  return r;
}

inline double distance2(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double distance_inf(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Strict lexicographic order; used to canonicalize symmetric computations.
inline bool lex_less(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return a.size() < b.size();
}

struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), a(r * c, fill) {}
  Mat(std::initializer_list<std::initializer_list<double>> init) {
    rows = init.size();
    cols = rows ? init.begin()->size() : 0;
    a.reserve(rows * cols);
    for (const auto& row : init) {
      if (row.size() != cols) throw std::invalid_argument("Mat: ragged initializer");
      for (double x : row) a.push_back(x);
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  Vec row(std::size_t i) const {
    Vec r(cols);
    for (std::size_t j = 0; j < cols; ++j) r[j] = (*this)(i, j);
    return r;
  }
};

inline double row_dot(const Mat& m, std::size_t i, const Vec& x) {
  double s = 0.0;
  for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
  return s;
}

inline Vec mat_vec(const Mat& m, const Vec& x) {
  if (x.size() != m.cols) throw std::invalid_argument("mat_vec: dimension mismatch");
  Vec y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("mat_mul: dimension mismatch");
  Mat c(a.rows, b.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline double mat_norm_inf(const Mat& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix,
// or nullopt if the matrix is not SPD.
inline std::optional<Mat> cholesky(const Mat& m) {
  if (m.rows != m.cols) return std::nullopt;
  const std::size_t n = m.rows;
  Mat l(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return std::nullopt;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

// Solves L L^T x = b given the Cholesky factor L.
inline Vec cholesky_solve(const Mat& l, const Vec& b) {
  const std::size_t n = l.rows;
  Vec y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
    y[i] = s / l(i, i);
  }
  Vec x(n, 0.0);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
    x[ii] = s / l(ii, ii);
  }
  return x;
}

}  // namespace horodyn
