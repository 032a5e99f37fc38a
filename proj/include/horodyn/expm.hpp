#pragma once

// Matrix exponential by scaling and squaring with a truncated Taylor series.
// The scaled norm is kept below 1/4, where the series converges to full
// double precision in well under 30 terms.

#include <cmath>
#include <stdexcept>

#include "horodyn/linalg.hpp"

namespace horodyn {

inline Mat expm(const Mat& a) {
  if (a.rows != a.cols) throw std::invalid_argument("expm: square matrix required");
  const std::size_t n = a.rows;

  const double norm = mat_norm_inf(a);
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  }
  const double scale = std::ldexp(1.0, -squarings);

  Mat b(n, n);
  for (std::size_t i = 0; i < n * n; ++i) b.a[i] = a.a[i] * scale;

  Mat result = Mat::identity(n);
  Mat term = Mat::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = mat_mul(term, b);
    for (double& x : term.a) x /= static_cast<double>(k);
    for (std::size_t i = 0; i < n * n; ++i) result.a[i] += term.a[i];
    if (mat_norm_inf(term) <= 1e-17 * mat_norm_inf(result)) break;
  }
  for (int s = 0; s < squarings; ++s) result = mat_mul(result, result);
  return result;
}

inline Mat expm(const Mat& a, double t) {
  Mat scaled = a;
  for (double& x : scaled.a) x *= t;
  return expm(scaled);
}

}  // namespace horodyn
