#pragma once

// Dense two-phase simplex for the small linear programs that back polytope
// validation (Chebyshev-style interior point, bounding boxes) and facet
// intersection feasibility. Free variables are split x = u - v, slacks are
// added per row, and Bland's rule keeps the pivoting cycle-free. Problem
// sizes here are tens of rows, so a tableau method is plenty.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "horodyn/linalg.hpp"

namespace horodyn {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vec x;
  double value = 0.0;
};

namespace detail {

class SimplexTableau {
 public:
  SimplexTableau(std::size_t m, std::size_t n_cols) : m_(m), n_(n_cols), t_(m, Vec(n_cols + 1, 0.0)), basis_(m, 0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  double& rhs(std::size_t i) { return t_[i][n_]; }
  std::size_t& basis(std::size_t i) { return basis_[i]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }

  void pivot(std::size_t row, std::size_t col) {
    const double p = t_[row][col];
    for (std::size_t j = 0; j <= n_; ++j) t_[row][j] /= p;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = t_[i][col];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) t_[i][j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  void drop_row(std::size_t row) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
    --m_;
  }

  // Maximizes obj over the current basic feasible tableau. `allowed(j)` masks
  // candidate entering columns. Returns false when unbounded.
  template <class Allowed>
  bool run(const Vec& obj, const Allowed& allowed) {
    constexpr double kTol = 1e-9;
    constexpr int kMaxIter = 50000;
    for (int iter = 0; iter < kMaxIter; ++iter) {
      // Reduced costs from scratch: obj_j - sum_i obj_basis(i) * t(i, j).
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (!allowed(j)) continue;
        double r = obj[j];
        for (std::size_t i = 0; i < m_; ++i) {
          const double cb = obj[basis_[i]];
          if (cb != 0.0) r -= cb * t_[i][j];
        }
        if (r > kTol) {
          enter = j;  // Bland: first improving index
          break;
        }
      }
      if (enter == n_) return true;

      std::size_t leave = m_;
      double best_ratio = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = t_[i][enter];
        if (a > kTol) {
          const double ratio = t_[i][n_] / a;
          if (leave == m_ || ratio < best_ratio - kTol ||
              (ratio < best_ratio + kTol && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
    throw std::logic_error("simplex: iteration limit exceeded");
  }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<Vec> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

// Maximizes c . x subject to G x <= h with x free.
inline LpResult lp_maximize(const Mat& g, const Vec& h, const Vec& c) {
  if (g.rows != h.size() || g.cols != c.size()) {
    throw std::invalid_argument("lp_maximize: dimension mismatch");
  }
  const std::size_t m = g.rows;
  const std::size_t n = g.cols;

  // Columns: u (n), v (n), slack (m), artificial (up to m).
  std::vector<std::size_t> art_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (h[i] < 0.0) art_rows.push_back(i);
  }
  const std::size_t n_art = art_rows.size();
  const std::size_t n_cols = 2 * n + m + n_art;
  detail::SimplexTableau tab(m, n_cols);

  std::size_t art_next = 2 * n + m;
  for (std::size_t i = 0; i < m; ++i) {
    const double sgn = (h[i] < 0.0) ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      tab.at(i, j) = sgn * g(i, j);
      tab.at(i, n + j) = -sgn * g(i, j);
    }
    tab.at(i, 2 * n + i) = sgn;
    tab.rhs(i) = sgn * h[i];
    if (sgn < 0.0) {
      tab.at(i, art_next) = 1.0;
      tab.basis(i) = art_next;
      ++art_next;
    } else {
      tab.basis(i) = 2 * n + i;
    }
  }

  const auto is_artificial = [&](std::size_t j) { return j >= 2 * n + m; };

  if (n_art > 0) {
    Vec phase1(n_cols, 0.0);
    for (std::size_t j = 2 * n + m; j < n_cols; ++j) phase1[j] = -1.0;
    tab.run(phase1, [](std::size_t) { return true; });

    double art_sum = 0.0;
    for (std::size_t i = 0; i < tab.rows(); ++i) {
      if (is_artificial(tab.basis(i))) art_sum += tab.rhs(i);
    }
    if (art_sum > 1e-7) return {LpStatus::Infeasible, {}, 0.0};

    // Drive leftover zero-level artificials out of the basis; a row with no
    // usable pivot is redundant and is dropped.
    for (std::size_t i = 0; i < tab.rows();) {
      if (!is_artificial(tab.basis(i))) {
        ++i;
        continue;
      }
      std::size_t piv = n_cols;
      for (std::size_t j = 0; j < 2 * n + m; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          piv = j;
          break;
        }
      }
      if (piv == n_cols) {
        tab.drop_row(i);
      } else {
        tab.pivot(i, piv);
        ++i;
      }
    }
  }

  Vec phase2(n_cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    phase2[j] = c[j];
    phase2[n + j] = -c[j];
  }
  const bool bounded = tab.run(phase2, [&](std::size_t j) { return !is_artificial(j); });
  if (!bounded) return {LpStatus::Unbounded, {}, 0.0};

  Vec x(n, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    const std::size_t b = tab.basis(i);
    if (b < n) x[b] += tab.rhs(i);
    else if (b < 2 * n) x[b - n] -= tab.rhs(i);
  }
  return {LpStatus::Optimal, x, dot(c, x)};
}

// Feasibility of {x : G x <= h}.
inline bool lp_feasible(const Mat& g, const Vec& h) {
  return lp_maximize(g, h, Vec(g.cols, 0.0)).status == LpStatus::Optimal;
}

}  // namespace horodyn
