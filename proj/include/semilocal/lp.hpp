#ifndef SEMILOCAL_LP_HPP_
#define SEMILOCAL_LP_HPP_

// Small dense linear programming: min c'x s.t. Ax <= b, x free.
//
// Two independent routes are provided. Exhaustive basis enumeration is used
// for pointed problems in dimension <= 4; a two-phase tableau simplex with
// Bland's rule handles everything else.

#include "semilocal/core.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace semilocal {

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double value = kInf;
};

namespace detail {

inline double row_slack_tol(double b) { return Tolerances::feasibility * (1.0 + std::abs(b)); }

inline bool satisfies(const Matrix& A, const Vector& b, const Vector& x) {
  if (A.rows() == 0) return true;
  const Vector r = A * x - b;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r(i) > row_slack_tol(b(i))) return false;
  }
  return true;
}

/// Calls fn(indices) for every k-subset of {0..m-1} in lexicographic order.
/// Stops early if fn returns false.
inline void for_each_subset(int m, int k, const std::function<bool(const std::vector<int>&)>& fn) {
  if (k < 0 || k > m) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!fn(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

inline Eigen::Index matrix_rank(const Matrix& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(A);
  lu.setThreshold(1e-10);
  return lu.rank();
}

/// Dense tableau for the simplex method. Row `m` is the objective row; the
/// last column is the right-hand side.
class Tableau {
 public:
  Tableau(Matrix t, std::vector<int> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  Matrix& data() { return t_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }

  /// Runs Bland's rule over columns [0, active_cols). Returns false if unbounded.
  bool optimize(Eigen::Index active_cols, int max_iter) {
    const double eps = 1e-10;
    const Eigen::Index obj = rows();
    for (int it = 0; it < max_iter; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < active_cols; ++j) {
        if (t_(obj, j) < -eps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = kInf;
      for (Eigen::Index i = 0; i < obj; ++i) {
        const double a = t_(i, enter);
        if (a > Tolerances::pivot) {
          const double ratio = t_(i, cols()) / a;
          if (ratio < best - 1e-14 ||
              (ratio <= best + 1e-14 && leave >= 0 &&
               basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw SolverError("simplex iteration limit exceeded");
  }

  void remove_row(Eigen::Index r) {
    const Eigen::Index n = t_.rows();
    Matrix next(n - 1, t_.cols());
    next.topRows(r) = t_.topRows(r);
    next.bottomRows(n - 1 - r) = t_.bottomRows(n - 1 - r);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

 private:
  Matrix t_;
  std::vector<int> basis_;
};

}  // namespace detail

/// Two-phase simplex on the split form x = x+ - x-, Ax + s = b.
inline LpResult solve_lp_simplex(const Vector& c, const Matrix& A, const Vector& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (c.size() != n || b.size() != m) throw ArgumentError("solve_lp_simplex: dimension mismatch");

  // Columns: x+ [0,n), x- [n,2n), slack [2n, 2n+m), artificial [2n+m, ...).
  std::vector<Eigen::Index> art_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (b(i) < 0.0) art_rows.push_back(i);
  }
  const Eigen::Index n_art = static_cast<Eigen::Index>(art_rows.size());
  const Eigen::Index n_struct = 2 * n + m;
  const Eigen::Index n_cols = n_struct + n_art;
  Matrix t = Matrix::Zero(m + 1, n_cols + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  Eigen::Index art = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0.0 ? -1.0 : 1.0;
    t.block(i, 0, 1, n) = sign * A.row(i);
    t.block(i, n, 1, n) = -sign * A.row(i);
    t(i, 2 * n + i) = sign;
    t(i, n_cols) = sign * b(i);
    if (b(i) < 0.0) {
      t(i, n_struct + art) = 1.0;
      basis[static_cast<std::size_t>(i)] = static_cast<int>(n_struct + art);
      ++art;
    } else {
      basis[static_cast<std::size_t>(i)] = static_cast<int>(2 * n + i);
    }
  }
  detail::Tableau tab(std::move(t), std::move(basis));
  const int max_iter = 5000 + 50 * static_cast<int>(m + n);

  if (n_art > 0) {
    Matrix& d = tab.data();
    d.row(m).setZero();
    for (Eigen::Index k = 0; k < n_art; ++k) d(m, n_struct + k) = 1.0;
    for (Eigen::Index r : art_rows) d.row(m) -= d.row(r);
    tab.optimize(n_cols, max_iter);
    if (-tab.data()(tab.rows(), tab.cols()) > 1e-9 * (1.0 + b.cwiseAbs().maxCoeff())) {
      return {LpStatus::infeasible, {}, kInf};
    }
    // Drive artificials out of the basis; rows where that is impossible are redundant.
    for (Eigen::Index r = tab.rows() - 1; r >= 0; --r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < n_struct) continue;
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < n_struct; ++j) {
        if (std::abs(tab.data()(r, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
      } else {
        tab.remove_row(r);
      }
    }
  }

  // Phase 2 objective row over the structural columns only.
  Matrix& d = tab.data();
  const Eigen::Index obj = tab.rows();
  d.row(obj).setZero();
  for (Eigen::Index j = 0; j < n; ++j) {
    d(obj, j) = c(j);
    d(obj, n + j) = -c(j);
  }
  for (Eigen::Index r = 0; r < obj; ++r) {
    const double cb = d(obj, tab.basis()[static_cast<std::size_t>(r)]);
    if (cb != 0.0) d.row(obj) -= cb * d.row(r);
  }
  for (Eigen::Index k = 0; k < n_art; ++k) d.col(n_struct + k).setZero();
  if (!tab.optimize(n_struct, max_iter)) return {LpStatus::unbounded, {}, -kInf};

  Vector split = Vector::Zero(n_cols);
  for (Eigen::Index r = 0; r < obj; ++r) {
    split(tab.basis()[static_cast<std::size_t>(r)]) = d(r, tab.cols());
  }
  Vector x = split.head(n) - split.segment(n, n);
  return {LpStatus::optimal, x, c.dot(x)};
}

/// Every basic feasible point of {x : Ax <= b}: solutions of n-row subsystems
/// with full rank that satisfy all rows. Deduplicated.
inline std::vector<Vector> enumerate_basic_points(const Matrix& A, const Vector& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  std::vector<Vector> points;
  if (n == 0) return points;
  if (n == 1) {
    // Only the tightest bound on each side can be feasible.
    double lo = -kInf, hi = kInf;
    for (int i = 0; i < m; ++i) {
      if (std::abs(A(i, 0)) <= 1e-10) continue;
      const double x = b(i) / A(i, 0);
      if (A(i, 0) > 0) hi = std::min(hi, x);
      else lo = std::max(lo, x);
    }
    for (double x : {lo, hi}) {
      const Vector v = Vector::Constant(1, x);
      if (std::isfinite(x) && detail::satisfies(A, b, v) &&
          (points.empty() || std::abs(points[0](0) - x) > Tolerances::dedup)) {
        points.push_back(v);
      }
    }
    return points;
  }
  Matrix sub(n, n);
  Vector rhs(n);
  detail::for_each_subset(m, n, [&](const std::vector<int>& rows) {
    for (int k = 0; k < n; ++k) {
      sub.row(k) = A.row(rows[static_cast<std::size_t>(k)]);
      rhs(k) = b(rows[static_cast<std::size_t>(k)]);
    }
    Eigen::FullPivLU<Matrix> lu(sub);
    lu.setThreshold(1e-10);
    if (!lu.isInvertible()) return true;
    const Vector x = lu.solve(rhs);
    if (!detail::satisfies(A, b, x)) return true;
    for (const auto& p : points) {
      if ((p - x).lpNorm<Eigen::Infinity>() <= Tolerances::dedup) return true;
    }
    points.push_back(x);
    return true;
  });
  return points;
}

/// Basis enumeration LP. Requires rank(A) = n; unboundedness is decided by a
/// second enumeration over the box-truncated recession cone.
inline LpResult solve_lp_enumeration(const Vector& c, const Matrix& A, const Vector& b) {
  const Eigen::Index n = A.cols();
  if (c.size() != n || b.size() != A.rows()) {
    throw ArgumentError("solve_lp_enumeration: dimension mismatch");
  }
  if (detail::matrix_rank(A) != n) {
    throw PreconditionError("solve_lp_enumeration: constraint matrix must have full column rank");
  }
  const auto vertices = enumerate_basic_points(A, b);
  if (vertices.empty()) return {LpStatus::infeasible, {}, kInf};

  Matrix rec(A.rows() + 2 * n, n);
  rec << A, Matrix::Identity(n, n), -Matrix::Identity(n, n);
  Vector rec_b(A.rows() + 2 * n);
  rec_b << Vector::Zero(A.rows()), Vector::Ones(2 * n);
  for (const auto& d : enumerate_basic_points(rec, rec_b)) {
    if (c.dot(d) < -1e-9 * (1.0 + c.norm())) return {LpStatus::unbounded, {}, -kInf};
  }

  LpResult best{LpStatus::optimal, vertices.front(), c.dot(vertices.front())};
  for (const auto& v : vertices) {
    const double val = c.dot(v);
    if (val < best.value) best = {LpStatus::optimal, v, val};
  }
  return best;
}

/// Dispatches to enumeration for pointed problems with n <= 4, simplex otherwise.
inline LpResult solve_lp(const Vector& c, const Matrix& A, const Vector& b) {
  if (A.cols() <= 4 && A.cols() > 0 && A.rows() <= 40 && detail::matrix_rank(A) == A.cols()) {
    return solve_lp_enumeration(c, A, b);
  }
  return solve_lp_simplex(c, A, b);
}

/// Some point of {x : Ax <= b}, or nothing when empty.
inline std::optional<Vector> feasible_point(const Matrix& A, const Vector& b) {
  if (A.rows() == 0) return Vector::Zero(A.cols());
  const LpResult r = solve_lp_simplex(Vector::Zero(A.cols()), A, b);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.x;
}

}  // namespace semilocal

#endif  // SEMILOCAL_LP_HPP_
