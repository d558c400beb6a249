#ifndef SEMILOCAL_QP_HPP_
#define SEMILOCAL_QP_HPP_

// Primal active-set method for  min 1/2 x'Hx + g'x  s.t.  Ax <= b.
// Equality subproblems are solved exactly through their KKT system; H must be
// positive definite. Convex problems with singular Hessians are reduced to a
// sequence of strictly convex ones by proximal-point iterations.

#include "semilocal/lp.hpp"

#include <algorithm>

namespace semilocal {

enum class QpStatus { optimal, infeasible, unbounded };

struct QpResult {
  QpStatus status = QpStatus::infeasible;
  Vector x;
  Vector multipliers;  ///< one per row of A, zero for inactive rows
  int iterations = 0;
};

/// Stationarity and complementarity residual of a candidate QP solution.
inline double kkt_residual(const Matrix& H, const Vector& g, const Matrix& A, const Vector& b,
                           const Vector& x, const Vector& lambda) {
  Vector grad = H * x + g;
  if (A.rows() > 0) grad += A.transpose() * lambda;
  double r = grad.lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double slack = b(i) - A.row(i).dot(x);
    r = std::max(r, std::max(-slack, 0.0));
    r = std::max(r, std::max(-lambda(i), 0.0));
    r = std::max(r, std::abs(lambda(i) * slack));
  }
  return r;
}

/// Active-set solve from a feasible start `x0`.
inline QpResult solve_strictly_convex_qp(const Matrix& H, const Vector& g, const Matrix& A,
                                         const Vector& b, Vector x0) {
  const Eigen::Index n = H.rows();
  const Eigen::Index m = A.rows();
  if (H.cols() != n || g.size() != n || A.cols() != n || b.size() != m || x0.size() != n) {
    throw ArgumentError("solve_strictly_convex_qp: dimension mismatch");
  }
  Vector x = std::move(x0);
  std::vector<int> working;
  const int max_iter = 200 + 20 * static_cast<int>(m + n);
  const double step_tol = 1e-13;

  for (int it = 0; it < max_iter; ++it) {
    const Eigen::Index k = static_cast<Eigen::Index>(working.size());
    Matrix kkt = Matrix::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = H;
    for (Eigen::Index j = 0; j < k; ++j) {
      kkt.block(0, n + j, n, 1) = A.row(working[static_cast<std::size_t>(j)]).transpose();
      kkt.block(n + j, 0, 1, n) = A.row(working[static_cast<std::size_t>(j)]);
    }
    Vector rhs = Vector::Zero(n + k);
    rhs.head(n) = -(H * x + g);
    Eigen::FullPivLU<Matrix> lu(kkt);
    if (!lu.isInvertible()) throw SolverError("active-set QP: singular working-set KKT system", x);
    const Vector sol = lu.solve(rhs);
    const Vector p = sol.head(n);
    const Vector lambda_w = sol.tail(k);

    if (p.lpNorm<Eigen::Infinity>() <= step_tol * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      Eigen::Index worst = -1;
      double most_negative = -1e-12;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (lambda_w(j) < most_negative) {
          most_negative = lambda_w(j);
          worst = j;
        }
      }
      if (worst < 0) {
        QpResult res{QpStatus::optimal, x, Vector::Zero(m), it};
        for (Eigen::Index j = 0; j < k; ++j) {
          res.multipliers(working[static_cast<std::size_t>(j)]) = std::max(lambda_w(j), 0.0);
        }
        return res;
      }
      working.erase(working.begin() + worst);
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (std::find(working.begin(), working.end(), static_cast<int>(i)) != working.end()) continue;
      const double ap = A.row(i).dot(p);
      if (ap > 1e-14) {
        const double step = std::max(0.0, (b(i) - A.row(i).dot(x)) / ap);
        if (step < alpha) {
          alpha = step;
          blocking = static_cast<int>(i);
        }
      }
    }
    x += alpha * p;
    if (blocking >= 0) working.push_back(blocking);
  }
  throw SolverError("active-set QP: iteration limit exceeded", x);
}

/// Strictly convex QP with an LP phase-1 start.
inline QpResult solve_strictly_convex_qp(const Matrix& H, const Vector& g, const Matrix& A,
                                         const Vector& b) {
  const auto start = feasible_point(A, b);
  if (!start) return {QpStatus::infeasible, {}, {}, 0};
  return solve_strictly_convex_qp(H, g, A, b, *start);
}

inline bool is_positive_definite(const Matrix& Q) {
  if (Q.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() > 1e-10 * scale;
}

inline bool is_positive_semidefinite(const Matrix& Q) {
  if (Q.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (Q + Q.transpose()));
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -1e-10 * scale;
}

/// min 1/2 x'Qx + c'x s.t. Ax <= b for symmetric positive semidefinite Q.
inline QpResult solve_convex_qp(const Matrix& Q, const Vector& c, const Matrix& A,
                                const Vector& b) {
  const Eigen::Index n = Q.rows();
  const auto start = feasible_point(A, b);
  if (!start) return {QpStatus::infeasible, {}, {}, 0};
  if (is_positive_definite(Q)) return solve_strictly_convex_qp(Q, c, A, b, *start);
  if (!is_positive_semidefinite(Q)) throw PreconditionError("solve_convex_qp: Q is not positive semidefinite");

  // Unbounded iff some d with Qd = 0, Ad <= 0 has c'd < 0.
  Matrix rec(2 * n + A.rows() + 2 * n, n);
  rec << Q, -Q, A, Matrix::Identity(n, n), -Matrix::Identity(n, n);
  Vector rec_b = Vector::Zero(rec.rows());
  rec_b.tail(2 * n).setOnes();
  const LpResult ray = solve_lp_simplex(c, rec, rec_b);
  if (ray.status == LpStatus::optimal && ray.value < -1e-9 * (1.0 + c.norm())) {
    return {QpStatus::unbounded, {}, {}, 0};
  }

  const double mu = 1e-2 * std::max(1.0, Q.norm());
  const Matrix H = Q + mu * Matrix::Identity(n, n);
  Vector x = *start;
  QpResult last;
  for (int it = 0; it < 20000; ++it) {
    last = solve_strictly_convex_qp(H, c - mu * x, A, b, x);
    const double moved = (last.x - x).lpNorm<Eigen::Infinity>();
    x = last.x;
    if (moved <= 1e-13 * (1.0 + x.lpNorm<Eigen::Infinity>())) {
      last.iterations = it + 1;
      return last;
    }
  }
  throw SolverError("proximal QP: no convergence", x);
}

struct Projection {
  Vector point;      ///< empty when the polyhedron is empty
  double distance = kInf;
  Vector multipliers;
};

/// Euclidean projection of `p` onto {x : Ax <= b}.
inline Projection project_onto(const Matrix& A, const Vector& b, const Vector& p) {
  const Eigen::Index n = A.cols();
  if (p.size() != n) throw ArgumentError("project_onto: dimension mismatch");
  if (detail::satisfies(A, b, p)) return {p, 0.0, Vector::Zero(A.rows())};
  const QpResult r = solve_strictly_convex_qp(Matrix::Identity(n, n), -p, A, b);
  if (r.status == QpStatus::infeasible) return {};
  return {r.x, (r.x - p).norm(), r.multipliers};
}

}  // namespace semilocal

#endif  // SEMILOCAL_QP_HPP_
