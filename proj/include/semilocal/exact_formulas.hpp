#ifndef SEMILOCAL_EXACT_FORMULAS_HPP_
#define SEMILOCAL_EXACT_FORMULAS_HPP_

// Closed-form moduli:
//  * canonically perturbed convex QP  min 1/2 x'Qx + c'x  s.t.  Ax <= b  with
//    (c, b) as parameter: max over admissible active subsets D of the norm of
//    the top n rows of M_D^{-1}, M_D = [[Q, A_D'], [A_D, 0]];
//  * one-dimensional sub-level sets {f <= alpha}: max over boundary points of 1/|f'|.

#include "semilocal/mapping_families.hpp"

namespace semilocal {

class SingularMatrixError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// No active subset satisfies the cone and invertibility conditions.
class NoAdmissibleActiveSetError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class EnumerationBudgetError : public UnsupportedError {
 public:
  using UnsupportedError::UnsupportedError;
};

enum class OperatorNorm { spectral, inf_induced };

inline const char* to_string(OperatorNorm n) { return n == OperatorNorm::spectral ? "spectral" : "inf_induced"; }

inline OperatorNorm operator_norm_from_string(const std::string& s) {
  if (s == "spectral") return OperatorNorm::spectral;
  if (s == "inf_induced") return OperatorNorm::inf_induced;
  throw ArgumentError("unknown operator norm '" + s + "' (expected spectral or inf_induced)");
}

// ---------------------------------------------------------------------------
// Nonnegative least squares and cone membership

struct NnlsResult {
  Vector x;
  double residual = 0.0;  ///< ||Ax - b||_2
};

/// min ||Ax - b|| subject to x >= 0 (Lawson-Hanson active set).
inline NnlsResult nnls(const Matrix& A, const Vector& b, int max_iter = 0) {
  const Eigen::Index n = A.cols();
  if (A.rows() != b.size()) throw ArgumentError("nnls: dimension mismatch");
  if (max_iter <= 0) max_iter = 3 * static_cast<int>(n) + 30;
  Vector x = Vector::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-12 * (1.0 + A.lpNorm<Eigen::Infinity>()) * (1.0 + b.lpNorm<Eigen::Infinity>());

  auto solve_passive = [&](Vector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    z = Vector::Zero(n);
    if (idx.empty()) return;
    Matrix Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Vector zp = Ap.colPivHouseholderQr().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) z(idx[k]) = zp(static_cast<Eigen::Index>(k));
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    const Vector w = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > tol && (best < 0 || w(j) > w(best))) best = j;
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < max_iter; ++inner) {
      Vector z;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
      }
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return {x, (A * x - b).norm()};
}

struct ConeMembership {
  bool holds = false;
  std::optional<Vector> multipliers;
  double residual = 0.0;
};

/// Whether v = sum_t lambda_t g_t for some lambda >= 0.
inline ConeMembership cone_membership(const Vector& v, const std::vector<Vector>& generators, double tol = 1e-9) {
  ConeMembership out;
  const double scale = 1.0 + v.norm();
  if (generators.empty()) {
    out.residual = v.norm();
    out.holds = out.residual <= tol * scale;
    if (out.holds) out.multipliers = Vector(0);
    return out;
  }
  Matrix G(v.size(), static_cast<Eigen::Index>(generators.size()));
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (generators[k].size() != v.size()) throw ArgumentError("cone_membership: generator dimension mismatch");
    G.col(static_cast<Eigen::Index>(k)) = generators[k];
  }
  const NnlsResult r = nnls(G, v);
  out.residual = r.residual;
  out.holds = r.residual <= tol * scale;
  if (out.holds) out.multipliers = r.x;
  return out;
}

// ---------------------------------------------------------------------------
// Partial inverse norms

inline double condition_number(const Matrix& M) {
  if (M.size() == 0) return 1.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : kInf;
}

/// Norm of the top n rows of M_D^{-1}.
inline double operator_partial_inverse_norm(const Matrix& M, Eigen::Index n, OperatorNorm kind) {
  if (M.rows() != M.cols()) throw ArgumentError("operator_partial_inverse_norm: matrix must be square");
  if (n < 0 || n > M.rows()) throw ArgumentError("operator_partial_inverse_norm: n out of range");
  if (!(condition_number(M) < 1e12)) {
    throw SingularMatrixError("operator_partial_inverse_norm: matrix is numerically singular");
  }
  const Matrix top = M.fullPivLu().inverse().topRows(n);
  if (top.size() == 0) return 0.0;
  if (kind == OperatorNorm::inf_induced) return top.cwiseAbs().rowwise().sum().maxCoeff();
  return Eigen::JacobiSVD<Matrix>(top).singularValues()(0);
}

// ---------------------------------------------------------------------------
// Canonically perturbed QP

struct ActiveSet {
  Vector x;                 ///< nominal optimal point
  std::vector<int> T;       ///< active constraint indices
};

struct KktCertificate {
  std::vector<int> D;
  Matrix A_D;
  Matrix M_D;
  Vector cone_multipliers;
  double partial_inverse_norm = 0.0;
};

struct QpModulus {
  double value = 0.0;
  ActiveSet active;
  std::vector<KktCertificate> certificates;  ///< every admissible D, enumeration order
  std::vector<std::size_t> attaining;        ///< indices into certificates achieving `value`
  OperatorNorm norm = OperatorNorm::spectral;
};

inline constexpr int kMaxActiveSetSize = 20;

inline double activity_tol(double b) { return 1e-7 * (1.0 + std::abs(b)); }

/// Nominal solution of the canonical QP, checked to be the unique optimum.
inline ActiveSet qp_nominal_active_set(const Matrix& Q, const Matrix& A, const Vector& c, const Vector& b) {
  const Eigen::Index n = Q.rows();
  if (Q.cols() != n || c.size() != n || (A.rows() > 0 && A.cols() != n) || A.rows() != b.size()) {
    throw ArgumentError("qp_canonical_modulus: dimension mismatch");
  }
  if ((Q - Q.transpose()).lpNorm<Eigen::Infinity>() > 1e-10) throw PreconditionError("qp_canonical_modulus: Q not symmetric");
  if (!is_positive_semidefinite(Q)) throw PreconditionError("qp_canonical_modulus: Q not positive semidefinite");
  const Matrix Ae = A.rows() > 0 ? A : Matrix(0, n);
  const QpResult r = solve_convex_qp(Q, c, Ae, b);
  if (r.status != QpStatus::optimal) {
    throw PreconditionError(std::string("qp_canonical_modulus: nominal QP is ") +
                            (r.status == QpStatus::infeasible ? "infeasible" : "unbounded"));
  }
  if (!is_positive_definite(Q)) {
    // Optimal face: feasible points with the same Qx and c'x.
    const Vector Qx = Q * r.x;
    Matrix rows(2 * n + 2, n);
    rows << Q, -Q, c.transpose(), -c.transpose();
    Vector rhs(2 * n + 2);
    rhs << Qx.array() + 1e-9, -Qx.array() + 1e-9, c.dot(r.x) + 1e-9, -c.dot(r.x) + 1e-9;
    const Polyhedron face = Polyhedron(Ae, b).with_rows(rows, rhs);
    if (!is_bounded(face)) throw PreconditionError("qp_canonical_modulus: optimal set is unbounded");
    const auto verts = enumerate_vertices(face).points;
    for (const auto& v : verts) {
      if ((v - r.x).norm() > 1e-7) throw PreconditionError("qp_canonical_modulus: optimal solution is not unique");
    }
  }
  ActiveSet as;
  as.x = r.x;
  for (Eigen::Index i = 0; i < Ae.rows(); ++i) {
    if (std::abs(Ae.row(i).dot(r.x) - b(i)) <= activity_tol(b(i))) as.T.push_back(static_cast<int>(i));
  }
  return as;
}

/// Certificates for every D in the given candidate index list (subsets in
/// increasing size, lexicographic within a size).
inline QpModulus qp_modulus_over(const Matrix& Q, const Matrix& A, const Vector& c, const ActiveSet& as,
                                 const std::vector<int>& candidates, OperatorNorm norm) {
  const Eigen::Index n = Q.rows();
  if (static_cast<int>(candidates.size()) > kMaxActiveSetSize) {
    throw EnumerationBudgetError("qp_canonical_modulus: active set of size " + std::to_string(candidates.size()) +
                                 " exceeds " + std::to_string(kMaxActiveSetSize));
  }
  QpModulus out;
  out.active = as;
  out.norm = norm;
  const Vector target = -(Q * as.x + c);
  const int t = static_cast<int>(candidates.size());
  for (int k = 0; k <= std::min<int>(t, static_cast<int>(n)); ++k) {
    auto consider = [&](const std::vector<int>& pick) {
      KktCertificate cert;
      for (int i : pick) cert.D.push_back(candidates[static_cast<std::size_t>(i)]);
      cert.A_D.resize(k, n);
      std::vector<Vector> gens;
      for (int r = 0; r < k; ++r) {
        cert.A_D.row(r) = A.row(cert.D[static_cast<std::size_t>(r)]);
        gens.push_back(cert.A_D.row(r).transpose());
      }
      if (k > 0 && detail::matrix_rank(cert.A_D) != k) return true;
      const ConeMembership cm = cone_membership(target, gens);
      if (!cm.holds) return true;
      cert.cone_multipliers = *cm.multipliers;
      cert.M_D = Matrix::Zero(n + k, n + k);
      cert.M_D.topLeftCorner(n, n) = Q;
      cert.M_D.topRightCorner(n, k) = cert.A_D.transpose();
      cert.M_D.bottomLeftCorner(k, n) = cert.A_D;
      if (!(condition_number(cert.M_D) < 1e12)) return true;
      cert.partial_inverse_norm = operator_partial_inverse_norm(cert.M_D, n, norm);
      out.certificates.push_back(std::move(cert));
      return true;
    };
    if (k == 0) {
      consider({});
    } else {
      detail::for_each_subset(t, k, consider);
    }
  }
  if (out.certificates.empty()) {
    throw NoAdmissibleActiveSetError("qp_canonical_modulus: no admissible active subset");
  }
  for (const auto& cert : out.certificates) out.value = std::max(out.value, cert.partial_inverse_norm);
  for (std::size_t i = 0; i < out.certificates.size(); ++i) {
    if (out.certificates[i].partial_inverse_norm >= out.value * (1.0 - 1e-12)) out.attaining.push_back(i);
  }
  return out;
}

inline QpModulus qp_canonical_modulus(const Matrix& Q, const Matrix& A, const Vector& c, const Vector& b,
                                      OperatorNorm norm = OperatorNorm::spectral) {
  const ActiveSet as = qp_nominal_active_set(Q, A, c, b);
  return qp_modulus_over(Q, A.rows() > 0 ? A : Matrix(0, Q.rows()), c, as, as.T, norm);
}

// ---------------------------------------------------------------------------
// Sub-level sets on an interval

struct SublevelModulus {
  ExtendedReal value;
  std::vector<double> boundary;
  std::vector<double> point_moduli;  ///< 1/|f'| per boundary point (+inf where f' vanishes)
  bool vanishing_gradient = false;
};

inline SublevelModulus sublevel_modulus(const ScalarFunction& f, double alpha, double lo, double hi,
                                        double gradient_tol = 1e-9, const RootIsolationOptions& opt = {}) {
  const SublevelSet level = sublevel_set(f, alpha, lo, hi, opt);
  SublevelModulus out;
  out.boundary = level.boundary;
  double best = 0.0;
  for (double x : level.boundary) {
    const double slope = std::abs(f.derivative(x));
    if (slope < gradient_tol) {
      out.vanishing_gradient = true;
      out.point_moduli.push_back(kInf);
      best = kInf;
    } else {
      out.point_moduli.push_back(1.0 / slope);
      best = std::max(best, 1.0 / slope);
    }
  }
  out.value = ExtendedReal(best);
  return out;
}

}  // namespace semilocal

#endif  // SEMILOCAL_EXACT_FORMULAS_HPP_
