#ifndef SEMILOCAL_MAPPING_FAMILIES_HPP_
#define SEMILOCAL_MAPPING_FAMILIES_HPP_

// Parametric set-valued mappings y -> M(y) with a flat parameter vector.
//
// Parameter packing (matrices row-major, matrices before vectors):
//   lp_feasible           A (rows x n), b (rows)            M = {x : Ax <= b, F x <= g}
//   lp_optimal_full       A, b, c (n)                       argmin c'x over the same set
//   qp_optimal_canonical  c (n), b (m)                      argmin 1/2 x'Qx + c'x s.t. Ax <= b, Q and A fixed
//   qp_kkt_full           A (m x n), Q (n x n), b, c        KKT pairs (x, lambda) in R^(n+m)
//   lcp                   M (n x n), q (n)                  x >= 0, Mx + q >= 0, x'(Mx + q) = 0
//   sip_grid              per image coordinate j: (a_j0, a_j1, a_j2), then (b0, b1)
//                         a_j(t) = a_j0 + a_j1 t + a_j2 |t|, b(t) = b0 + b1 t, t on a grid of [-1, 1]
//   sublevel_1d           alpha                             {x in [lo, hi] : f(x) <= alpha}
//   counterexample_*      y (scalar)
//   identity              y (d)                             {y}
//   constant_point        y (d)                             {point}
// F, g are unperturbed rows stored on the family (e.g. sign constraints).

#include "semilocal/complementarity.hpp"
#include "semilocal/scalar_function.hpp"

#include <array>
#include <memory>

namespace semilocal {

enum class FamilyKind {
  lp_feasible,
  lp_optimal_full,
  qp_optimal_canonical,
  qp_kkt_full,
  lcp,
  sip_grid,
  sublevel_1d,
  counterexample_sqrt,
  counterexample_jump,
  counterexample_escape,
  identity,
  constant_point,
};

inline constexpr std::array<FamilyKind, 12> kAllFamilyKinds = {
    FamilyKind::lp_feasible,         FamilyKind::lp_optimal_full,     FamilyKind::qp_optimal_canonical,
    FamilyKind::qp_kkt_full,         FamilyKind::lcp,                 FamilyKind::sip_grid,
    FamilyKind::sublevel_1d,         FamilyKind::counterexample_sqrt, FamilyKind::counterexample_jump,
    FamilyKind::counterexample_escape, FamilyKind::identity,          FamilyKind::constant_point,
};

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::lp_feasible: return "lp_feasible";
    case FamilyKind::lp_optimal_full: return "lp_optimal_full";
    case FamilyKind::qp_optimal_canonical: return "qp_optimal_canonical";
    case FamilyKind::qp_kkt_full: return "qp_kkt_full";
    case FamilyKind::lcp: return "lcp";
    case FamilyKind::sip_grid: return "sip_grid";
    case FamilyKind::sublevel_1d: return "sublevel_1d";
    case FamilyKind::counterexample_sqrt: return "counterexample_sqrt";
    case FamilyKind::counterexample_jump: return "counterexample_jump";
    case FamilyKind::counterexample_escape: return "counterexample_escape";
    case FamilyKind::identity: return "identity";
    case FamilyKind::constant_point: return "constant_point";
  }
  return "";
}

inline FamilyKind family_kind_from_string(const std::string& s) {
  for (FamilyKind k : kAllFamilyKinds) {
    if (s == to_string(k)) return k;
  }
  throw ArgumentError("unknown family kind '" + s + "'");
}

/// Evaluating the family failed (solver breakdown, unsupported piece).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

struct MappingFamily {
  FamilyKind kind = FamilyKind::identity;
  Eigen::Index parameter_dim = 0;
  Eigen::Index image_dim = 0;
  NormSpec norms;

  Eigen::Index rows = 0;  ///< perturbed constraint rows (lp_*, qp_kkt_full)
  Matrix fixed_A;         ///< unperturbed rows of lp_* families
  Vector fixed_b;
  Matrix Q, A;            ///< fixed data of qp_optimal_canonical
  int sip_grid_points = 201;
  ScalarFunction function = ScalarFunction::sine();
  double domain_lo = -1.0, domain_hi = 1.0;
  int root_grid_points = 4001;
  std::shared_ptr<const FunctionGrid> function_grid;  ///< cached f values for sublevel_1d
  Vector point;           ///< constant_point image

  /// Worst-case directions in parameter space; samplers use each with both signs.
  std::vector<Vector> probe_directions;

  std::string name() const { return to_string(kind); }
};

/// Checks that the structural data and dimensions fit together.
inline void validate(const MappingFamily& f) {
  auto fail = [&](const std::string& what) { throw ArgumentError(f.name() + ": " + what); };
  const Eigen::Index n = f.image_dim;
  if (n < 1) fail("image_dim must be positive");
  switch (f.kind) {
    case FamilyKind::lp_feasible:
    case FamilyKind::lp_optimal_full: {
      if (f.fixed_A.cols() != n && f.fixed_A.size() != 0) fail("fixed_A column count differs from image_dim");
      if (f.fixed_A.rows() != f.fixed_b.size()) fail("fixed_A rows differ from fixed_b length");
      const Eigen::Index want = f.rows * n + f.rows + (f.kind == FamilyKind::lp_optimal_full ? n : 0);
      if (f.parameter_dim != want) fail("parameter_dim must be " + std::to_string(want));
      break;
    }
    case FamilyKind::qp_optimal_canonical:
      if (f.Q.rows() != n || f.Q.cols() != n) fail("Q must be image_dim x image_dim");
      if ((f.Q - f.Q.transpose()).lpNorm<Eigen::Infinity>() > 1e-12) fail("Q must be symmetric");
      if (f.A.cols() != n && f.A.rows() != 0) fail("A column count differs from image_dim");
      if (f.parameter_dim != n + f.A.rows()) fail("parameter_dim must be n + rows(A)");
      break;
    case FamilyKind::qp_kkt_full: {
      const Eigen::Index xn = n - f.rows;
      if (xn < 1) fail("image_dim must exceed rows");
      if (f.parameter_dim != f.rows * xn + xn * xn + f.rows + xn) fail("parameter_dim inconsistent with rows");
      break;
    }
    case FamilyKind::lcp:
      if (f.parameter_dim != n * n + n) fail("parameter_dim must be n^2 + n");
      if (n > kMaxLcpSize) fail("LCP size exceeds " + std::to_string(kMaxLcpSize));
      break;
    case FamilyKind::sip_grid:
      if (f.parameter_dim != 3 * n + 2) fail("parameter_dim must be 3 n + 2");
      if (f.sip_grid_points < 2) fail("sip_grid_points must be at least 2");
      break;
    case FamilyKind::sublevel_1d:
      if (n != 1 || f.parameter_dim != 1) fail("dimensions must be 1");
      if (!(f.domain_lo < f.domain_hi)) fail("domain must satisfy lo < hi");
      break;
    case FamilyKind::counterexample_sqrt:
    case FamilyKind::counterexample_jump:
    case FamilyKind::counterexample_escape:
      if (n != 1 || f.parameter_dim != 1) fail("dimensions must be 1");
      break;
    case FamilyKind::identity:
      if (f.parameter_dim != n) fail("parameter_dim must equal image_dim");
      break;
    case FamilyKind::constant_point:
      if (f.point.size() != n) fail("point length must equal image_dim");
      if (f.parameter_dim < 1) fail("parameter_dim must be positive");
      break;
  }
  for (const auto& d : f.probe_directions) {
    if (d.size() != f.parameter_dim) fail("probe direction length differs from parameter_dim");
  }
}

// ---------------------------------------------------------------------------
// Constructors

inline MappingFamily make_lp_feasible(Eigen::Index rows, Eigen::Index n, Matrix fixed_A = {},
                                      Vector fixed_b = {}) {
  MappingFamily f;
  f.kind = FamilyKind::lp_feasible;
  f.rows = rows;
  f.image_dim = n;
  f.parameter_dim = rows * n + rows;
  f.fixed_A = fixed_A.size() ? std::move(fixed_A) : Matrix(0, n);
  f.fixed_b = std::move(fixed_b);
  validate(f);
  return f;
}

inline MappingFamily make_lp_optimal_full(Eigen::Index rows, Eigen::Index n, Matrix fixed_A = {},
                                          Vector fixed_b = {}) {
  MappingFamily f = make_lp_feasible(rows, n, std::move(fixed_A), std::move(fixed_b));
  f.kind = FamilyKind::lp_optimal_full;
  f.parameter_dim += n;
  validate(f);
  return f;
}

inline MappingFamily make_qp_optimal_canonical(Matrix Q, Matrix A) {
  MappingFamily f;
  f.kind = FamilyKind::qp_optimal_canonical;
  f.image_dim = Q.rows();
  if (A.size() == 0) A = Matrix(0, Q.rows());
  f.parameter_dim = Q.rows() + A.rows();
  f.Q = std::move(Q);
  f.A = std::move(A);
  validate(f);
  return f;
}

inline MappingFamily make_qp_kkt_full(Eigen::Index rows, Eigen::Index n) {
  MappingFamily f;
  f.kind = FamilyKind::qp_kkt_full;
  f.rows = rows;
  f.image_dim = n + rows;
  f.parameter_dim = rows * n + n * n + rows + n;
  validate(f);
  return f;
}

inline MappingFamily make_lcp(Eigen::Index n) {
  MappingFamily f;
  f.kind = FamilyKind::lcp;
  f.image_dim = n;
  f.parameter_dim = n * n + n;
  validate(f);
  return f;
}

/// Semi-infinite system a(t)'x <= b(t) on a uniform grid of [-1, 1]. Probes
/// (per coordinate j): |t| in a_j against -1 in b, |t| against +1, and -t against +1.
inline MappingFamily make_sip_grid(Eigen::Index n, int grid_points = 201) {
  MappingFamily f;
  f.kind = FamilyKind::sip_grid;
  f.image_dim = n;
  f.parameter_dim = 3 * n + 2;
  f.sip_grid_points = grid_points;
  const Eigen::Index b0 = 3 * n;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (const auto& [slot, coef, b] : {std::tuple{2, 1.0, -1.0}, {2, 1.0, 1.0}, {1, -1.0, 1.0}}) {
      Vector d = Vector::Zero(f.parameter_dim);
      d(3 * j + slot) = coef;
      d(b0) = b;
      f.probe_directions.push_back(d);
    }
  }
  validate(f);
  return f;
}

inline MappingFamily make_sublevel_1d(ScalarFunction fn, double lo, double hi) {
  MappingFamily f;
  f.kind = FamilyKind::sublevel_1d;
  f.image_dim = f.parameter_dim = 1;
  f.function = std::move(fn);
  f.domain_lo = lo;
  f.domain_hi = hi;
  validate(f);
  f.function_grid = std::make_shared<const FunctionGrid>(f.function, lo, hi, f.root_grid_points);
  return f;
}

inline MappingFamily make_counterexample(FamilyKind kind) {
  if (kind != FamilyKind::counterexample_sqrt && kind != FamilyKind::counterexample_jump &&
      kind != FamilyKind::counterexample_escape) {
    throw ArgumentError("make_counterexample: not a counterexample kind");
  }
  MappingFamily f;
  f.kind = kind;
  f.image_dim = f.parameter_dim = 1;
  validate(f);
  return f;
}

inline MappingFamily make_identity(Eigen::Index d) {
  MappingFamily f;
  f.kind = FamilyKind::identity;
  f.image_dim = f.parameter_dim = d;
  validate(f);
  return f;
}

inline MappingFamily make_constant_point(Vector point, Eigen::Index parameter_dim = 1) {
  MappingFamily f;
  f.kind = FamilyKind::constant_point;
  f.image_dim = point.size();
  f.parameter_dim = parameter_dim;
  f.point = std::move(point);
  validate(f);
  return f;
}

// ---------------------------------------------------------------------------
// Unpacking

namespace detail {

inline Matrix unpack_matrix(const Vector& p, Eigen::Index offset, Eigen::Index r, Eigen::Index c) {
  Matrix M(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) M(i, j) = p(offset + i * c + j);
  }
  return M;
}

inline void pack_matrix(const Matrix& M, Vector& p, Eigen::Index offset) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) p(offset + i * M.cols() + j) = M(i, j);
  }
}

inline std::vector<double> sip_grid_points(int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) t[static_cast<std::size_t>(k)] = k == count - 1 ? 1.0 : -1.0 + 2.0 * k / (count - 1);
  return t;
}

inline SetRepr empty_set(Eigen::Index n) {
  if (n == 1) return IntervalUnion{};
  return FinitePointSet(n);
}

inline Polyhedron lp_constraints(const MappingFamily& f, const Vector& p) {
  const Eigen::Index n = f.image_dim, m = f.rows;
  Polyhedron P(unpack_matrix(p, 0, m, n), p.segment(m * n, m));
  if (f.fixed_A.rows() == 0) return P;
  return P.with_rows(f.fixed_A, f.fixed_b);
}

}  // namespace detail

/// Packed constraint data of the sip_grid family at parameter p.
inline Polyhedron sip_polyhedron(const MappingFamily& f, const Vector& p) {
  const Eigen::Index n = f.image_dim;
  const auto ts = detail::sip_grid_points(f.sip_grid_points);
  Matrix A(static_cast<Eigen::Index>(ts.size()), n);
  Vector b(A.rows());
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    const double t = ts[static_cast<std::size_t>(k)];
    for (Eigen::Index j = 0; j < n; ++j) A(k, j) = p(3 * j) + p(3 * j + 1) * t + p(3 * j + 2) * std::abs(t);
    b(k) = p(3 * n) + p(3 * n + 1) * t;
  }
  return {std::move(A), std::move(b)};
}

/// Packs an LP-type parameter (A, b[, c]).
inline Vector pack_lp(const Matrix& A, const Vector& b, const Vector& c = {}) {
  Vector p(A.size() + b.size() + c.size());
  detail::pack_matrix(A, p, 0);
  p.segment(A.size(), b.size()) = b;
  if (c.size()) p.tail(c.size()) = c;
  return p;
}

inline Vector pack_lcp(const Matrix& M, const Vector& q) { return pack_lp(M, q); }

inline Vector pack_qp_kkt(const Matrix& A, const Matrix& Q, const Vector& b, const Vector& c) {
  Vector p(A.size() + Q.size() + b.size() + c.size());
  detail::pack_matrix(A, p, 0);
  detail::pack_matrix(Q, p, A.size());
  p.segment(A.size() + Q.size(), b.size()) = b;
  p.tail(c.size()) = c;
  return p;
}

// ---------------------------------------------------------------------------
// Evaluation

inline SetRepr evaluate(const MappingFamily& f, const Vector& p) {
  if (p.size() != f.parameter_dim) {
    throw ArgumentError(f.name() + ": parameter has length " + std::to_string(p.size()) + ", expected " +
                        std::to_string(f.parameter_dim));
  }
  const Eigen::Index n = f.image_dim;
  switch (f.kind) {
    case FamilyKind::lp_feasible:
      return detail::lp_constraints(f, p);

    case FamilyKind::lp_optimal_full: {
      const Polyhedron P = detail::lp_constraints(f, p);
      const Vector c = p.tail(n);
      if (c.lpNorm<Eigen::Infinity>() == 0.0) return P.is_empty() ? detail::empty_set(n) : SetRepr(P);
      LpResult r;
      try {
        r = solve_lp(c, P.A, P.b);
      } catch (const SolverError& e) {
        throw EvaluationError(std::string("lp_optimal_full: ") + e.what());
      }
      if (r.status != LpStatus::optimal) return detail::empty_set(n);
      Matrix face(2, n);
      face << c.transpose(), -c.transpose();
      return P.with_rows(face, Vector{{r.value, -r.value}});
    }

    case FamilyKind::qp_optimal_canonical: {
      const Vector c = p.head(n);
      const Vector b = p.tail(f.A.rows());
      QpResult r;
      try {
        r = solve_convex_qp(f.Q, c, f.A, b);
      } catch (const SolverError& e) {
        throw EvaluationError(std::string("qp_optimal_canonical: ") + e.what());
      }
      if (r.status != QpStatus::optimal) return detail::empty_set(n);
      if (is_positive_definite(f.Q)) return FinitePointSet(n, {r.x});
      // Optimal face of a convex QP: Qx and c'x are constant on it.
      const Vector Qx = f.Q * r.x;
      Matrix rows(2 * n + 2, n);
      rows << f.Q, -f.Q, c.transpose(), -c.transpose();
      Vector rhs(2 * n + 2);
      const double slack = 1e-8;
      rhs << Qx.array() + slack, -Qx.array() + slack, c.dot(r.x) + slack, -c.dot(r.x) + slack;
      return Polyhedron(f.A, b).with_rows(rows, rhs);
    }

    case FamilyKind::qp_kkt_full: {
      const Eigen::Index m = f.rows, xn = n - m;
      const Matrix A = detail::unpack_matrix(p, 0, m, xn);
      const Matrix Q = detail::unpack_matrix(p, m * xn, xn, xn);
      const Vector b = p.segment(m * xn + xn * xn, m);
      const Vector c = p.tail(xn);
      try {
        return solve_kkt_enumerate(0.5 * (Q + Q.transpose()), c, A, b);
      } catch (const UnsupportedError& e) {
        throw EvaluationError(std::string("qp_kkt_full: ") + e.what());
      }
    }

    case FamilyKind::lcp:
      try {
        return solve_lcp_enumerate(detail::unpack_matrix(p, 0, n, n), p.tail(n));
      } catch (const UnsupportedError& e) {
        throw EvaluationError(std::string("lcp: ") + e.what());
      }

    case FamilyKind::sip_grid:
      return sip_polyhedron(f, p);

    case FamilyKind::sublevel_1d: {
      RootIsolationOptions opt;
      opt.grid_points = f.root_grid_points;
      const bool cached = f.function_grid && f.function_grid->function == f.function &&
                          static_cast<int>(f.function_grid->xs.size()) == f.root_grid_points &&
                          f.function_grid->xs.front() == f.domain_lo && f.function_grid->xs.back() == f.domain_hi;
      if (cached) return sublevel_set(f.function, p(0), *f.function_grid, opt).set;
      return sublevel_set(f.function, p(0), f.domain_lo, f.domain_hi, opt).set;
    }

    case FamilyKind::counterexample_sqrt: {
      const double y = p(0);
      std::vector<Interval> pieces{Interval::open(-1.0, 0.0)};
      if (y > 0.0) pieces.push_back(Interval::open(0.0, std::sqrt(y)));
      return IntervalUnion(std::move(pieces));
    }
    case FamilyKind::counterexample_jump: {
      if (p(0) == 0.0) return FinitePointSet(1, {scalar_vector(0.0)});
      return FinitePointSet(1, {scalar_vector(0.0), scalar_vector(1.0)});
    }
    case FamilyKind::counterexample_escape: {
      if (p(0) == 0.0) return FinitePointSet(1, {scalar_vector(0.0)});
      return FinitePointSet(1, {scalar_vector(0.0), scalar_vector(1.0 / p(0))});
    }
    case FamilyKind::identity:
      return FinitePointSet(n, {p});
    case FamilyKind::constant_point:
      return FinitePointSet(n, {f.point});
  }
  throw ArgumentError("evaluate: unknown family kind");
}

// ---------------------------------------------------------------------------
// Parameter metric and sampling

/// d(y, ybar). The sip_grid distance is the uniform norm of the perturbation
/// functions over the grid.
inline double parameter_distance(const MappingFamily& f, const Vector& y, const Vector& ybar) {
  const Vector d = y - ybar;
  if (f.kind != FamilyKind::sip_grid) return norm(d, f.norms.parameter_norm);
  const Eigen::Index n = f.image_dim;
  double worst = 0.0;
  Vector at(n);
  for (double t : detail::sip_grid_points(f.sip_grid_points)) {
    for (Eigen::Index j = 0; j < n; ++j) at(j) = d(3 * j) + d(3 * j + 1) * t + d(3 * j + 2) * std::abs(t);
    worst = std::max({worst, norm(at, f.norms.parameter_norm), std::abs(d(3 * n) + d(3 * n + 1) * t)});
  }
  return worst;
}

namespace detail {

/// Perturbation directions must keep the family's structure (Q symmetric).
inline Vector admissible_direction(const MappingFamily& f, Vector d) {
  if (f.kind == FamilyKind::qp_kkt_full) {
    const Eigen::Index m = f.rows, xn = f.image_dim - f.rows;
    const Matrix Q = unpack_matrix(d, m * xn, xn, xn);
    pack_matrix(0.5 * (Q + Q.transpose()), d, m * xn);
  }
  return d;
}

/// center + d scaled so that the parameter distance equals `target`; empty if d is null.
inline std::optional<Vector> scaled_step(const MappingFamily& f, const Vector& center, const Vector& d,
                                         double target) {
  const double len = parameter_distance(f, center + d, center);
  if (!(len > 0.0) || !std::isfinite(len)) return std::nullopt;
  return Vector(center + (target / len) * d);
}

}  // namespace detail

/// Probe directions of the family (both signs) followed by random directions,
/// each at a parameter distance in (radius/2, radius]. Probes sit at exactly
/// `radius`. Sample k is drawn from its own stream keyed by (seed, k).
inline std::vector<Vector> sample_parameters(const MappingFamily& f, const Vector& center, double radius,
                                             int count, std::uint64_t seed,
                                             const std::vector<Vector>& extra_probes = {}) {
  if (!(radius > 0.0)) throw ArgumentError("sample_parameters: radius must be positive");
  if (count < 1) throw ArgumentError("sample_parameters: count must be at least 1");
  if (center.size() != f.parameter_dim) throw ArgumentError("sample_parameters: center length mismatch");
  std::vector<Vector> out;
  auto push_probe = [&](const Vector& d) {
    if (static_cast<int>(out.size()) >= count) return;
    if (auto y = detail::scaled_step(f, center, detail::admissible_direction(f, d), radius)) out.push_back(*y);
  };
  for (const auto* list : {&f.probe_directions, &extra_probes}) {
    for (const auto& d : *list) {
      if (d.size() != f.parameter_dim) throw ArgumentError("sample_parameters: probe length mismatch");
      push_probe(d);
      push_probe(-d);
    }
  }
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count; ++k) {
    Rng rng(mix_seed(seed, k));
    const Vector d = detail::admissible_direction(f, rng.normal_vector(f.parameter_dim));
    const double target = radius * (1.0 - 0.5 * rng.uniform());
    if (auto y = detail::scaled_step(f, center, d, target)) out.push_back(*y);
    if (k > static_cast<std::uint64_t>(count) * 64 + 1024) {
      throw ArgumentError("sample_parameters: cannot generate nonzero perturbations");
    }
  }
  return out;
}

}  // namespace semilocal

#endif  // SEMILOCAL_MAPPING_FAMILIES_HPP_
