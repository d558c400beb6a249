#ifndef SEMILOCAL_COMPLEMENTARITY_HPP_
#define SEMILOCAL_COMPLEMENTARITY_HPP_

// Exhaustive enumeration of complementary index patterns. Each pattern pins
// one side of every complementary pair to zero, leaving a square linear
// system plus sign constraints; the union over all patterns is the solution
// set.

#include "semilocal/set_geometry.hpp"

namespace semilocal {

namespace detail {

/// Solution pieces of {z : E z = f, G z <= h} when that set has dimension <= 1.
struct PieceCollector {
  Eigen::Index dim;
  std::vector<Vector> points;
  std::vector<Segment> segments;

  void add(const Matrix& E, const Vector& f, const Matrix& G, const Vector& h) {
    Eigen::FullPivLU<Matrix> lu(E);
    lu.setThreshold(1e-10);
    const Vector z0 = lu.solve(f);
    if ((E * z0 - f).lpNorm<Eigen::Infinity>() > 1e-9 * (1.0 + f.lpNorm<Eigen::Infinity>())) return;
    const Matrix kernel = lu.kernel();
    const Eigen::Index k = lu.rank() == E.cols() ? 0 : kernel.cols();
    if (k == 0) {
      if (satisfies(G, h, z0)) add_point(z0);
      return;
    }
    if (k == 1) {
      const Vector u = kernel.col(0).normalized();
      double lo = -kInf, hi = kInf;
      const Vector gz = G * z0 - h;
      const Vector gu = G * u;
      for (Eigen::Index i = 0; i < G.rows(); ++i) {
        if (std::abs(gu(i)) <= 1e-13) {
          if (gz(i) > row_slack_tol(h(i))) return;
          continue;
        }
        const double bound = -gz(i) / gu(i);
        if (gu(i) > 0) hi = std::min(hi, bound);
        else lo = std::max(lo, bound);
      }
      if (lo > hi + 1e-9) return;
      if (lo > hi) lo = hi = 0.5 * (lo + hi);
      if (std::isinf(lo) && std::isinf(hi)) {
        throw UnsupportedError("complementarity enumeration: solution piece contains a full line");
      }
      if (std::isinf(lo)) {
        segments.push_back({z0 + hi * u, -u, kInf});
      } else if (std::isinf(hi)) {
        segments.push_back({z0 + lo * u, u, kInf});
      } else if (hi - lo <= Tolerances::dedup) {
        add_point(z0 + 0.5 * (lo + hi) * u);
      } else {
        segments.push_back({z0 + lo * u, u, hi - lo});
      }
      return;
    }
    // Higher-dimensional piece: only an error if it is actually nonempty.
    const Matrix Gk = G * kernel;
    const Vector hk = h - G * z0;
    if (feasible_point(Gk, hk)) {
      throw UnsupportedError("complementarity enumeration: solution piece of dimension " +
                             std::to_string(k));
    }
  }

  void add_point(const Vector& z) {
    for (const auto& p : points) {
      if ((p - z).lpNorm<Eigen::Infinity>() <= Tolerances::dedup) return;
    }
    points.push_back(z);
  }

  /// Drops duplicate segments and points covered by segments.
  FinitePointSet finish() const {
    FinitePointSet out(dim);
    for (const auto& s : segments) {
      bool dup = false;
      for (const auto& t : out.segments) {
        const bool same_dir = (s.direction - t.direction).lpNorm<Eigen::Infinity>() <= 1e-9;
        const bool flipped = (s.direction + t.direction).lpNorm<Eigen::Infinity>() <= 1e-9;
        if (same_dir && (s.origin - t.origin).lpNorm<Eigen::Infinity>() <= Tolerances::dedup &&
            (s.length == t.length || std::abs(s.length - t.length) <= Tolerances::dedup)) {
          dup = true;
        }
        if (flipped && !s.is_ray() && !t.is_ray() &&
            (s.end() - t.origin).lpNorm<Eigen::Infinity>() <= Tolerances::dedup &&
            std::abs(s.length - t.length) <= Tolerances::dedup) {
          dup = true;
        }
      }
      if (!dup) out.segments.push_back(s);
    }
    for (const auto& p : points) {
      bool covered = false;
      for (const auto& s : out.segments) {
        if (distance_to_segment(p, s, NormKind::euclidean) <= Tolerances::dedup) covered = true;
      }
      if (!covered) out.add_point(p);
    }
    return out;
  }
};

/// One-dimensional point/segment sets become interval unions.
inline SetRepr to_set_repr(const FinitePointSet& fps) {
  if (fps.dimension != 1 || fps.segments.empty()) return fps;
  std::vector<detail::ClosedPiece> pieces;
  for (const auto& p : fps.points) pieces.push_back({p(0), p(0)});
  for (const auto& s : fps.segments) {
    const double a = s.origin(0);
    const double b = s.direction(0) > 0 ? a + s.length : a - s.length;
    pieces.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(pieces.begin(), pieces.end(), [](const auto& x, const auto& y) { return x.lo < y.lo; });
  std::vector<Interval> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.lo <= merged.back().hi + Tolerances::dedup) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
      if (std::isinf(merged.back().hi)) merged.back().hi_closed = false;
    } else {
      merged.push_back({p.lo, p.hi, std::isfinite(p.lo), std::isfinite(p.hi)});
    }
  }
  return IntervalUnion(std::move(merged));
}

}  // namespace detail

/// Maximum LCP size handled by exhaustive enumeration.
inline constexpr int kMaxLcpSize = 12;

/// All x with x >= 0, Mx + q >= 0, x'(Mx + q) = 0, by enumerating the 2^n
/// complementary index sets.
inline SetRepr solve_lcp_enumerate(const Matrix& M, const Vector& q) {
  const Eigen::Index n = M.rows();
  if (M.cols() != n || q.size() != n) throw ArgumentError("solve_lcp_enumerate: M must be n x n and q length n");
  if (n > kMaxLcpSize) {
    throw UnsupportedError("solve_lcp_enumerate: size " + std::to_string(n) + " exceeds " +
                           std::to_string(kMaxLcpSize));
  }
  Matrix G(2 * n, n);
  G << -Matrix::Identity(n, n), -M;
  Vector h(2 * n);
  h << Vector::Zero(n), q;
  detail::PieceCollector pieces{n, {}, {}};
  Matrix E(n, n);
  Vector f(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        E.row(i) = M.row(i);
        f(i) = -q(i);
      } else {
        E.row(i).setZero();
        E(i, i) = 1.0;
        f(i) = 0.0;
      }
    }
    pieces.add(E, f, G, h);
  }
  return detail::to_set_repr(pieces.finish());
}

/// KKT pairs (x, y) of min 1/2 x'Qx + c'x s.t. Ax <= b, enumerated over
/// active index sets D (y_i = 0 off D, a_i'x = b_i on D).
inline SetRepr solve_kkt_enumerate(const Matrix& Q, const Vector& c, const Matrix& A,
                                   const Vector& b) {
  const Eigen::Index n = Q.rows();
  const Eigen::Index m = A.rows();
  if (Q.cols() != n || c.size() != n || A.cols() != n || b.size() != m) {
    throw ArgumentError("solve_kkt_enumerate: dimension mismatch");
  }
  if (m > kMaxLcpSize) throw UnsupportedError("solve_kkt_enumerate: too many constraints");
  const Eigen::Index N = n + m;
  Matrix G = Matrix::Zero(2 * m, N);
  G.topLeftCorner(m, n) = A;
  G.bottomRightCorner(m, m) = -Matrix::Identity(m, m);
  Vector h(2 * m);
  h << b, Vector::Zero(m);
  detail::PieceCollector pieces{N, {}, {}};
  Matrix E = Matrix::Zero(N, N);
  Vector f = Vector::Zero(N);
  E.topLeftCorner(n, n) = Q;
  E.topRightCorner(n, m) = A.transpose();
  f.head(n) = -c;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    for (Eigen::Index i = 0; i < m; ++i) {
      E.row(n + i).setZero();
      if (mask & (1u << i)) {
        E.block(n + i, 0, 1, n) = A.row(i);
        f(n + i) = b(i);
      } else {
        E(n + i, n + i) = 1.0;
        f(n + i) = 0.0;
      }
    }
    pieces.add(E, f, G, h);
  }
  return detail::to_set_repr(pieces.finish());
}

}  // namespace semilocal

#endif  // SEMILOCAL_COMPLEMENTARITY_HPP_
