#ifndef SEMILOCAL_SET_GEOMETRY_HPP_
#define SEMILOCAL_SET_GEOMETRY_HPP_

// Computable image sets and the point-to-set / set-to-set distances every
// modulus quotient is built from.

#include "semilocal/qp.hpp"

#include <algorithm>
#include <optional>
#include <variant>

namespace semilocal {

namespace detail {

/// [lo, hi] = {x in R : A x <= b} for a one-column A; false when empty.
inline bool bounds_1d(const Matrix& A, const Vector& b, double& lo, double& hi) {
  lo = -kInf;
  hi = kInf;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    const double a = A(i, 0);
    if (std::abs(a) <= 1e-14) {
      if (b(i) < -row_slack_tol(b(i))) return false;
      continue;
    }
    if (a > 0) hi = std::min(hi, b(i) / a);
    else lo = std::max(lo, b(i) / a);
  }
  if (lo > hi + Tolerances::feasibility) return false;
  hi = std::max(lo, hi);
  return true;
}

}  // namespace detail

/// {x : Ax <= b}. Zero rows means the whole space.
struct Polyhedron {
  Matrix A;
  Vector b;

  Polyhedron() = default;
  Polyhedron(Matrix a, Vector rhs) : A(std::move(a)), b(std::move(rhs)) {
    if (A.rows() != b.size()) throw ArgumentError("Polyhedron: A has " + std::to_string(A.rows()) +
                                                  " rows but b has " + std::to_string(b.size()));
  }
  static Polyhedron whole_space(Eigen::Index n) { return {Matrix(0, n), Vector(0)}; }

  Eigen::Index dim() const { return A.cols(); }
  Eigen::Index rows() const { return A.rows(); }
  bool contains(const Vector& x) const { return detail::satisfies(A, b, x); }
  bool is_empty() const {
    double lo, hi;
    if (dim() == 1) return !detail::bounds_1d(A, b, lo, hi);
    return !feasible_point(A, b).has_value();
  }

  Polyhedron with_rows(const Matrix& extra_A, const Vector& extra_b) const {
    Matrix a(A.rows() + extra_A.rows(), dim());
    a << A, extra_A;
    Vector rhs(b.size() + extra_b.size());
    rhs << b, extra_b;
    return {std::move(a), std::move(rhs)};
  }
  /// Intersection with the Chebyshev box of the given radius about `center`.
  Polyhedron intersect_box(const Vector& center, double radius) const {
    const Eigen::Index n = dim();
    Matrix box(2 * n, n);
    box << Matrix::Identity(n, n), -Matrix::Identity(n, n);
    Vector rhs(2 * n);
    rhs << center.array() + radius, -(center.array() - radius);
    return with_rows(box, rhs);
  }
};

/// A segment origin + s * direction, s in [0, length]; length may be +inf (a ray).
struct Segment {
  Vector origin;
  Vector direction;  ///< unit euclidean length
  double length = 0.0;

  Vector at(double s) const { return origin + s * direction; }
  Vector end() const { return at(length); }
  bool is_ray() const { return std::isinf(length); }
};

/// Finitely many points, optionally joined by segments (degenerate
/// complementarity pieces).
struct FinitePointSet {
  Eigen::Index dimension = 0;
  std::vector<Vector> points;
  std::vector<Segment> segments;

  FinitePointSet() = default;
  explicit FinitePointSet(Eigen::Index dim) : dimension(dim) {}
  FinitePointSet(Eigen::Index dim, const std::vector<Vector>& pts, std::vector<Segment> segs = {})
      : dimension(dim), segments(std::move(segs)) {
    for (const auto& p : pts) add_point(p);
  }

  void add_point(const Vector& p) {
    if (p.size() != dimension) throw ArgumentError("FinitePointSet: point dimension mismatch");
    for (const auto& q : points) {
      if ((q - p).lpNorm<Eigen::Infinity>() <= Tolerances::dedup) return;
    }
    points.push_back(p);
  }
  bool empty() const { return points.empty() && segments.empty(); }
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = true;

  bool operator==(const Interval&) const = default;
  static Interval closed(double a, double b) { return {a, b, true, true}; }
  static Interval open(double a, double b) { return {a, b, false, false}; }
  static Interval point(double a) { return {a, a, true, true}; }
};

/// Sorted, pairwise disjoint intervals of the real line.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> pieces) {
    for (auto& p : pieces) {
      if (std::isnan(p.lo) || std::isnan(p.hi) || p.lo > p.hi) {
        throw ArgumentError("IntervalUnion: invalid interval bounds");
      }
      if (std::isinf(p.lo)) p.lo_closed = false;
      if (std::isinf(p.hi)) p.hi_closed = false;
      if (p.lo == p.hi && !(p.lo_closed && p.hi_closed)) continue;  // empty
      intervals_.push_back(p);
    }
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
      const Interval& prev = intervals_[i - 1];
      const Interval& cur = intervals_[i];
      if (cur.lo < prev.hi || (cur.lo == prev.hi && cur.lo_closed && prev.hi_closed)) {
        throw ArgumentError("IntervalUnion: intervals overlap");
      }
    }
  }

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  /// Closed iff every finite endpoint belongs to the set.
  bool is_closed() const {
    return std::all_of(intervals_.begin(), intervals_.end(), [](const Interval& p) {
      return (std::isinf(p.lo) || p.lo_closed) && (std::isinf(p.hi) || p.hi_closed);
    });
  }
  bool is_bounded() const {
    return empty() || (std::isfinite(intervals_.front().lo) && std::isfinite(intervals_.back().hi));
  }
  bool operator==(const IntervalUnion&) const = default;

 private:
  std::vector<Interval> intervals_;
};

/// Finite inner approximation of some underlying set.
struct SampledCloud {
  Eigen::Index dimension = 0;
  std::vector<Vector> points;
};

class SetRepr {
 public:
  using Variant = std::variant<Polyhedron, FinitePointSet, IntervalUnion, SampledCloud>;

  SetRepr(Polyhedron p) : v_(std::move(p)) {}
  SetRepr(FinitePointSet p) : v_(std::move(p)) {}
  SetRepr(IntervalUnion p) : v_(std::move(p)) {}
  SetRepr(SampledCloud p) : v_(std::move(p)) {}

  const Variant& variant() const { return v_; }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&v_); }

  Eigen::Index dim() const {
    return std::visit(
        [](const auto& s) -> Eigen::Index {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Polyhedron>) return s.dim();
          else if constexpr (std::is_same_v<T, IntervalUnion>) return 1;
          else return s.dimension;
        },
        v_);
  }

  bool is_empty() const {
    return std::visit(
        [](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Polyhedron>) return s.is_empty();
          else if constexpr (std::is_same_v<T, SampledCloud>) return s.points.empty();
          else return s.empty();
        },
        v_);
  }

  /// False only for IntervalUnion pieces with open finite endpoints.
  bool is_closed() const {
    if (const auto* iu = get_if<IntervalUnion>()) return iu->is_closed();
    return true;
  }

  const char* kind_name() const {
    static constexpr const char* names[] = {"polyhedron", "finite_point_set", "interval_union",
                                            "sampled_cloud"};
    return names[v_.index()];
  }

 private:
  Variant v_;
};

// ---------------------------------------------------------------------------
// Polyhedron utilities

class UnboundedPolyhedronError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// True iff the recession cone {d : Ad <= 0} is {0}. Empty polyhedra count as bounded.
inline bool is_bounded(const Polyhedron& P) {
  const Eigen::Index n = P.dim();
  if (n == 0) return true;
  if (n == 1) {
    double lo, hi;
    return !detail::bounds_1d(P.A, P.b, lo, hi) || (std::isfinite(lo) && std::isfinite(hi));
  }
  Matrix rec(P.rows() + 2 * n, n);
  rec << P.A, Matrix::Identity(n, n), -Matrix::Identity(n, n);
  Vector rb(P.rows() + 2 * n);
  rb << Vector::Zero(P.rows()), Vector::Ones(2 * n);
  if (n <= 4 && P.rows() <= 40) {
    for (const auto& d : enumerate_basic_points(rec, rb)) {
      if (d.lpNorm<Eigen::Infinity>() > 1e-9) return P.is_empty();
    }
    return true;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(n);
      c(i) = -sign;
      const LpResult r = solve_lp_simplex(c, rec, rb);
      if (r.status == LpStatus::optimal && r.value < -1e-9) return P.is_empty();
    }
  }
  return true;
}

/// All vertices of a bounded polyhedron by exhaustive n-subset enumeration.
inline FinitePointSet enumerate_vertices(const Polyhedron& P) {
  if (P.dim() > 4) {
    throw UnsupportedError("enumerate_vertices: dimension " + std::to_string(P.dim()) +
                           " exceeds 4");
  }
  if (!is_bounded(P)) throw UnboundedPolyhedronError("enumerate_vertices: polyhedron is unbounded");
  if (P.dim() == 0) return FinitePointSet(0, {Vector(0)});
  return FinitePointSet(P.dim(), enumerate_basic_points(P.A, P.b));
}

/// Euclidean projection of `point` onto P; distance +inf and no point when P is empty.
inline Projection project_onto_polyhedron(const Vector& point, const Polyhedron& P) {
  if (point.size() != P.dim()) throw ArgumentError("project_onto_polyhedron: dimension mismatch");
  return project_onto(P.A, P.b, point);
}

namespace detail {

/// Chebyshev distance to a polyhedron: min t s.t. Ax <= b, |x - p|_i <= t.
inline double chebyshev_distance(const Vector& p, const Polyhedron& P) {
  if (P.contains(p)) return 0.0;
  const Eigen::Index n = P.dim();
  Matrix A = Matrix::Zero(P.rows() + 2 * n, n + 1);
  Vector b(P.rows() + 2 * n);
  A.topLeftCorner(P.rows(), n) = P.A;
  b.head(P.rows()) = P.b;
  A.block(P.rows(), 0, n, n) = Matrix::Identity(n, n);
  A.block(P.rows(), n, n, 1).setConstant(-1.0);
  b.segment(P.rows(), n) = p;
  A.block(P.rows() + n, 0, n, n) = -Matrix::Identity(n, n);
  A.block(P.rows() + n, n, n, 1).setConstant(-1.0);
  b.tail(n) = -p;
  Vector c = Vector::Zero(n + 1);
  c(n) = 1.0;
  const LpResult r = solve_lp_simplex(c, A, b);
  if (r.status != LpStatus::optimal) return kInf;
  return std::max(0.0, r.value);
}

/// Minimizes a convex function of one variable over [lo, hi] by golden section.
template <class F>
double golden_min(F&& f, double lo, double hi, double* arg = nullptr) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (f1 <= f2) {
      b = x2; x2 = x1; f2 = f1; x1 = b - phi * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2; x2 = a + phi * (b - a); f2 = f(x2);
    }
  }
  double best = std::min({f(lo), f(hi), f1, f2});
  if (arg) {
    if (best == f(lo)) *arg = lo;
    else if (best == f(hi)) *arg = hi;
    else *arg = f1 <= f2 ? x1 : x2;
  }
  return best;
}

inline double distance_to_segment(const Vector& p, const Segment& s, NormKind kind) {
  if (kind == NormKind::euclidean) {
    double t = std::max(0.0, (p - s.origin).dot(s.direction));
    t = std::min(t, s.length);
    return (s.at(t) - p).norm();
  }
  const double d_inf = s.direction.lpNorm<Eigen::Infinity>();
  double hi = s.length;
  if (std::isinf(hi)) hi = 2.0 * (s.origin - p).lpNorm<Eigen::Infinity>() / d_inf + 1.0;
  return golden_min([&](double t) { return (s.at(t) - p).lpNorm<Eigen::Infinity>(); }, 0.0, hi);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Distances

/// inf over the set of the distance to `point`; +inf for the empty set. Exact
/// for every variant except SampledCloud, where it is an upper bound.
inline ExtendedReal distance_to_set(const Vector& point, const SetRepr& set,
                                    NormKind kind = NormKind::euclidean) {
  if (point.size() != set.dim()) {
    throw ArgumentError("distance_to_set: point has dimension " + std::to_string(point.size()) +
                        ", set has dimension " + std::to_string(set.dim()));
  }
  return std::visit(
      [&](const auto& s) -> ExtendedReal {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Polyhedron>) {
          if (s.dim() == 1) {
            double lo, hi;
            if (!detail::bounds_1d(s.A, s.b, lo, hi)) return ExtendedReal::infinity();
            const double x = point(0);
            return ExtendedReal(x < lo ? lo - x : (x > hi ? x - hi : 0.0));
          }
          if (kind == NormKind::chebyshev) return ExtendedReal(detail::chebyshev_distance(point, s));
          return ExtendedReal(project_onto_polyhedron(point, s).distance);
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          double best = kInf;
          const double x = point(0);
          for (const auto& iv : s.intervals()) {
            if (x >= iv.lo && x <= iv.hi) return ExtendedReal::zero();
            best = std::min({best, std::abs(x - iv.lo), std::abs(x - iv.hi)});
          }
          return ExtendedReal(best);
        } else if constexpr (std::is_same_v<T, FinitePointSet>) {
          double best = kInf;
          for (const auto& p : s.points) best = std::min(best, distance(point, p, kind));
          for (const auto& seg : s.segments) {
            best = std::min(best, detail::distance_to_segment(point, seg, kind));
          }
          return ExtendedReal(best);
        } else {
          double best = kInf;
          for (const auto& p : s.points) best = std::min(best, distance(point, p, kind));
          return ExtendedReal(best);
        }
      },
      set.variant());
}

inline bool contains(const SetRepr& set, const Vector& x, double tol = 1e-7,
                     NormKind kind = NormKind::euclidean) {
  return distance_to_set(x, set, kind).value() <= tol;
}

namespace detail {

struct ClosedPiece {
  double lo, hi;
};

/// Closure of a one-dimensional set as sorted, merged closed pieces.
inline std::vector<ClosedPiece> closed_pieces_1d(const SetRepr& set) {
  std::vector<ClosedPiece> out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Polyhedron>) {
          double lo, hi;
          if (bounds_1d(s.A, s.b, lo, hi)) out.push_back({lo, hi});
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          for (const auto& iv : s.intervals()) out.push_back({iv.lo, iv.hi});
        } else if constexpr (std::is_same_v<T, FinitePointSet>) {
          for (const auto& p : s.points) out.push_back({p(0), p(0)});
          for (const auto& seg : s.segments) {
            const double a = seg.origin(0);
            const double b = seg.direction(0) > 0 ? a + seg.length : a - seg.length;
            out.push_back({std::min(a, b), std::max(a, b)});
          }
        } else {
          for (const auto& p : s.points) out.push_back({p(0), p(0)});
        }
      },
      set.variant());
  std::sort(out.begin(), out.end(), [](const ClosedPiece& a, const ClosedPiece& b) { return a.lo < b.lo; });
  std::vector<ClosedPiece> merged;
  for (const auto& p : out) {
    if (!merged.empty() && p.lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, p.hi);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

inline double distance_1d(double x, const std::vector<ClosedPiece>& target) {
  double best = kInf;
  for (const auto& p : target) {
    if (x >= p.lo && x <= p.hi) return 0.0;
    best = std::min({best, std::abs(x - p.lo), std::abs(x - p.hi)});
  }
  return best;
}

inline bool is_convex_target(const SetRepr& set) {
  if (set.get_if<Polyhedron>()) return true;
  if (const auto* f = set.get_if<FinitePointSet>()) {
    return (f->points.size() == 1 && f->segments.empty()) ||
           (f->points.empty() && f->segments.size() == 1);
  }
  if (const auto* c = set.get_if<SampledCloud>()) return c->points.size() == 1;
  if (const auto* iu = set.get_if<IntervalUnion>()) return iu->intervals().size() <= 1;
  return false;
}

}  // namespace detail

/// Result of a sup-of-distances computation. `value` is -inf for an empty
/// source; callers apply the 0/0 convention.
struct SupDistance {
  double value = -kInf;
  Vector witness;               ///< a source point attaining `value`, when finite
  bool exact = true;            ///< false: sampled lower bound
  bool unbounded_source = false;
};

namespace detail {

inline void consider(SupDistance& acc, const Vector& x, double d) {
  if (d > acc.value || acc.witness.size() == 0) {
    if (d > acc.value) acc.value = d;
    acc.witness = x;
  }
}

inline SupDistance sup_1d(const SetRepr& source, const SetRepr& target) {
  SupDistance out;
  const auto src = closed_pieces_1d(source);
  const auto tgt = closed_pieces_1d(target);
  if (src.empty()) return out;
  if (tgt.empty()) {
    out.value = kInf;
    out.witness = scalar_vector(std::isfinite(src.front().lo) ? src.front().lo : src.front().hi);
    return out;
  }
  for (const auto& s : src) {
    if ((std::isinf(s.lo) && std::isfinite(tgt.front().lo)) ||
        (std::isinf(s.hi) && std::isfinite(tgt.back().hi))) {
      out.value = kInf;
      out.unbounded_source = true;
      out.witness = scalar_vector(std::isfinite(s.lo) ? s.lo : (std::isfinite(s.hi) ? s.hi : 0.0));
      return out;
    }
    std::vector<double> cand;
    if (std::isfinite(s.lo)) cand.push_back(s.lo);
    if (std::isfinite(s.hi)) cand.push_back(s.hi);
    for (std::size_t j = 1; j < tgt.size(); ++j) {
      const double mid = 0.5 * (tgt[j - 1].hi + tgt[j].lo);
      if (mid >= s.lo && mid <= s.hi) cand.push_back(mid);
    }
    if (cand.empty()) cand.push_back(0.0);  // whole line inside a whole-line target
    for (double x : cand) consider(out, scalar_vector(x), distance_1d(x, tgt));
  }
  if (source.get_if<SampledCloud>()) out.exact = false;
  return out;
}

inline std::vector<Vector> segment_candidates(const Segment& seg, const SetRepr& target,
                                              NormKind kind, int budget, bool* exact) {
  std::vector<Vector> cand{seg.origin};
  if (!seg.is_ray()) cand.push_back(seg.end());
  if (is_convex_target(target)) return cand;
  const auto* pts = target.get_if<FinitePointSet>();
  const double len = seg.is_ray() ? 1e6 : seg.length;
  if (pts && pts->segments.empty() && kind == NormKind::euclidean) {
    // The lower envelope of point distances peaks where two distances tie.
    for (std::size_t i = 0; i < pts->points.size(); ++i) {
      for (std::size_t j = i + 1; j < pts->points.size(); ++j) {
        const Vector& p = pts->points[i];
        const Vector& q = pts->points[j];
        const double denom = 2.0 * seg.direction.dot(q - p);
        if (std::abs(denom) < 1e-14) continue;
        const double s = (q.squaredNorm() - p.squaredNorm() - 2.0 * seg.origin.dot(q - p)) / denom;
        if (s > 0.0 && s < len) cand.push_back(seg.at(s));
      }
    }
    return cand;
  }
  *exact = false;
  for (int k = 1; k < budget; ++k) cand.push_back(seg.at(len * k / budget));
  return cand;
}

/// Random boundary points of a polyhedron by ray shooting from a feasible point.
inline std::vector<Vector> boundary_samples(const Polyhedron& P, int budget, std::uint64_t seed) {
  std::vector<Vector> out;
  const auto start = feasible_point(P.A, P.b);
  if (!start) return out;
  Rng rng(seed);
  for (int k = 0; k < budget; ++k) {
    Vector u = rng.normal_vector(P.dim());
    u.normalize();
    double t = kInf;
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      const double au = P.A.row(i).dot(u);
      if (au > 1e-14) t = std::min(t, std::max(0.0, (P.b(i) - P.A.row(i).dot(*start)) / au));
    }
    if (std::isfinite(t)) out.push_back(*start + t * u);
  }
  return out;
}

}  // namespace detail

/// sup over x in `source` of d(x, target). Exact for point sets, interval
/// unions, and bounded polyhedra of dimension <= 4 against convex targets;
/// otherwise a sampled lower bound with `exact = false`.
inline SupDistance sup_distance_over_set(const SetRepr& source, const SetRepr& target,
                                         NormKind kind = NormKind::euclidean, int budget = 1024) {
  if (source.dim() != target.dim()) {
    throw ArgumentError("sup_distance_over_set: source dimension " + std::to_string(source.dim()) +
                        " differs from target dimension " + std::to_string(target.dim()));
  }
  if (source.dim() == 1) return detail::sup_1d(source, target);

  SupDistance out;
  auto eval = [&](const Vector& x) {
    detail::consider(out, x, distance_to_set(x, target, kind).value());
  };

  if (const auto* fps = source.get_if<FinitePointSet>()) {
    for (const auto& p : fps->points) eval(p);
    for (const auto& seg : fps->segments) {
      if (seg.is_ray()) {
        const double d0 = distance_to_set(seg.origin, target, kind).value();
        const double d1 = distance_to_set(seg.at(1e6), target, kind).value();
        if (d1 > d0 + 1e-6) {
          out.value = kInf;
          out.unbounded_source = true;
          out.witness = seg.origin;
          return out;
        }
      }
      bool exact = true;
      for (const auto& x : detail::segment_candidates(seg, target, kind, budget, &exact)) eval(x);
      out.exact = out.exact && exact;
    }
    return out;
  }
  if (const auto* cloud = source.get_if<SampledCloud>()) {
    for (const auto& p : cloud->points) eval(p);
    out.exact = false;
    return out;
  }
  const auto& P = std::get<Polyhedron>(source.variant());
  if (P.is_empty()) return out;
  if (!is_bounded(P)) {
    out.value = kInf;
    out.unbounded_source = true;
    out.witness = *feasible_point(P.A, P.b);
    return out;
  }
  if (P.dim() <= 4) {
    for (const auto& v : enumerate_vertices(P).points) eval(v);
    out.exact = detail::is_convex_target(target);
    if (out.exact) return out;
  } else {
    out.exact = false;
  }
  for (const auto& x : detail::boundary_samples(P, budget, 0x5eed)) eval(x);
  return out;
}

// ---------------------------------------------------------------------------
// Localization and probe support

/// The part of `set` within `radius` of `center` (Chebyshev box for polyhedra).
inline SetRepr localize(const SetRepr& set, const Vector& center, double radius, NormKind kind) {
  return std::visit(
      [&](const auto& s) -> SetRepr {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Polyhedron>) {
          return s.intersect_box(center, radius);
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          const double lo = center(0) - radius, hi = center(0) + radius;
          std::vector<Interval> out;
          for (const auto& iv : s.intervals()) {
            Interval c = iv;
            if (lo > c.lo) { c.lo = lo; c.lo_closed = true; }
            if (hi < c.hi) { c.hi = hi; c.hi_closed = true; }
            if (c.lo < c.hi || (c.lo == c.hi && c.lo_closed && c.hi_closed)) out.push_back(c);
          }
          return IntervalUnion(std::move(out));
        } else if constexpr (std::is_same_v<T, FinitePointSet>) {
          FinitePointSet out(s.dimension);
          for (const auto& p : s.points) {
            if (distance(p, center, kind) <= radius) out.points.push_back(p);
          }
          for (const auto& seg : s.segments) {
            double t0 = 0.0, t1 = seg.length;
            if (kind == NormKind::euclidean) {
              const Vector w = seg.origin - center;
              const double bq = w.dot(seg.direction);
              const double disc = bq * bq - (w.squaredNorm() - radius * radius);
              if (disc < 0) continue;
              t0 = std::max(t0, -bq - std::sqrt(disc));
              t1 = std::min(t1, -bq + std::sqrt(disc));
            } else {
              for (Eigen::Index i = 0; i < s.dimension; ++i) {
                const double o = seg.origin(i) - center(i), d = seg.direction(i);
                if (std::abs(d) < 1e-15) {
                  if (std::abs(o) > radius) t1 = -1.0;
                  continue;
                }
                const double a = (-radius - o) / d, b = (radius - o) / d;
                t0 = std::max(t0, std::min(a, b));
                t1 = std::min(t1, std::max(a, b));
              }
            }
            if (t1 < t0) continue;
            if (t1 - t0 <= Tolerances::dedup) {
              out.add_point(seg.at(t0));
            } else {
              out.segments.push_back({seg.at(t0), seg.direction, t1 - t0});
            }
          }
          return out;
        } else {
          SampledCloud out{s.dimension, {}};
          for (const auto& p : s.points) {
            if (distance(p, center, kind) <= radius) out.points.push_back(p);
          }
          return out;
        }
      },
      set.variant());
}

/// Vertices / endpoints / listed points: the candidates for the extremes of a set.
inline std::vector<Vector> extreme_points(const SetRepr& set) {
  return std::visit(
      [&](const auto& s) -> std::vector<Vector> {
        using T = std::decay_t<decltype(s)>;
        std::vector<Vector> out;
        if constexpr (std::is_same_v<T, Polyhedron>) {
          out = enumerate_vertices(s).points;
        } else if constexpr (std::is_same_v<T, IntervalUnion>) {
          for (const auto& iv : s.intervals()) {
            if (std::isfinite(iv.lo) && iv.lo_closed) out.push_back(scalar_vector(iv.lo));
            if (std::isfinite(iv.hi) && iv.hi_closed && iv.hi != iv.lo) out.push_back(scalar_vector(iv.hi));
          }
        } else if constexpr (std::is_same_v<T, FinitePointSet>) {
          out = s.points;
          for (const auto& seg : s.segments) {
            out.push_back(seg.origin);
            if (!seg.is_ray()) out.push_back(seg.end());
          }
        } else {
          out = s.points;
        }
        return out;
      },
      set.variant());
}

/// Deterministic points inside the set away from its extremes.
inline std::vector<Vector> interior_samples(const SetRepr& set, int count, std::uint64_t seed) {
  std::vector<Vector> out;
  if (count <= 0) return out;
  if (const auto* iu = set.get_if<IntervalUnion>()) {
    double total = 0.0;
    for (const auto& iv : iu->intervals()) {
      if (std::isfinite(iv.lo) && std::isfinite(iv.hi)) total += iv.hi - iv.lo;
    }
    if (total <= 0.0) return out;
    // Stratified midpoints of `count` equal cells along the concatenated length.
    for (int k = 0; k < count; ++k) {
      double s = total * (k + 0.5) / count;
      for (const auto& iv : iu->intervals()) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) continue;
        const double len = iv.hi - iv.lo;
        if (s <= len) {
          out.push_back(scalar_vector(iv.lo + s));
          break;
        }
        s -= len;
      }
    }
    return out;
  }
  if (const auto* fps = set.get_if<FinitePointSet>()) {
    std::vector<const Segment*> finite;
    for (const auto& seg : fps->segments) {
      if (!seg.is_ray()) finite.push_back(&seg);
    }
    if (finite.empty()) return out;
    for (int k = 0; k < count; ++k) {
      const Segment& seg = *finite[static_cast<std::size_t>(k) % finite.size()];
      out.push_back(seg.at(seg.length * (k / finite.size() + 0.5) /
                           ((count + finite.size() - 1) / finite.size())));
    }
    return out;
  }
  if (const auto* P = set.get_if<Polyhedron>()) {
    const auto verts = enumerate_vertices(*P).points;
    if (verts.size() < 2) return out;
    Rng rng(seed);
    for (int k = 0; k < count; ++k) {
      Vector x = Vector::Zero(P->dim());
      double wsum = 0.0;
      for (const auto& v : verts) {
        const double w = -std::log(1.0 - rng.uniform());
        x += w * v;
        wsum += w;
      }
      out.push_back(x / wsum);
    }
  }
  return out;
}

}  // namespace semilocal

#endif  // SEMILOCAL_SET_GEOMETRY_HPP_
