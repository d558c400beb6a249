#ifndef SEMILOCAL_TOPOLOGY_CHECKS_HPP_
#define SEMILOCAL_TOPOLOGY_CHECKS_HPP_

// Numerical checks of outer semicontinuity and local boundedness at a
// nominal parameter. Sampling can refute either property but never prove
// it, so "pass" means "not refuted at tolerance".

#include "semilocal/moduli_estimation.hpp"

namespace semilocal {

enum class Verdict { pass, fail, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "";
}

struct Witness {
  Vector param;   ///< empty for representation-level findings
  Vector x;
  double measure = 0.0;  ///< distance to the nominal image, or image-point norm
};

struct CheckResult {
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> witness;
  std::string detail;
  std::vector<double> per_radius;  ///< excess distance or max norm per level
};

struct HypothesisVerdict {
  CheckResult nominal_closed;
  CheckResult osc;
  CheckResult locally_bounded;
  bool applicable = false;
  std::vector<std::string> violated;  ///< names of failed premises
};

struct TopologyOptions {
  double osc_tol = 1e-3;
  double window_factor = 10.0;  ///< image window radius per unit circumradius
  double window_floor = 1.0;    ///< minimum circumradius used for the window
  int interior_per_image = 4;
  std::vector<Vector> extra_probes;
};

namespace detail {

/// Largest norm of a point of `set` (closure); +inf if unbounded.
inline double max_point_norm(const SetRepr& set, NormKind kind) {
  if (set.is_empty()) return 0.0;
  if (const auto* iu = set.get_if<IntervalUnion>()) {
    return std::max(std::abs(iu->intervals().front().lo), std::abs(iu->intervals().back().hi));
  }
  if (const auto* P = set.get_if<Polyhedron>(); P && !is_bounded(*P)) return kInf;
  if (const auto* F = set.get_if<FinitePointSet>()) {
    for (const auto& s : F->segments) {
      if (s.is_ray()) return kInf;
    }
  }
  double out = 0.0;
  for (const auto& p : extreme_points(set)) out = std::max(out, norm(p, kind));
  return out;
}

/// Center and radius of the image window used by the osc check.
inline std::pair<Vector, double> image_window(const SetRepr& nominal, const TopologyOptions& opt) {
  const Eigen::Index n = nominal.dim();
  Vector lo = Vector::Constant(n, kInf), hi = Vector::Constant(n, -kInf);
  auto absorb = [&](const Vector& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  };
  if (const auto* iu = nominal.get_if<IntervalUnion>()) {
    absorb(scalar_vector(iu->intervals().front().lo));
    absorb(scalar_vector(iu->intervals().back().hi));
  } else if (const auto* P = nominal.get_if<Polyhedron>(); P && !is_bounded(*P)) {
    absorb(*feasible_point(P->A, P->b));
  } else {
    for (const auto& p : extreme_points(nominal)) absorb(p);
  }
  if (!lo.allFinite() || !hi.allFinite()) {
    // Unbounded interval union: centre on a finite endpoint.
    const Vector c = lo.allFinite() ? lo : (hi.allFinite() ? hi : Vector::Zero(n));
    return {c, opt.window_factor * opt.window_floor};
  }
  const Vector c = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo).norm();
  return {c, opt.window_factor * std::max(r, opt.window_floor)};
}

inline int probe_count(const MappingFamily& f, const TopologyOptions& opt) {
  return 2 * static_cast<int>(f.probe_directions.size() + opt.extra_probes.size());
}

}  // namespace detail

/// Representation-level closedness of the nominal image (open interval endpoints).
inline CheckResult check_nominal_closed(const MappingFamily& f, const Vector& ybar) {
  CheckResult out;
  const SetRepr nominal = evaluate(f, ybar);
  if (nominal.is_closed()) {
    out.verdict = Verdict::pass;
    return out;
  }
  out.verdict = Verdict::fail;
  const auto& iu = *nominal.get_if<IntervalUnion>();
  for (const auto& iv : iu.intervals()) {
    const double missing = !iv.lo_closed && std::isfinite(iv.lo) ? iv.lo : iv.hi;
    if ((!iv.lo_closed && std::isfinite(iv.lo)) || (!iv.hi_closed && std::isfinite(iv.hi))) {
      out.witness = Witness{Vector(), scalar_vector(missing), 0.0};
      out.detail = "nominal image omits its boundary point " + std::to_string(missing);
      break;
    }
  }
  return out;
}

/// Looks for graph points (y, x), y -> ybar, inside a bounded image window whose
/// distance to M(ybar) does not shrink with the radius.
inline CheckResult check_outer_semicontinuity(const MappingFamily& f, const Vector& ybar, const RadiusSchedule& sch,
                                              const TopologyOptions& opt = {}) {
  sch.validate();
  CheckResult out;
  const SetRepr nominal = evaluate(f, ybar);
  if (nominal.is_empty()) throw DomainError(f.name() + ": nominal image is empty");
  const auto [center, window] = detail::image_window(nominal, opt);
  const NormKind nk = f.norms.image_norm;

  std::vector<Witness> worst;
  for (std::size_t k = 0; k < sch.radii.size(); ++k) {
    const auto ys = sample_parameters(f, ybar, sch.radii[k], detail::probe_count(f, opt) + sch.samples_per_radius,
                                      mix_seed(sch.seed, k, 0x05c), opt.extra_probes);
    Witness w{ys.front(), Vector(), 0.0};
    for (const auto& y : ys) {
      const SetRepr image = localize(evaluate(f, y), center, window, nk);
      if (image.is_empty()) continue;
      std::vector<Vector> cand = extreme_points(image);
      for (auto& x : interior_samples(image, opt.interior_per_image, k)) cand.push_back(std::move(x));
      for (const auto& x : cand) {
        const double d = distance_to_set(x, nominal, nk).value();
        if (d > w.measure) w = {y, x, d};
      }
    }
    out.per_radius.push_back(w.measure);
    worst.push_back(std::move(w));
  }
  const std::size_t K = worst.size();
  const std::size_t first = K - std::min<std::size_t>(static_cast<std::size_t>(sch.window), K);
  const double head = worst[first].measure, tail = worst[K - 1].measure;
  bool persistent = true;
  for (std::size_t i = first; i < K; ++i) persistent = persistent && worst[i].measure > opt.osc_tol;
  if (persistent && tail >= 0.5 * head) {
    out.verdict = Verdict::fail;
    out.witness = worst[K - 1];
    out.detail = "graph points stay at distance " + std::to_string(tail) + " from the nominal image";
  } else {
    out.verdict = Verdict::pass;
  }
  if (!nominal.is_closed()) {
    // Distances are measured to the closure, so an open nominal set cannot be judged here.
    out.verdict = Verdict::inconclusive;
    out.witness.reset();
    out.detail = "nominal image is not closed; sampled cluster points cannot be separated from its closure";
  }
  return out;
}

/// Max image-point norm per radius level; fails when it is infinite or keeps growing.
inline CheckResult check_local_boundedness(const MappingFamily& f, const Vector& ybar, const RadiusSchedule& sch,
                                           const TopologyOptions& opt = {}) {
  sch.validate();
  CheckResult out;
  const SetRepr nominal = evaluate(f, ybar);
  if (nominal.is_empty()) throw DomainError(f.name() + ": nominal image is empty");
  const NormKind nk = f.norms.image_norm;
  const double base = detail::max_point_norm(nominal, nk);
  if (std::isinf(base)) {
    out.verdict = Verdict::fail;
    out.witness = Witness{ybar, Vector(), kInf};
    out.detail = "nominal image is unbounded";
    return out;
  }
  std::vector<Witness> worst;
  for (std::size_t k = 0; k < sch.radii.size(); ++k) {
    const auto ys = sample_parameters(f, ybar, sch.radii[k], detail::probe_count(f, opt) + sch.samples_per_radius,
                                      mix_seed(sch.seed, k, 0xb0d), opt.extra_probes);
    Witness w{ys.front(), Vector(), 0.0};
    for (const auto& y : ys) {
      const SetRepr image = evaluate(f, y);
      const double m = detail::max_point_norm(image, nk);
      if (m > w.measure) {
        w = {y, Vector(), m};
        if (std::isfinite(m)) {
          for (const auto& p : extreme_points(image)) {
            if (norm(p, nk) >= m) w.x = p;
          }
        }
      }
    }
    out.per_radius.push_back(w.measure);
    worst.push_back(std::move(w));
    if (std::isinf(worst.back().measure)) {
      out.verdict = Verdict::fail;
      out.witness = worst.back();
      out.detail = "perturbed image is unbounded at radius " + std::to_string(sch.radii[k]);
      return out;
    }
  }
  const std::size_t K = worst.size();
  const std::size_t first = K - std::min<std::size_t>(static_cast<std::size_t>(sch.window), K);
  const double head = worst[first].measure, tail = worst[K - 1].measure;
  const double scale = 1.0 + base;
  if (tail >= sch.growth_factor * head && tail > opt.window_factor * scale) {
    out.verdict = Verdict::fail;
    out.witness = worst[K - 1];
    out.detail = "image points escape: norm " + std::to_string(tail) + " at radius " + std::to_string(sch.radii[K - 1]);
  } else if (tail <= head * (1.0 + sch.stabilization_tol) + 1e-9 * scale) {
    out.verdict = Verdict::pass;
  } else {
    out.verdict = Verdict::inconclusive;
    out.detail = "image norms have not stabilized";
  }
  return out;
}

inline HypothesisVerdict hypothesis_report(const MappingFamily& f, const Vector& ybar, const RadiusSchedule& sch,
                                           const TopologyOptions& opt = {}) {
  HypothesisVerdict h;
  h.nominal_closed = check_nominal_closed(f, ybar);
  h.osc = check_outer_semicontinuity(f, ybar, sch, opt);
  h.locally_bounded = check_local_boundedness(f, ybar, sch, opt);
  if (h.nominal_closed.verdict == Verdict::fail) h.violated.push_back("closed_nominal");
  if (h.osc.verdict == Verdict::fail) h.violated.push_back("outer_semicontinuity");
  if (h.locally_bounded.verdict == Verdict::fail) h.violated.push_back("local_boundedness");
  h.applicable = h.nominal_closed.verdict == Verdict::pass && h.osc.verdict == Verdict::pass &&
                 h.locally_bounded.verdict == Verdict::pass;
  return h;
}

}  // namespace semilocal

#endif  // SEMILOCAL_TOPOLOGY_CHECKS_HPP_
