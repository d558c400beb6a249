#ifndef SEMILOCAL_MODULI_ESTIMATION_HPP_
#define SEMILOCAL_MODULI_ESTIMATION_HPP_

// Sampling estimators of the Lipschitz upper-semicontinuity modulus
//   limsup_{y -> ybar} sup_{x in M(y)} d(x, M(ybar)) / d(y, ybar)
// and of the calmness modulus at (ybar, xbar), where the inner sup only runs
// over x near xbar. Each limsup is replaced by per-radius maxima over a
// shrinking schedule.

#include "semilocal/mapping_families.hpp"

#include <thread>

namespace semilocal {

/// The nominal image M(ybar) is empty.
class DomainError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct RadiusSchedule {
  std::vector<double> radii;
  int samples_per_radius = 256;
  std::uint64_t seed = 0;
  double localization_radius_factor = 10.0;
  /// Classification over the last `window` levels.
  int window = 3;
  double growth_factor = 1.5;
  double stabilization_tol = 0.02;

  static RadiusSchedule geometric(double r0 = 1e-1, double ratio = 0.5, int levels = 12,
                                  int samples = 256, std::uint64_t seed = 0) {
    RadiusSchedule s;
    s.samples_per_radius = samples;
    s.seed = seed;
    for (int k = 0; k < levels; ++k) s.radii.push_back(r0 * std::pow(ratio, k));
    return s;
  }

  void validate() const {
    if (radii.empty()) throw ArgumentError("schedule: radii must be nonempty");
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw ArgumentError("schedule: radii must be positive");
      if (i > 0 && !(radii[i] < radii[i - 1])) throw ArgumentError("schedule: radii must be strictly decreasing");
    }
    if (samples_per_radius < 1) throw ArgumentError("schedule: samples_per_radius must be at least 1");
    if (!(localization_radius_factor > 0.0)) throw ArgumentError("schedule: localization_radius_factor must be positive");
    if (window < 2) throw ArgumentError("schedule: window must be at least 2");
    if (!(growth_factor > 1.0)) throw ArgumentError("schedule: growth_factor must exceed 1");
    if (!(stabilization_tol >= 0.0)) throw ArgumentError("schedule: stabilization_tol must be nonnegative");
  }
};

enum class Classification { finite, infinite, inconclusive };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::finite: return "finite";
    case Classification::infinite: return "infinite";
    case Classification::inconclusive: return "inconclusive";
  }
  return "";
}

struct RadiusLevel {
  double radius = 0.0;
  double worst = 0.0;  ///< may be +inf
  Vector witness_param;
  Vector witness_x;
  bool exact = true;   ///< every inner sup was exact
};

struct ModulusEstimate {
  std::vector<RadiusLevel> per_radius;
  ExtendedReal value;
  Classification classification = Classification::inconclusive;
  Vector witness_param;
  Vector witness_x;
};

/// Per-point results of sup_calmness_over_nominal.
struct CalmnessTable {
  std::vector<Vector> points;
  std::vector<ModulusEstimate> estimates;
  ModulusEstimate sup;
};

struct EstimatorOptions {
  std::vector<Vector> extra_probes;  ///< added to the family's probe directions
  int sup_budget = 1024;
  int threads = 1;
};

struct Quotient {
  double value = 0.0;  ///< may be +inf
  Vector x;            ///< image point attaining it, empty when M(y) is empty
  bool exact = true;
};

/// sup_{x in source} d(x, nominal) / d(y, ybar), with 0/0 := 0 and an empty
/// source contributing 0.
inline Quotient quotient(const SetRepr& source, const SetRepr& nominal, double param_dist, NormKind image_norm,
                         int budget = 1024) {
  Quotient q;
  const SupDistance s = sup_distance_over_set(source, nominal, image_norm, budget);
  q.exact = s.exact;
  if (s.value == -kInf) return q;
  q.x = s.witness;
  if (s.value <= Tolerances::distance) return q;
  q.value = std::isinf(s.value) ? kInf : s.value / param_dist;
  return q;
}

namespace detail {

/// Classifies the tail of the per-radius worst quotients.
inline void classify(ModulusEstimate& est, const RadiusSchedule& sch) {
  const auto& lv = est.per_radius;
  const std::size_t K = lv.size();
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(sch.window), K);
  const std::size_t first = K - w;
  auto pick_witness = [&](std::size_t i) {
    est.witness_param = lv[i].witness_param;
    est.witness_x = lv[i].witness_x;
  };
  for (std::size_t i = first; i < K; ++i) {
    if (std::isinf(lv[i].worst)) {
      est.value = ExtendedReal::infinity();
      est.classification = Classification::infinite;
      pick_witness(i);
      return;
    }
  }
  const double head = lv[first].worst, tail = lv[K - 1].worst;
  double lo = kInf, hi = 0.0;
  for (std::size_t i = first; i < K; ++i) {
    lo = std::min(lo, lv[i].worst);
    hi = std::max(hi, lv[i].worst);
  }
  const std::size_t last_two = K >= 2 ? K - 2 : K - 1;
  const std::size_t best = lv[K - 1].worst >= lv[last_two].worst ? K - 1 : last_two;
  if (w >= 2 && tail > Tolerances::distance && tail >= sch.growth_factor * head) {
    est.value = ExtendedReal::infinity();
    est.classification = Classification::infinite;
    pick_witness(K - 1);
    return;
  }
  est.value = ExtendedReal(lv[best].worst);
  pick_witness(best);
  const bool flat = hi <= Tolerances::distance || hi - lo <= sch.stabilization_tol * hi;
  est.classification = flat ? Classification::finite : Classification::inconclusive;
}

/// Runs fn(i) for i in [0, count) on up to `threads` threads.
template <class F>
void parallel_for(int count, int threads, F&& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Shared driver. `xbar` empty means the semilocal (Lipusc) estimator.
inline ModulusEstimate estimate(const MappingFamily& f, const Vector& ybar, const Vector& xbar,
                                const RadiusSchedule& sch, const EstimatorOptions& opt) {
  sch.validate();
  const SetRepr nominal = evaluate(f, ybar);
  if (nominal.is_empty()) throw DomainError(f.name() + ": nominal image is empty");
  const bool local = xbar.size() > 0;
  if (local && !contains(nominal, xbar, 1e-7, f.norms.image_norm)) {
    throw ArgumentError(f.name() + ": the reference point does not lie in the nominal image");
  }
  const int n_probes = 2 * static_cast<int>(f.probe_directions.size() + opt.extra_probes.size());

  ModulusEstimate est;
  for (std::size_t k = 0; k < sch.radii.size(); ++k) {
    const double r = sch.radii[k];
    const auto ys = sample_parameters(f, ybar, r, n_probes + sch.samples_per_radius,
                                      mix_seed(sch.seed, k), opt.extra_probes);
    std::vector<Quotient> qs(ys.size());
    parallel_for(static_cast<int>(ys.size()), opt.threads, [&](int i) {
      const auto& y = ys[static_cast<std::size_t>(i)];
      SetRepr image = evaluate(f, y);
      if (local) image = localize(image, xbar, sch.localization_radius_factor * r, f.norms.image_norm);
      qs[static_cast<std::size_t>(i)] =
          quotient(image, nominal, parameter_distance(f, y, ybar), f.norms.image_norm, opt.sup_budget);
    });
    RadiusLevel level;
    level.radius = r;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      level.exact = level.exact && qs[i].exact;
      if (i == 0 || qs[i].value > level.worst) {
        level.worst = qs[i].value;
        level.witness_param = ys[i];
        level.witness_x = qs[i].x;
      }
    }
    est.per_radius.push_back(std::move(level));
  }
  classify(est, sch);
  return est;
}

}  // namespace detail

inline ModulusEstimate estimate_lipusc(const MappingFamily& f, const Vector& ybar, const RadiusSchedule& sch,
                                       const EstimatorOptions& opt = {}) {
  return detail::estimate(f, ybar, Vector(), sch, opt);
}

inline ModulusEstimate estimate_calmness(const MappingFamily& f, const Vector& ybar, const Vector& xbar,
                                         const RadiusSchedule& sch, const EstimatorOptions& opt = {}) {
  if (xbar.size() != f.image_dim) throw ArgumentError(f.name() + ": reference point has the wrong dimension");
  return detail::estimate(f, ybar, xbar, sch, opt);
}

/// Extremes of the nominal image plus `interior` evenly spread interior points.
inline std::vector<Vector> nominal_probe_points(const MappingFamily& f, const Vector& ybar, int interior = 16,
                                                std::uint64_t seed = 0) {
  const SetRepr nominal = evaluate(f, ybar);
  if (nominal.is_empty()) throw DomainError(f.name() + ": nominal image is empty");
  if (const auto* P = nominal.get_if<Polyhedron>(); P && !is_bounded(*P)) {
    throw PreconditionError(f.name() + ": nominal image is unbounded; pass probe points explicitly");
  }
  std::vector<Vector> pts = extreme_points(nominal);
  for (auto& x : interior_samples(nominal, interior, seed)) pts.push_back(std::move(x));
  return pts;
}

inline CalmnessTable sup_calmness_over_nominal(const MappingFamily& f, const Vector& ybar,
                                               const std::vector<Vector>& probes, const RadiusSchedule& sch,
                                               const EstimatorOptions& opt = {}) {
  if (probes.empty()) throw ArgumentError("sup_calmness_over_nominal: no probe points");
  CalmnessTable table;
  table.points = probes;
  for (const auto& x : probes) table.estimates.push_back(estimate_calmness(f, ybar, x, sch, opt));

  // Per-level envelope over the points; the value is the largest per-point value.
  ModulusEstimate& sup = table.sup;
  for (std::size_t k = 0; k < sch.radii.size(); ++k) {
    RadiusLevel level = table.estimates.front().per_radius[k];
    for (const auto& e : table.estimates) {
      if (e.per_radius[k].worst > level.worst) level = e.per_radius[k];
      level.exact = level.exact && e.per_radius[k].exact;
    }
    sup.per_radius.push_back(std::move(level));
  }
  sup.value = ExtendedReal::zero();
  for (const auto& e : table.estimates) {
    if (sup.value < e.value || (e.value == sup.value && sup.witness_x.size() == 0)) {
      sup.value = e.value;
      sup.witness_param = e.witness_param;
      sup.witness_x = e.witness_x;
    }
  }
  bool any_inf = false, all_finite = true;
  for (const auto& e : table.estimates) {
    any_inf = any_inf || e.classification == Classification::infinite;
    all_finite = all_finite && e.classification == Classification::finite;
  }
  sup.classification = any_inf ? Classification::infinite
                                : (all_finite ? Classification::finite : Classification::inconclusive);
  return table;
}

inline CalmnessTable sup_calmness_over_nominal(const MappingFamily& f, const Vector& ybar,
                                               const RadiusSchedule& sch, const EstimatorOptions& opt = {}) {
  return sup_calmness_over_nominal(f, ybar, nominal_probe_points(f, ybar, 16, sch.seed), sch, opt);
}

}  // namespace semilocal

#endif  // SEMILOCAL_MODULI_ESTIMATION_HPP_
