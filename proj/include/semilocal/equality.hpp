#ifndef SEMILOCAL_EQUALITY_HPP_
#define SEMILOCAL_EQUALITY_HPP_

// Lipusc modulus versus the supremum of calmness moduli over the nominal
// image. The inequality Lipusc >= sup clm always holds; equality is expected
// when the image is closed, outer semicontinuous and locally bounded.

#include "semilocal/topology_checks.hpp"

namespace semilocal {

enum class EqualityVerdict { equal, unequal, consistent_with_counterexample, inconclusive };

inline const char* to_string(EqualityVerdict v) {
  switch (v) {
    case EqualityVerdict::equal: return "equal";
    case EqualityVerdict::unequal: return "unequal";
    case EqualityVerdict::consistent_with_counterexample: return "consistent_with_counterexample";
    case EqualityVerdict::inconclusive: return "inconclusive";
  }
  return "";
}

struct EqualityReport {
  ModulusEstimate lipusc;
  CalmnessTable sup_calmness;
  HypothesisVerdict hypotheses;
  bool inequality_holds = true;
  EqualityVerdict verdict = EqualityVerdict::inconclusive;
  double rel_tol = 0.03;
};

/// lipusc >= sup_clm - tol * max(1, sup_clm), with +inf handled as usual.
inline bool moduli_inequality_holds(ExtendedReal lipusc, ExtendedReal sup_clm, double tol) {
  if (lipusc.is_infinite()) return true;
  if (sup_clm.is_infinite()) return false;
  return lipusc.value() >= sup_clm.value() - tol * std::max(1.0, sup_clm.value());
}

inline EqualityReport verify_equality(const MappingFamily& f, const Vector& ybar, const RadiusSchedule& sch,
                                      double rel_tol = 0.03, const std::vector<Vector>& nominal_probes = {},
                                      const EstimatorOptions& opt = {}) {
  EqualityReport rep;
  rep.rel_tol = rel_tol;
  rep.lipusc = estimate_lipusc(f, ybar, sch, opt);
  rep.sup_calmness = nominal_probes.empty() ? sup_calmness_over_nominal(f, ybar, sch, opt)
                                            : sup_calmness_over_nominal(f, ybar, nominal_probes, sch, opt);
  TopologyOptions topo;
  topo.extra_probes = opt.extra_probes;
  rep.hypotheses = hypothesis_report(f, ybar, sch, topo);

  const ExtendedReal L = rep.lipusc.value, S = rep.sup_calmness.sup.value;
  rep.inequality_holds = moduli_inequality_holds(L, S, 1e-6);
  bool equal = false;
  if (L.is_infinite() && S.is_infinite()) {
    equal = true;
  } else if (L.is_finite() && S.is_finite()) {
    equal = std::abs(L.value() - S.value()) <= rel_tol * std::max(1.0, std::max(L.value(), S.value()));
  }
  const bool settled = rep.lipusc.classification != Classification::inconclusive &&
                       rep.sup_calmness.sup.classification != Classification::inconclusive;
  if (equal) {
    rep.verdict = EqualityVerdict::equal;
  } else if (!rep.hypotheses.violated.empty()) {
    rep.verdict = EqualityVerdict::consistent_with_counterexample;
  } else if (settled) {
    rep.verdict = EqualityVerdict::unequal;
  } else {
    rep.verdict = EqualityVerdict::inconclusive;
  }
  return rep;
}

}  // namespace semilocal

#endif  // SEMILOCAL_EQUALITY_HPP_
