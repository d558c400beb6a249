#ifndef SEMILOCAL_FIXTURES_HPP_
#define SEMILOCAL_FIXTURES_HPP_

// Built-in worked instances, addressable by id.

#include "semilocal/mapping_families.hpp"

namespace semilocal {

struct Fixture {
  std::string id;
  std::string description;
  MappingFamily family;
  Vector nominal;
};

inline const std::vector<std::string>& fixture_ids() {
  static const std::vector<std::string> ids{"lp_optimal",          "lcp",
                                            "sip",                 "sublevel",
                                            "counterexample_sqrt", "counterexample_jump",
                                            "counterexample_escape"};
  return ids;
}

inline Fixture make_fixture(const std::string& id) {
  Fixture fx;
  fx.id = id;
  if (id == "lp_optimal") {
    // argmin{ c x : a x <= b, x >= 0 } at (a, b, c) = (1, 1, -1); nominal optimum {1}.
    fx.description = "one-variable LP optimal set under full perturbation of (a, b, c)";
    fx.family = make_lp_optimal_full(1, 1, Matrix::Constant(1, 1, -1.0), Vector::Zero(1));
    fx.family.probe_directions = {Vector{{-1.0, 1.0, 0.0}}};
    fx.nominal = Vector{{1.0, 1.0, -1.0}};
  } else if (id == "lcp") {
    fx.description = "scalar LCP at (M, q) = (-1, 1); nominal solutions {0, 1}";
    fx.family = make_lcp(1);
    fx.family.probe_directions = {Vector{{1.0, 1.0}}};
    fx.nominal = Vector{{-1.0, 1.0}};
  } else if (id == "sip") {
    fx.description = "t x <= 1 for t in [-1, 1] on a 201-point grid; nominal [-1, 1]";
    fx.family = make_sip_grid(1, 201);
    fx.nominal = Vector{{0.0, 1.0, 0.0, 1.0, 0.0}};
  } else if (id == "sublevel") {
    fx.description = "{x in [-2pi, 2pi] : sin x <= alpha} at alpha = 0";
    fx.family = make_sublevel_1d(ScalarFunction::sine(), -2.0 * M_PI, 2.0 * M_PI);
    fx.family.probe_directions = {Vector{{1.0}}};
    fx.nominal = Vector::Zero(1);
  } else if (id == "counterexample_sqrt" || id == "counterexample_jump" || id == "counterexample_escape") {
    fx.family = make_counterexample(family_kind_from_string(id));
    fx.family.probe_directions = {Vector{{1.0}}};
    fx.nominal = Vector::Zero(1);
    if (id == "counterexample_sqrt") fx.description = "(-1, 0) for y <= 0, (-1, 0) u (0, sqrt y) for y > 0";
    if (id == "counterexample_jump") fx.description = "{0} at y = 0, {0, 1} otherwise";
    if (id == "counterexample_escape") fx.description = "{0} at y = 0, {0, 1/y} otherwise";
  } else {
    throw ArgumentError("unknown example id '" + id + "'");
  }
  return fx;
}

}  // namespace semilocal

#endif  // SEMILOCAL_FIXTURES_HPP_
