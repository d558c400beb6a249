#include "semilocal/equality.hpp"

#include <gtest/gtest.h>

#include "semilocal/fixtures.hpp"

using namespace semilocal;

namespace {

const RadiusSchedule kSchedule = RadiusSchedule::geometric(0.1, 0.5, 12, 64, 1);

}  // namespace

TEST(Topology, WellBehavedFixturesAreApplicable) {
  for (const std::string id : {"lp_optimal", "lcp", "sip", "sublevel"}) {
    const Fixture fx = make_fixture(id);
    const HypothesisVerdict h = hypothesis_report(fx.family, fx.nominal, kSchedule);
    EXPECT_TRUE(h.applicable) << id << ": " << h.osc.detail << " / " << h.locally_bounded.detail;
    EXPECT_TRUE(h.violated.empty()) << id;
  }
}

TEST(Topology, CounterexamplesFlagExactlyOnePremise) {
  const std::vector<std::pair<std::string, std::string>> expected{
      {"counterexample_sqrt", "closed_nominal"},
      {"counterexample_jump", "outer_semicontinuity"},
      {"counterexample_escape", "local_boundedness"}};
  for (const auto& [id, premise] : expected) {
    const Fixture fx = make_fixture(id);
    const HypothesisVerdict h = hypothesis_report(fx.family, fx.nominal, kSchedule);
    EXPECT_FALSE(h.applicable) << id;
    EXPECT_EQ(h.violated, std::vector<std::string>{premise}) << id;
  }
}

TEST(Topology, ClosednessWitnessLiesInClosureOnly) {
  const Fixture fx = make_fixture("counterexample_sqrt");
  const CheckResult r = check_nominal_closed(fx.family, fx.nominal);
  ASSERT_EQ(r.verdict, Verdict::fail);
  ASSERT_TRUE(r.witness.has_value());
  const SetRepr nominal = evaluate(fx.family, fx.nominal);
  const auto& iu = *nominal.get_if<IntervalUnion>();
  const double x = r.witness->x(0);
  bool inside = false;
  for (const auto& iv : iu.intervals()) {
    inside = inside || ((iv.lo_closed ? x >= iv.lo : x > iv.lo) && (iv.hi_closed ? x <= iv.hi : x < iv.hi));
  }
  EXPECT_FALSE(inside);
  EXPECT_EQ(distance_to_set(r.witness->x, nominal, NormKind::euclidean).value(), 0.0);
}

TEST(Topology, OscWitnessIsAGraphPointFarFromTheNominalImage) {
  const Fixture fx = make_fixture("counterexample_jump");
  const CheckResult r = check_outer_semicontinuity(fx.family, fx.nominal, kSchedule);
  ASSERT_EQ(r.verdict, Verdict::fail);
  ASSERT_TRUE(r.witness.has_value());
  const SetRepr image = evaluate(fx.family, r.witness->param);
  EXPECT_TRUE(contains(image, r.witness->x, 1e-12, NormKind::euclidean));
  const double d = distance_to_set(r.witness->x, evaluate(fx.family, fx.nominal), NormKind::euclidean).value();
  EXPECT_NEAR(d, r.witness->measure, 1e-12);
  EXPECT_GT(d, 0.5);
  EXPECT_LE(parameter_distance(fx.family, r.witness->param, fx.nominal), kSchedule.radii.back() + 1e-15);
}

TEST(Topology, BoundednessWitnessHasLargeNorm) {
  const Fixture fx = make_fixture("counterexample_escape");
  const CheckResult r = check_local_boundedness(fx.family, fx.nominal, kSchedule);
  ASSERT_EQ(r.verdict, Verdict::fail);
  ASSERT_TRUE(r.witness.has_value());
  const SetRepr image = evaluate(fx.family, r.witness->param);
  ASSERT_EQ(r.witness->x.size(), 1);
  EXPECT_TRUE(contains(image, r.witness->x, 1e-9, NormKind::euclidean));
  EXPECT_NEAR(std::abs(r.witness->x(0)), r.witness->measure, 1e-9);
  EXPECT_GT(r.witness->measure, 100.0);
  // Per-level maxima grow as the radius shrinks.
  for (std::size_t k = 1; k < r.per_radius.size(); ++k) EXPECT_GE(r.per_radius[k], r.per_radius[k - 1]);
}

TEST(Topology, UnboundedNominalFailsBoundedness) {
  // {x : 0 x <= 1} is the whole line.
  const MappingFamily f = make_lp_feasible(1, 1);
  const CheckResult r = check_local_boundedness(f, Vector{{0.0, 1.0}}, kSchedule);
  EXPECT_EQ(r.verdict, Verdict::fail);
}

TEST(Equality, InequalityHoldsAndVerdicts) {
  EXPECT_TRUE(moduli_inequality_holds(ExtendedReal(2.0), ExtendedReal(2.0), 1e-6));
  EXPECT_TRUE(moduli_inequality_holds(ExtendedReal::infinity(), ExtendedReal(5.0), 1e-6));
  EXPECT_FALSE(moduli_inequality_holds(ExtendedReal(1.0), ExtendedReal(2.0), 1e-6));
  EXPECT_FALSE(moduli_inequality_holds(ExtendedReal(1.0), ExtendedReal::infinity(), 1e-6));

  const Fixture lcp = make_fixture("lcp");
  const EqualityReport a = verify_equality(lcp.family, lcp.nominal, kSchedule);
  EXPECT_EQ(a.verdict, EqualityVerdict::equal);
  EXPECT_TRUE(a.inequality_holds);

  const Fixture jump = make_fixture("counterexample_jump");
  const EqualityReport b = verify_equality(jump.family, jump.nominal, kSchedule);
  EXPECT_EQ(b.verdict, EqualityVerdict::consistent_with_counterexample);
  EXPECT_TRUE(b.inequality_holds);
}
