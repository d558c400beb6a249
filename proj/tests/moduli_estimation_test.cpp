#include "semilocal/moduli_estimation.hpp"

#include <gtest/gtest.h>

#include <random>

#include "semilocal/fixtures.hpp"

using namespace semilocal;

namespace {

RadiusSchedule small_schedule(int samples = 64, std::uint64_t seed = 3) {
  return RadiusSchedule::geometric(0.1, 0.5, 8, samples, seed);
}

MappingFamily euclidean_identity(Eigen::Index d) {
  MappingFamily f = make_identity(d);
  f.norms = {NormKind::euclidean, NormKind::euclidean};
  return f;
}

}  // namespace

TEST(Quotient, ZeroOverZeroAndEmptySource) {
  const SetRepr nominal = FinitePointSet(1, {Vector{{0.0}}});
  EXPECT_EQ(quotient(nominal, nominal, 0.0, NormKind::euclidean).value, 0.0);
  EXPECT_EQ(quotient(IntervalUnion(), nominal, 0.1, NormKind::euclidean).value, 0.0);
  EXPECT_NEAR(quotient(FinitePointSet(1, {Vector{{0.3}}}), nominal, 0.1, NormKind::euclidean).value, 3.0, 1e-12);
}

TEST(Estimation, IdentityHasModulusOne) {
  const MappingFamily f = euclidean_identity(3);
  const Vector ybar{{0.2, -0.4, 1.0}};
  const ModulusEstimate L = estimate_lipusc(f, ybar, small_schedule());
  EXPECT_EQ(L.classification, Classification::finite);
  EXPECT_NEAR(L.value.value(), 1.0, 1e-9);
  for (const auto& lv : L.per_radius) EXPECT_NEAR(lv.worst, 1.0, 1e-9);
  const ModulusEstimate C = estimate_calmness(f, ybar, ybar, small_schedule());
  EXPECT_NEAR(C.value.value(), 1.0, 1e-9);
}

TEST(Estimation, ChebyshevToEuclideanIdentityAttainsSqrtTwoOnProbes) {
  MappingFamily f = make_identity(2);
  f.probe_directions = {Vector{{1.0, 1.0}}};
  const ModulusEstimate L = estimate_lipusc(f, Vector::Zero(2), small_schedule());
  EXPECT_NEAR(L.value.value(), std::sqrt(2.0), 1e-9);
}

TEST(Estimation, ConstantHasModulusZero) {
  const MappingFamily f = make_constant_point(Vector{{1.0, 2.0}}, 3);
  const ModulusEstimate L = estimate_lipusc(f, Vector::Zero(3), small_schedule());
  EXPECT_EQ(L.value.value(), 0.0);
  EXPECT_EQ(L.classification, Classification::finite);
}

TEST(Estimation, DeterministicAcrossRunsAndThreads) {
  const Fixture fx = make_fixture("lcp");
  const auto sch = small_schedule(48, 11);
  EstimatorOptions one, three;
  three.threads = 3;
  const ModulusEstimate a = estimate_lipusc(fx.family, fx.nominal, sch, one);
  const ModulusEstimate b = estimate_lipusc(fx.family, fx.nominal, sch, one);
  const ModulusEstimate c = estimate_lipusc(fx.family, fx.nominal, sch, three);
  ASSERT_EQ(a.per_radius.size(), c.per_radius.size());
  for (std::size_t k = 0; k < a.per_radius.size(); ++k) {
    EXPECT_EQ(a.per_radius[k].worst, b.per_radius[k].worst);
    EXPECT_EQ(a.per_radius[k].worst, c.per_radius[k].worst);
    EXPECT_EQ(a.per_radius[k].witness_param, c.per_radius[k].witness_param);
  }
  EXPECT_EQ(a.value, c.value);
}

TEST(Estimation, LocalizedNeverExceedsSemilocal) {
  for (const std::string id : {"lp_optimal", "lcp", "sip"}) {
    const Fixture fx = make_fixture(id);
    const auto sch = small_schedule(32, 5);
    const ModulusEstimate L = estimate_lipusc(fx.family, fx.nominal, sch);
    for (const auto& x : nominal_probe_points(fx.family, fx.nominal, 4)) {
      const ModulusEstimate C = estimate_calmness(fx.family, fx.nominal, x, sch);
      for (std::size_t k = 0; k < L.per_radius.size(); ++k) {
        EXPECT_LE(C.per_radius[k].worst, L.per_radius[k].worst + 1e-12) << id << " level " << k;
      }
    }
  }
}

TEST(Estimation, ExtraProbesNeverLowerTheEstimate) {
  std::mt19937_64 gen(21);
  std::normal_distribution<double> nd;
  const Fixture fx = make_fixture("lp_optimal");
  const auto sch = small_schedule(32, 8);
  const ModulusEstimate base = estimate_lipusc(fx.family, fx.nominal, sch);
  for (int trial = 0; trial < 3; ++trial) {
    EstimatorOptions opt;
    for (int j = 0; j < 3; ++j) opt.extra_probes.push_back(Vector::NullaryExpr(3, [&] { return nd(gen); }));
    const ModulusEstimate more = estimate_lipusc(fx.family, fx.nominal, sch, opt);
    for (std::size_t k = 0; k < base.per_radius.size(); ++k) {
      EXPECT_GE(more.per_radius[k].worst, base.per_radius[k].worst - 1e-12);
    }
  }
}

TEST(Estimation, ImageScalingScalesTheModulus) {
  // {x : (x / s)^2 <= alpha} is s times {x : x^2 <= alpha}.
  const double s = 3.0;
  const auto sch = small_schedule(16, 2);
  const MappingFamily f = make_sublevel_1d(ScalarFunction::polynomial({0.0, 0.0, 1.0}), -2.0, 2.0);
  const MappingFamily g = make_sublevel_1d(ScalarFunction::polynomial({0.0, 0.0, 1.0 / (s * s)}), -2.0 * s, 2.0 * s);
  const ModulusEstimate a = estimate_lipusc(f, Vector{{1.0}}, sch);
  const ModulusEstimate b = estimate_lipusc(g, Vector{{1.0}}, sch);
  EXPECT_NEAR(a.value.value(), 0.5, 0.02);
  EXPECT_NEAR(b.value.value(), s * a.value.value(), 1e-6 * s);
}

TEST(Estimation, CounterexamplesAreInfinite) {
  for (const std::string id : {"counterexample_sqrt", "counterexample_jump", "counterexample_escape"}) {
    const Fixture fx = make_fixture(id);
    const ModulusEstimate L = estimate_lipusc(fx.family, fx.nominal, RadiusSchedule::geometric());
    EXPECT_EQ(L.classification, Classification::infinite) << id;
    const CalmnessTable T = sup_calmness_over_nominal(fx.family, fx.nominal, RadiusSchedule::geometric());
    EXPECT_EQ(T.sup.value.value(), 0.0) << id;
  }
}

TEST(Estimation, Classification) {
  ModulusEstimate e;
  const auto sch = RadiusSchedule::geometric(0.1, 0.5, 4);
  auto with = [&](std::vector<double> w) {
    e.per_radius.clear();
    for (std::size_t i = 0; i < w.size(); ++i) e.per_radius.push_back(RadiusLevel{sch.radii[i], w[i], {}, {}, true});
    detail::classify(e, sch);
    return e.classification;
  };
  EXPECT_EQ(with({5, 2, 2, 2}), Classification::finite);
  EXPECT_EQ(with({1, 2, 4, 8}), Classification::infinite);
  EXPECT_EQ(with({1, 1, 1, kInf}), Classification::infinite);
  EXPECT_EQ(with({1, 1, 1.2, 1.3}), Classification::inconclusive);
  with({1, 2, 2.01, 2.02});
  EXPECT_NEAR(e.value.value(), 2.02, 1e-12);
}

TEST(Estimation, Errors) {
  const Fixture fx = make_fixture("lcp");
  EXPECT_THROW(estimate_calmness(fx.family, fx.nominal, Vector{{0.5}}, small_schedule()), ArgumentError);
  // q = -1, M = 1 has solution x = 1; M = -1, q = -1 has none.
  EXPECT_THROW(estimate_lipusc(fx.family, Vector{{-1.0, -1.0}}, small_schedule()), DomainError);
  RadiusSchedule bad = small_schedule();
  bad.radii = {0.1, 0.2};
  EXPECT_THROW(estimate_lipusc(fx.family, fx.nominal, bad), ArgumentError);
}
