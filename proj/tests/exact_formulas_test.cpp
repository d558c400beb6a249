#include "semilocal/exact_formulas.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace semilocal;

TEST(Nnls, RecoversConicCombination) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3, k = 1 + trial % 4;
    std::vector<Vector> gens;
    Vector v = Vector::Zero(d);
    for (int j = 0; j < k; ++j) {
      gens.push_back(Vector::NullaryExpr(d, [&] { return u(gen); }));
      v += pos(gen) * gens.back();
    }
    const ConeMembership cm = cone_membership(v, gens);
    ASSERT_TRUE(cm.holds) << "trial " << trial;
    Vector back = Vector::Zero(d);
    for (int j = 0; j < k; ++j) {
      EXPECT_GE((*cm.multipliers)(j), 0.0);
      back += (*cm.multipliers)(j) * gens[static_cast<std::size_t>(j)];
    }
    EXPECT_LT((back - v).norm(), 1e-8);
  }
}

TEST(Nnls, RejectsVectorOutsideHalfspace) {
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vector> gens;
    for (int j = 0; j < 3; ++j) gens.push_back(Vector{{pos(gen), u(gen), u(gen)}});
    const Vector v{{-pos(gen), u(gen), u(gen)}};
    EXPECT_FALSE(cone_membership(v, gens).holds);
  }
  EXPECT_TRUE(cone_membership(Vector::Zero(2), {}).holds);
  EXPECT_FALSE(cone_membership(Vector{{1.0, 0.0}}, {}).holds);
}

TEST(PartialInverse, MatchesOracles) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int N = 2 + trial % 4, n = 1 + trial % N;
    const Matrix M = Matrix::NullaryExpr(N, N, [&] { return u(gen); }) + 2.0 * Matrix::Identity(N, N);
    const Matrix top = M.inverse().topRows(n);
    EXPECT_NEAR(operator_partial_inverse_norm(M, n, OperatorNorm::spectral), oracle::power_iteration_norm(top),
                1e-7);
    EXPECT_NEAR(operator_partial_inverse_norm(M, n, OperatorNorm::inf_induced), oracle::inf_norm(top), 1e-9);
  }
}

TEST(PartialInverse, NormsAreConsistent) {
  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int N = 2 + trial % 5, n = 1 + trial % N;
    const Matrix M = Matrix::NullaryExpr(N, N, [&] { return u(gen); }) + 2.0 * Matrix::Identity(N, N);
    const double s = operator_partial_inverse_norm(M, n, OperatorNorm::spectral);
    const double i = operator_partial_inverse_norm(M, n, OperatorNorm::inf_induced);
    EXPECT_LE(i, std::sqrt(static_cast<double>(N)) * s * (1 + 1e-12));
    EXPECT_LE(s, std::sqrt(static_cast<double>(n)) * i * (1 + 1e-12));
  }
}

TEST(PartialInverse, SingularThrows) {
  Matrix M{{1.0, 1.0}, {1.0, 1.0}};
  EXPECT_THROW(operator_partial_inverse_norm(M, 1, OperatorNorm::spectral), SingularMatrixError);
}

TEST(QpModulus, HandFixtureOneConstraint) {
  const Matrix Q{{1.0}}, A{{1.0}};
  const QpModulus r = qp_canonical_modulus(Q, A, Vector{{-2.0}}, Vector{{1.0}});
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_NEAR(r.active.x(0), 1.0, 1e-12);
  ASSERT_EQ(r.certificates.size(), 1u);
  EXPECT_EQ(r.certificates[0].D, (std::vector<int>{0}));
  EXPECT_LT((r.certificates[0].M_D - Matrix{{1.0, 1.0}, {1.0, 0.0}}).norm(), 1e-15);
  EXPECT_NEAR(qp_canonical_modulus(Q, A, Vector{{-2.0}}, Vector{{1.0}}, OperatorNorm::inf_induced).value, 1.0, 1e-9);
}

TEST(QpModulus, HandFixtureUnconstrained) {
  const Matrix Q = 2.0 * Matrix::Identity(2, 2);
  const QpModulus r = qp_canonical_modulus(Q, Matrix(0, 2), Vector{{1.0, -1.0}}, Vector(0));
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  ASSERT_EQ(r.certificates.size(), 1u);
  EXPECT_TRUE(r.certificates[0].D.empty());
}

TEST(QpModulus, CertificatesAreValid) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto P = oracle::random_canonical_qp(gen);
    const QpModulus r = qp_canonical_modulus(P.Q, P.A, P.c, P.b);
    EXPECT_LT((r.active.x - P.x).norm(), 1e-7);
    EXPECT_EQ(r.active.T, P.active);
    const Vector g = -(P.Q * r.active.x + P.c);
    for (const auto& cert : r.certificates) {
      for (int i : cert.D) EXPECT_NE(std::find(r.active.T.begin(), r.active.T.end(), i), r.active.T.end());
      EXPECT_TRUE((cert.cone_multipliers.array() >= 0.0).all());
      if (!cert.D.empty()) {
        EXPECT_LT((cert.A_D.transpose() * cert.cone_multipliers - g).norm(), 1e-8);
      }
      const Eigen::Index n = P.Q.rows(), k = static_cast<Eigen::Index>(cert.D.size());
      EXPECT_EQ(cert.M_D.topLeftCorner(n, n), P.Q);
      EXPECT_TRUE(cert.M_D.bottomRightCorner(k, k).isZero());
      EXPECT_NEAR(cert.partial_inverse_norm,
                  oracle::power_iteration_norm(cert.M_D.inverse().topRows(n)), 1e-6 * (1 + cert.partial_inverse_norm));
    }
    ASSERT_FALSE(r.attaining.empty());
    EXPECT_EQ(r.certificates[r.attaining.front()].partial_inverse_norm, r.value);
  }
}

TEST(QpModulus, InfInducedMatchesFiniteDifferences) {
  std::mt19937_64 gen(12);
  for (int trial = 0; trial < 25; ++trial) {
    const auto P = oracle::random_canonical_qp(gen);
    const double exact = qp_canonical_modulus(P.Q, P.A, P.c, P.b, OperatorNorm::inf_induced).value;
    const double fd = oracle::qp_calmness_fd(P.Q, P.A, P.c, P.b, 1e-4);
    EXPECT_NEAR(exact, fd, 1e-6 * (1 + exact)) << "trial " << trial;
  }
}

TEST(QpModulus, DegenerateEnumerationIsOrderedAndMonotone) {
  // x = 0 with three active constraints and zero gradient: every
  // independent subset is admissible.
  const Matrix Q = Matrix::Identity(2, 2);
  const Matrix A{{1.0, 0.0}, {0.0, 1.0}, {1.0, 2.0}};
  const Vector c = Vector::Zero(2), b = Vector::Zero(3);
  const QpModulus full = qp_canonical_modulus(Q, A, c, b);
  EXPECT_EQ(full.active.T, (std::vector<int>{0, 1, 2}));
  std::vector<std::vector<int>> order;
  for (const auto& cert : full.certificates) order.push_back(cert.D);
  EXPECT_EQ(order, (std::vector<std::vector<int>>{{}, {0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}));
  for (const auto& sub : std::vector<std::vector<int>>{{}, {0}, {2}, {0, 1}, {1, 2}}) {
    const double v = qp_modulus_over(Q, A, c, full.active, sub, OperatorNorm::spectral).value;
    EXPECT_LE(v, full.value + 1e-12);
  }
  // Growing the candidate list never decreases the value.
  double prev = 0.0;
  for (std::vector<int> cand; cand.size() <= 3; cand.push_back(static_cast<int>(cand.size()))) {
    const double v = qp_modulus_over(Q, A, c, full.active, cand, OperatorNorm::spectral).value;
    EXPECT_GE(v, prev - 1e-12);
    prev = v;
    if (cand.size() == 3) break;
  }
}

TEST(QpModulus, Errors) {
  // Non-unique: Q = 0, minimize nothing over a box.
  const Matrix box{{1.0}, {-1.0}};
  EXPECT_THROW(qp_canonical_modulus(Matrix::Zero(1, 1), box, Vector::Zero(1), Vector{{1.0, 1.0}}),
               PreconditionError);
  EXPECT_THROW(qp_canonical_modulus(Matrix{{-1.0}}, box, Vector::Zero(1), Vector{{1.0, 1.0}}), PreconditionError);
  EXPECT_THROW(qp_canonical_modulus(Matrix::Identity(1, 1), Matrix{{1.0}, {-1.0}}, Vector::Zero(1),
                                    Vector{{-1.0, -1.0}}),
               PreconditionError);
  // Nonzero gradient with no candidates left.
  const Matrix Q{{1.0}}, A{{1.0}};
  const ActiveSet as = qp_nominal_active_set(Q, A, Vector{{-2.0}}, Vector{{1.0}});
  EXPECT_THROW(qp_modulus_over(Q, A, Vector{{-2.0}}, as, {}, OperatorNorm::spectral), NoAdmissibleActiveSetError);
  const Matrix many = Matrix::Ones(21, 1);
  EXPECT_THROW(qp_canonical_modulus(Q, many, Vector{{-1.0}}, Vector::Zero(21)), EnumerationBudgetError);
}

TEST(SublevelModulus, SineOnTwoPeriods) {
  const SublevelModulus r = sublevel_modulus(ScalarFunction::sine(), 0.0, -2 * M_PI, 2 * M_PI);
  EXPECT_NEAR(r.value.value(), 1.0, 1e-9);
  ASSERT_EQ(r.boundary.size(), 5u);
  const double expected[] = {-2 * M_PI, -M_PI, 0.0, M_PI, 2 * M_PI};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.boundary[i], expected[i], 1e-9);
  EXPECT_FALSE(r.vanishing_gradient);
}

TEST(SublevelModulus, Parabola) {
  const SublevelModulus r = sublevel_modulus(ScalarFunction::polynomial({0.0, 0.0, 1.0}), 1.0, -2.0, 2.0);
  EXPECT_NEAR(r.value.value(), 0.5, 1e-9);
  ASSERT_EQ(r.boundary.size(), 2u);
  EXPECT_NEAR(r.boundary[0], -1.0, 1e-9);
  EXPECT_NEAR(r.boundary[1], 1.0, 1e-9);
}

TEST(SublevelModulus, ShiftedLevelsMatchClosedForm) {
  // x^2 <= a on [-3, 3]: boundary +-sqrt(a), modulus 1 / (2 sqrt(a)).
  for (double a : {0.25, 0.5, 2.0, 4.0}) {
    const SublevelModulus r = sublevel_modulus(ScalarFunction::polynomial({0.0, 0.0, 1.0}), a, -3.0, 3.0);
    EXPECT_NEAR(r.value.value(), 0.5 / std::sqrt(a), 1e-9) << a;
  }
}

TEST(SublevelModulus, VanishingGradientIsInfinite) {
  const SublevelModulus r = sublevel_modulus(ScalarFunction::polynomial({0.0, 0.0, 0.0, 1.0}), 0.0, -1.0, 1.0);
  EXPECT_TRUE(r.vanishing_gradient);
  EXPECT_TRUE(r.value.is_infinite());
}

TEST(SublevelModulus, NoBoundaryGivesZero) {
  const SublevelModulus r = sublevel_modulus(ScalarFunction::polynomial({0.0, 0.0, 1.0}), 10.0, -1.0, 1.0);
  EXPECT_TRUE(r.boundary.empty());
  EXPECT_EQ(r.value.value(), 0.0);
}
