#include "semilocal/set_geometry.hpp"

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace semilocal {
namespace {

Polyhedron halfline_upper(double bound) {  // {x : x <= bound} in 1-D
  return {Matrix::Constant(1, 1, 1.0), Vector::Constant(1, bound)};
}

Polyhedron unit_box(Eigen::Index n) {
  Matrix A(2 * n, n);
  A << Matrix::Identity(n, n), -Matrix::Identity(n, n);
  return {A, Vector::Ones(2 * n)};
}

TEST(ExtendedReal, InfinityAbsorbsAdditionAndMax) {
  const auto inf = ExtendedReal::infinity();
  const ExtendedReal two(2.0);
  EXPECT_TRUE((inf + two).is_infinite());
  EXPECT_TRUE(max(two, inf).is_infinite());
  EXPECT_LT(two, inf);
  EXPECT_THROW(ExtendedReal(-1.0), ArgumentError);
}

TEST(DistanceToSet, EmptySetIsInfinite) {
  const SetRepr empty = IntervalUnion{};
  EXPECT_TRUE(distance_to_set(scalar_vector(0.5), empty).is_infinite());
  Polyhedron contradictory(Matrix(2, 1), Vector(2));
  contradictory.A << 1, -1;
  contradictory.b << 0, -1;  // x <= 0 and x >= 1
  EXPECT_TRUE(distance_to_set(scalar_vector(0.5), SetRepr(contradictory)).is_infinite());
  EXPECT_TRUE(distance_to_set(scalar_vector(0.5), SetRepr(FinitePointSet(1))).is_infinite());
}

TEST(DistanceToSet, SinglePoint) {
  const SetRepr origin = FinitePointSet(1, {scalar_vector(0.0)});
  EXPECT_DOUBLE_EQ(distance_to_set(scalar_vector(1.0), origin).value(), 1.0);
}

TEST(DistanceToSet, HalfPlaneAgainstGrid) {
  Polyhedron half(Matrix(1, 2), Vector::Constant(1, 1.0));
  half.A << 1, 0;
  const Vector p = Eigen::Vector2d(2.0, 0.0);
  const double d = distance_to_set(p, SetRepr(half)).value();
  // Grid brute force over the half-plane, restricted to a window around p.
  const auto hit = oracle::grid_nearest(half.A, half.b, Eigen::Vector2d(2, 0),
                                        Eigen::Vector2d(-1, -2), Eigen::Vector2d(3, 2), 0.01);
  EXPECT_NEAR(d, hit.distance, 0.01);
  EXPECT_NEAR(d, 1.0, 1e-9);
}

TEST(DistanceToSet, DimensionMismatchIsArgumentError) {
  EXPECT_THROW(distance_to_set(Eigen::Vector2d(0, 0), SetRepr(halfline_upper(1.0))), ArgumentError);
}

TEST(ProjectOntoPolyhedron, InteriorPointProjectsToItself) {
  const Vector p = Eigen::Vector2d(0.25, -0.5);
  const auto proj = project_onto_polyhedron(p, unit_box(2));
  EXPECT_EQ(proj.point, p);
  EXPECT_EQ(proj.distance, 0.0);
}

TEST(ProjectOntoPolyhedron, SingleActiveConstraint) {
  const auto proj = project_onto_polyhedron(scalar_vector(2.0), halfline_upper(1.0));
  EXPECT_NEAR(proj.point(0), 1.0, 1e-12);
  EXPECT_NEAR(proj.distance, 1.0, 1e-12);
}

TEST(ProjectOntoPolyhedron, OrthantCornerAgainstGrid) {
  Polyhedron orthant(Matrix::Identity(2, 2), Vector::Zero(2));
  const auto proj = project_onto_polyhedron(Eigen::Vector2d(1, 1), orthant);
  const auto hit = oracle::grid_projection(orthant.A, orthant.b, Eigen::Vector2d(1, 1), 2.0, 0.01);
  EXPECT_NEAR(proj.distance, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(proj.distance, hit.distance, 0.01);
  EXPECT_LT(proj.point.norm(), 1e-12);
}

TEST(ProjectOntoPolyhedron, EmptyPolyhedron) {
  Polyhedron P(Matrix(2, 1), Vector(2));
  P.A << 1, -1;
  P.b << -1, -1;  // x <= -1 and x >= 1
  const auto proj = project_onto_polyhedron(scalar_vector(0.0), P);
  EXPECT_TRUE(std::isinf(proj.distance));
  EXPECT_EQ(proj.point.size(), 0);
}

TEST(ProjectOntoPolyhedron, KktResidualAndGridOnRandomPolygons) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    Matrix A;
    Vector b;
    oracle::random_polygon(gen, A, b);
    const Eigen::Vector2d p(coord(gen), coord(gen));
    const auto proj = project_onto_polyhedron(p, Polyhedron(A, b));
    ASSERT_EQ(proj.point.size(), 2);
    EXPECT_LE((A * proj.point - b).maxCoeff(), 1e-9);
    EXPECT_LE(kkt_residual(Matrix::Identity(2, 2), -p, A, b, proj.point, proj.multipliers), 1e-8);
    const auto hit = oracle::grid_projection(A, b, p, 3.5, 0.01);
    EXPECT_LE(std::abs(proj.distance - hit.distance), 0.01 + 1e-6) << "trial " << trial;
    EXPECT_GE(hit.distance, proj.distance - 1e-9) << "grid beat the projection, trial " << trial;
  }
}

TEST(EnumerateVertices, UnitSquare) {
  const auto v = enumerate_vertices(unit_box(2));
  EXPECT_EQ(v.points.size(), 4u);
  for (const auto& p : v.points) EXPECT_NEAR(p.cwiseAbs().minCoeff(), 1.0, 1e-12);
}

TEST(EnumerateVertices, Interval) {
  Polyhedron P(Matrix(2, 1), Vector::Ones(2));
  P.A << 1, -1;
  auto v = enumerate_vertices(P).points;
  ASSERT_EQ(v.size(), 2u);
  std::sort(v.begin(), v.end(), [](const Vector& a, const Vector& b) { return a(0) < b(0); });
  EXPECT_DOUBLE_EQ(v[0](0), -1.0);
  EXPECT_DOUBLE_EQ(v[1](0), 1.0);
}

TEST(EnumerateVertices, SimplexMatchesCramerBruteForce) {
  Matrix A(4, 3);
  A << -Matrix::Identity(3, 3), Eigen::RowVector3d::Ones();
  Vector b(4);
  b << 0, 0, 0, 1;
  const auto v = enumerate_vertices(Polyhedron(A, b)).points;
  const auto ref = oracle::vertices_3d(A, b);
  ASSERT_EQ(v.size(), 4u);
  ASSERT_EQ(ref.size(), 4u);
  for (const auto& r : ref) {
    bool found = false;
    for (const auto& p : v) found = found || (p - Vector(r)).norm() < 1e-9;
    EXPECT_TRUE(found);
  }
}

TEST(EnumerateVertices, RejectsUnboundedAndHighDimension) {
  EXPECT_THROW(enumerate_vertices(halfline_upper(1.0)), UnboundedPolyhedronError);
  EXPECT_THROW(enumerate_vertices(unit_box(5)), UnsupportedError);
}

TEST(SupDistance, EmptySourceIsMinusInfinity) {
  const auto r = sup_distance_over_set(SetRepr(IntervalUnion{}),
                                       SetRepr(FinitePointSet(1, {scalar_vector(0.0)})));
  EXPECT_EQ(r.value, -kInf);
}

TEST(SupDistance, IntervalExcessAtEndpoint) {
  const double eps = 0.125;
  const SetRepr source = IntervalUnion({Interval::closed(0.0, 1.0 + eps)});
  const SetRepr target = IntervalUnion({Interval::closed(0.0, 1.0)});
  const auto r = sup_distance_over_set(source, target);
  EXPECT_DOUBLE_EQ(r.value, eps);
  EXPECT_DOUBLE_EQ(r.witness(0), 1.0 + eps);
  EXPECT_TRUE(r.exact);
}

TEST(SupDistance, EscapingBranchPoint) {
  const double y = 0.1;
  const SetRepr source = FinitePointSet(1, {scalar_vector(0.0), scalar_vector(1.0 / y)});
  const SetRepr target = FinitePointSet(1, {scalar_vector(0.0)});
  EXPECT_DOUBLE_EQ(sup_distance_over_set(source, target).value, 10.0);
}

TEST(SupDistance, GapMidpointOfNonconvexTarget) {
  const SetRepr source = IntervalUnion({Interval::closed(-1.0, 3.0)});
  const SetRepr target = IntervalUnion({Interval::closed(-1.0, 0.0), Interval::closed(2.0, 3.0)});
  EXPECT_DOUBLE_EQ(sup_distance_over_set(source, target).value, 1.0);
}

TEST(SupDistance, PolygonVerticesAgainstConvexTarget) {
  Polyhedron big = unit_box(2);
  big.b *= 2.0;
  const auto r = sup_distance_over_set(SetRepr(big), SetRepr(unit_box(2)));
  EXPECT_NEAR(r.value, std::sqrt(2.0), 1e-9);
  EXPECT_TRUE(r.exact);
}

TEST(SupDistance, UnboundedSourceFlagged) {
  Polyhedron quadrant(-Matrix::Identity(2, 2), Vector::Zero(2));
  const auto r = sup_distance_over_set(SetRepr(quadrant), SetRepr(FinitePointSet(2, {Vector::Zero(2)})));
  EXPECT_TRUE(std::isinf(r.value));
  EXPECT_TRUE(r.unbounded_source);
}

TEST(SupDistance, HighDimensionalPolyhedronIsFlaggedLowerBound) {
  const auto r = sup_distance_over_set(SetRepr(unit_box(5)), SetRepr(FinitePointSet(5, {Vector::Zero(5)})),
                                       NormKind::euclidean, 256);
  EXPECT_FALSE(r.exact);
  EXPECT_LE(r.value, std::sqrt(5.0) + 1e-9);
  EXPECT_GT(r.value, 1.0);
}

TEST(SupDistance, SegmentAgainstTwoPointsPeaksAtBisector) {
  FinitePointSet src(2);
  src.segments.push_back({Eigen::Vector2d(-1, 1), Eigen::Vector2d(1, 0), 2.0});
  const SetRepr target = FinitePointSet(2, {Eigen::Vector2d(-1, 0), Eigen::Vector2d(1, 0)});
  const auto r = sup_distance_over_set(SetRepr(src), target);
  EXPECT_NEAR(r.value, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.witness(0), 0.0, 1e-12);
  EXPECT_TRUE(r.exact);
}

// Shared fixtures for the invariants below, all in 2-D except the interval union.
std::vector<SetRepr> sample_sets() {
  Matrix A;
  Vector b;
  std::mt19937_64 gen(7);
  oracle::random_polygon(gen, A, b);
  FinitePointSet pts(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 2), Eigen::Vector2d(-2, 0.5)});
  pts.segments.push_back({Eigen::Vector2d(3, 3), Eigen::Vector2d(0, 1), 1.5});
  SampledCloud cloud{2, {Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(-1, -1)}};
  return {SetRepr(Polyhedron(A, b)), SetRepr(pts), SetRepr(cloud)};
}

TEST(SetGeometryProperties, ZeroDistanceIffMember) {
  for (const auto& s : sample_sets()) {
    for (const auto& x : extreme_points(s)) {
      EXPECT_LE(distance_to_set(x, s).value(), 1e-9) << s.kind_name();
    }
    const Vector far = Eigen::Vector2d(10, -10);
    EXPECT_GT(distance_to_set(far, s).value(), 1.0) << s.kind_name();
  }
  const SetRepr iu = IntervalUnion({Interval::closed(-2, -1), Interval::open(1, 2)});
  EXPECT_EQ(distance_to_set(scalar_vector(-1.5), iu).value(), 0.0);
  EXPECT_EQ(distance_to_set(scalar_vector(2.0), iu).value(), 0.0);  // inf over an open end
  EXPECT_GT(distance_to_set(scalar_vector(0.0), iu).value(), 0.5);
}

TEST(SetGeometryProperties, TriangleInequalityAndNormConsistency) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (const auto& s : sample_sets()) {
    for (int k = 0; k < 40; ++k) {
      const Vector x = Eigen::Vector2d(u(gen), u(gen));
      const Vector y = Eigen::Vector2d(u(gen), u(gen));
      const double dx = distance_to_set(x, s).value();
      const double dy = distance_to_set(y, s).value();
      EXPECT_LE(std::abs(dx - dy), (x - y).norm() + 1e-9) << s.kind_name();
      const double cheb = distance_to_set(x, s, NormKind::chebyshev).value();
      EXPECT_LE(cheb, dx + 1e-9) << s.kind_name();
      EXPECT_LE(dx, std::sqrt(2.0) * cheb + 1e-9) << s.kind_name();
    }
  }
}

TEST(SetGeometryProperties, SupDistanceOfSetToItselfIsZero) {
  for (const auto& s : sample_sets()) {
    EXPECT_LE(sup_distance_over_set(s, s).value, 1e-9) << s.kind_name();
  }
  const SetRepr iu = IntervalUnion({Interval::closed(-2, -1), Interval::closed(1, 2)});
  EXPECT_EQ(sup_distance_over_set(iu, iu).value, 0.0);
}

TEST(Localize, ClipsEachVariant) {
  const SetRepr iu = IntervalUnion({Interval::open(-1, 0), Interval::open(0, 3)});
  const auto local = localize(iu, scalar_vector(2.0), 0.5, NormKind::euclidean);
  const auto& pieces = local.get_if<IntervalUnion>()->intervals();
  ASSERT_EQ(pieces.size(), 1u);
  EXPECT_EQ(pieces[0], Interval::closed(1.5, 2.5));

  FinitePointSet fps(2, {Eigen::Vector2d(0, 0), Eigen::Vector2d(5, 5)});
  fps.segments.push_back({Eigen::Vector2d(-3, 0), Eigen::Vector2d(1, 0), 6.0});
  const auto lf = localize(SetRepr(fps), Vector::Zero(2), 1.0, NormKind::euclidean);
  const auto* out = lf.get_if<FinitePointSet>();
  ASSERT_EQ(out->points.size(), 1u);
  ASSERT_EQ(out->segments.size(), 1u);
  EXPECT_NEAR(out->segments[0].length, 2.0, 1e-12);
}

TEST(IntervalUnion, RejectsOverlapAndTracksClosedness) {
  EXPECT_THROW(IntervalUnion({Interval::closed(0, 2), Interval::closed(1, 3)}), ArgumentError);
  EXPECT_NO_THROW(IntervalUnion({Interval::open(-1, 0), Interval::open(0, 1)}));
  EXPECT_FALSE(IntervalUnion({Interval::open(-1, 0)}).is_closed());
  EXPECT_TRUE(IntervalUnion({Interval::point(0.0)}).is_closed());
}

}  // namespace
}  // namespace semilocal
