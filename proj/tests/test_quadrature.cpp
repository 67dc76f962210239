#include <gtest/gtest.h>

#include "common.hpp"
#include "surfstokes/integration.hpp"

using namespace surfstokes;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Integral of prod lambda_i^a_i over the reference simplex of dimension d:
// |T| d! prod a_i! / (d + |a|)!, with |T| d! = 1.
double monomial_integral(const std::vector<int>& a, int dim) {
  double num = 1.0;
  int total = 0;
  for (int e : a) {
    num *= factorial(e);
    total += e;
  }
  return num / factorial(dim + total);
}

double rule_monomial(const QuadratureRule& r, const std::vector<int>& a) {
  double s = 0.0;
  for (int q = 0; q < r.size(); ++q) {
    double v = 1.0;
    for (size_t i = 0; i < a.size(); ++i) v *= std::pow(r.points[q][i], a[i]);
    s += r.weights[q] * v;
  }
  return s;
}

// All exponent tuples of the dim + 1 barycentric coordinates with sum <= degree.
std::vector<std::vector<int>> exponents(int dim, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(dim + 1, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == dim + 1) {
      out.push_back(a);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      a[i] = e;
      self(self, i + 1, left - e);
    }
  };
  rec(rec, 0, degree);
  return out;
}

}  // namespace

TEST(ReferenceRules, ConstantsGiveTheReferenceMeasure) {
  for (int d = 0; d <= 12; ++d) {
    double tri = 0.0, tet = 0.0;
    for (double w : triangle_rule(d).weights) tri += w;
    for (double w : tet_rule(d).weights) tet += w;
    EXPECT_NEAR(tri, 0.5, 1e-15);
    EXPECT_NEAR(tet, 1.0 / 6.0, 1e-15);
  }
}

TEST(ReferenceRules, TetSecondMoment) {
  // x = lambda_1 on the reference tet: 2!/5! = 1/60.
  const QuadratureRule r = tet_rule(2);
  EXPECT_NEAR(rule_monomial(r, {0, 2, 0, 0}), 1.0 / 60.0, 1e-14);
}

TEST(ReferenceRules, WeightsPositiveAndPointsInside) {
  for (int d = 0; d <= kMaxQuadratureDegree; d += 3)
    for (const QuadratureRule& r : {triangle_rule(d), tet_rule(d)})
      for (int q = 0; q < r.size(); ++q) {
        EXPECT_GT(r.weights[q], 0.0);
        EXPECT_NEAR(r.points[q].sum(), 1.0, 1e-15);
        EXPECT_GE(r.points[q].minCoeff(), 0.0);
      }
}

TEST(ReferenceRules, MonomialExactness) {
  for (int dim : {2, 3})
    for (int d = 1; d <= 14; ++d) {
      const QuadratureRule r = dim == 2 ? triangle_rule(d) : tet_rule(d);
      EXPECT_GE(r.degree, d);
      for (const auto& a : exponents(dim, d)) {
        const double exact = monomial_integral(a, dim);
        EXPECT_LE(std::abs(rule_monomial(r, a) - exact), 1e-13 * exact) << "dim " << dim;
      }
    }
}

TEST(ReferenceRules, RandomPolynomialExactness) {
  for (int dim : {2, 3})
    for (int d : {3, 7, 11}) {
      const QuadratureRule r = dim == 2 ? triangle_rule(d) : tet_rule(d);
      double exact = 0.0, approx = 0.0, scale = 0.0;
      for (const auto& a : exponents(dim, d)) {
        const double c = test::uniform(-1, 1);
        exact += c * monomial_integral(a, dim);
        approx += c * rule_monomial(r, a);
        scale += std::abs(c * monomial_integral(a, dim));
      }
      EXPECT_LE(std::abs(approx - exact), 1e-13 * scale);
    }
}

TEST(ReferenceRules, DegreeAboveTabulationIsRejected) {
  EXPECT_THROW(triangle_rule(kMaxQuadratureDegree + 1), Error);
  EXPECT_THROW(tet_rule(-1), Error);
}

TEST(SurfaceQuadrature, IdentityMapSumsFlatAreas) {
  const auto s = AnalyticSurface::torus();
  const auto g = build_geometry(standard_mesh(s, 1), s, 1, 2);
  double flat = 0.0;
  for (const auto& tri : g->topology.gamma_lin) flat += flat_area(g->mesh, tri);
  const CellQuadrature q = surface_quadrature(g->topology, *g->map, triangle_rule(4));
  EXPECT_NEAR(q.total_weight(), flat, 1e-12 * flat);
  for (const QuadPoint& p : q.points) EXPECT_GT(p.weight, 0.0);
}

class SurfaceArea : public ::testing::TestWithParam<std::string> {};

TEST_P(SurfaceArea, ConvergesAtOrderThree) {
  const auto s = GetParam() == "sphere" ? AnalyticSurface::sphere() : AnalyticSurface::torus();
  const auto levels = test::geometry_levels(s, 3, 2, 3);
  std::vector<double> err;
  for (const auto& g : levels)
    err.push_back(std::abs(surface_quadrature(g->topology, *g->map, triangle_rule(8)).total_weight() -
                           s.area()));
  EXPECT_GE(test::orders(err).back(), 3.0);
}

INSTANTIATE_TEST_SUITE_P(Surfaces, SurfaceArea, ::testing::Values("sphere", "torus"));

TEST(VolumeQuadrature, IdentityMapGivesPatchVolume) {
  const auto s = AnalyticSurface::sphere();
  const auto g = build_geometry(standard_mesh(s, 1), s, 1, 2);
  const CellQuadrature q = volume_quadrature(g->topology, *g->map, tet_rule(3));
  EXPECT_NEAR(q.total_weight(), g->topology.patch_volume, 1e-12 * g->topology.patch_volume);
}

TEST(VolumeQuadrature, DeformationChangesVolumeSlightly) {
  const auto s = AnalyticSurface::sphere();
  const auto levels = test::geometry_levels(s, 2, 2, 3);
  std::vector<double> rel;
  for (const auto& g : levels) {
    const double v = volume_quadrature(g->topology, *g->map, tet_rule(6)).total_weight();
    rel.push_back(std::abs(v - g->topology.patch_volume) / g->topology.patch_volume);
  }
  EXPECT_LE(rel[0], 0.1);
  EXPECT_LT(rel[2], rel[1]);
  EXPECT_LT(rel[1], rel[0]);
}

TEST(VolumeQuadrature, AffineScalingMultipliesWeightsByDeterminant) {
  auto patch = [](double scale) {
    auto m = std::make_unique<Mesh>();
    m->box = Box{Vec3::Constant(-1), Vec3::Constant(3)};
    m->vertices = {Vec3(0, 0, 0), scale * Vec3(1, 0, 0), scale * Vec3(0, 1, 0),
                   scale * Vec3(0, 0, 1)};
    m->tets = {Tet{{0, 1, 2, 3}, 3}};
    return m;
  };
  const auto plane = AnalyticSurface::plane(Vec3(1, 1, 1), 0.2);
  const auto m1 = patch(1.0), m2 = patch(2.0);
  const LevelSetBundle b1(*m1, plane, 2, 3), b2(*m2, plane, 2, 3);
  const CutTopology t1 = cut_mesh(*m1, b1), t2 = cut_mesh(*m2, b2);
  const ParametricMap p1(*m1, t1, b1), p2(*m2, t2, b2);
  const QuadratureRule r = tet_rule(4);
  std::vector<QuadPoint> q1, q2;
  volume_points(p1, r, 0, q1);
  volume_points(p2, r, 0, q2);
  ASSERT_EQ(q1.size(), q2.size());
  for (size_t i = 0; i < q1.size(); ++i) EXPECT_NEAR(q2[i].weight, 8.0 * q1[i].weight, 1e-15);
}
