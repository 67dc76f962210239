#include <gtest/gtest.h>

#include "common.hpp"

using namespace surfstokes;

namespace {

Vec3 surface_point(const ManufacturedCase& c, double d = 0.0) {
  if (c.surface().kind() == SurfaceKind::torus) return test::torus_point(d);
  return (1.0 + d) * test::random_unit();
}

// Fourth-order central difference of a vector/matrix/scalar valued f along axis i.
template <class F>
auto fd4(const F& f, const Vec3& x, int i, double step) {
  const Vec3 e = step * Vec3::Unit(i);
  return ((-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12.0 * step)).eval();
}

Mat3 fd_grad_u(const ManufacturedCase& c, const Vec3& x, double step) {
  Mat3 g;
  for (int j = 0; j < 3; ++j) g.col(j) = fd4([&](const Vec3& y) { return c.exact_u(y); }, x, j, step);
  return g;
}

// f and g rebuilt from finite differences of the strain and the velocity.
SourceTerms fd_source(const ManufacturedCase& c, const Vec3& x, double step) {
  const DistanceCalculus dc = distance_calculus(c.surface(), x);
  std::array<Mat3, 3> dE;
  for (int l = 0; l < 3; ++l)
    dE[l] = fd4([&](const Vec3& y) { return surface_strain(c, y); }, x, l, step);
  Vec3 divE = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) divE[i] += dE[l](i, j) * dc.P(l, j);
  Vec3 gp;
  for (int l = 0; l < 3; ++l)
    gp[l] = (-c.exact_p(x + 2 * step * Vec3::Unit(l)) + 8 * c.exact_p(x + step * Vec3::Unit(l)) -
             8 * c.exact_p(x - step * Vec3::Unit(l)) + c.exact_p(x - 2 * step * Vec3::Unit(l))) /
            (12 * step);
  SourceTerms s;
  s.f = -dc.P * divE + c.exact_u(x) + dc.P * gp;
  s.g = (dc.P * fd_grad_u(c, x, step)).trace();
  return s;
}

}  // namespace

class Cases : public ::testing::TestWithParam<std::string> {
 protected:
  ManufacturedCase mc() const {
    if (GetParam() == "sphere") return ManufacturedCase::sphere_case();
    if (GetParam() == "torus") return ManufacturedCase::torus_case();
    return ManufacturedCase::killing_case();
  }
};

TEST_P(Cases, VelocityIsTangential) {
  const ManufacturedCase c = mc();
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = surface_point(c);
    const DistanceCalculus dc = distance_calculus(c.surface(), x);
    const Vec3 u = c.exact_u(x);
    EXPECT_LT(std::abs(u.dot(dc.n)), 1e-10);
    EXPECT_LT((dc.P * u - u).norm(), 1e-10);
  }
}

TEST_P(Cases, ConstantInTheNormalDirection) {
  const ManufacturedCase c = mc();
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = surface_point(c, test::uniform(-0.2, 0.2));
    const Vec3 cp = distance_calculus(c.surface(), x).cp;
    EXPECT_LT((c.exact_u(x) - c.exact_u(cp)).norm(), 1e-10);
    EXPECT_NEAR(c.exact_p(x), c.exact_p(cp), 1e-10);
  }
}

TEST_P(Cases, SourceMatchesFiniteDifferences) {
  const ManufacturedCase c = mc();
  for (int i = 0; i < 20; ++i) {
    const Vec3 x = surface_point(c, test::uniform(-0.1, 0.1));
    const SourceTerms ad = source_terms(c, x);
    const double scale = std::max(1.0, ad.f.norm());
    for (double step : {1e-3, 1e-4}) {
      const SourceTerms fd = fd_source(c, x, step);
      EXPECT_LE((fd.f - ad.f).norm(), 1e-6 * scale) << "step " << step;
      EXPECT_LE(std::abs(fd.g - ad.g), 1e-6 * std::max(1.0, std::abs(ad.g))) << "step " << step;
    }
  }
}

TEST_P(Cases, DivergenceTwoWays) {
  const ManufacturedCase c = mc();
  for (int i = 0; i < 200; ++i) {
    const Vec3 x = surface_point(c, test::uniform(-0.1, 0.1));
    EXPECT_NEAR(source_terms(c, x).g, surface_divergence_alt(c, x), 1e-10);
  }
}

TEST_P(Cases, GradientsMatchFiniteDifferences) {
  const ManufacturedCase c = mc();
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = surface_point(c, test::uniform(-0.2, 0.2));
    const Mat3 g = c.grad_u(x);
    EXPECT_LE((fd_grad_u(c, x, 1e-5) - g).norm(), 1e-6 * std::max(1.0, g.norm()));
    Vec3 gp;
    for (int l = 0; l < 3; ++l) gp[l] = fd4([&](const Vec3& y) { return Vec3::Constant(c.exact_p(y)); }, x, l, 1e-5)[0];
    EXPECT_LE((gp - c.grad_p(x)).norm(), 1e-6 * std::max(1.0, gp.norm()));
  }
}

INSTANTIATE_TEST_SUITE_P(All, Cases, ::testing::Values("sphere", "torus", "killing"));

TEST(SphereCase, ForceIsTangential) {
  const ManufacturedCase c = ManufacturedCase::sphere_case();
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = test::random_unit();
    EXPECT_LT(std::abs(source_terms(c, x).f.dot(x)), 1e-8);
  }
}

TEST(SphereCase, StrainWeingartenIdentity) {
  const ManufacturedCase c = ManufacturedCase::sphere_case();
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = test::random_unit();
    const Mat3 H = distance_calculus(c.surface(), x).H;
    EXPECT_NEAR((surface_strain(c, x) * H).trace(), source_terms(c, x).g, 1e-9);
  }
}

TEST(SphereCase, PressureHasZeroMean) {
  // Gamma_lin of level 3 projected radially onto the exact sphere: the surface
  // element picks up |n_lin . x| / |x|^3.
  const ManufacturedCase c = ManufacturedCase::sphere_case();
  const Mesh m = standard_mesh(c.surface(), 3);
  const LevelSetBundle b(m, c.surface(), 1, 2);
  const CutTopology t = cut_mesh(m, b);
  const QuadratureRule rule = triangle_rule(12);
  double integral = 0.0, area = 0.0;
  for (const GammaTriangle& tri : t.gamma_lin) {
    std::array<Vec3, 3> v;
    for (int i = 0; i < 3; ++i) v[i] = world_point(m, tri.tet, tri.bary[i]);
    const Vec3 cr = (v[1] - v[0]).cross(v[2] - v[0]);
    const Vec3 n = cr.normalized();
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::VectorXd& l = rule.points[q];
      const Vec3 x = l[0] * v[0] + l[1] * v[1] + l[2] * v[2];
      const double w = rule.weights[q] * cr.norm() * std::abs(n.dot(x)) / std::pow(x.norm(), 3);
      integral += w * c.exact_p(x);
      area += w;
    }
  }
  EXPECT_NEAR(area, 4.0 * std::numbers::pi, 1e-10);
  EXPECT_LE(std::abs(integral), 1e-8);
}

TEST(TorusCase, PressureMeanIsRemoved) {
  const ManufacturedCase c = ManufacturedCase::torus_case();
  EXPECT_NE(c.pressure_shift(), 0.0);
  const double mean = torus_integral(c.surface(), [&](const Vec3& x) { return c.exact_p(x); }, 96);
  EXPECT_LE(std::abs(mean), 1e-12);
  // The trapezoid rule reproduces the area exactly.
  EXPECT_NEAR(torus_integral(c.surface(), [](const Vec3&) { return 1.0; }, 64), c.surface().area(),
              1e-12);
}

TEST(TorusCase, VelocityIsNotDivergenceFree) {
  const ManufacturedCase c = ManufacturedCase::torus_case();
  double gmax = 0.0;
  for (int i = 0; i < 1000; ++i) gmax = std::max(gmax, std::abs(source_terms(c, test::torus_point(0)).g));
  EXPECT_GT(gmax, 0.1);
}

TEST(TorusCase, AxisIsRejected) {
  const ManufacturedCase c = ManufacturedCase::torus_case();
  EXPECT_THROW(c.exact_u(Vec3(0, 0, 0.3)), Error);
  EXPECT_THROW(source_terms(c, Vec3(2.0, 0, 0)), Error);
}

TEST(SphereCase, OriginIsRejected) {
  const ManufacturedCase c = ManufacturedCase::sphere_case();
  EXPECT_THROW(c.exact_u(Vec3::Zero()), Error);
  EXPECT_THROW(c.exact_p(Vec3::Zero()), Error);
}

TEST(KillingCase, RotationIsAStationarySolution) {
  const ManufacturedCase c = ManufacturedCase::killing_case();
  for (int i = 0; i < 1000; ++i) {
    const Vec3 x = test::random_unit();
    const SourceTerms s = source_terms(c, x);
    EXPECT_LT((s.f - Vec3::UnitZ().cross(x)).norm(), 1e-9);
    EXPECT_LT(std::abs(s.g), 1e-9);
    EXPECT_LT(surface_strain(c, x).norm(), 1e-9);
    EXPECT_EQ(c.exact_p(x), 0.0);
  }
}
