#include <gtest/gtest.h>

#include <sstream>

#include "common.hpp"

using namespace surfstokes;

namespace {

struct Level {
  std::unique_ptr<Geometry> g;
  TaylorHood spaces;
  SolverConfig cfg;
};

Level make_level(const AnalyticSurface& s, int level, int k, int kg, Formulation f) {
  Level l;
  l.g = build_geometry(standard_mesh(s, level), s, kg, kg + 1);
  l.spaces = build_taylor_hood(*l.g, k);
  l.cfg = default_config(k, f, l.g->h);
  l.cfg.kg = kg;
  l.cfg.quad_degree = default_quadrature_degree(k, kg);
  return l;
}

ErrorReport interpolant_errors(const Level& l, const ManufacturedCase& c) {
  const FEField u = interpolate(l.spaces.U, [&](const Vec3& x) { return Eigen::VectorXd(c.exact_u(x)); });
  const FEField p = interpolate(l.spaces.Q, [&](const Vec3& x) {
    return Eigen::VectorXd::Constant(1, c.exact_p(x));
  });
  return compute_errors(*l.g, l.spaces, l.cfg, c, u.coeffs, p.coeffs);
}

}  // namespace

TEST(Eoc, TwoRows) {
  const auto e = eoc_series({1.0, 0.5}, {1.0, 0.25});
  EXPECT_TRUE(std::isnan(e[0]));
  EXPECT_DOUBLE_EQ(e[1], 2.0);
}

TEST(Eoc, ThreeRows) {
  const auto e = eoc_series({1.0, 0.5, 0.25}, {1.0, 0.5, 0.25});
  EXPECT_DOUBLE_EQ(e[1], 1.0);
  EXPECT_DOUBLE_EQ(e[2], 1.0);
  EXPECT_NEAR(eoc_fit({1.0, 0.5, 0.25}, {1.0, 0.5, 0.25}), 1.0, 1e-14);
}

TEST(Eoc, UndefinedCasesAreMarked) {
  const auto zero = eoc_series({1.0, 0.5}, {1.0, 0.0});
  EXPECT_TRUE(std::isnan(zero[1]));
  const auto ratio = eoc_series({1.0, 0.6}, {1.0, 0.25});
  EXPECT_TRUE(std::isnan(ratio[1]));
  const auto close = eoc_series({1.0, 0.5 * 1.009}, {1.0, 0.25});
  EXPECT_FALSE(std::isnan(close[1]));
  ConvergenceTable one;
  one.rows.resize(1);
  EXPECT_THROW(compute_eoc(one), Error);
}

TEST(Errors, ExactlyRepresentedFieldsHaveNoError) {
  Mat3 L;
  L << 0.3, -1.0, 0.2, 0.5, 0.1, -0.7, 1.1, 0.4, 0.0;
  const ManufacturedCase c =
      ManufacturedCase::affine_case(AnalyticSurface::sphere(), L, Vec3(0.2, -0.1, 0.5), Vec3(1, 2, -1));
  for (Formulation f : {Formulation::consistent, Formulation::inconsistent}) {
    const Level l = make_level(c.surface(), 1, 2, 1, f);
    const ErrorReport r = interpolant_errors(l, c);
    for (ErrorKind k : {kL2, kPL2, kH1, kA, kM}) EXPECT_LE(r[k], 1e-10) << error_names()[k];
  }
}

TEST(Errors, InvariantsOfTheReport) {
  const ManufacturedCase c = ManufacturedCase::torus_case();
  for (Formulation f : {Formulation::consistent, Formulation::inconsistent}) {
    const Level l = make_level(c.surface(), 1, 2, 2, f);
    // A perturbed interpolant so that every part is nonzero.
    FEField u = interpolate(l.spaces.U, [&](const Vec3& x) { return Eigen::VectorXd(c.exact_u(x)); });
    for (int i = 0; i < u.coeffs.size(); ++i) u.coeffs[i] += 1e-3 * test::uniform(-1, 1);
    const Eigen::VectorXd p = Eigen::VectorXd::Zero(l.spaces.Q.num_dofs());
    const ErrorReport r = compute_errors(*l.g, l.spaces, l.cfg, c, u.coeffs, p);
    EXPECT_LE(r[kPL2], r[kL2]);
    const double parts = r[kPartA] * r[kPartA] + r[kPartS] * r[kPartS] + r[kPartK] * r[kPartK];
    EXPECT_NEAR(r[kA] * r[kA], parts, 1e-10 * parts);
    EXPECT_EQ(r.ndof_u, l.spaces.U.num_dofs());
    EXPECT_EQ(r.level, 1);
  }
}

TEST(Errors, InterpolantsConvergeAtOptimalOrder) {
  const ManufacturedCase c = ManufacturedCase::sphere_case();
  std::vector<double> h1, l2;
  for (int level = 1; level <= 3; ++level) {
    const ErrorReport r = interpolant_errors(make_level(c.surface(), level, 2, 2, Formulation::consistent), c);
    h1.push_back(r[kH1]);
    l2.push_back(r[kL2]);
  }
  EXPECT_NEAR(test::orders(h1).back(), 2.0, 0.3);
  EXPECT_NEAR(test::orders(l2).back(), 3.0, 0.4);
}

TEST(Csv, HeaderAndRows) {
  ConvergenceTable t;
  for (int i = 0; i < 3; ++i) {
    ErrorReport r;
    r.level = i;
    r.h = 0.5 / (1 << i);
    r.ndof_u = 10 * (i + 1);
    r.ndof_p = 4 * (i + 1);
    r.e.fill(std::pow(0.25, i));
    t.rows.push_back(r);
  }
  compute_eoc(t);
  std::ostringstream os;
  write_csv(t, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.rfind("level,h,ndof_u,ndof_p,e_L2,e_PL2,e_H1,e_A,e_M,a_part,s_part,k_part,eoc_e_L2", 0), 0u);
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    const auto cols = std::count(line.begin(), line.end(), ',') + 1;
    EXPECT_EQ(cols, 4 + 2 * kNumErrors);
    if (rows == 1) {
      EXPECT_NE(line.find(",nan"), std::string::npos);
    } else {
      EXPECT_NE(line.find(",2,"), std::string::npos) << line;
    }
  }
  EXPECT_EQ(rows, 3);
}
