#include <gtest/gtest.h>

#include "common.hpp"
#include "surfstokes/integration.hpp"

using namespace surfstokes;

namespace {

// Small meshes whose surface is an affine plane, so the map is the identity.
struct AffinePatch {
  Mesh mesh;
  std::unique_ptr<LevelSetBundle> bundle;
  CutTopology topology;
  std::unique_ptr<ParametricMap> map;

  AffinePatch(std::vector<Vec3> verts, std::vector<Tet> tets, double z0) {
    mesh.box = Box{Vec3::Constant(-1), Vec3::Constant(2)};
    mesh.vertices = std::move(verts);
    mesh.tets = std::move(tets);
    bundle = std::make_unique<LevelSetBundle>(mesh, AnalyticSurface::plane(Vec3::UnitZ(), z0), 1, 2);
    topology = cut_mesh(mesh, *bundle);
    map = std::make_unique<ParametricMap>(mesh, topology, *bundle);
  }
};

AffinePatch one_tet() {
  return AffinePatch({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)},
                     {Tet{{0, 1, 2, 3}, 3}}, 0.3);
}

AffinePatch two_tets() {
  return AffinePatch(
      {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1)},
      {Tet{{0, 1, 2, 3}, 3}, Tet{{4, 1, 2, 3}, 3}}, 0.5);
}

}  // namespace

TEST(FESpace, DofCountsOnOneTet) {
  const AffinePatch p = one_tet();
  ASSERT_EQ(p.topology.num_cells(), 1);
  EXPECT_EQ(build_space(p.mesh, p.topology, *p.map, 1, 1).num_dofs(), 4);
  EXPECT_EQ(build_space(p.mesh, p.topology, *p.map, 2, 1).num_dofs(), 10);
  EXPECT_EQ(build_space(p.mesh, p.topology, *p.map, 2, 3).num_dofs(), 30);
}

TEST(FESpace, SharedFaceNodesAreCountedOnce) {
  const AffinePatch p = two_tets();
  ASSERT_EQ(p.topology.num_cells(), 2);
  EXPECT_EQ(build_space(p.mesh, p.topology, *p.map, 2, 1).num_dofs(), 14);
  EXPECT_EQ(build_space(p.mesh, p.topology, *p.map, 3, 1).num_dofs(), 20 + 20 - 10);
}

TEST(FESpace, IdentityMapGivesAffineP1Gradients) {
  const AffinePatch p = one_tet();
  const FESpace V = build_space(p.mesh, p.topology, *p.map, 1, 1);
  const BasisEval b = eval_basis(V, 0, test::random_bary());
  Eigen::Matrix<double, 4, 3> exact;
  exact << -1, -1, -1, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  // Local node order follows the tet's vertex order for k = 1.
  EXPECT_LT((b.grads - exact).norm(), 1e-14);
}

TEST(FESpace, PartitionOfUnityOnCurvedPatches) {
  for (const auto& s : {AnalyticSurface::sphere(), AnalyticSurface::torus()}) {
    const auto g = build_geometry(standard_mesh(s, 1), s, 2, 3);
    for (int k : {2, 3}) {
      const FESpace V = build_space(g->mesh, g->topology, *g->map, k, 1);
      for (int i = 0; i < 100; ++i) {
        const int c = static_cast<int>(test::uniform(0, g->topology.num_cells() - 1e-9));
        const BasisEval b = eval_basis(V, c, test::random_bary());
        EXPECT_NEAR(b.values.sum(), 1.0, 1e-12);
        EXPECT_LT(b.grads.colwise().sum().norm(), 1e-10 * b.grads.norm());
      }
    }
  }
}

TEST(FESpace, GradientMatchesFiniteDifferencesThroughTheMap) {
  const auto s = AnalyticSurface::torus();
  const auto g = build_geometry(standard_mesh(s, 1), s, 3, 4);
  const FESpace V = build_space(g->mesh, g->topology, *g->map, 2, 1);
  FEField f{&V, Eigen::VectorXd::Zero(V.num_dofs())};
  for (int i = 0; i < V.num_dofs(); ++i) f.coeffs[i] = test::uniform(-1, 1);
  std::vector<int> dofs;
  for (int c = 0; c < g->topology.num_cells(); c += 13) {
    const TetFrame& fr = g->map->frame(c);
    const Bary l = test::random_bary();
    const Vec3 x = fr.point(l);
    const MapPoint mp = g->map->eval(c, l);
    const BasisEval b = eval_basis(V, c, l);
    V.cell_dofs(c, dofs);
    Vec3 grad = Vec3::Zero();
    for (size_t j = 0; j < dofs.size(); ++j) grad += f.coeffs[dofs[j]] * b.grads.row(j).transpose();
    // d/dx of v(Theta(x)) equals DTheta^T grad_y v.
    const double step = 1e-6;
    Vec3 fd;
    for (int d = 0; d < 3; ++d) {
      const Vec3 e = step * Vec3::Unit(d);
      fd[d] = (f.value(c, fr.bary(x + e)) - f.value(c, fr.bary(x - e))) / (2 * step);
    }
    EXPECT_LT((fd - mp.jac.transpose() * grad).norm(), 1e-6 * fd.norm() + 1e-9);
  }
}

TEST(Interpolate, ConstantIsReproduced) {
  const auto s = AnalyticSurface::sphere();
  const auto g = build_geometry(standard_mesh(s, 1), s, 2, 3);
  const FESpace V = build_space(g->mesh, g->topology, *g->map, 2, 3);
  const Vec3 c(0.3, -1.2, 2.5);
  const FEField f = interpolate(V, [&](const Vec3&) { return Eigen::VectorXd(c); });
  for (int i = 0; i < V.num_dofs(); ++i) EXPECT_EQ(f.coeffs[i], c[i % 3]);
  for (int cell = 0; cell < g->topology.num_cells(); cell += 5)
    EXPECT_LT((f.vector_value(cell, test::random_bary()) - c).norm(), 1e-13);
}

TEST(Interpolate, PolynomialsAreExactUnderTheIdentityMap) {
  const auto s = AnalyticSurface::sphere();
  const auto g = build_geometry(standard_mesh(s, 1), s, 1, 2);
  for (int k : {1, 2, 3}) {
    const FESpace V = build_space(g->mesh, g->topology, *g->map, k, 1);
    const Vec3 a = test::random_unit();
    auto poly = [&](const Vec3& x) { return std::pow(a.dot(x) + 0.2, k) + x[0] - 3.0; };
    const FEField f = interpolate(V, [&](const Vec3& x) { return Eigen::VectorXd::Constant(1, poly(x)); });
    for (int cell = 0; cell < g->topology.num_cells(); cell += 3) {
      const Bary l = test::random_bary();
      EXPECT_NEAR(f.value(cell, l), poly(world_point(g->mesh, g->topology.active_tets[cell], l)),
                  1e-12);
    }
  }
}

TEST(Interpolate, SphereVelocityHasOrderThreeInL2) {
  const ManufacturedCase mc = ManufacturedCase::sphere_case();
  const auto levels = test::geometry_levels(mc.surface(), 3, 2, 3);
  const QuadratureRule rule = triangle_rule(9);
  std::vector<double> err;
  std::vector<QuadPoint> pts;
  for (const auto& g : levels) {
    const FESpace V = build_space(g->mesh, g->topology, *g->map, 2, 3);
    const FEField f = interpolate(V, [&](const Vec3& x) { return Eigen::VectorXd(mc.exact_u(x)); });
    double e2 = 0.0;
    for (int c = 0; c < g->topology.num_cells(); ++c) {
      surface_points(*g->map, g->topology, rule, c, pts);
      for (const QuadPoint& qp : pts)
        e2 += qp.weight * (f.vector_value(c, qp.l) - mc.exact_u(qp.y)).squaredNorm();
    }
    err.push_back(std::sqrt(e2));
  }
  const auto o = test::orders(err);
  EXPECT_NEAR(o.back(), 3.0, 0.4);
}
