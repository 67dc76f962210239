#include <gtest/gtest.h>

#include <map>

#include "common.hpp"
#include "surfstokes/cut.hpp"

using namespace surfstokes;

namespace {

const std::array<Vec3, 4> kRef{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};

Vec3 world(const Bary& l) { return l[0] * kRef[0] + l[1] * kRef[1] + l[2] * kRef[2] + l[3] * kRef[3]; }

double tri_area(const std::array<Bary, 3>& t) {
  return 0.5 * (world(t[1]) - world(t[0])).cross(world(t[2]) - world(t[0])).norm();
}

// Single reference tet as a mesh together with an affine level set.
struct OneTet {
  Mesh mesh;
  OneTet() {
    mesh.box = Box{Vec3::Constant(-1), Vec3::Constant(2)};
    mesh.vertices.assign(kRef.begin(), kRef.end());
    mesh.tets = {Tet{{0, 1, 2, 3}, 3}};
  }
};

// Cut point identified by the mesh vertices carrying nonzero weight.
std::pair<int, int> point_id(const Mesh& m, int tet, const Bary& l) {
  std::vector<int> ids;
  for (int i = 0; i < 4; ++i)
    if (l[i] != 0.0) ids.push_back(m.tets[tet].v[i]);
  if (ids.size() == 1) return {ids[0], ids[0]};
  return {std::min(ids[0], ids[1]), std::max(ids[0], ids[1])};
}

}  // namespace

TEST(Classify, SameSignTetIsInactive) {
  EXPECT_TRUE(march_tet({1, 2, 3, 4}, kRef).empty());
  EXPECT_EQ(march_tet({-1, 1, 1, 1}, kRef).size(), 1u);

  OneTet one;
  const auto off = AnalyticSurface::custom(
      "off", [](const Vec3& x) { return x.sum() + 1.0; }, nullptr, nullptr);
  EXPECT_THROW(classify_elements(one.mesh, LevelSetBundle(one.mesh, off, 1, 2)), Error);
  const auto on = AnalyticSurface::custom(
      "on", [](const Vec3& x) { return 2.0 * x.sum() - 1.0; }, nullptr, nullptr);
  const LevelSetBundle b(one.mesh, on, 1, 2);
  const CutTopology t = classify_elements(one.mesh, b);
  EXPECT_EQ(t.active_tets, std::vector<int>{0});
  EXPECT_NEAR(t.patch_volume, 1.0 / 6.0, 1e-16);
}

TEST(Marching, SingleNegativeVertexGivesMidpointTriangle) {
  const auto tris = march_tet({-1, 1, 1, 1}, kRef);
  ASSERT_EQ(tris.size(), 1u);
  for (const Bary& l : tris[0]) {
    EXPECT_DOUBLE_EQ(l[0], 0.5);
    EXPECT_DOUBLE_EQ(l.sum(), 1.0);
  }
  // Midpoints (1/2,0,0), (0,1/2,0), (0,0,1/2).
  EXPECT_NEAR(tri_area(tris[0]), std::sqrt(3.0) / 8.0, 1e-16);
}

TEST(Marching, TwoTwoSplitIsAQuadrilateral) {
  const auto tris = march_tet({-1, -1, 1, 1}, kRef);
  ASSERT_EQ(tris.size(), 2u);
  // Exact section: midpoints of edges 02, 03, 13, 12 form a planar convex
  // quadrilateral whose area is half the cross product of its diagonals.
  const Vec3 p02(0, 0.5, 0), p03(0, 0, 0.5), p13(0.5, 0, 0.5), p12(0.5, 0.5, 0);
  const double exact = 0.5 * (p13 - p02).cross(p12 - p03).norm();
  EXPECT_NEAR(tri_area(tris[0]) + tri_area(tris[1]), exact, 1e-15);
  // A rectangle with sides sqrt(2)/2 and 1/2.
  EXPECT_NEAR(exact, std::sqrt(2.0) / 4.0, 1e-15);
}

TEST(Marching, RandomValuesGiveExactSectionArea) {
  for (int k = 0; k < 200; ++k) {
    std::array<double, 4> v;
    for (double& x : v) x = test::uniform(-1, 1);
    const auto tris = march_tet(v, kRef);
    for (const auto& t : tris)
      for (const Bary& l : t) {
        double phi = 0.0;
        for (int i = 0; i < 4; ++i) phi += l[i] * v[i];
        EXPECT_NEAR(phi, 0.0, 1e-15);
      }
  }
}

TEST(GammaLin, WatertightAndOriented) {
  for (const auto& s : {AnalyticSurface::sphere(), AnalyticSurface::torus()}) {
    const Mesh m = standard_mesh(s, 1);
    const LevelSetBundle b(m, s, 1, 2);
    const CutTopology t = cut_mesh(m, b);
    EXPECT_EQ(t.dropped_degenerate, 0);
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> edges;
    std::map<std::pair<int, int>, Vec3> where;
    for (const auto& tri : t.gamma_lin) {
      std::array<std::pair<int, int>, 3> ids;
      for (int i = 0; i < 3; ++i) {
        ids[i] = point_id(m, tri.tet, tri.bary[i]);
        const Vec3 x = world_point(m, tri.tet, tri.bary[i]);
        auto [it, fresh] = where.emplace(ids[i], x);
        if (!fresh) EXPECT_LT((it->second - x).norm(), 1e-12);
      }
      for (int i = 0; i < 3; ++i) {
        auto a = ids[i], c = ids[(i + 1) % 3];
        if (c < a) std::swap(a, c);
        ++edges[{a, c}];
      }
      const Vec3 p0 = world_point(m, tri.tet, tri.bary[0]);
      const Vec3 nrm = (world_point(m, tri.tet, tri.bary[1]) - p0)
                           .cross(world_point(m, tri.tet, tri.bary[2]) - p0);
      EXPECT_GT(nrm.dot(b.grad_phi_hat(tri.tet)), 0.0);
    }
    for (const auto& [e, count] : edges) ASSERT_EQ(count, 2) << s.name();
  }
}

TEST(GammaLin, ActiveTetsLieNearTheSphere) {
  const auto s = AnalyticSurface::sphere();
  const Mesh m = standard_mesh(s, 2);
  const LevelSetBundle b(m, s, 1, 2);
  const CutTopology t = cut_mesh(m, b);
  for (int tet : t.active_tets) {
    const double diam = m.diameter(tet);
    double closest = 1e9;
    for (int k = 0; k < 100; ++k)
      closest = std::min(closest, std::abs(s.eval(world_point(m, tet, test::random_bary()))));
    EXPECT_LE(closest, diam);
  }
}

TEST(GammaLin, AreaConvergesAtOrderTwo) {
  for (const auto& s : {AnalyticSurface::sphere(), AnalyticSurface::torus()}) {
    std::vector<double> errs;
    Mesh m = standard_mesh(s, 0);
    for (int level = 0; level <= 3; ++level) {
      if (level > 0) m = refine_toward_surface(m, s, 1);
      const LevelSetBundle b(m, s, 1, 2);
      const CutTopology t = cut_mesh(m, b);
      double area = 0.0;
      for (const auto& tri : t.gamma_lin) area += flat_area(m, tri);
      errs.push_back(std::abs(area - s.area()));
    }
    const auto o = test::orders(errs);
    EXPECT_GT(o.back(), 1.6) << s.name();
    EXPECT_LT(o.back(), 2.4) << s.name();
  }
}
