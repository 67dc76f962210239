#include "surfstokes/geometry.hpp"

#include "surfstokes/integration.hpp"

namespace surfstokes {

std::unique_ptr<Geometry> build_geometry(Mesh mesh, const AnalyticSurface& surface, int kg,
                                         int kp) {
  auto g = std::make_unique<Geometry>();
  g->mesh = std::move(mesh);
  g->h = g->mesh.mesh_size_at_level(g->mesh.level);
  g->bundle = std::make_unique<LevelSetBundle>(g->mesh, surface, kg, kp);
  g->topology = cut_mesh(g->mesh, *g->bundle);
  g->map = std::make_unique<ParametricMap>(g->mesh, g->topology, *g->bundle);
  g->weingarten = std::make_unique<WeingartenField>(*g->map, g->topology, *g->bundle);
  return g;
}

GeometryErrors geometry_errors(const Geometry& g, int quad_degree) {
  const AnalyticSurface& s = g.bundle->surface();
  const QuadratureRule rule = triangle_rule(quad_degree);
  GeometryErrors e;
  std::vector<QuadPoint> pts;
  for (int c = 0; c < g.topology.num_cells(); ++c) {
    surface_points(*g.map, g.topology, rule, c, pts);
    for (const QuadPoint& qp : pts) {
      const NormalFields nf = compute_normals(*g.map, g.topology, *g.bundle, c, qp.l);
      const DistanceCalculus dc = distance_calculus(s, qp.y);
      const Mat3 hh = g.weingarten->at(c, qp.l, MapPoint{Vec3::Zero(), qp.y, qp.jac});
      const Mat3 exact = distance_calculus(s, dc.cp).H;
      e.distance = std::max(e.distance, std::abs(dc.d));
      e.normal = std::max(e.normal, (nf.n_h - dc.n).norm());
      e.penalty_normal = std::max(e.penalty_normal, (nf.n_tilde - dc.n).norm());
      e.weingarten = std::max(e.weingarten, (hh - exact).norm());
      e.area += qp.weight;
    }
  }
  return e;
}

Mesh standard_mesh(const AnalyticSurface& surface, int level) {
  constexpr double a = 5.0 / 3.0;
  const Mesh coarse = build_initial_mesh(Box{Vec3::Constant(-a), Vec3::Constant(a)}, 0.5);
  return refine_toward_surface(coarse, surface, level);
}

}  // namespace surfstokes
