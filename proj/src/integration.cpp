#include "surfstokes/integration.hpp"

namespace surfstokes {

void surface_points(const ParametricMap& map, const CutTopology& topology,
                    const QuadratureRule& rule, int cell, std::vector<QuadPoint>& out) {
  out.clear();
  const TetFrame& fr = map.frame(cell);
  for (const GammaTriangle& tri : topology.triangles(cell)) {
    const Vec3 x0 = fr.point(tri.bary[0]);
    const Vec3 t1 = fr.point(tri.bary[1]) - x0;
    const Vec3 t2 = fr.point(tri.bary[2]) - x0;
    // Reference measure 1/2 maps to the flat area |t1 x t2| / 2.
    for (int q = 0; q < rule.size(); ++q) {
      const auto& p = rule.points[q];
      const Bary l = p[0] * tri.bary[0] + p[1] * tri.bary[1] + p[2] * tri.bary[2];
      const MapPoint mp = map.eval(cell, l);
      const double metric = (mp.jac * t1).cross(mp.jac * t2).norm();
      if (!(metric > 0.0)) throw Error("surface_quadrature: non-positive metric factor");
      out.push_back({l, mp.y, mp.jac, rule.weights[q] * metric});
    }
  }
}

void volume_points(const ParametricMap& map, const QuadratureRule& rule, int cell,
                   std::vector<QuadPoint>& out) {
  out.clear();
  const double scale = 6.0 * map.frame(cell).volume;
  for (int q = 0; q < rule.size(); ++q) {
    const Bary l = rule.points[q];
    const MapPoint mp = map.eval(cell, l);
    const double det = mp.jac.determinant();
    if (!(det > 0.0)) throw Error("volume_quadrature: non-positive Jacobian determinant");
    out.push_back({l, mp.y, mp.jac, rule.weights[q] * scale * det});
  }
}

double CellQuadrature::total_weight() const {
  double s = 0.0;
  for (const auto& p : points) s += p.weight;
  return s;
}

namespace {

template <class Fill>
CellQuadrature gather(int cells, Fill fill) {
  CellQuadrature cq;
  cq.offsets.push_back(0);
  std::vector<QuadPoint> buf;
  for (int c = 0; c < cells; ++c) {
    fill(c, buf);
    cq.points.insert(cq.points.end(), buf.begin(), buf.end());
    cq.offsets.push_back(static_cast<int>(cq.points.size()));
  }
  return cq;
}

}  // namespace

CellQuadrature surface_quadrature(const CutTopology& topology, const ParametricMap& map,
                                  const QuadratureRule& rule) {
  return gather(topology.num_cells(), [&](int c, std::vector<QuadPoint>& buf) {
    surface_points(map, topology, rule, c, buf);
  });
}

CellQuadrature volume_quadrature(const CutTopology& topology, const ParametricMap& map,
                                 const QuadratureRule& rule) {
  return gather(topology.num_cells(),
                [&](int c, std::vector<QuadPoint>& buf) { volume_points(map, rule, c, buf); });
}

}  // namespace surfstokes
