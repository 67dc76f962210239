#pragma once

#include <vector>

#include "surfstokes/parametric_map.hpp"
#include "surfstokes/quadrature.hpp"

namespace surfstokes {

/// Quadrature point on Gamma_h or in the deformed patch.
struct QuadPoint {
  Bary l;       // reference point in the parent tet
  Vec3 y;       // mapped point
  Mat3 jac;     // D Theta_h at l
  double weight;
};

/// Gamma_lin triangles of one active cell pushed through Theta_h. The weight
/// carries the metric factor |DTheta t1 x DTheta t2| / |t1 x t2|.
void surface_points(const ParametricMap& map, const CutTopology& topology,
                    const QuadratureRule& rule, int cell, std::vector<QuadPoint>& out);

/// Reference tet rule pushed through the deformed cell; weight includes
/// 6 |T| det DTheta_h.
void volume_points(const ParametricMap& map, const QuadratureRule& rule, int cell,
                   std::vector<QuadPoint>& out);

/// All points of the patch, grouped by cell.
struct CellQuadrature {
  std::vector<QuadPoint> points;
  std::vector<int> offsets;  // points of cell c: [offsets[c], offsets[c+1])

  double total_weight() const;
};

CellQuadrature surface_quadrature(const CutTopology& topology, const ParametricMap& map,
                                  const QuadratureRule& rule);
CellQuadrature volume_quadrature(const CutTopology& topology, const ParametricMap& map,
                                 const QuadratureRule& rule);

}  // namespace surfstokes
