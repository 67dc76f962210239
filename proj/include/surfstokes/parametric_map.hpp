#pragma once

#include <vector>

#include "surfstokes/cut.hpp"
#include "surfstokes/lagrange.hpp"
#include "surfstokes/levelset.hpp"

namespace surfstokes {

/// Result of evaluating the mesh deformation at a reference point.
struct MapPoint {
  Vec3 x;    // undeformed point
  Vec3 y;    // Theta_h(x)
  Mat3 jac;  // D Theta_h(x), identity part included
};

/// Degree-k_g mesh deformation Theta_h = id + displacement on the active
/// patch. Nodal displacements come from a 1D root search along the frozen
/// gradient of phi_h, averaged over the active tets sharing a node.
class ParametricMap {
 public:
  ParametricMap(const Mesh& mesh, const CutTopology& topology, const LevelSetBundle& bundle);

  int degree() const { return dofs_.degree; }
  const DofMap& dofs() const { return dofs_; }
  const std::vector<Vec3>& displacement() const { return disp_; }
  const TetFrame& frame(int cell) const { return frames_[cell]; }
  const Mesh& mesh() const { return *mesh_; }

  MapPoint eval(int cell, const Bary& l) const;

  double max_root_residual() const { return max_residual_; }
  int bisection_fallbacks() const { return fallbacks_; }

 private:
  const Mesh* mesh_;
  DofMap dofs_;
  std::vector<Vec3> disp_;
  std::vector<TetFrame> frames_;
  double max_residual_ = 0.0;
  int fallbacks_ = 0;
};

inline ParametricMap build_mapping(const Mesh& mesh, const CutTopology& topology,
                                   const LevelSetBundle& bundle) {
  return ParametricMap(mesh, topology, bundle);
}

/// Evaluates Theta_h and its Jacobian on active tet `tet` (a mesh index).
MapPoint eval_map(const ParametricMap& map, const CutTopology& topology, int tet, const Bary& l);

struct NormalFields {
  Vec3 n_lin;    // grad phi_hat / |.|, constant per tet
  Vec3 n_h;      // D Theta^{-T} n_lin / |.|
  Vec3 n_tilde;  // grad phi_tilde / |.| at the mapped point
  Mat3 H_h = Mat3::Zero();
};

Vec3 normal_lin(const LevelSetBundle& bundle, const CutTopology& topology, int cell);
Vec3 mapped_normal(const Vec3& n_lin, const Mat3& jac);
/// Normal from phi_tilde at the deformed point y; the element polynomial
/// of the parent tet is evaluated there.
Vec3 penalty_normal(const LevelSetBundle& bundle, int tet, const Vec3& y);

NormalFields compute_normals(const ParametricMap& map, const CutTopology& topology,
                             const LevelSetBundle& bundle, int cell, const Bary& l);

/// Weingarten approximation H_h = grad of the parametric degree-k_g nodal
/// interpolant of n_h (nodal values averaged over active tets).
class WeingartenField {
 public:
  WeingartenField(const ParametricMap& map, const CutTopology& topology, const LevelSetBundle& bundle);
  /// H_h at reference point l of `cell`, given the map evaluation there.
  Mat3 at(int cell, const Bary& l, const MapPoint& mp) const;
  const std::vector<Vec3>& nodal_normals() const { return normals_; }

 private:
  const ParametricMap* map_;
  std::vector<Vec3> normals_;
};

inline WeingartenField compute_weingarten(const ParametricMap& map, const CutTopology& topology,
                                          const LevelSetBundle& bundle) {
  return WeingartenField(map, topology, bundle);
}

/// Legacy VTK of Gamma_h: Gamma_lin triangles with vertices pushed through Theta_h.
void write_deformed_surface_vtk(const ParametricMap& map, const CutTopology& topology,
                                const std::string& path);

}  // namespace surfstokes
