#pragma once

#include <vector>

#include "surfstokes/lagrange.hpp"
#include "surfstokes/mesh.hpp"
#include "surfstokes/surface.hpp"

namespace surfstokes {

/// Finite element approximations of the level set function on a band of
/// tets around the surface:
///   phi_h      nodal interpolant of degree k_g,
///   phi_hat    piecewise linear interpolant of phi_h (vertex values),
///   phi_tilde  nodal interpolant of degree k_p (normally k_g + 1).
class LevelSetBundle {
 public:
  LevelSetBundle(const Mesh& mesh, AnalyticSurface surface, int kg, int kp);

  const AnalyticSurface& surface() const { return surface_; }
  int kg() const { return kg_; }
  int kp() const { return kp_; }
  /// Tets carrying the fields: sign-change tets plus two vertex-neighbour layers.
  const std::vector<int>& band() const { return phi_h_map_.cells; }
  bool in_band(int tet) const { return phi_h_map_.cell_of_tet[tet] >= 0; }

  /// Vertex values of phi_hat (identical to phi_h at vertices).
  const std::vector<double>& vertex_values() const { return vertex_phi_; }

  /// Polynomial of phi_h on `tet`, evaluated at barycentric `l` (which may lie
  /// outside the tet: the element polynomial is extended).
  double phi_h(int tet, const Bary& l) const;
  Vec3 grad_phi_h(int tet, const Bary& l) const;
  double phi_hat(int tet, const Bary& l) const;
  Vec3 grad_phi_hat(int tet) const;
  double phi_tilde(int tet, const Bary& l) const;
  Vec3 grad_phi_tilde(int tet, const Bary& l) const;

  const DofMap& phi_h_map() const { return phi_h_map_; }
  const std::vector<double>& phi_h_values() const { return phi_h_; }

  const TetFrame& frame(int tet) const { return frames_[phi_h_map_.cell_of_tet.at(tet)]; }

 private:
  int cell(int tet) const;
  double field(const DofMap& map, const std::vector<double>& vals, int tet, const Bary& l) const;
  Vec3 field_grad(const DofMap& map, const std::vector<double>& vals, int tet, const Bary& l) const;

  const Mesh* mesh_;
  AnalyticSurface surface_;
  int kg_;
  int kp_;
  std::vector<double> vertex_phi_;
  DofMap phi_h_map_;
  std::vector<double> phi_h_;
  DofMap phi_tilde_map_;
  std::vector<double> phi_tilde_;
  std::vector<TetFrame> frames_;
};

/// Nodal interpolation of the surface's level set at degree k_g, k_p.
LevelSetBundle interpolate_levelsets(const Mesh& mesh, const AnalyticSurface& surface, int kg,
                                     int kp);
inline LevelSetBundle interpolate_levelsets(const Mesh& mesh, const AnalyticSurface& surface,
                                            int kg) {
  return interpolate_levelsets(mesh, surface, kg, kg + 1);
}

}  // namespace surfstokes
