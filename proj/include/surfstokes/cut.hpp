#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "surfstokes/levelset.hpp"
#include "surfstokes/mesh.hpp"

namespace surfstokes {

/// Planar piece of Gamma_lin inside its parent tet, in barycentric coordinates
/// of that tet. Oriented so the normal points to phi_hat > 0.
struct GammaTriangle {
  int tet = -1;
  std::array<Bary, 3> bary;
};

/// Active tets (those meeting Gamma_lin), the patch they form, and the
/// piecewise planar surface Gamma_lin.
struct CutTopology {
  std::vector<int> active_tets;   // ascending mesh tet indices
  std::vector<int> active_index;  // mesh tet -> active cell index, -1 otherwise
  double patch_volume = 0.0;
  std::vector<GammaTriangle> gamma_lin;
  std::vector<int> tri_offsets;   // triangles of cell c: [tri_offsets[c], tri_offsets[c+1])
  int dropped_degenerate = 0;

  int num_cells() const { return static_cast<int>(active_tets.size()); }
  std::span<const GammaTriangle> triangles(int cell) const {
    return {gamma_lin.data() + tri_offsets[cell],
            static_cast<size_t>(tri_offsets[cell + 1] - tri_offsets[cell])};
  }
};

/// Sign used for topology: exact zeros count as negative.
inline bool positive_side(double phi) { return phi > 0.0; }

/// Active iff the linear interpolant has vertices on both sides.
CutTopology classify_elements(const Mesh& mesh, const LevelSetBundle& bundle);

/// Marching tetrahedra on phi_hat: one triangle, or a quadrilateral split
/// along its shorter diagonal.
void extract_gamma_lin(CutTopology& topology, const Mesh& mesh, const LevelSetBundle& bundle);

inline CutTopology cut_mesh(const Mesh& mesh, const LevelSetBundle& bundle) {
  CutTopology t = classify_elements(mesh, bundle);
  extract_gamma_lin(t, mesh, bundle);
  return t;
}

/// Triangles cut from one tet with the given vertex values (no orientation
/// fix-up against a gradient; used by the extraction and by tests).
std::vector<std::array<Bary, 3>> march_tet(const std::array<double, 4>& values,
                                           const std::array<Vec3, 4>& verts);

Vec3 world_point(const Mesh& mesh, int tet, const Bary& l);
double flat_area(const Mesh& mesh, const GammaTriangle& tri);

/// ASCII STL of Gamma_lin.
void write_stl(const Mesh& mesh, const CutTopology& topology, const std::string& path);

}  // namespace surfstokes
