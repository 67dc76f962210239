#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "surfstokes/types.hpp"

namespace surfstokes {

class AnalyticSurface;

struct Box {
  Vec3 lo;
  Vec3 hi;
};

/// Tetrahedron in marked-edge (Maubach) ordering: the refinement edge is
/// v[0]--v[tag]. Bisection preserves the ordering rule in both children.
struct Tet {
  std::array<int, 4> v{};
  int tag = 3;
  int generation = 0;
  int parent = -1;  // index into Mesh::history, -1 for coarse tets
};

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

/// Local edge numbering used throughout: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
inline constexpr std::array<std::array<int, 2>, 6> kTetEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Conforming tetrahedral mesh of a box together with its bisection history.
struct Mesh {
  Box box;
  double coarse_h = 0.0;  // cube edge of the initial grid
  int level = 0;          // completed surface refinement levels
  std::vector<Vec3> vertices;
  std::vector<Tet> tets;     // leaves (the actual mesh)
  std::vector<Tet> history;  // bisected ancestors
  std::unordered_map<std::uint64_t, int> midpoints;  // bisected edge -> midpoint vertex

  Vec3 point(int tet, int local) const { return vertices[tets[tet].v[local]]; }
  double signed_volume(int tet) const;
  double volume(int tet) const { return std::abs(signed_volume(tet)); }
  /// Vertex indices reordered so that the signed volume is positive.
  std::array<int, 4> oriented(int tet) const;
  double diameter(int tet) const;
  double total_volume() const;
  /// Cube edge length of tets created at the given generation; three
  /// bisection generations halve it.
  double mesh_size_at_level(int lvl) const { return coarse_h / static_cast<double>(1 << lvl); }
};

/// Uniform cube grid, each cube split into six Kuhn tetrahedra sharing the
/// main diagonal.
Mesh build_initial_mesh(const Box& box, double target_h);

/// Bisects every marked tet at least once and closes the refinement so the
/// result is conforming.
Mesh refine_marked(const Mesh& mesh, std::span<const int> marked);

/// True if the vertex values of the level set change sign on the tet or one of
/// them vanishes.
bool touches_zero_level(const Mesh& mesh, int tet, std::span<const double> vertex_values);

/// Adds `levels` refinement levels near the zero level of `surface`. One level
/// lifts every intersected tet by three bisection generations, which halves the
/// local mesh size for the Kuhn grid.
Mesh refine_toward_surface(const Mesh& mesh, const AnalyticSurface& surface, int levels);

/// Face neighbours: entry i of tet t is the tet across the face opposite
/// local vertex i, or -1 on the boundary.
std::vector<std::array<int, 4>> face_neighbors(const Mesh& mesh);

/// Empty string if conforming, otherwise a description of the first defect.
std::string conformity_defect(const Mesh& mesh);

/// Smallest dihedral angle (radians) over all tets.
double min_dihedral_angle(const Mesh& mesh);

/// Legacy ASCII VTK unstructured grid.
void write_vtk(const Mesh& mesh, const std::string& path);

}  // namespace surfstokes
