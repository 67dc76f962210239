#pragma once

#include <memory>

#include "surfstokes/cut.hpp"
#include "surfstokes/levelset.hpp"
#include "surfstokes/mesh.hpp"
#include "surfstokes/parametric_map.hpp"

namespace surfstokes {

/// Everything geometric on one refinement level. Held behind a pointer
/// because the pieces refer to each other.
struct Geometry {
  Mesh mesh;
  std::unique_ptr<LevelSetBundle> bundle;
  CutTopology topology;
  std::unique_ptr<ParametricMap> map;
  std::unique_ptr<WeingartenField> weingarten;
  double h = 0.0;  // mesh size at the surface

  Geometry() = default;
  Geometry(const Geometry&) = delete;
  Geometry& operator=(const Geometry&) = delete;
};

/// Level sets, cut topology, parametric map and Weingarten field on `mesh`.
std::unique_ptr<Geometry> build_geometry(Mesh mesh, const AnalyticSurface& surface, int kg, int kp);

/// Sup-norm geometry errors sampled at the surface quadrature points of Gamma_h.
struct GeometryErrors {
  double distance = 0.0;        // max |phi(y)|
  double normal = 0.0;          // max |n_h - n(y)|
  double penalty_normal = 0.0;  // max |n_tilde - n(y)|
  double weingarten = 0.0;      // max |H_h - H(p(y))|_F
  double area = 0.0;            // |Gamma_h|
};

GeometryErrors geometry_errors(const Geometry& g, int quad_degree);

/// Box [-5/3, 5/3]^3 with coarse size 0.5, refined `level` times toward the surface.
Mesh standard_mesh(const AnalyticSurface& surface, int level);

}  // namespace surfstokes
