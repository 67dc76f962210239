#pragma once

#include <functional>
#include <vector>

#include "surfstokes/parametric_map.hpp"

namespace surfstokes {

/// Parametric Lagrange space of degree k on the active patch: reference
/// Lagrange functions composed with the inverse of Theta_h. Vector-valued
/// spaces interleave components, dof = components * node + c.
struct FESpace {
  int degree = 1;
  int components = 1;
  DofMap dofs;  // cell c is active cell c of the topology
  const ParametricMap* map = nullptr;

  int num_nodes() const { return dofs.num_nodes(); }
  int num_dofs() const { return components * dofs.num_nodes(); }
  int nodes_per_cell() const { return dofs.nodes_per_cell(); }
  int dofs_per_cell() const { return components * dofs.nodes_per_cell(); }
  /// Global dof indices of a cell, ordered node-major.
  void cell_dofs(int cell, std::vector<int>& out) const;
};

FESpace build_space(const Mesh& mesh, const CutTopology& topology, const ParametricMap& map, int k,
                    int components);

/// Basis values and physical gradients (rows) at a reference point.
struct BasisEval {
  Eigen::VectorXd values;
  Eigen::Matrix<double, Eigen::Dynamic, 3> grads;
};

/// Gradients are DTheta^{-T} applied to the undeformed gradients; `mp` must
/// be the map evaluation at the same point.
void eval_basis(const FESpace& space, int cell, const Bary& l, const MapPoint& mp, BasisEval& out);
BasisEval eval_basis(const FESpace& space, int cell, const Bary& l);

struct FEField {
  const FESpace* space = nullptr;
  Eigen::VectorXd coeffs;

  /// Value of component c at a reference point.
  double value(int cell, const Bary& l, int c = 0) const;
  Vec3 vector_value(int cell, const Bary& l) const;
};

using PointFunction = std::function<Eigen::VectorXd(const Vec3&)>;

/// Coefficients are f evaluated at the mapped nodes Theta_h(x_i).
FEField interpolate(const FESpace& space, const PointFunction& f);

}  // namespace surfstokes
