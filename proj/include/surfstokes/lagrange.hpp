#pragma once

#include <span>
#include <vector>

#include "surfstokes/mesh.hpp"
#include "surfstokes/types.hpp"

namespace surfstokes {

using NodeDerivs = Eigen::Matrix<double, Eigen::Dynamic, 4>;  // d/d lambda_i per node

/// Equispaced Lagrange elements on tetrahedra, any degree >= 1.
namespace lagrange {

int num_nodes(int degree);
/// Barycentric multi-indices alpha (|alpha| = degree) of the local nodes.
const std::vector<std::array<int, 4>>& multi_indices(int degree);
/// Barycentric coordinates of local node i.
Bary node_bary(int degree, int i);

/// Basis values and their partial derivatives with respect to the four
/// barycentric coordinates (treated as independent variables). Valid for
/// any lambda, including points outside the tet.
void eval(int degree, const Bary& lambda, Eigen::VectorXd& values, NodeDerivs& dlambda);
void eval_values(int degree, const Bary& lambda, Eigen::VectorXd& values);

}  // namespace lagrange

/// Affine geometry of one tet: barycentric gradients and coordinates.
struct TetFrame {
  std::array<Vec3, 4> v;
  Eigen::Matrix<double, 4, 3> grad_lambda;  // row i = grad lambda_i
  double volume = 0.0;

  TetFrame() = default;
  explicit TetFrame(const std::array<Vec3, 4>& verts);
  static TetFrame of(const Mesh& mesh, int tet);

  Vec3 point(const Bary& l) const { return l[0] * v[0] + l[1] * v[1] + l[2] * v[2] + l[3] * v[3]; }
  Bary bary(const Vec3& x) const;
  /// Physical gradients (rows) from barycentric partials.
  Eigen::Matrix<double, Eigen::Dynamic, 3> gradients(const NodeDerivs& dl) const {
    return dl * grad_lambda;
  }
};

/// Global numbering of degree-k Lagrange nodes over a subset of tets.
/// Nodes are identified by their barycentric position on the shared
/// sub-simplex, so neighbouring cells agree on shared nodes.
struct DofMap {
  int degree = 1;
  std::vector<int> cells;        // mesh tet indices, in the order given
  std::vector<int> cell_nodes;   // cells.size() * nodes_per_cell
  std::vector<Vec3> node_points; // undeformed node coordinates
  std::vector<int> cell_of_tet;  // mesh tet -> cell index, -1 if absent

  int nodes_per_cell() const { return lagrange::num_nodes(degree); }
  int num_nodes() const { return static_cast<int>(node_points.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  std::span<const int> nodes(int cell) const {
    const int n = nodes_per_cell();
    return {cell_nodes.data() + static_cast<size_t>(cell) * n, static_cast<size_t>(n)};
  }
};

DofMap build_dof_map(const Mesh& mesh, std::span<const int> cells, int degree);

}  // namespace surfstokes
