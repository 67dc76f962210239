#pragma once

#include <vector>

#include "surfstokes/types.hpp"

namespace surfstokes {

/// Rule on the reference triangle (dim 2) or tetrahedron (dim 3). Points
/// are barycentric coordinates; weights sum to the reference measure
/// (1/2 or 1/6).
struct QuadratureRule {
  int dim = 2;
  int degree = 0;
  std::vector<Eigen::VectorXd> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

struct ReferenceRules {
  QuadratureRule triangle;
  QuadratureRule tet;
};

inline constexpr int kMaxQuadratureDegree = 40;

/// Gauss-Jacobi nodes/weights on [0,1] for the weight (1-u)^alpha.
void gauss_jacobi(int n, int alpha, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed-coordinate (conical product) rules exact for total degree
/// `degree`; all weights positive.
QuadratureRule triangle_rule(int degree);
QuadratureRule tet_rule(int degree);
ReferenceRules make_reference_rules(int degree);

/// Default exactness 2k + 2(k_g - 1) + 3.
inline int default_quadrature_degree(int k, int kg) { return 2 * k + 2 * (kg - 1) + 3; }

}  // namespace surfstokes
