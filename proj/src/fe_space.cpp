#include "surfstokes/fe_space.hpp"

namespace surfstokes {

void FESpace::cell_dofs(int cell, std::vector<int>& out) const {
  const auto nodes = dofs.nodes(cell);
  out.resize(nodes.size() * components);
  for (size_t a = 0; a < nodes.size(); ++a)
    for (int c = 0; c < components; ++c) out[a * components + c] = nodes[a] * components + c;
}

FESpace build_space(const Mesh& mesh, const CutTopology& topology, const ParametricMap& map, int k,
                    int components) {
  if (k < 1) throw Error("build_space: degree must be at least 1");
  if (components != 1 && components != 3) throw Error("build_space: components must be 1 or 3");
  FESpace s;
  s.degree = k;
  s.components = components;
  s.dofs = build_dof_map(mesh, topology.active_tets, k);
  s.map = &map;
  return s;
}

void eval_basis(const FESpace& space, int cell, const Bary& l, const MapPoint& mp, BasisEval& out) {
  NodeDerivs dl;
  lagrange::eval(space.degree, l, out.values, dl);
  const Mat3 jinv = mp.jac.inverse();
  if (!jinv.allFinite()) throw Error("eval_basis: singular map Jacobian");
  out.grads = space.map->frame(cell).gradients(dl) * jinv;
}

BasisEval eval_basis(const FESpace& space, int cell, const Bary& l) {
  BasisEval b;
  eval_basis(space, cell, l, space.map->eval(cell, l), b);
  return b;
}

double FEField::value(int cell, const Bary& l, int c) const {
  Eigen::VectorXd psi;
  lagrange::eval_values(space->degree, l, psi);
  const auto nodes = space->dofs.nodes(cell);
  double s = 0.0;
  for (size_t a = 0; a < nodes.size(); ++a) s += psi[a] * coeffs[nodes[a] * space->components + c];
  return s;
}

Vec3 FEField::vector_value(int cell, const Bary& l) const {
  Eigen::VectorXd psi;
  lagrange::eval_values(space->degree, l, psi);
  const auto nodes = space->dofs.nodes(cell);
  Vec3 s = Vec3::Zero();
  for (size_t a = 0; a < nodes.size(); ++a) s += psi[a] * coeffs.segment<3>(3 * nodes[a]);
  return s;
}

FEField interpolate(const FESpace& space, const PointFunction& f) {
  FEField field{&space, Eigen::VectorXd::Zero(space.num_dofs())};
  std::vector<char> done(space.num_nodes(), 0);
  const int nloc = space.nodes_per_cell();
  for (int c = 0; c < space.dofs.num_cells(); ++c) {
    const auto nodes = space.dofs.nodes(c);
    for (int a = 0; a < nloc; ++a) {
      if (done[nodes[a]]) continue;
      done[nodes[a]] = 1;
      const Vec3 y = space.map->eval(c, lagrange::node_bary(space.degree, a)).y;
      const Eigen::VectorXd v = f(y);
      if (v.size() != space.components) throw Error("interpolate: wrong number of components");
      field.coeffs.segment(nodes[a] * space.components, space.components) = v;
    }
  }
  return field;
}

}  // namespace surfstokes
