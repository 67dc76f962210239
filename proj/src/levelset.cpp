#include "surfstokes/levelset.hpp"

#include <algorithm>

namespace surfstokes {

namespace {

std::vector<int> band_cells(const Mesh& mesh, const std::vector<double>& phi, int layers) {
  const int nt = static_cast<int>(mesh.tets.size());
  std::vector<char> in(nt, 0);
  for (int t = 0; t < nt; ++t) in[t] = touches_zero_level(mesh, t, phi) ? 1 : 0;
  if (layers > 0) {
    std::vector<std::vector<int>> vertex_tets(mesh.vertices.size());
    for (int t = 0; t < nt; ++t)
      for (int v : mesh.tets[t].v) vertex_tets[v].push_back(t);
    for (int l = 0; l < layers; ++l) {
      std::vector<char> vmark(mesh.vertices.size(), 0);
      for (int t = 0; t < nt; ++t)
        if (in[t])
          for (int v : mesh.tets[t].v) vmark[v] = 1;
      for (size_t v = 0; v < vmark.size(); ++v)
        if (vmark[v])
          for (int t : vertex_tets[v]) in[t] = 1;
    }
  }
  std::vector<int> cells;
  for (int t = 0; t < nt; ++t)
    if (in[t]) cells.push_back(t);
  return cells;
}

}  // namespace

LevelSetBundle::LevelSetBundle(const Mesh& mesh, AnalyticSurface surface, int kg, int kp)
    : mesh_(&mesh), surface_(std::move(surface)), kg_(kg), kp_(kp) {
  if (kg < 1 || kp < 1) throw Error("interpolate_levelsets: degrees must be >= 1");
  vertex_phi_.resize(mesh.vertices.size());
  for (size_t i = 0; i < mesh.vertices.size(); ++i) vertex_phi_[i] = surface_.eval(mesh.vertices[i]);
  const std::vector<int> cells = band_cells(mesh, vertex_phi_, 2);
  phi_h_map_ = build_dof_map(mesh, cells, kg);
  phi_tilde_map_ = build_dof_map(mesh, cells, kp);
  phi_h_.resize(phi_h_map_.num_nodes());
  for (int i = 0; i < phi_h_map_.num_nodes(); ++i) phi_h_[i] = surface_.eval(phi_h_map_.node_points[i]);
  phi_tilde_.resize(phi_tilde_map_.num_nodes());
  for (int i = 0; i < phi_tilde_map_.num_nodes(); ++i)
    phi_tilde_[i] = surface_.eval(phi_tilde_map_.node_points[i]);
  frames_.reserve(cells.size());
  for (int t : cells) frames_.push_back(TetFrame::of(mesh, t));
}

int LevelSetBundle::cell(int tet) const {
  const int c = phi_h_map_.cell_of_tet.at(tet);
  if (c < 0) throw Error("level set fields requested outside the band (tet " + std::to_string(tet) + ")");
  return c;
}

double LevelSetBundle::field(const DofMap& map, const std::vector<double>& vals, int tet,
                             const Bary& l) const {
  const int c = cell(tet);
  Eigen::VectorXd psi;
  lagrange::eval_values(map.degree, l, psi);
  double s = 0.0;
  const auto nodes = map.nodes(c);
  for (size_t a = 0; a < nodes.size(); ++a) s += psi[a] * vals[nodes[a]];
  return s;
}

Vec3 LevelSetBundle::field_grad(const DofMap& map, const std::vector<double>& vals, int tet,
                                const Bary& l) const {
  const int c = cell(tet);
  Eigen::VectorXd psi;
  NodeDerivs dl;
  lagrange::eval(map.degree, l, psi, dl);
  Eigen::Vector4d g = Eigen::Vector4d::Zero();
  const auto nodes = map.nodes(c);
  for (size_t a = 0; a < nodes.size(); ++a) g += vals[nodes[a]] * dl.row(a).transpose();
  return frames_[c].grad_lambda.transpose() * g;
}

double LevelSetBundle::phi_h(int tet, const Bary& l) const { return field(phi_h_map_, phi_h_, tet, l); }
Vec3 LevelSetBundle::grad_phi_h(int tet, const Bary& l) const {
  return field_grad(phi_h_map_, phi_h_, tet, l);
}
double LevelSetBundle::phi_tilde(int tet, const Bary& l) const {
  return field(phi_tilde_map_, phi_tilde_, tet, l);
}
Vec3 LevelSetBundle::grad_phi_tilde(int tet, const Bary& l) const {
  return field_grad(phi_tilde_map_, phi_tilde_, tet, l);
}

double LevelSetBundle::phi_hat(int tet, const Bary& l) const {
  const auto& v = mesh_->tets[tet].v;
  return l[0] * vertex_phi_[v[0]] + l[1] * vertex_phi_[v[1]] + l[2] * vertex_phi_[v[2]] +
         l[3] * vertex_phi_[v[3]];
}

Vec3 LevelSetBundle::grad_phi_hat(int tet) const {
  const auto& v = mesh_->tets[tet].v;
  const auto& g = frame(tet).grad_lambda;
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < 4; ++i) out += vertex_phi_[v[i]] * g.row(i).transpose();
  return out;
}

LevelSetBundle interpolate_levelsets(const Mesh& mesh, const AnalyticSurface& surface, int kg,
                                     int kp) {
  return LevelSetBundle(mesh, surface, kg, kp);
}

}  // namespace surfstokes
