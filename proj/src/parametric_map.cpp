#include "surfstokes/parametric_map.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace surfstokes {

namespace {

constexpr int kMaxNewton = 50;
constexpr double kRootTol = 1e-13;

struct RootResult {
  double d = 0.0;
  double residual = 0.0;
  bool fallback = false;
};

// Smallest-|d| root of phi_h|_T(x + d g) = target.
RootResult find_root(const LevelSetBundle& bundle, int tet, const TetFrame& frame, const Vec3& x,
                     const Vec3& g, double target, double bracket) {
  auto f = [&](double d) { return bundle.phi_h(tet, frame.bary(x + d * g)) - target; };
  auto df = [&](double d) { return bundle.grad_phi_h(tet, frame.bary(x + d * g)).dot(g); };

  RootResult r;
  double d = 0.0, fd = f(0.0);
  for (int it = 0; it < kMaxNewton && std::abs(fd) > kRootTol; ++it) {
    const double slope = df(d);
    if (slope == 0.0) break;
    double step = -fd / slope;
    double dn = d + step, fn = f(dn);
    for (int damp = 0; damp < 20 && std::abs(fn) > std::abs(fd); ++damp) {
      step *= 0.5;
      dn = d + step;
      fn = f(dn);
    }
    d = dn;
    fd = fn;
  }
  if (std::abs(fd) <= kRootTol && std::abs(d) <= bracket) {
    r.d = d;
    r.residual = std::abs(fd);
    return r;
  }

  // Bisection fallback: scan outward from 0 for the nearest sign change.
  r.fallback = true;
  const double f0 = f(0.0);
  constexpr int kScan = 256;
  for (int s = 1; s <= kScan; ++s) {
    for (double sign : {1.0, -1.0}) {
      double lo = sign * bracket * (s - 1) / kScan, hi = sign * bracket * s / kScan;
      double flo = (s == 1) ? f0 : f(lo), fhi = f(hi);
      if (flo * fhi > 0.0) continue;
      for (int it = 0; it < 200 && std::abs(hi - lo) > 1e-17; ++it) {
        const double mid = 0.5 * (lo + hi), fm = f(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      r.d = 0.5 * (lo + hi);
      r.residual = std::abs(f(r.d));
      return r;
    }
  }
  std::ostringstream os;
  os << "build_mapping: root search failed at node (" << x.transpose() << ") of tet " << tet
     << ", residual " << std::abs(fd);
  throw Error(os.str());
}

}  // namespace

ParametricMap::ParametricMap(const Mesh& mesh, const CutTopology& topology,
                             const LevelSetBundle& bundle)
    : mesh_(&mesh) {
  dofs_ = build_dof_map(mesh, topology.active_tets, bundle.kg());
  const int nloc = dofs_.nodes_per_cell();
  std::vector<Vec3> sum(dofs_.num_nodes(), Vec3::Zero());
  std::vector<int> count(dofs_.num_nodes(), 0);
  frames_.reserve(topology.num_cells());
  for (int c = 0; c < topology.num_cells(); ++c) {
    const int t = topology.active_tets[c];
    frames_.push_back(TetFrame::of(mesh, t));
    const TetFrame& fr = frames_.back();
    const double bracket = 2.0 * mesh.diameter(t);
    const auto nodes = dofs_.nodes(c);
    for (int a = 0; a < nloc; ++a) {
      const Bary l = lagrange::node_bary(dofs_.degree, a);
      const Vec3 x = fr.point(l);
      const Vec3 g = bundle.grad_phi_h(t, l);
      const RootResult r = find_root(bundle, t, fr, x, g, bundle.phi_hat(t, l), bracket);
      max_residual_ = std::max(max_residual_, r.residual);
      fallbacks_ += r.fallback ? 1 : 0;
      sum[nodes[a]] += r.d * g;
      ++count[nodes[a]];
    }
  }
  disp_.resize(dofs_.num_nodes());
  for (int i = 0; i < dofs_.num_nodes(); ++i) disp_[i] = sum[i] / count[i];

  for (int c = 0; c < topology.num_cells(); ++c)
    for (int a = 0; a < nloc; ++a) {
      const double det = eval(c, lagrange::node_bary(dofs_.degree, a)).jac.determinant();
      if (!(det > 0.0))
        throw Error("build_mapping: non-positive Jacobian determinant in tet " +
                    std::to_string(topology.active_tets[c]));
    }
}

MapPoint ParametricMap::eval(int cell, const Bary& l) const {
  const TetFrame& fr = frames_[cell];
  Eigen::VectorXd psi;
  NodeDerivs dl;
  lagrange::eval(dofs_.degree, l, psi, dl);
  const Eigen::Matrix<double, Eigen::Dynamic, 3> grads = fr.gradients(dl);
  MapPoint mp;
  mp.x = fr.point(l);
  mp.y = mp.x;
  mp.jac = Mat3::Identity();
  const auto nodes = dofs_.nodes(cell);
  for (size_t a = 0; a < nodes.size(); ++a) {
    const Vec3& d = disp_[nodes[a]];
    mp.y += psi[a] * d;
    mp.jac += d * grads.row(a);
  }
  return mp;
}

MapPoint eval_map(const ParametricMap& map, const CutTopology& topology, int tet, const Bary& l) {
  const int c = topology.active_index.at(tet);
  if (c < 0) throw Error("eval_map: tet " + std::to_string(tet) + " is not active");
  return map.eval(c, l);
}

Vec3 normal_lin(const LevelSetBundle& bundle, const CutTopology& topology, int cell) {
  return bundle.grad_phi_hat(topology.active_tets[cell]).normalized();
}

Vec3 mapped_normal(const Vec3& n_lin, const Mat3& jac) {
  const Vec3 m = jac.transpose().partialPivLu().solve(n_lin);
  const double len = m.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw Error("mapped_normal: singular Jacobian");
  return m / len;
}

Vec3 penalty_normal(const LevelSetBundle& bundle, int tet, const Vec3& y) {
  return bundle.grad_phi_tilde(tet, bundle.frame(tet).bary(y)).normalized();
}

NormalFields compute_normals(const ParametricMap& map, const CutTopology& topology,
                             const LevelSetBundle& bundle, int cell, const Bary& l) {
  const MapPoint mp = map.eval(cell, l);
  NormalFields nf;
  nf.n_lin = normal_lin(bundle, topology, cell);
  nf.n_h = mapped_normal(nf.n_lin, mp.jac);
  nf.n_tilde = penalty_normal(bundle, topology.active_tets[cell], mp.y);
  return nf;
}

WeingartenField::WeingartenField(const ParametricMap& map, const CutTopology& topology,
                                 const LevelSetBundle& bundle)
    : map_(&map) {
  const DofMap& dofs = map.dofs();
  const int nloc = dofs.nodes_per_cell();
  normals_.assign(dofs.num_nodes(), Vec3::Zero());
  std::vector<int> count(dofs.num_nodes(), 0);
  for (int c = 0; c < topology.num_cells(); ++c) {
    const Vec3 nl = normal_lin(bundle, topology, c);
    const auto nodes = dofs.nodes(c);
    for (int a = 0; a < nloc; ++a) {
      normals_[nodes[a]] += mapped_normal(nl, map.eval(c, lagrange::node_bary(dofs.degree, a)).jac);
      ++count[nodes[a]];
    }
  }
  for (int i = 0; i < dofs.num_nodes(); ++i) normals_[i] /= count[i];
}

Mat3 WeingartenField::at(int cell, const Bary& l, const MapPoint& mp) const {
  const DofMap& dofs = map_->dofs();
  Eigen::VectorXd psi;
  NodeDerivs dl;
  lagrange::eval(dofs.degree, l, psi, dl);
  const Eigen::Matrix<double, Eigen::Dynamic, 3> gx = map_->frame(cell).gradients(dl);
  const Mat3 jinv_t = mp.jac.inverse().transpose();
  Mat3 h = Mat3::Zero();
  const auto nodes = dofs.nodes(cell);
  for (size_t a = 0; a < nodes.size(); ++a) {
    const Vec3 gy = jinv_t * gx.row(a).transpose();
    h += normals_[nodes[a]] * gy.transpose();
  }
  return h;
}

void write_deformed_surface_vtk(const ParametricMap& map, const CutTopology& topology,
                                const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("write_deformed_surface_vtk: cannot open " + path);
  os.precision(17);
  const size_t n = topology.gamma_lin.size();
  os << "# vtk DataFile Version 3.0\ndeformed surface\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << 3 * n << " double\n";
  for (const auto& tri : topology.gamma_lin) {
    const int c = topology.active_index[tri.tet];
    for (const auto& l : tri.bary) {
      const Vec3 y = map.eval(c, l).y;
      os << y[0] << ' ' << y[1] << ' ' << y[2] << '\n';
    }
  }
  os << "CELLS " << n << ' ' << 4 * n << '\n';
  for (size_t i = 0; i < n; ++i) os << "3 " << 3 * i << ' ' << 3 * i + 1 << ' ' << 3 * i + 2 << '\n';
  os << "CELL_TYPES " << n << '\n';
  for (size_t i = 0; i < n; ++i) os << "5\n";
}

}  // namespace surfstokes
