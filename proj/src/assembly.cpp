#include "surfstokes/assembly.hpp"

#include <algorithm>
#include <fstream>

#include "surfstokes/integration.hpp"

namespace surfstokes {

namespace {

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

SpMat make_pattern(const DofMap& rows, int rc, const DofMap& cols, int cc) {
  std::vector<std::vector<int>> adj(rows.num_nodes());
  for (int c = 0; c < rows.num_cells(); ++c) {
    const auto rn = rows.nodes(c);
    const auto cn = cols.nodes(c);
    for (int a : rn) adj[a].insert(adj[a].end(), cn.begin(), cn.end());
  }
  Eigen::VectorXi sizes(rows.num_nodes() * rc);
  for (int a = 0; a < rows.num_nodes(); ++a) {
    std::sort(adj[a].begin(), adj[a].end());
    adj[a].erase(std::unique(adj[a].begin(), adj[a].end()), adj[a].end());
    for (int r = 0; r < rc; ++r) sizes[a * rc + r] = static_cast<int>(adj[a].size()) * cc;
  }
  SpMat m(rows.num_nodes() * rc, cols.num_nodes() * cc);
  m.reserve(sizes);
  for (int a = 0; a < rows.num_nodes(); ++a)
    for (int r = 0; r < rc; ++r)
      for (int b : adj[a])
        for (int s = 0; s < cc; ++s) m.insert(a * rc + r, b * cc + s) = 0.0;
  m.makeCompressed();
  return m;
}

void scatter(SpMat& m, const MatX& local, const std::vector<int>& rd, const std::vector<int>& cd) {
  for (size_t i = 0; i < rd.size(); ++i)
    for (size_t j = 0; j < cd.size(); ++j) m.coeffRef(rd[i], cd[j]) += local(i, j);
}

MatX symmetrized(const MatX& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

Eigen::VectorXd BlockSystem::apply_a(const Eigen::VectorXd& x) const {
  if (a_lower_only) return A.selfadjointView<Eigen::Lower>() * x;
  return A * x;
}

void compact_velocity_block(BlockSystem& sys) {
  if (sys.a_lower_only) return;
  SpMat lower = sys.A.triangularView<Eigen::Lower>();
  sys.A = SpMat();
  sys.A = std::move(lower);
  sys.A.makeCompressed();
  sys.a_lower_only = true;
}

SolverConfig default_config(int k, Formulation formulation, double h) {
  if (k < 2) throw Error("Taylor-Hood pair needs velocity degree k >= 2");
  SolverConfig c;
  c.k = k;
  c.kg = k;
  c.kp = k + 1;
  c.formulation = formulation;
  c.h = h;
  c.rho_u = 1.0 / h;
  c.rho_p = h;
  c.eta = formulation == Formulation::consistent ? std::pow(h, -2.0) : std::pow(h, -(k + 1.0));
  c.quad_degree = default_quadrature_degree(c.k, c.kg);
  return c;
}

TaylorHood build_taylor_hood(const Geometry& g, int k) {
  if (k < 2) throw Error("Taylor-Hood pair needs velocity degree k >= 2");
  return {build_space(g.mesh, g.topology, *g.map, k, 3),
          build_space(g.mesh, g.topology, *g.map, k - 1, 1)};
}

LoadData manufactured_loads(const ManufacturedCase& c) {
  return {[&c](const Vec3& x) { return source_terms(c, x); }};
}

SurfaceGeometry surface_geometry(const Geometry& g, int cell, const QuadPoint& qp, bool with_h) {
  SurfaceGeometry sg;
  sg.n_h = mapped_normal(normal_lin(*g.bundle, g.topology, cell), qp.jac);
  sg.n_tilde = penalty_normal(*g.bundle, g.topology.active_tets[cell], qp.y);
  sg.P = Mat3::Identity() - sg.n_h * sg.n_h.transpose();
  sg.H = with_h ? g.weingarten->at(cell, qp.l, MapPoint{Vec3::Zero(), qp.y, qp.jac}) : Mat3::Zero();
  return sg;
}

BlockSystem assemble_system(const Geometry& g, const TaylorHood& sp, const SolverConfig& cfg,
                            const LoadData& data) {
  const FESpace& U = sp.U;
  const FESpace& Q = sp.Q;
  if (U.dofs.num_cells() != g.topology.num_cells() || Q.dofs.num_cells() != g.topology.num_cells())
    throw Error("assemble_system: spaces do not match the active mesh");
  if (cfg.k != U.degree || Q.degree != U.degree - 1)
    throw Error("assemble_system: space degrees disagree with the configuration");
  const bool consistent = cfg.formulation == Formulation::consistent;
  const bool use_h = consistent && !cfg.zero_weingarten;
  if (use_h && !g.weingarten) throw Error("assemble_system: consistent formulation needs H_h");

  const QuadratureRule tri = triangle_rule(cfg.quad_degree);
  const QuadratureRule tet = tet_rule(cfg.quad_degree);

  BlockSystem sys;
  sys.A = make_pattern(U.dofs, 3, U.dofs, 3);
  sys.B = make_pattern(Q.dofs, 1, U.dofs, 3);
  sys.S = make_pattern(Q.dofs, 1, Q.dofs, 1);
  sys.M = sys.S;
  if (cfg.keep_parts) {
    sys.A_a = sys.A;
    sys.A_s = sys.A;
    sys.A_k = sys.A;
  }
  sys.f_vec = VecX::Zero(U.num_dofs());
  sys.g_vec = VecX::Zero(Q.num_dofs());
  sys.mean_row = VecX::Zero(Q.num_dofs());

  const int nu = U.dofs_per_cell(), nq = Q.dofs_per_cell(), nn = U.nodes_per_cell();
  std::vector<int> ud, qd;
  std::vector<QuadPoint> pts;
  BasisEval bu, bq;
  Eigen::Matrix<double, 9, Eigen::Dynamic> E(9, nu);
  MatX V(3, nu), La(nu, nu), Lk(nu, nu), Ls(nu, nu), Lb(nq, nu), Lsp(nq, nq), Lm(nq, nq);
  VecX kv(nu), lf(nu), lg(nq), lm(nq);

  for (int c = 0; c < g.topology.num_cells(); ++c) {
    U.cell_dofs(c, ud);
    Q.cell_dofs(c, qd);
    La.setZero();
    Lk.setZero();
    Ls.setZero();
    Lb.setZero();
    Lsp.setZero();
    Lm.setZero();
    lf.setZero();
    lg.setZero();
    lm.setZero();

    surface_points(*g.map, g.topology, tri, c, pts);
    for (const QuadPoint& qp : pts) {
      const SurfaceGeometry sg = surface_geometry(g, c, qp, use_h);
      eval_basis(U, c, qp.l, MapPoint{Vec3::Zero(), qp.y, qp.jac}, bu);
      eval_basis(Q, c, qp.l, MapPoint{Vec3::Zero(), qp.y, qp.jac}, bq);
      const double w = qp.weight;
      for (int a = 0; a < nn; ++a) {
        const Vec3 pg = sg.P * bu.grads.row(a).transpose();
        const double psi = bu.values[a];
        for (int d = 0; d < 3; ++d) {
          const int j = 3 * a + d;
          Mat3 grad = sg.P.col(d) * pg.transpose();
          Mat3 strain = 0.5 * (grad + grad.transpose());
          if (use_h) strain -= psi * sg.n_h[d] * sg.H;
          E.col(j) = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(strain.data());
          V.col(j) = consistent ? Vec3(psi * sg.P.col(d)) : Vec3(psi * Vec3::Unit(d));
          kv[j] = psi * sg.n_tilde[d];
        }
      }
      La.noalias() += w * (E.transpose() * E + V.transpose() * V);
      Lk.noalias() += (w * cfg.eta) * kv * kv.transpose();
      const Eigen::Matrix<double, Eigen::Dynamic, 3> pgq = bq.grads * sg.P;
      for (int b = 0; b < nq; ++b)
        for (int a = 0; a < nn; ++a)
          for (int d = 0; d < 3; ++d) Lb(b, 3 * a + d) += w * bu.values[a] * pgq(b, d);
      lm += w * bq.values;
      Lm.noalias() += w * bq.values * bq.values.transpose();
      sys.surface_area += w;
      if (data.source) {
        const SourceTerms st = data.source(qp.y);
        for (int a = 0; a < nn; ++a) lf.segment<3>(3 * a) += (w * bu.values[a]) * st.f;
        lg += (w * st.g) * bq.values;
      }
    }

    volume_points(*g.map, tet, c, pts);
    const Vec3 nlin = normal_lin(*g.bundle, g.topology, c);
    for (const QuadPoint& qp : pts) {
      const Vec3 n = mapped_normal(nlin, qp.jac);
      eval_basis(U, c, qp.l, MapPoint{Vec3::Zero(), qp.y, qp.jac}, bu);
      eval_basis(Q, c, qp.l, MapPoint{Vec3::Zero(), qp.y, qp.jac}, bq);
      const VecX dn = bu.grads * n;
      const VecX dq = bq.grads * n;
      const double w = qp.weight;
      for (int a = 0; a < nn; ++a)
        for (int b = 0; b < nn; ++b) {
          const double v = cfg.rho_u * w * dn[a] * dn[b];
          for (int d = 0; d < 3; ++d) Ls(3 * a + d, 3 * b + d) += v;
        }
      Lsp.noalias() += (cfg.rho_p * w) * dq * dq.transpose();
    }

    La = symmetrized(La);
    Lk = symmetrized(Lk);
    Ls = symmetrized(Ls);
    Lsp = symmetrized(Lsp);
    const MatX Lsum = La + Ls + Lk;
    scatter(sys.A, Lsum, ud, ud);
    if (cfg.keep_parts) {
      scatter(*sys.A_a, La, ud, ud);
      scatter(*sys.A_s, Ls, ud, ud);
      scatter(*sys.A_k, Lk, ud, ud);
    }
    scatter(sys.B, Lb, qd, ud);
    scatter(sys.S, Lsp, qd, qd);
    scatter(sys.M, symmetrized(Lm), qd, qd);
    for (int i = 0; i < nu; ++i) sys.f_vec[ud[i]] += lf[i];
    for (int i = 0; i < nq; ++i) {
      sys.g_vec[qd[i]] += lg[i];
      sys.mean_row[qd[i]] += lm[i];
    }
  }
  return sys;
}

void write_matrix_market(const SpMat& m, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("write_matrix_market: cannot open " + path);
  os.precision(17);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (int r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it)
      os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace surfstokes
