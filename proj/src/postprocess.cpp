#include "surfstokes/postprocess.hpp"

#include <cmath>
#include <fstream>
#include <cstdio>
#include <limits>
#include <span>

#include "surfstokes/integration.hpp"

namespace surfstokes {

const std::array<const char*, kNumErrors>& error_names() {
  static const std::array<const char*, kNumErrors> names{
      "e_L2", "e_PL2", "e_H1", "e_A", "e_M", "a_part", "s_part", "k_part"};
  return names;
}

namespace {

// Value and gradient (rows = components) of the discrete velocity.
void velocity_at(const BasisEval& b, const Eigen::VectorXd& u, const std::span<const int> nodes,
                 Vec3& val, Mat3& grad) {
  val.setZero();
  grad.setZero();
  for (size_t a = 0; a < nodes.size(); ++a) {
    const Vec3 ua = u.segment<3>(3 * nodes[a]);
    val += b.values[a] * ua;
    grad += ua * b.grads.row(a);
  }
}

void pressure_at(const BasisEval& b, const Eigen::VectorXd& p, const std::span<const int> nodes,
                 double& val, Vec3& grad) {
  val = 0.0;
  grad.setZero();
  for (size_t a = 0; a < nodes.size(); ++a) {
    val += b.values[a] * p[nodes[a]];
    grad += p[nodes[a]] * b.grads.row(a).transpose();
  }
}

}  // namespace

ErrorReport compute_errors(const Geometry& g, const TaylorHood& sp, const SolverConfig& cfg,
                           const ManufacturedCase& c, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& p) {
  const bool consistent = cfg.formulation == Formulation::consistent;
  const bool use_h = consistent && !cfg.zero_weingarten;
  const QuadratureRule tri = triangle_rule(cfg.quad_degree);
  const QuadratureRule tet = tet_rule(cfg.quad_degree);

  double l2 = 0, pl2 = 0, h1 = 0, ea = 0, es = 0, ek = 0, em = 0;
  std::vector<QuadPoint> pts;
  BasisEval bu, bq;
  for (int cell = 0; cell < g.topology.num_cells(); ++cell) {
    const auto un = sp.U.dofs.nodes(cell);
    const auto qn = sp.Q.dofs.nodes(cell);
    surface_points(*g.map, g.topology, tri, cell, pts);
    for (const QuadPoint& qp : pts) {
      const SurfaceGeometry sg = surface_geometry(g, cell, qp, use_h);
      const MapPoint mp{Vec3::Zero(), qp.y, qp.jac};
      eval_basis(sp.U, cell, qp.l, mp, bu);
      eval_basis(sp.Q, cell, qp.l, mp, bq);
      Vec3 uh;
      Mat3 guh;
      velocity_at(bu, u, un, uh, guh);
      double ph;
      Vec3 gph;
      pressure_at(bq, p, qn, ph, gph);

      const Vec3 e = c.exact_u(qp.y) - uh;
      const Mat3 ge = sg.P * (c.grad_u(qp.y) - guh) * sg.P;
      const double w = qp.weight;
      l2 += w * e.squaredNorm();
      pl2 += w * (sg.P * e).squaredNorm();
      h1 += w * ge.squaredNorm();
      Mat3 strain = 0.5 * (ge + ge.transpose());
      if (use_h) strain -= e.dot(sg.n_h) * sg.H;
      ea += w * (strain.squaredNorm() + (consistent ? (sg.P * e).squaredNorm() : e.squaredNorm()));
      const double en = e.dot(sg.n_tilde);
      ek += w * cfg.eta * en * en;
      const double ep = c.exact_p(qp.y) - ph;
      em += w * ep * ep;
    }
    volume_points(*g.map, tet, cell, pts);
    const Vec3 nlin = normal_lin(*g.bundle, g.topology, cell);
    for (const QuadPoint& qp : pts) {
      const Vec3 n = mapped_normal(nlin, qp.jac);
      const MapPoint mp{Vec3::Zero(), qp.y, qp.jac};
      eval_basis(sp.U, cell, qp.l, mp, bu);
      eval_basis(sp.Q, cell, qp.l, mp, bq);
      Vec3 uh;
      Mat3 guh;
      velocity_at(bu, u, un, uh, guh);
      double ph;
      Vec3 gph;
      pressure_at(bq, p, qn, ph, gph);
      const double w = qp.weight;
      es += cfg.rho_u * w * ((c.grad_u(qp.y) - guh) * n).squaredNorm();
      const double dn = n.dot(c.grad_p(qp.y) - gph);
      em += cfg.rho_p * w * dn * dn;
    }
  }
  ErrorReport r;
  r.h = g.h;
  r.level = g.mesh.level;
  r.ndof_u = sp.U.num_dofs();
  r.ndof_p = sp.Q.num_dofs();
  r.e[kL2] = std::sqrt(l2);
  r.e[kPL2] = std::sqrt(pl2);
  r.e[kH1] = std::sqrt(h1);
  r.e[kA] = std::sqrt(ea + es + ek);
  r.e[kM] = std::sqrt(em);
  r.e[kPartA] = std::sqrt(ea);
  r.e[kPartS] = std::sqrt(es);
  r.e[kPartK] = std::sqrt(ek);
  return r;
}

std::vector<double> eoc_series(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size()) throw Error("eoc_series: size mismatch");
  std::vector<double> out(err.size(), std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 1; i < err.size(); ++i) {
    const double ratio = h[i - 1] / h[i];
    if (std::abs(ratio - 2.0) > 0.02 || !(err[i] > 0.0) || !(err[i - 1] > 0.0)) continue;
    out[i] = std::log2(err[i - 1] / err[i]);
  }
  return out;
}

double eoc_fit(const std::vector<double>& h, const std::vector<double>& err, int n) {
  const int m = static_cast<int>(err.size());
  if (m < 2 || n < 2) return std::numeric_limits<double>::quiet_NaN();
  const int start = std::max(0, m - n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int i = start; i < m; ++i) {
    if (!(err[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double x = -std::log2(h[i]), y = -std::log2(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

std::vector<double> ConvergenceTable::column(ErrorKind k) const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.e[k]);
  return out;
}

std::vector<double> ConvergenceTable::sizes() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.h);
  return out;
}

double ConvergenceTable::last_eoc(ErrorKind k) const {
  if (eoc[k].empty()) return std::numeric_limits<double>::quiet_NaN();
  return eoc[k].back();
}

void compute_eoc(ConvergenceTable& table) {
  if (table.rows.size() < 2) throw Error("compute_eoc: need at least two rows");
  for (int k = 0; k < kNumErrors; ++k)
    table.eoc[k] = eoc_series(table.sizes(), table.column(static_cast<ErrorKind>(k)));
}

void write_csv(const ConvergenceTable& table, std::ostream& os) {
  os << "level,h,ndof_u,ndof_p";
  for (const char* n : error_names()) os << ',' << n;
  for (const char* n : error_names()) os << ",eoc_" << n;
  os << '\n';
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const ErrorReport& r = table.rows[i];
    os << r.level << ',' << num(r.h) << ',' << r.ndof_u << ',' << r.ndof_p;
    for (double v : r.e) os << ',' << num(v);
    for (int k = 0; k < kNumErrors; ++k) {
      const double v = i < table.eoc[k].size() ? table.eoc[k][i] : std::nan("");
      os << ',' << (std::isnan(v) ? std::string("nan") : num(v));
    }
    os << '\n';
  }
}

void write_csv(const ConvergenceTable& table, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("write_csv: cannot open " + path);
  write_csv(table, os);
}

}  // namespace surfstokes

namespace surfstokes {

std::pair<double, double> pressure_norm_and_integral(const Geometry& g, const FESpace& Q,
                                                     const Eigen::VectorXd& p, int quad_degree) {
  const QuadratureRule tri = triangle_rule(quad_degree);
  std::vector<QuadPoint> pts;
  Eigen::VectorXd psi;
  double sq = 0.0, integral = 0.0;
  for (int cell = 0; cell < g.topology.num_cells(); ++cell) {
    const auto nodes = Q.dofs.nodes(cell);
    surface_points(*g.map, g.topology, tri, cell, pts);
    for (const QuadPoint& qp : pts) {
      lagrange::eval_values(Q.degree, qp.l, psi);
      double v = 0.0;
      for (size_t a = 0; a < nodes.size(); ++a) v += psi[a] * p[nodes[a]];
      sq += qp.weight * v * v;
      integral += qp.weight * v;
    }
  }
  return {std::sqrt(sq), integral};
}

}  // namespace surfstokes
