#include "surfstokes/study.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace surfstokes {

namespace {

double max_abs(const SpMat& m) {
  double s = 0.0;
  for (int r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it) s = std::max(s, std::abs(it.value()));
  return s;
}

double relative(double num, double den) { return den > 0.0 ? num / den : num; }

// max |A - A^T| / max |A| without forming the transpose.
double asymmetry(const SpMat& m) {
  double diff = 0.0;
  for (int r = 0; r < m.outerSize(); ++r)
    for (SpMat::InnerIterator it(m, r); it; ++it)
      if (it.col() > r) diff = std::max(diff, std::abs(it.value() - m.coeff(it.col(), r)));
  return relative(diff, max_abs(m));
}

ManufacturedCase make_case(const StudyConfig& cfg) {
  if (cfg.killing) return ManufacturedCase::killing_case();
  return cfg.surface == "torus" ? ManufacturedCase::torus_case() : ManufacturedCase::sphere_case();
}

std::string scaling_str(const std::optional<Scaling>& s) {
  if (!s) return "default";
  std::ostringstream os;
  os << s->coeff << "*h^" << s->exponent;
  return os.str();
}

}  // namespace

void StudyConfig::validate() const {
  if (surface != "sphere" && surface != "torus")
    throw Error("unknown surface '" + surface + "' (expected sphere or torus)");
  if (k != 2 && k != 3) throw Error("order must be 2 or 3");
  if (killing && surface != "sphere") throw Error("the rotation case lives on the sphere");
  if (kp && *kp < 1) throw Error("kp must be at least 1");
  if (kg && *kg < 1) throw Error("kg must be at least 1");
  if (levels < -1) throw Error("levels must be non-negative");
}

SolverConfig resolve_config(const StudyConfig& cfg, double h) {
  SolverConfig s = default_config(cfg.k, cfg.formulation, h);
  if (cfg.kg) s.kg = *cfg.kg;
  if (cfg.kp) s.kp = *cfg.kp;
  if (cfg.eta) s.eta = cfg.eta->at(h);
  if (cfg.rho_u) s.rho_u = cfg.rho_u->at(h);
  if (cfg.rho_p) s.rho_p = cfg.rho_p->at(h);
  s.quad_degree = default_quadrature_degree(s.k, s.kg);
  return s;
}

std::string csv_name(const StudyConfig& cfg) {
  std::ostringstream os;
  os << (cfg.killing ? "killing" : cfg.surface) << '_' << to_string(cfg.formulation) << "_P" << cfg.k
     << 'P' << cfg.k - 1 << ".csv";
  return os.str();
}

std::string manifest(const StudyConfig& cfg) {
  std::ostringstream os;
  os << "surface = " << cfg.surface << '\n'
     << "case = " << (cfg.killing ? "killing" : cfg.surface) << '\n'
     << "formulation = " << to_string(cfg.formulation) << '\n'
     << "order = " << cfg.k << '\n'
     << "levels = " << cfg.resolved_levels() << '\n'
     << "kg = " << (cfg.kg ? std::to_string(*cfg.kg) : "default") << '\n'
     << "kp = " << (cfg.kp ? std::to_string(*cfg.kp) : "default") << '\n'
     << "eta = " << scaling_str(cfg.eta) << '\n'
     << "rho_u = " << scaling_str(cfg.rho_u) << '\n'
     << "rho_p = " << scaling_str(cfg.rho_p) << '\n'
     << "seed = " << cfg.seed << '\n'
     << "solver = " << solver_backend() << '\n';
  return os.str();
}

StudyResult run_study(const StudyConfig& cfg) {
  cfg.validate();
  const ManufacturedCase mcase = make_case(cfg);
  const AnalyticSurface& surface = mcase.surface();
  const int levels = cfg.resolved_levels();
  if (!cfg.out_dir.empty()) std::filesystem::create_directories(cfg.out_dir);

  StudyResult res;
  Mesh mesh = standard_mesh(surface, 0);
  for (int level = 0; level <= levels; ++level) {
    try {
      const auto t0 = std::chrono::steady_clock::now();
      if (level > 0) mesh = refine_toward_surface(mesh, surface, 1);
      const SolverConfig sc = resolve_config(cfg, mesh.mesh_size_at_level(level));
      const auto g = build_geometry(std::move(mesh), surface, sc.kg, sc.kp);
      const TaylorHood spaces = build_taylor_hood(*g, cfg.k);
      BlockSystem sys = assemble_system(*g, spaces, sc, manufactured_loads(mcase));

      LevelDiagnostics d;
      d.a_symmetry = asymmetry(sys.A);
      const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sys.np());
      d.b_constant = relative((sys.B.transpose() * ones).cwiseAbs().maxCoeff(), max_abs(sys.B));
      d.s_constant = relative((sys.S * ones).cwiseAbs().maxCoeff(), max_abs(sys.S));
      compact_velocity_block(sys);

      const DiscreteSolution sol = solve(sys);
      d.residual_ratio = relative(sol.residual_norm, sol.load_norm);
      d.mean_shift = sol.mean_shift;
      d.max_root_residual = g->map->max_root_residual();
      const auto [pnorm, pint] = pressure_norm_and_integral(*g, spaces.Q, sol.p, sc.quad_degree);
      d.mean_ratio = relative(std::abs(pint), pnorm);

      res.table.rows.push_back(compute_errors(*g, spaces, sc, mcase, sol.u, sol.p));
      if (cfg.export_vtk && !cfg.out_dir.empty()) {
        const std::string stem = cfg.out_dir + "/" + cfg.surface + "_level" + std::to_string(level);
        write_vtk(g->mesh, stem + "_mesh.vtk");
        write_deformed_surface_vtk(*g->map, g->topology, stem + "_surface.vtk");
      }
      d.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      res.diagnostics.push_back(d);
      mesh = std::move(g->mesh);
    } catch (const Error& e) {
      throw Error("level " + std::to_string(level) + ": " + e.what());
    }
  }
  if (res.table.rows.size() >= 2) compute_eoc(res.table);
  if (!cfg.out_dir.empty()) {
    res.csv_path = cfg.out_dir + "/" + csv_name(cfg);
    write_csv(res.table, res.csv_path);
    std::ofstream(cfg.out_dir + "/" + csv_name(cfg).substr(0, csv_name(cfg).size() - 4) +
                  "_manifest.txt")
        << manifest(cfg);
  }
  return res;
}

DegradationReport run_degradation_suite(const StudyConfig& cfg) {
  auto with_dir = [&](StudyConfig c, const std::string& sub) {
    if (!cfg.out_dir.empty()) c.out_dir = cfg.out_dir + "/" + sub;
    return c;
  };
  StudyConfig cons = cfg;
  cons.formulation = Formulation::consistent;
  StudyConfig incons = cfg;
  incons.formulation = Formulation::inconsistent;

  DegradationReport rep;
  rep.consistent = run_study(with_dir(cons, "default"));
  rep.inconsistent = run_study(with_dir(incons, "default"));

  auto add = [&](const std::string& name, StudyConfig c, const StudyResult& base) {
    Variant v{name, c, run_study(with_dir(c, name)), {}};
    for (int k = 0; k < kNumErrors; ++k)
      v.eoc_delta[k] = v.result.table.last_eoc(static_cast<ErrorKind>(k)) -
                       base.table.last_eoc(static_cast<ErrorKind>(k));
    rep.variants.push_back(std::move(v));
  };
  StudyConfig c = cons;
  c.kp = cfg.k;
  add("kp_eq_k", c, rep.consistent);
  c = incons;
  c.eta = Scaling{1.0, -2.0};
  add("eta_h-2", c, rep.inconsistent);
  c = cons;
  c.rho_p = Scaling{1.0, -1.0};
  add("rho_p_h-1", c, rep.consistent);
  c = cons;
  c.rho_u = Scaling{1.0, 1.0};
  add("rho_u_h", c, rep.consistent);
  return rep;
}

void write_report(const DegradationReport& r, std::ostream& os) {
  auto line = [&](const std::string& name, const StudyResult& s) {
    os << name;
    for (int k = 0; k < kNumErrors; ++k)
      os << ' ' << error_names()[k] << '=' << s.table.last_eoc(static_cast<ErrorKind>(k));
    os << '\n';
  };
  line("consistent", r.consistent);
  line("inconsistent", r.inconsistent);
  for (const auto& v : r.variants) {
    line(v.name, v.result);
    os << "  delta";
    for (int k = 0; k < kNumErrors; ++k) os << ' ' << error_names()[k] << '=' << v.eoc_delta[k];
    os << '\n';
  }
}

}  // namespace surfstokes
