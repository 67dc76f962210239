// Convergence studies for the surface Stokes discretization.

#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "surfstokes/study.hpp"

using namespace surfstokes;

namespace {

void print_table(const StudyResult& r, std::ostream& os) {
  os << std::setw(5) << "level" << std::setw(12) << "h";
  for (const char* n : error_names()) os << std::setw(12) << n;
  os << '\n';
  for (size_t i = 0; i < r.table.rows.size(); ++i) {
    const ErrorReport& row = r.table.rows[i];
    os << std::setw(5) << row.level << std::setw(12) << std::setprecision(4) << row.h;
    for (double v : row.e) os << std::setw(12) << std::setprecision(4) << std::scientific << v;
    os << std::defaultfloat << '\n';
    if (i > 0) {
      os << std::setw(17) << "eoc";
      for (int k = 0; k < kNumErrors; ++k)
        os << std::setw(12) << std::fixed << std::setprecision(2) << r.table.eoc[k][i];
      os << std::defaultfloat << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parametric trace Taylor-Hood solver for the surface Stokes problem"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");

  StudyConfig cfg;
  std::string formulation = "consistent";
  double eta_coeff = 1.0;
  std::optional<double> eta_exp, rho_u_exp, rho_p_exp;
  int kp = 0, kg = 0;
  bool degradation = false;

  app.add_option("--surface", cfg.surface, "sphere or torus")
      ->check(CLI::IsMember({"sphere", "torus"}));
  app.add_option("--formulation", formulation, "consistent or inconsistent")
      ->check(CLI::IsMember({"consistent", "inconsistent"}));
  app.add_option("--order,-k", cfg.k, "velocity degree k (pressure k-1)")
      ->check(CLI::IsMember({2, 3}));
  app.add_option("--levels", cfg.levels, "finest refinement level (default 4 for k=2, 3 for k=3)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--eta-coeff", eta_coeff, "penalty coefficient c in eta = c h^e");
  app.add_option("--eta-exp", eta_exp, "penalty exponent e in eta = c h^e");
  app.add_option("--rho-u-exp", rho_u_exp, "velocity stabilization rho_u = h^e");
  app.add_option("--rho-p-exp", rho_p_exp, "pressure stabilization rho_p = h^e");
  app.add_option("--kp", kp, "degree of the penalty level set (default k+1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--kg", kg, "geometry degree (default k)")->check(CLI::PositiveNumber);
  app.add_option("--out", cfg.out_dir, "output directory for CSV and manifest");
  app.add_flag("--export-vtk", cfg.export_vtk, "write mesh and deformed surface per level");
  app.add_option("--seed", cfg.seed, "seed recorded in the manifest");
  app.add_flag("--killing", cfg.killing, "rotation field e3 x p(x) on the sphere");
  app.add_flag("--degradation", degradation, "run the parameter degradation suite");

  CLI11_PARSE(app, argc, argv);

  cfg.formulation =
      formulation == "consistent" ? Formulation::consistent : Formulation::inconsistent;
  if (eta_exp || app.count("--eta-coeff")) {
    const double def_exp = cfg.formulation == Formulation::consistent ? -2.0 : -(cfg.k + 1.0);
    cfg.eta = Scaling{eta_coeff, eta_exp.value_or(def_exp)};
  }
  if (rho_u_exp) cfg.rho_u = Scaling{1.0, *rho_u_exp};
  if (rho_p_exp) cfg.rho_p = Scaling{1.0, *rho_p_exp};
  if (kp > 0) cfg.kp = kp;
  if (kg > 0) cfg.kg = kg;

  try {
    if (degradation) {
      const DegradationReport rep = run_degradation_suite(cfg);
      write_report(rep, std::cout);
      return 0;
    }
    std::cout << manifest(cfg);
    const StudyResult r = run_study(cfg);
    print_table(r, std::cout);
    if (!r.csv_path.empty()) std::cout << "wrote " << r.csv_path << '\n';
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
