#pragma once

#include <array>
#include <ostream>
#include <string>
#include <vector>

#include "surfstokes/solver.hpp"
#include <utility>

namespace surfstokes {

enum ErrorKind { kL2 = 0, kPL2, kH1, kA, kM, kPartA, kPartS, kPartK, kNumErrors };

/// Column names in CSV order.
const std::array<const char*, kNumErrors>& error_names();

struct ErrorReport {
  int level = 0;
  double h = 0.0;
  int ndof_u = 0;
  int ndof_p = 0;
  std::array<double, kNumErrors> e{};  // the five errors, then the energy parts

  double operator[](ErrorKind k) const { return e[k]; }
};

/// Errors of (u_h, p_h) against the exact solution on Gamma_h and the patch.
/// e_A^2 = a_part^2 + s_part^2 + k_part^2, where a_part uses a_{T,h} for the
/// consistent and a_h for the inconsistent formulation.
ErrorReport compute_errors(const Geometry& g, const TaylorHood& spaces, const SolverConfig& cfg,
                           const ManufacturedCase& c, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& p);

/// log2(e[i-1] / e[i]) where the mesh sizes differ by a factor 2 +- 1%;
/// NaN where undefined (zero error or wrong h ratio). Entry 0 is NaN.
std::vector<double> eoc_series(const std::vector<double>& h, const std::vector<double>& err);

/// Least-squares slope of -log2(err) against log2(1/h) over the last `n` rows.
double eoc_fit(const std::vector<double>& h, const std::vector<double>& err, int n = 3);

struct ConvergenceTable {
  std::vector<ErrorReport> rows;
  std::array<std::vector<double>, kNumErrors> eoc;

  std::vector<double> column(ErrorKind k) const;
  std::vector<double> sizes() const;
  /// EOC of the last interval.
  double last_eoc(ErrorKind k) const;
};

void compute_eoc(ConvergenceTable& table);

/// level,h,ndof_u,ndof_p, errors, energy parts, then eoc_<name> columns.
void write_csv(const ConvergenceTable& table, std::ostream& os);
void write_csv(const ConvergenceTable& table, const std::string& path);

}  // namespace surfstokes

namespace surfstokes {

/// L2(Gamma_h) norm and integral of a pressure-space function.
std::pair<double, double> pressure_norm_and_integral(const Geometry& g, const FESpace& Q,
                                                     const Eigen::VectorXd& p, int quad_degree);

}  // namespace surfstokes
