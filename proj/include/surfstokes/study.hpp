#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surfstokes/postprocess.hpp"

namespace surfstokes {

struct StudyConfig {
  std::string surface = "sphere";  // sphere | torus
  Formulation formulation = Formulation::consistent;
  int k = 2;
  int levels = -1;  // -1: 4 for k = 2, 3 for k = 3
  std::optional<Scaling> eta, rho_u, rho_p;
  std::optional<int> kp, kg;
  bool killing = false;  // rotation field on the sphere instead of the standard case
  std::uint64_t seed = 0;
  std::string out_dir;  // empty: no files
  bool export_vtk = false;

  int resolved_levels() const { return levels >= 0 ? levels : (k == 2 ? 4 : 3); }
  void validate() const;
};

/// Parameters for one level after defaults and overrides.
SolverConfig resolve_config(const StudyConfig& cfg, double h);

/// Per-level algebraic checks recorded during a study.
struct LevelDiagnostics {
  double a_symmetry = 0.0;        // max|A - A^T| / max|A|
  double b_constant = 0.0;        // |B 1|_inf / max|B|
  double s_constant = 0.0;        // |S 1|_inf / max|S|
  double mean_ratio = 0.0;        // |int p_h| / |p_h|_L2
  double residual_ratio = 0.0;    // |b - Mx| / |b|
  double mean_shift = 0.0;
  double max_root_residual = 0.0;
  double seconds = 0.0;
};

struct StudyResult {
  ConvergenceTable table;
  std::vector<LevelDiagnostics> diagnostics;
  std::string csv_path;
};

/// `<surface>_<formulation>_P<k>P<k-1>.csv`.
std::string csv_name(const StudyConfig& cfg);

/// Runs levels 0..levels, writes CSV and manifest into out_dir if set.
StudyResult run_study(const StudyConfig& cfg);

/// Text echo of the resolved configuration.
std::string manifest(const StudyConfig& cfg);

struct Variant {
  std::string name;
  StudyConfig config;
  StudyResult result;
  std::array<double, kNumErrors> eoc_delta{};  // variant minus its baseline, last interval
};

struct DegradationReport {
  StudyResult consistent;
  StudyResult inconsistent;
  std::vector<Variant> variants;
};

/// Defaults for both formulations plus the variants k_p = k (consistent),
/// eta = h^-2 (inconsistent), rho_p = 1/h (consistent), rho_u = h (consistent).
DegradationReport run_degradation_suite(const StudyConfig& cfg);

void write_report(const DegradationReport& r, std::ostream& os);

}  // namespace surfstokes
