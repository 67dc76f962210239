#pragma once

#include <optional>
#include <string>

#include <Eigen/Sparse>

#include "surfstokes/fe_space.hpp"
#include "surfstokes/geometry.hpp"
#include "surfstokes/integration.hpp"
#include "surfstokes/manufactured.hpp"
#include "surfstokes/quadrature.hpp"

namespace surfstokes {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// A parameter of the form coefficient * h^exponent.
struct Scaling {
  double coeff = 1.0;
  double exponent = 0.0;
  double at(double h) const { return coeff * std::pow(h, exponent); }
};

struct SolverConfig {
  int k = 2;
  int kg = 2;
  int kp = 3;
  Formulation formulation = Formulation::consistent;
  double eta = 0.0;
  double rho_u = 0.0;
  double rho_p = 0.0;
  double h = 0.0;
  int quad_degree = 0;
  /// Replaces H_h by zero in the consistent strain (wiring tests only).
  bool zero_weingarten = false;
  /// Also keep the a-, s- and k-contributions to A separately.
  bool keep_parts = false;
};

/// Unit-constant defaults: k_g = k, k_p = k + 1, rho_u = 1/h, rho_p = h,
/// eta = h^-2 (consistent) or h^-(k+1) (inconsistent).
SolverConfig default_config(int k, Formulation formulation, double h);

struct BlockSystem {
  SpMat A;  // a (or a_T) + s + k; only the lower triangle if a_lower_only
  SpMat B;  // b_h, pressure rows x velocity columns
  SpMat S;  // pressure stabilization
  SpMat M;  // pressure mass on Gamma_h
  Eigen::VectorXd f_vec;      // (f_h, v_i)
  Eigen::VectorXd g_vec;      // (g_h, q_i); the second row reads B u - S p + m lambda = -g_vec
  Eigen::VectorXd mean_row;   // integral of q_i over Gamma_h
  double surface_area = 0.0;  // |Gamma_h|
  std::optional<SpMat> A_a, A_s, A_k;
  bool a_lower_only = false;

  /// A times x, honouring the storage mode of A.
  Eigen::VectorXd apply_a(const Eigen::VectorXd& x) const;

  int nu() const { return static_cast<int>(A.rows()); }
  int np() const { return static_cast<int>(S.rows()); }
};

/// Drops the strictly upper part of A (it is symmetric) to save memory
/// before the factorization.
void compact_velocity_block(BlockSystem& sys);

/// Velocity (3 components, degree k) and pressure (degree k - 1) spaces.
struct TaylorHood {
  FESpace U;
  FESpace Q;
};

TaylorHood build_taylor_hood(const Geometry& g, int k);

/// Data evaluators; f and g may be empty for homogeneous data.
struct LoadData {
  std::function<SourceTerms(const Vec3&)> source;
};

LoadData manufactured_loads(const ManufacturedCase& c);

BlockSystem assemble_system(const Geometry& g, const TaylorHood& spaces, const SolverConfig& cfg,
                            const LoadData& data);

/// Geometric quantities at a surface quadrature point.
struct SurfaceGeometry {
  Vec3 n_h;
  Vec3 n_tilde;
  Mat3 P;
  Mat3 H;
};
SurfaceGeometry surface_geometry(const Geometry& g, int cell, const QuadPoint& qp, bool with_h);

/// MatrixMarket coordinate dump.
void write_matrix_market(const SpMat& m, const std::string& path);

}  // namespace surfstokes
