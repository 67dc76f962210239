#pragma once

#include "surfstokes/assembly.hpp"

namespace surfstokes {

struct DiscreteSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  double multiplier = 0.0;
  double residual_norm = 0.0;  // |b - M x| after refinement
  double load_norm = 0.0;      // |b|
  double mean_shift = 0.0;     // constant removed from p after the solve
  int schur_iterations = 0;    // PCG steps on the pressure Schur complement, summed
};

/// The full matrix [[A, B^T, 0], [B, -S, m], [0, m^T, 0]].
Eigen::SparseMatrix<double> saddle_matrix(const BlockSystem& sys);
Eigen::VectorXd saddle_rhs(const BlockSystem& sys);

/// b - M x evaluated block by block, without forming M.
Eigen::VectorXd saddle_residual(const BlockSystem& sys, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& x);

/// Block elimination: sparse Cholesky of A, preconditioned CG on the
/// pressure Schur complement S + B A^-1 B^T with M + S as preconditioner, and
/// the multiplier from the compatibility condition. One refinement step;
/// throws if the relative residual of the full system stays above 1e-9.
DiscreteSolution solve(const BlockSystem& sys);

/// Factorization backend for A: "cholmod-supernodal" or "eigen-simplicial".
const char* solver_backend();

}  // namespace surfstokes
