#include "surfstokes/solver.hpp"

#include <cstdlib>
#include <memory>

#include <Eigen/SparseCholesky>

#ifdef SURFSTOKES_HAVE_CHOLMOD
#include <cholmod.h>
#include <dlfcn.h>
#endif

namespace surfstokes {

namespace {

using VecX = Eigen::VectorXd;
using ColMat = Eigen::SparseMatrix<double>;

constexpr double kResidualTol = 1e-9;
constexpr double kSchurTol = 1e-13;
constexpr int kSchurMaxIter = 2000;

#ifdef SURFSTOKES_HAVE_CHOLMOD
// Supernodal Cholesky through the CHOLMOD C interface. The arrays are read in
// place as CSC; stype selects the referenced triangle of that view.
class CholmodFactor {
 public:
  CholmodFactor(int n, const int* outer, const int* inner, const double* values, int stype) {
    cholmod_start(&common_);
    common_.print = 0;
    common_.supernodal = CHOLMOD_SUPERNODAL;
    common_.nmethods = 1;
    common_.method[0].ordering = CHOLMOD_METIS;
    cholmod_sparse a{};
    a.nrow = a.ncol = static_cast<size_t>(n);
    a.nzmax = static_cast<size_t>(outer[n]);
    a.p = const_cast<int*>(outer);
    a.i = const_cast<int*>(inner);
    a.x = const_cast<double*>(values);
    a.stype = stype;
    a.itype = CHOLMOD_INT;
    a.xtype = CHOLMOD_REAL;
    a.dtype = CHOLMOD_DOUBLE;
    a.sorted = 1;
    a.packed = 1;
    factor_ = cholmod_analyze(&a, &common_);
    if (!factor_ && common_.method[0].ordering == CHOLMOD_METIS) {
      common_.method[0].ordering = CHOLMOD_AMD;
      factor_ = cholmod_analyze(&a, &common_);
    }
    ok_ = factor_ && cholmod_factorize(&a, factor_, &common_) &&
          common_.status == CHOLMOD_OK && factor_->minor == factor_->n;
  }
  CholmodFactor(const CholmodFactor&) = delete;
  CholmodFactor& operator=(const CholmodFactor&) = delete;
  ~CholmodFactor() {
    if (factor_) cholmod_free_factor(&factor_, &common_);
    cholmod_finish(&common_);
  }

  bool ok() const { return ok_; }

  VecX solve(const VecX& b) {
    cholmod_dense rhs{};
    rhs.nrow = rhs.nzmax = rhs.d = static_cast<size_t>(b.size());
    rhs.ncol = 1;
    rhs.x = const_cast<double*>(b.data());
    rhs.xtype = CHOLMOD_REAL;
    rhs.dtype = CHOLMOD_DOUBLE;
    cholmod_dense* x = cholmod_solve(CHOLMOD_A, factor_, &rhs, &common_);
    if (!x) throw Error("solve: CHOLMOD triangular solve failed");
    VecX out = Eigen::Map<const VecX>(static_cast<double*>(x->x), b.size());
    cholmod_free_dense(&x, &common_);
    return out;
  }

 private:
  cholmod_common common_{};
  cholmod_factor* factor_ = nullptr;
  bool ok_ = false;
};

// Factor a dense, diagonally dominant matrix and check the solve. Exercises
// the BLAS-3 kernels the supernodal path relies on.
bool supernodal_probe() {
  const int n = 240;
  ColMat m(n, n);
  std::vector<Eigen::Triplet<double>> t;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i) t.emplace_back(i, j, i == j ? n : 1.0 / (1.0 + i - j));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  CholmodFactor chol(n, m.outerIndexPtr(), m.innerIndexPtr(), m.valuePtr(), -1);
  if (!chol.ok()) return false;
  const ColMat full = m.selfadjointView<Eigen::Lower>();
  const VecX b = VecX::LinSpaced(n, 1.0, 2.0);
  const VecX x = chol.solve(b);
  return x.allFinite() && (full * x - b).norm() <= 1e-12 * b.norm();
}

// Some OpenBLAS builds select kernels that return wrong results on CPUs they
// misdetect. Re-initialize with a conservative core type when that happens.
bool openblas_fallback() {
  using Fn = void (*)();
  auto quit = reinterpret_cast<Fn>(dlsym(RTLD_DEFAULT, "gotoblas_dynamic_quit"));
  auto init = reinterpret_cast<Fn>(dlsym(RTLD_DEFAULT, "gotoblas_dynamic_init"));
  if (!quit || !init) return false;
  setenv("OPENBLAS_CORETYPE", "Haswell", 1);
  quit();
  init();
  return true;
}

bool supernodal_usable() {
  static const bool ok = supernodal_probe() || (openblas_fallback() && supernodal_probe());
  return ok;
}
#endif

class VelocitySolver {
 public:
  explicit VelocitySolver(const SpMat& a) {
    if (!a.isCompressed()) throw Error("solve: velocity block must be compressed");
#ifdef SURFSTOKES_HAVE_CHOLMOD
    if (supernodal_usable()) {
      // Row-major arrays read as CSC describe the transpose; its upper
      // triangle is the lower triangle of A, present in both storage modes.
      supernodal_ = std::make_unique<CholmodFactor>(static_cast<int>(a.rows()), a.outerIndexPtr(),
                                                    a.innerIndexPtr(), a.valuePtr(), 1);
      if (!supernodal_->ok())
        throw Error("solve: Cholesky factorization of the velocity block failed");
      return;
    }
#endif
    simplicial_ = std::make_unique<Eigen::SimplicialLLT<ColMat, Eigen::Lower>>(
        ColMat(a.triangularView<Eigen::Lower>()));
    if (simplicial_->info() != Eigen::Success)
      throw Error("solve: Cholesky factorization of the velocity block failed");
  }

  VecX solve(const VecX& b) const {
#ifdef SURFSTOKES_HAVE_CHOLMOD
    if (supernodal_) return supernodal_->solve(b);
#endif
    return simplicial_->solve(b);
  }

 private:
#ifdef SURFSTOKES_HAVE_CHOLMOD
  std::unique_ptr<CholmodFactor> supernodal_;
#endif
  std::unique_ptr<Eigen::SimplicialLLT<ColMat, Eigen::Lower>> simplicial_;
};

// Bordered Schur system [[Sigma, -m], [m^T, 0]] with Sigma = S + B A^-1 B^T.
// Sigma may be singular (constants), so CG runs on Sigma + gamma m m^T, which
// is definite whenever the kernel of Sigma is not orthogonal to m.
struct BlockSolver {
  const BlockSystem& sys;
  VelocitySolver velocity;
  Eigen::SimplicialLDLT<ColMat> precond;
  double gamma;
  VecX cm;        // C^-1 m
  VecX y_mean;    // bordered-system response to m
  int iterations = 0;

  explicit BlockSolver(const BlockSystem& s)
      : sys(s), velocity(s.A), precond(ColMat(s.M + s.S)), gamma(1.0 / s.mean_row.lpNorm<1>()) {
    if (precond.info() != Eigen::Success) throw Error("solve: pressure preconditioner is singular");
    cm = precond.solve(sys.mean_row);
    y_mean = schur_solve(sys.mean_row);
  }

  VecX schur_apply(const VecX& d) const {
    return sys.S * d + sys.B * velocity.solve(VecX(sys.B.transpose() * d)) +
           (gamma * sys.mean_row.dot(d)) * sys.mean_row;
  }

  VecX precond_apply(const VecX& r) const {
    const VecX z = precond.solve(r);
    return z - (gamma * sys.mean_row.dot(z) / (1.0 + gamma * sys.mean_row.dot(cm))) * cm;
  }

  VecX schur_solve(const VecX& rhs) {
    VecX p = VecX::Zero(rhs.size());
    const double target = kSchurTol * rhs.norm();
    if (target == 0.0) return p;
    VecX r = rhs;
    VecX z = precond_apply(r);
    VecX d = z;
    double rz = r.dot(z);
    int it = 0;
    for (; it < kSchurMaxIter && r.norm() > target; ++it) {
      const VecX q = schur_apply(d);
      const double alpha = rz / d.dot(q);
      p += alpha * d;
      r -= alpha * q;
      z = precond_apply(r);
      const double rz_next = r.dot(z);
      d = z + (rz_next / rz) * d;
      rz = rz_next;
    }
    iterations += it;
    if (r.norm() > 1e3 * target) throw Error("solve: Schur complement iteration did not converge");
    return p;
  }

  // Solves the full system for the right-hand side (F, G, c).
  VecX run(const VecX& b) {
    const int nu = sys.nu(), np = sys.np();
    const double c = b[nu + np];
    const VecX r0 = sys.B * velocity.solve(b.head(nu)) - b.segment(nu, np);
    const VecX y = schur_solve(r0 + (gamma * c) * sys.mean_row);
    const double lambda = (c - sys.mean_row.dot(y)) / sys.mean_row.dot(y_mean);
    const VecX p = y + lambda * y_mean;
    VecX x(nu + np + 1);
    x.head(nu) = velocity.solve(VecX(b.head(nu) - sys.B.transpose() * p));
    x.segment(nu, np) = p;
    x[nu + np] = lambda;
    return x;
  }
};

}  // namespace

const char* solver_backend() {
#ifdef SURFSTOKES_HAVE_CHOLMOD
  if (supernodal_usable()) return "cholmod-supernodal";
#endif
  return "eigen-simplicial";
}

Eigen::SparseMatrix<double> saddle_matrix(const BlockSystem& sys) {
  if (sys.a_lower_only) throw Error("saddle_matrix: velocity block is stored as a triangle");
  const int nu = sys.nu(), np = sys.np(), n = nu + np + 1;
  const SpMat bt = sys.B.transpose();
  Eigen::VectorXi sizes(n);
  for (int j = 0; j < nu; ++j)
    sizes[j] = static_cast<int>(sys.A.innerVector(j).nonZeros() + bt.innerVector(j).nonZeros());
  for (int i = 0; i < np; ++i)
    sizes[nu + i] =
        static_cast<int>(sys.B.innerVector(i).nonZeros() + sys.S.innerVector(i).nonZeros() + 1);
  sizes[n - 1] = np;

  // Symmetric, so column j holds the entries of row j.
  Eigen::SparseMatrix<double> m(n, n);
  m.reserve(sizes);
  for (int j = 0; j < nu; ++j) {
    for (SpMat::InnerIterator it(sys.A, j); it; ++it) m.insert(it.col(), j) = it.value();
    for (SpMat::InnerIterator it(bt, j); it; ++it) m.insert(nu + it.col(), j) = it.value();
  }
  for (int i = 0; i < np; ++i) {
    for (SpMat::InnerIterator it(sys.B, i); it; ++it) m.insert(it.col(), nu + i) = it.value();
    for (SpMat::InnerIterator it(sys.S, i); it; ++it) m.insert(nu + it.col(), nu + i) = -it.value();
    m.insert(n - 1, nu + i) = sys.mean_row[i];
  }
  for (int i = 0; i < np; ++i) m.insert(nu + i, n - 1) = sys.mean_row[i];
  m.makeCompressed();
  return m;
}

Eigen::VectorXd saddle_rhs(const BlockSystem& sys) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(sys.nu() + sys.np() + 1);
  b.head(sys.nu()) = sys.f_vec;
  b.segment(sys.nu(), sys.np()) = -sys.g_vec;
  return b;
}

Eigen::VectorXd saddle_residual(const BlockSystem& sys, const Eigen::VectorXd& b,
                                const Eigen::VectorXd& x) {
  const int nu = sys.nu(), np = sys.np();
  const auto u = x.head(nu);
  const auto p = x.segment(nu, np);
  const double lambda = x[nu + np];
  VecX r(nu + np + 1);
  r.head(nu) = b.head(nu) - sys.apply_a(u) - sys.B.transpose() * p;
  r.segment(nu, np) = b.segment(nu, np) - sys.B * u + sys.S * p - lambda * sys.mean_row;
  r[nu + np] = b[nu + np] - sys.mean_row.dot(p);
  return r;
}

DiscreteSolution solve(const BlockSystem& sys) {
  if (sys.mean_row.norm() == 0.0) throw Error("solve: mean constraint row is zero");
  const int nu = sys.nu(), np = sys.np();
  const VecX b = saddle_rhs(sys);
  DiscreteSolution sol;
  sol.load_norm = b.norm();
  VecX x = VecX::Zero(b.size());
  if (sol.load_norm > 0.0) {
    BlockSolver solver(sys);
    x = solver.run(b);
    if (!x.allFinite()) throw Error("solve: factorization breakdown (non-finite solution)");
    x += solver.run(saddle_residual(sys, b, x));
    sol.residual_norm = saddle_residual(sys, b, x).norm();
    sol.schur_iterations = solver.iterations;
    if (!(sol.residual_norm <= kResidualTol * sol.load_norm))
      throw Error("solve: relative residual " + std::to_string(sol.residual_norm / sol.load_norm) +
                  " above tolerance");
  }
  sol.u = x.head(nu);
  sol.p = x.segment(nu, np);
  sol.multiplier = x[nu + np];
  // Constants lie in the pressure space, so removing the mean is exact.
  sol.mean_shift = sys.mean_row.dot(sol.p) / sys.mean_row.sum();
  sol.p.array() -= sol.mean_shift;
  return sol;
}

}  // namespace surfstokes
