#include "surfstokes/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace surfstokes {

void gauss_jacobi(int n, int alpha, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch on [-1,1] with weight (1-t)^alpha, then mapped to [0,1].
  const double a = alpha, b = 0.0;
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double s = 2.0 * i + a + b;
    jm(i, i) = (s == 0.0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (i + 1 < n) {
      const double k = i + 1;
      const double t = 2.0 * k + a + b;
      const double off =
          std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b) / (t * t * (t + 1.0) * (t - 1.0)));
      jm(i, i + 1) = jm(i + 1, i) = off;
    }
  }
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  nodes.resize(n);
  weights.resize(n);
  const double scale = std::pow(0.5, a + 1.0);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (1.0 + es.eigenvalues()[i]);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = mu0 * v0 * v0 * scale;
  }
}

namespace {

int points_for(int degree) { return degree / 2 + 1; }

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree)
    throw Error("quadrature degree " + std::to_string(degree) + " above tabulation limit " +
                std::to_string(kMaxQuadratureDegree));
}

}  // namespace

QuadratureRule triangle_rule(int degree) {
  check_degree(degree);
  const int n = points_for(degree);
  std::vector<double> u, wu, v, wv;
  gauss_jacobi(n, 1, u, wu);
  gauss_jacobi(n, 0, v, wv);
  QuadratureRule r;
  r.dim = 2;
  r.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = u[i], y = v[j] * (1.0 - u[i]);
      Eigen::VectorXd p(3);
      p << 1.0 - x - y, x, y;
      r.points.push_back(p);
      r.weights.push_back(wu[i] * wv[j]);
    }
  return r;
}

QuadratureRule tet_rule(int degree) {
  check_degree(degree);
  const int n = points_for(degree);
  std::vector<double> u, wu, v, wv, w, ww;
  gauss_jacobi(n, 2, u, wu);
  gauss_jacobi(n, 1, v, wv);
  gauss_jacobi(n, 0, w, ww);
  QuadratureRule r;
  r.dim = 3;
  r.degree = degree;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = u[i];
        const double y = v[j] * (1.0 - u[i]);
        const double z = w[k] * (1.0 - u[i]) * (1.0 - v[j]);
        Eigen::VectorXd p(4);
        p << 1.0 - x - y - z, x, y, z;
        r.points.push_back(p);
        r.weights.push_back(wu[i] * wv[j] * ww[k]);
      }
  return r;
}

ReferenceRules make_reference_rules(int degree) { return {triangle_rule(degree), tet_rule(degree)}; }

}  // namespace surfstokes
