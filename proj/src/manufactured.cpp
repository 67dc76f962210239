#include "surfstokes/manufactured.hpp"

#include <numbers>

namespace surfstokes {

struct CaseAccess {
  template <class T>
  static V3<T> velocity(const ManufacturedCase& c, const V3<T>& x) {
    using std::sqrt;
    switch (c.kind_) {
      case CaseKind::sphere: {
        const T x1 = x[0], x2 = x[1], x3 = x[2];
        const T r2 = x1 * x1 + x2 * x2 + x3 * x3;
        const T r = sqrt(r2);
        const T r5 = r2 * r2 * r;
        // u = P w with w = (-x3^2, x2, x1) evaluated at x/|x|; the first
        // component carries the sign that makes u tangential.
        return {-((x2 * x2 * x3 * x3 + x3 * x3 * x3 * x3) * r + x1 * r2 * (x1 * x3 + x2 * x2)) / r5,
                ((x1 * x3 * x3 * r + (x1 * x1 - x1 * x3 + x3 * x3) * r2) * x2) / r5,
                (x1 * x3 * x3 * x3 * r + r2 * (x1 * x1 * x1 + x1 * x2 * x2 - x2 * x2 * x3)) / r5};
      }
      case CaseKind::torus: {
        const V3<T> p = c.surface_.closest_point(x);
        const T x1 = p[0], x2 = p[1], x3 = p[2];
        const T rho = sqrt(x1 * x1 + x2 * x2);
        const T s = x1 * x1 + x2 * x2 + x3 * x3 - T(2.0) * rho + T(1.0);
        return {x3 * x3 * x1 / (s * rho), x2 * x3 * x3 / (s * rho), -((rho - T(1.0)) * x3) / s};
      }
      case CaseKind::killing: {
        const V3<T> p = c.surface_.closest_point(x);
        return {-p[1], p[0], T(0.0)};
      }
      case CaseKind::affine: {
        V3<T> u;
        for (int i = 0; i < 3; ++i)
          u[i] = T(c.lin_(i, 0)) * x[0] + T(c.lin_(i, 1)) * x[1] + T(c.lin_(i, 2)) * x[2] +
                 T(c.off_[i]);
        return u;
      }
    }
    return {};
  }

  template <class T>
  static T pressure(const ManufacturedCase& c, const V3<T>& x) {
    using std::sqrt;
    switch (c.kind_) {
      case CaseKind::sphere: {
        const T r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        const T r = sqrt(r2);
        return (x[0] * x[1] * x[1] * x[1] + x[2] * r2 * r) / (r2 * r2);
      }
      case CaseKind::torus: {
        const V3<T> p = c.surface_.closest_point(x);
        return p[0] * p[1] * p[1] * p[1] + p[2] - T(c.shift_);
      }
      case CaseKind::killing:
        return T(0.0);
      case CaseKind::affine:
        return T(c.pgrad_[0]) * x[0] + T(c.pgrad_[1]) * x[1] + T(c.pgrad_[2]) * x[2];
    }
    return T(0.0);
  }
};

namespace {

double torus_q(const Vec3& p) { return p[0] * p[1] * p[1] * p[1] + p[2]; }

}  // namespace

double torus_integral(const AnalyticSurface& torus, const std::function<double(const Vec3&)>& q,
                      int n) {
  const double R = torus.major_radius(), r = torus.minor_radius();
  const double h = 2.0 * std::numbers::pi / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double th = i * h, ph = j * h;
      const double w = R + r * std::cos(th);
      s += q(Vec3(w * std::cos(ph), w * std::sin(ph), r * std::sin(th))) * r * w;
    }
  return s * h * h;
}

ManufacturedCase::ManufacturedCase(CaseKind kind, AnalyticSurface surface)
    : kind_(kind), surface_(std::move(surface)) {}

ManufacturedCase ManufacturedCase::sphere_case() {
  return ManufacturedCase(CaseKind::sphere, AnalyticSurface::sphere());
}

ManufacturedCase ManufacturedCase::torus_case() {
  ManufacturedCase c(CaseKind::torus, AnalyticSurface::torus());
  // Integrand is a trigonometric polynomial of low degree, so 64 points per
  // angle integrate it exactly up to rounding.
  c.shift_ = torus_integral(c.surface_, torus_q, 64) / c.surface_.area();
  return c;
}

ManufacturedCase ManufacturedCase::killing_case() {
  return ManufacturedCase(CaseKind::killing, AnalyticSurface::sphere());
}

ManufacturedCase ManufacturedCase::affine_case(AnalyticSurface surface, const Mat3& L,
                                               const Vec3& b, const Vec3& a) {
  ManufacturedCase c(CaseKind::affine, std::move(surface));
  c.lin_ = L;
  c.off_ = b;
  c.pgrad_ = a;
  return c;
}

const char* ManufacturedCase::name() const {
  switch (kind_) {
    case CaseKind::sphere:
      return "sphere";
    case CaseKind::torus:
      return "torus";
    case CaseKind::killing:
      return "killing";
    case CaseKind::affine:
      return "affine";
  }
  return "";
}

Vec3 ManufacturedCase::exact_u(const Vec3& x) const {
  check_skeleton(surface_, x);
  return to_vec3(CaseAccess::velocity<double>(*this, to_v3(x)));
}

double ManufacturedCase::exact_p(const Vec3& x) const {
  check_skeleton(surface_, x);
  return CaseAccess::pressure<double>(*this, to_v3(x));
}

Mat3 ManufacturedCase::grad_u(const Vec3& x) const {
  check_skeleton(surface_, x);
  const auto u = CaseAccess::velocity<Jet1>(*this, seed(to_v3(x)));
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = u[i].v[j];
  return g;
}

Vec3 ManufacturedCase::grad_p(const Vec3& x) const {
  check_skeleton(surface_, x);
  const Jet1 p = CaseAccess::pressure<Jet1>(*this, seed(to_v3(x)));
  return {p.v[0], p.v[1], p.v[2]};
}

Mat3 surface_strain(const ManufacturedCase& c, const Vec3& x) {
  const DistanceCalculus dc = distance_calculus(c.surface(), x);
  const Mat3 g = dc.P * c.grad_u(x) * dc.P;
  return 0.5 * (g + g.transpose());
}

double surface_divergence_alt(const ManufacturedCase& c, const Vec3& x) {
  const DistanceCalculus dc = distance_calculus(c.surface(), x);
  const Mat3 g = c.grad_u(x);
  return g.trace() - dc.n.dot(g * dc.n);
}

SourceTerms source_terms(const ManufacturedCase& c, const Vec3& x) {
  check_tube(c.surface(), x);
  const V3<Jet1> x1 = seed(to_v3(x));
  const V3<Jet2> x2 = seed(x1);

  // Velocity gradient with first derivatives of its entries.
  const V3<Jet2> u2 = CaseAccess::velocity<Jet2>(c, x2);
  M3<Jet1> G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) G[i][j] = u2[i].v[j];

  const M3<Jet1> P = projector(c.surface().normal(x1));
  const M3<Jet1> GP = matmul(matmul(P, G), P);
  M3<Jet1> E;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) E[i][j] = Jet1(0.5) * (GP[i][j] + GP[j][i]);

  Mat3 Pd;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Pd(i, j) = P[i][j].a;

  // (div_G E)_i = sum_{j,l} d_l E_ij P_lj
  Vec3 divE = Vec3::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) divE[i] += E[i][j].v[l] * Pd(l, j);

  const Jet1 p = CaseAccess::pressure<Jet1>(c, x1);
  const Vec3 gp(p.v[0], p.v[1], p.v[2]);
  const Vec3 u(u2[0].a.a, u2[1].a.a, u2[2].a.a);

  SourceTerms s;
  s.f = -Pd * divE + u + Pd * gp;
  s.g = 0.0;
  for (int i = 0; i < 3; ++i) s.g += GP[i][i].a;
  return s;
}

}  // namespace surfstokes
