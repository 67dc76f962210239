#pragma once

#include "surfstokes/surface.hpp"

namespace surfstokes {

enum class CaseKind { sphere, torus, killing, affine };

/// Exact solution of the surface Stokes problem, extended constantly in the
/// normal direction, together with the data obtained by applying the
/// extended operator to it.
class ManufacturedCase {
 public:
  static ManufacturedCase sphere_case();
  static ManufacturedCase torus_case();
  /// Rigid rotation e3 x p(x) on the unit sphere, zero pressure.
  static ManufacturedCase killing_case();
  /// u = L x + b and p = a . x on any surface; not a Stokes solution, used to
  /// check error norms on exactly representable fields.
  static ManufacturedCase affine_case(AnalyticSurface surface, const Mat3& L, const Vec3& b,
                                      const Vec3& a);

  CaseKind kind() const { return kind_; }
  const AnalyticSurface& surface() const { return surface_; }
  const char* name() const;

  Vec3 exact_u(const Vec3& x) const;
  double exact_p(const Vec3& x) const;
  /// Full gradient (rows = components) of the extended velocity.
  Mat3 grad_u(const Vec3& x) const;
  Vec3 grad_p(const Vec3& x) const;
  /// Surface mean subtracted from the raw pressure (zero for the sphere).
  double pressure_shift() const { return shift_; }

 private:
  ManufacturedCase(CaseKind kind, AnalyticSurface surface);
  CaseKind kind_;
  AnalyticSurface surface_;
  double shift_ = 0.0;
  Mat3 lin_ = Mat3::Zero();
  Vec3 off_ = Vec3::Zero();
  Vec3 pgrad_ = Vec3::Zero();

  friend struct CaseAccess;
};

struct SourceTerms {
  Vec3 f;
  double g;
};

/// f = -P div_G E(u) + u + P grad p and g = tr(P grad u), evaluated with the
/// distance calculus of x (not necessarily on the surface).
SourceTerms source_terms(const ManufacturedCase& c, const Vec3& x);

/// E(u) = (P grad u P + (P grad u P)^T) / 2 at x.
Mat3 surface_strain(const ManufacturedCase& c, const Vec3& x);

/// div u - n . (grad u n), an independent expression for g.
double surface_divergence_alt(const ManufacturedCase& c, const Vec3& x);

/// Integral of q over the torus by the periodic trapezoid rule in the angles.
double torus_integral(const AnalyticSurface& torus, const std::function<double(const Vec3&)>& q,
                      int n);

}  // namespace surfstokes
