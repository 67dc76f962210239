#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "surfstokes/jet.hpp"
#include "surfstokes/types.hpp"

namespace surfstokes {

enum class SurfaceKind { sphere, torus, custom };

/// Closed surface given as the zero level of a level set function.
///
/// Sphere and torus use their exact signed distance functions (negative
/// inside), so the gradient is the unit normal and the Hessian is the
/// Weingarten map. Their evaluators are templates so they can be pushed
/// through nested jets. A custom surface only supplies double-valued
/// callbacks; it is meant for geometry tests.
class AnalyticSurface {
 public:
  using ScalarFn = std::function<double(const Vec3&)>;
  using GradientFn = std::function<Vec3(const Vec3&)>;
  using HessianFn = std::function<Mat3(const Vec3&)>;

  static AnalyticSurface sphere(double radius = 1.0) {
    AnalyticSurface s;
    s.kind_ = SurfaceKind::sphere;
    s.name_ = "sphere";
    s.r1_ = radius;
    return s;
  }

  static AnalyticSurface torus(double major = 1.0, double minor = 0.5) {
    AnalyticSurface s;
    s.kind_ = SurfaceKind::torus;
    s.name_ = "torus";
    s.r1_ = major;
    s.r2_ = minor;
    return s;
  }

  static AnalyticSurface custom(std::string name, ScalarFn phi, GradientFn grad,
                                HessianFn hess) {
    AnalyticSurface s;
    s.kind_ = SurfaceKind::custom;
    s.name_ = std::move(name);
    s.phi_ = std::move(phi);
    s.grad_ = std::move(grad);
    s.hess_ = std::move(hess);
    return s;
  }

  /// Affine level set n.x - offset, an exact distance function for unit n.
  static AnalyticSurface plane(const Vec3& normal, double offset) {
    const Vec3 n = normal.normalized();
    return custom(
        "plane", [n, offset](const Vec3& x) { return n.dot(x) - offset; },
        [n](const Vec3&) { return n; }, [](const Vec3&) { return Mat3::Zero().eval(); });
  }

  SurfaceKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_builtin() const { return kind_ != SurfaceKind::custom; }
  double major_radius() const { return r1_; }
  double minor_radius() const { return r2_; }

  double eval(const Vec3& x) const {
    if (kind_ == SurfaceKind::custom) return phi_(x);
    return level_set<double>({x[0], x[1], x[2]});
  }

  template <class T>
  T level_set(const V3<T>& x) const {
    using std::sqrt;
    switch (kind_) {
      case SurfaceKind::sphere:
        return sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - T(r1_);
      case SurfaceKind::torus: {
        const T rho = sqrt(x[0] * x[0] + x[1] * x[1]) - T(r1_);
        return sqrt(x[2] * x[2] + rho * rho) - T(r2_);
      }
      case SurfaceKind::custom:
        if constexpr (std::is_same_v<T, double>) {
          return phi_(Vec3(x[0], x[1], x[2]));
        } else {
          throw Error("custom level set '" + name_ + "' cannot be differentiated automatically");
        }
    }
    return T(0.0);
  }

  /// Closed-form unit normal of the distance function (built-in surfaces).
  template <class T>
  V3<T> normal(const V3<T>& x) const {
    using std::sqrt;
    if (kind_ == SurfaceKind::sphere) {
      const T r = sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      return {x[0] / r, x[1] / r, x[2] / r};
    }
    if (kind_ == SurfaceKind::torus) {
      const V3<T> w = tube_offset(x);
      const T len = sqrt(dot(w, w));
      return {w[0] / len, w[1] / len, w[2] / len};
    }
    throw Error("closed-form normal only exists for built-in surfaces");
  }

  /// Closed-form closest point projection p(x) = x - d(x) n(x).
  template <class T>
  V3<T> closest_point(const V3<T>& x) const {
    using std::sqrt;
    if (kind_ == SurfaceKind::sphere) {
      const T s = T(r1_) / sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
      return {x[0] * s, x[1] * s, x[2] * s};
    }
    if (kind_ == SurfaceKind::torus) {
      const V3<T> w = tube_offset(x);
      const T s = T(r2_) / sqrt(dot(w, w));
      return {x[0] - w[0] + w[0] * s, x[1] - w[1] + w[1] * s, x[2] - w[2] + w[2] * s};
    }
    throw Error("closed-form closest point only exists for built-in surfaces");
  }

  /// Exact surface area of the built-in surfaces.
  double area() const {
    constexpr double pi = std::numbers::pi;
    if (kind_ == SurfaceKind::sphere) return 4.0 * pi * r1_ * r1_;
    if (kind_ == SurfaceKind::torus) return 4.0 * pi * pi * r1_ * r2_;
    throw Error("no exact area for custom surface '" + name_ + "'");
  }

  /// Half-width of the tube on which the distance calculus is valid.
  double tube_width() const {
    if (kind_ == SurfaceKind::torus) return 0.5 * r2_;
    return std::numeric_limits<double>::infinity();
  }

  Vec3 gradient(const Vec3& x) const;
  Mat3 hessian(const Vec3& x) const;

 private:
  AnalyticSurface() = default;

  // Vector from the nearest point of the torus centre circle to x.
  template <class T>
  V3<T> tube_offset(const V3<T>& x) const {
    using std::sqrt;
    const T rho = sqrt(x[0] * x[0] + x[1] * x[1]);
    const T s = T(1.0) - T(r1_) / rho;
    return {x[0] * s, x[1] * s, x[2]};
  }

  SurfaceKind kind_ = SurfaceKind::sphere;
  std::string name_;
  double r1_ = 1.0;
  double r2_ = 0.0;
  ScalarFn phi_;
  GradientFn grad_;
  HessianFn hess_;
};

/// Distance-function calculus at a point of the tubular neighbourhood.
struct DistanceCalculus {
  double d = 0.0;
  Vec3 n = Vec3::Zero();
  Mat3 P = Mat3::Identity();
  Mat3 H = Mat3::Zero();
  Vec3 cp = Vec3::Zero();
};

/// Throws on points where the closest point map is undefined (sphere centre,
/// torus axis and centre circle).
void check_skeleton(const AnalyticSurface& surface, const Vec3& x);

/// Throws if x is outside the valid tube or on the torus axis.
void check_tube(const AnalyticSurface& surface, const Vec3& x);

/// d, n = grad d, P, H = Hessian of d, and the closest point, all by nested
/// dual numbers for the built-in surfaces. Custom surfaces normalize their
/// supplied gradient; H is then only an approximation near the surface.
DistanceCalculus distance_calculus(const AnalyticSurface& surface, const Vec3& x);

inline V3<double> to_v3(const Vec3& x) { return {x[0], x[1], x[2]}; }
inline Vec3 to_vec3(const V3<double>& x) { return {x[0], x[1], x[2]}; }

}  // namespace surfstokes
