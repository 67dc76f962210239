#include "surfstokes/surface.hpp"

#include <sstream>

namespace surfstokes {

namespace {

std::string point_str(const Vec3& x) {
  std::ostringstream os;
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ")";
  return os.str();
}

}  // namespace

void check_skeleton(const AnalyticSurface& surface, const Vec3& x) {
  switch (surface.kind()) {
    case SurfaceKind::sphere:
      if (x.norm() == 0.0) throw Error("sphere closest point undefined at the origin");
      break;
    case SurfaceKind::torus: {
      const double rho = std::hypot(x[0], x[1]);
      if (rho < 1e-14)
        throw Error("torus skeleton point " + point_str(x) + ": derivatives undefined on the axis");
      if (std::hypot(rho - surface.major_radius(), x[2]) < 1e-14)
        throw Error("torus skeleton point " + point_str(x) + " on the centre circle");
      break;
    }
    case SurfaceKind::custom:
      break;
  }
}

void check_tube(const AnalyticSurface& surface, const Vec3& x) {
  switch (surface.kind()) {
    case SurfaceKind::sphere:
      if (x.norm() == 0.0) throw Error("sphere distance calculus undefined at the origin");
      break;
    case SurfaceKind::torus: {
      const double rho = std::hypot(x[0], x[1]);
      if (rho < 1e-14)
        throw Error("torus skeleton point " + point_str(x) + ": derivatives undefined on the axis");
      const double d = surface.eval(x);
      if (std::abs(d) >= surface.tube_width())
        throw Error("point " + point_str(x) + " outside torus tube (|d| = " +
                    std::to_string(std::abs(d)) + ")");
      break;
    }
    case SurfaceKind::custom:
      break;
  }
}

Vec3 AnalyticSurface::gradient(const Vec3& x) const {
  if (kind_ == SurfaceKind::custom) {
    if (!grad_) throw Error("custom surface '" + name_ + "' has no gradient");
    return grad_(x);
  }
  const Jet1 phi = level_set<Jet1>(seed(to_v3(x)));
  return {phi.v[0], phi.v[1], phi.v[2]};
}

Mat3 AnalyticSurface::hessian(const Vec3& x) const {
  if (kind_ == SurfaceKind::custom) {
    if (!hess_) throw Error("custom surface '" + name_ + "' has no Hessian");
    return hess_(x);
  }
  const V3<Jet1> inner = seed(to_v3(x));
  const Jet2 phi = level_set<Jet2>(seed(inner));
  Mat3 h;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = phi.v[j].v[i];
  return h;
}

DistanceCalculus distance_calculus(const AnalyticSurface& surface, const Vec3& x) {
  check_tube(surface, x);
  DistanceCalculus dc;
  if (surface.is_builtin()) {
    const Jet2 phi = surface.level_set<Jet2>(seed(seed(to_v3(x))));
    dc.d = phi.a.a;
    for (int i = 0; i < 3; ++i) {
      dc.n[i] = phi.a.v[i];
      for (int j = 0; j < 3; ++j) dc.H(i, j) = phi.v[j].v[i];
    }
  } else {
    const Vec3 g = surface.gradient(x);
    const double len = g.norm();
    if (len == 0.0) throw Error("custom level set has vanishing gradient at " + point_str(x));
    dc.n = g / len;
    dc.d = surface.eval(x) / len;
    const Mat3 P = Mat3::Identity() - dc.n * dc.n.transpose();
    dc.H = P * surface.hessian(x) * P / len;
  }
  dc.P = Mat3::Identity() - dc.n * dc.n.transpose();
  dc.cp = x - dc.d * dc.n;
  return dc;
}

}  // namespace surfstokes
