#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "surfstokes/study.hpp"

namespace surfstokes::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vec3 random_unit() {
  std::normal_distribution<double> n;
  Vec3 v(n(rng()), n(rng()), n(rng()));
  return v.normalized();
}

/// Random point of the torus (R = 1, r = 1/2) at normal offset d.
inline Vec3 torus_point(double d) {
  const double t = uniform(0.0, 2.0 * std::numbers::pi);
  const double s = uniform(0.0, 2.0 * std::numbers::pi);
  const double r = 0.5 + d;
  return {(1.0 + r * std::cos(s)) * std::cos(t), (1.0 + r * std::cos(s)) * std::sin(t),
          r * std::sin(s)};
}

/// Orders log2(e[i-1]/e[i]) between successive entries.
inline std::vector<double> orders(const std::vector<double>& e) {
  std::vector<double> o;
  for (size_t i = 1; i < e.size(); ++i) o.push_back(std::log2(e[i - 1] / e[i]));
  return o;
}

/// Barycentric point strictly inside the tet.
inline Bary random_bary() {
  Bary l;
  for (int i = 0; i < 4; ++i) l[i] = uniform(0.05, 1.0);
  return l / l.sum();
}

/// Levels 0..n of the standard mesh, each with its geometry.
inline std::vector<std::unique_ptr<Geometry>> geometry_levels(const AnalyticSurface& s, int n,
                                                              int kg, int kp, int first = 0) {
  std::vector<std::unique_ptr<Geometry>> out;
  Mesh m = standard_mesh(s, 0);
  for (int l = 0; l <= n; ++l) {
    if (l > 0) m = refine_toward_surface(m, s, 1);
    if (l >= first) out.push_back(build_geometry(m, s, kg, kp));
  }
  return out;
}

}  // namespace surfstokes::test
