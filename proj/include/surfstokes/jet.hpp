#pragma once

// Forward-mode automatic differentiation with three directional slots.
// Jets nest: Jet<Jet<double>> carries second derivatives.

#include <array>
#include <cmath>
#include <type_traits>

namespace surfstokes {

template <class T>
struct Jet {
  T a{};
  std::array<T, 3> v{};

  Jet() = default;
  Jet(const T& value) : a(value) {}  // NOLINT: implicit promotion is the point
  template <class S>
    requires(std::is_arithmetic_v<S> && !std::is_same_v<S, T>)
  Jet(S value) : a(T(value)) {}  // NOLINT
  Jet(const T& value, const std::array<T, 3>& dv) : a(value), v(dv) {}

  friend Jet operator+(const Jet& x, const Jet& y) {
    return {x.a + y.a, {x.v[0] + y.v[0], x.v[1] + y.v[1], x.v[2] + y.v[2]}};
  }
  friend Jet operator-(const Jet& x, const Jet& y) {
    return {x.a - y.a, {x.v[0] - y.v[0], x.v[1] - y.v[1], x.v[2] - y.v[2]}};
  }
  friend Jet operator-(const Jet& x) { return {-x.a, {-x.v[0], -x.v[1], -x.v[2]}}; }
  friend Jet operator*(const Jet& x, const Jet& y) {
    return {x.a * y.a,
            {x.a * y.v[0] + x.v[0] * y.a, x.a * y.v[1] + x.v[1] * y.a,
             x.a * y.v[2] + x.v[2] * y.a}};
  }
  friend Jet operator/(const Jet& x, const Jet& y) {
    const T inv = T(1.0) / y.a;
    const T q = x.a * inv;
    return {q,
            {(x.v[0] - q * y.v[0]) * inv, (x.v[1] - q * y.v[1]) * inv,
             (x.v[2] - q * y.v[2]) * inv}};
  }
  Jet& operator+=(const Jet& y) { return *this = *this + y; }
  Jet& operator-=(const Jet& y) { return *this = *this - y; }
  Jet& operator*=(const Jet& y) { return *this = *this * y; }
  Jet& operator/=(const Jet& y) { return *this = *this / y; }

  friend Jet sqrt(const Jet& x) {
    using std::sqrt;
    const T s = sqrt(x.a);
    const T d = T(0.5) / s;
    return {s, {x.v[0] * d, x.v[1] * d, x.v[2] * d}};
  }
  friend Jet sin(const Jet& x) {
    using std::cos;
    using std::sin;
    const T c = cos(x.a);
    return {sin(x.a), {x.v[0] * c, x.v[1] * c, x.v[2] * c}};
  }
  friend Jet cos(const Jet& x) {
    using std::cos;
    using std::sin;
    const T s = -sin(x.a);
    return {cos(x.a), {x.v[0] * s, x.v[1] * s, x.v[2] * s}};
  }
};

using Jet1 = Jet<double>;
using Jet2 = Jet<Jet1>;

inline double value_of(double x) { return x; }
template <class T>
double value_of(const Jet<T>& x) {
  return value_of(x.a);
}

// Small fixed-size containers for templated (AD-friendly) geometry code.
template <class T>
using V3 = std::array<T, 3>;
template <class T>
using M3 = std::array<std::array<T, 3>, 3>;

/// Seeds a point so that slot i of the result carries d/dx_i.
template <class T>
V3<Jet<T>> seed(const V3<T>& x) {
  V3<Jet<T>> out;
  for (int i = 0; i < 3; ++i) {
    out[i].a = x[i];
    out[i].v[i] = T(1.0);
  }
  return out;
}

template <class T>
T dot(const V3<T>& x, const V3<T>& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

/// Tangential projector I - n n^T.
template <class T>
M3<T> projector(const V3<T>& n) {
  M3<T> p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i][j] = T(i == j ? 1.0 : 0.0) - n[i] * n[j];
  return p;
}

template <class T>
M3<T> matmul(const M3<T>& x, const M3<T>& y) {
  M3<T> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T s(0.0);
      for (int k = 0; k < 3; ++k) s += x[i][k] * y[k][j];
      out[i][j] = s;
    }
  return out;
}

template <class T>
V3<T> matvec(const M3<T>& x, const V3<T>& y) {
  V3<T> out;
  for (int i = 0; i < 3; ++i) out[i] = x[i][0] * y[0] + x[i][1] * y[1] + x[i][2] * y[2];
  return out;
}

/// Jacobian (rows = components, columns = directions) of a seeded vector.
template <class T>
M3<T> jacobian(const V3<Jet<T>>& f) {
  M3<T> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = f[i].v[j];
  return out;
}

template <class T>
V3<T> values(const V3<Jet<T>>& f) {
  return {f[0].a, f[1].a, f[2].a};
}

}  // namespace surfstokes
