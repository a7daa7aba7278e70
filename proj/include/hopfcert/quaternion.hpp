#pragma once
/// @file quaternion.hpp
/// Ambient R^4 vectors and the quaternion product used to model S^3.

#include <array>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <type_traits>

#include "hopfcert/dual.hpp"

namespace hopfcert {

/// Vector in R^4 with coordinates (x1, x2, x3, x4).
template <typename T>
struct Vec4 {
  std::array<T, 4> c{};

  constexpr Vec4() = default;
  constexpr Vec4(T a, T b, T cc, T d) : c{a, b, cc, d} {}

  constexpr T& operator[](std::size_t k) { return c[k]; }
  constexpr const T& operator[](std::size_t k) const { return c[k]; }

  constexpr Vec4& operator+=(const Vec4& o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr Vec4& operator-=(const Vec4& o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr Vec4& operator*=(const T& s) {
    for (auto& x : c) x *= s;
    return *this;
  }

  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

using Vec4d = Vec4<double>;

template <typename T>
constexpr Vec4<T> operator+(Vec4<T> a, const Vec4<T>& b) {
  return a += b;
}
template <typename T>
constexpr Vec4<T> operator-(Vec4<T> a, const Vec4<T>& b) {
  return a -= b;
}
template <typename T>
constexpr Vec4<T> operator-(const Vec4<T>& a) {
  return {-a[0], -a[1], -a[2], -a[3]};
}
template <typename T>
constexpr Vec4<T> operator*(const T& s, Vec4<T> a) {
  return a *= s;
}
template <typename T>
constexpr Vec4<T> operator*(Vec4<T> a, const T& s) {
  return a *= s;
}
template <typename T>
  requires(!std::is_same_v<T, double>)
constexpr Vec4<T> operator*(double s, Vec4<T> a) {
  for (auto& x : a.c) x = s * x;
  return a;
}
template <typename T>
constexpr Vec4<T> operator/(Vec4<T> a, const T& s) {
  for (auto& x : a.c) x = x / s;
  return a;
}

template <typename T>
constexpr T dot(const Vec4<T>& a, const Vec4<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

template <typename T>
T norm(const Vec4<T>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

template <typename T>
Vec4<T> normalized(const Vec4<T>& a) {
  return a / norm(a);
}

/// Lift a double vector into dual numbers with the given tangent.
inline Vec4<Dualf> make_dual(const Vec4d& value, const Vec4d& tangent) {
  Vec4<Dualf> out;
  for (std::size_t k = 0; k < 4; ++k) out[k] = Dualf(value[k], tangent[k]);
  return out;
}

inline Vec4d value_part(const Vec4<Dualf>& a) {
  return {a[0].val, a[1].val, a[2].val, a[3].val};
}
inline Vec4d derivative_part(const Vec4<Dualf>& a) {
  return {a[0].der, a[1].der, a[2].der, a[3].der};
}
inline const Vec4d& value_part(const Vec4d& a) { return a; }

template <typename T>
Vec4<T> lift(const Vec4d& a) {
  return {T(a[0]), T(a[1]), T(a[2]), T(a[3])};
}

inline double max_abs_diff(const Vec4d& a, const Vec4d& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < 4; ++k) m = std::fmax(m, std::fabs(a[k] - b[k]));
  return m;
}

inline std::ostream& operator<<(std::ostream& os, const Vec4d& v) {
  return os << '(' << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << ')';
}

/// Quaternion w + i*x + j*y + k*z. Coordinates map onto Vec4 as (w, x, y, z).
template <typename T>
struct Quaternion {
  T w{}, i{}, j{}, k{};

  static constexpr Quaternion from_vec(const Vec4<T>& v) { return {v[0], v[1], v[2], v[3]}; }
  constexpr Vec4<T> vec() const { return {w, i, j, k}; }
  constexpr Quaternion conj() const { return {w, -i, -j, -k}; }
};

using Quatd = Quaternion<double>;

/// Hamilton product.
template <typename T>
constexpr Quaternion<T> quat_mul(const Quaternion<T>& p, const Quaternion<T>& q) {
  return {p.w * q.w - p.i * q.i - p.j * q.j - p.k * q.k,
          p.w * q.i + p.i * q.w + p.j * q.k - p.k * q.j,
          p.w * q.j - p.i * q.k + p.j * q.w + p.k * q.i,
          p.w * q.k + p.i * q.j - p.j * q.i + p.k * q.w};
}

template <typename T>
constexpr Quaternion<T> operator*(const Quaternion<T>& p, const Quaternion<T>& q) {
  return quat_mul(p, q);
}

/// Left multiplication a*x with a constant quaternion acting on a vector.
template <typename T>
constexpr Vec4<T> left_mul(const Quatd& a, const Vec4<T>& x) {
  const Quaternion<T> aq{T(a.w), T(a.i), T(a.j), T(a.k)};
  return quat_mul(aq, Quaternion<T>::from_vec(x)).vec();
}

/// Right multiplication x*a with a constant quaternion.
template <typename T>
constexpr Vec4<T> right_mul(const Vec4<T>& x, const Quatd& a) {
  const Quaternion<T> aq{T(a.w), T(a.i), T(a.j), T(a.k)};
  return quat_mul(Quaternion<T>::from_vec(x), aq).vec();
}

inline double quat_norm(const Quatd& q) { return norm(q.vec()); }

inline constexpr Quatd kQuatOne{1, 0, 0, 0};
inline constexpr Quatd kQuatI{0, 1, 0, 0};
inline constexpr Quatd kQuatJ{0, 0, 1, 0};
inline constexpr Quatd kQuatK{0, 0, 0, 1};

/// Determinant of the 4x4 matrix with the given columns.
inline double det4(const Vec4d& a, const Vec4d& b, const Vec4d& c, const Vec4d& d) {
  const double m[4][4] = {{a[0], b[0], c[0], d[0]},
                          {a[1], b[1], c[1], d[1]},
                          {a[2], b[2], c[2], d[2]},
                          {a[3], b[3], c[3], d[3]}};
  auto minor3 = [&](int skip_col) {
    int cols[3];
    for (int k = 0, n = 0; k < 4; ++k)
      if (k != skip_col) cols[n++] = k;
    const auto e = [&](int r, int col) { return m[r + 1][cols[col]]; };
    return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) -
           e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
           e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
  };
  double det = 0.0;
  for (int col = 0; col < 4; ++col) det += ((col % 2 == 0) ? 1.0 : -1.0) * m[0][col] * minor3(col);
  return det;
}

/// The unique vector n with <n, y> = det(a, b, c, y) for all y (4D cross product).
inline Vec4d cross3(const Vec4d& a, const Vec4d& b, const Vec4d& c) {
  Vec4d n;
  for (std::size_t k = 0; k < 4; ++k) {
    Vec4d e{};
    e[k] = 1.0;
    n[k] = det4(a, b, c, e);
  }
  return n;
}

}  // namespace hopfcert
