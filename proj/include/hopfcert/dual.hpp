#pragma once
/// @file dual.hpp
/// Forward-mode dual numbers. A Dual carries a value and one directional
/// derivative; every field evaluator in the library is templated on its
/// scalar so the same code path yields values and exact first derivatives.

#include <cmath>
#include <type_traits>

namespace hopfcert {

template <typename T>
struct Dual {
  T val{};
  T der{};

  constexpr Dual() = default;
  constexpr Dual(T v) : val(v), der(0) {}  // NOLINT: implicit lift of constants
  constexpr Dual(T v, T d) : val(v), der(d) {}

  constexpr Dual& operator+=(const Dual& o) {
    val += o.val;
    der += o.der;
    return *this;
  }
  constexpr Dual& operator-=(const Dual& o) {
    val -= o.val;
    der -= o.der;
    return *this;
  }
  constexpr Dual& operator*=(const Dual& o) {
    der = der * o.val + val * o.der;
    val *= o.val;
    return *this;
  }
  constexpr Dual& operator/=(const Dual& o) {
    der = (der * o.val - val * o.der) / (o.val * o.val);
    val /= o.val;
    return *this;
  }
};

template <typename T>
constexpr Dual<T> operator-(const Dual<T>& a) {
  return {-a.val, -a.der};
}
template <typename T>
constexpr Dual<T> operator+(Dual<T> a, const Dual<T>& b) {
  return a += b;
}
template <typename T>
constexpr Dual<T> operator-(Dual<T> a, const Dual<T>& b) {
  return a -= b;
}
template <typename T>
constexpr Dual<T> operator*(Dual<T> a, const Dual<T>& b) {
  return a *= b;
}
template <typename T>
constexpr Dual<T> operator/(Dual<T> a, const Dual<T>& b) {
  return a /= b;
}
template <typename T>
constexpr Dual<T> operator+(Dual<T> a, T b) {
  a.val += b;
  return a;
}
template <typename T>
constexpr Dual<T> operator+(T a, Dual<T> b) {
  b.val += a;
  return b;
}
template <typename T>
constexpr Dual<T> operator-(Dual<T> a, T b) {
  a.val -= b;
  return a;
}
template <typename T>
constexpr Dual<T> operator-(T a, const Dual<T>& b) {
  return {a - b.val, -b.der};
}
template <typename T>
constexpr Dual<T> operator*(const Dual<T>& a, T b) {
  return {a.val * b, a.der * b};
}
template <typename T>
constexpr Dual<T> operator*(T a, const Dual<T>& b) {
  return {a * b.val, a * b.der};
}
template <typename T>
constexpr Dual<T> operator/(const Dual<T>& a, T b) {
  return {a.val / b, a.der / b};
}
template <typename T>
constexpr Dual<T> operator/(T a, const Dual<T>& b) {
  return {a / b.val, -a * b.der / (b.val * b.val)};
}

// Ordering looks only at the value part; branch decisions never see derivatives.
template <typename T>
constexpr bool operator<(const Dual<T>& a, const Dual<T>& b) {
  return a.val < b.val;
}
template <typename T>
constexpr bool operator>(const Dual<T>& a, const Dual<T>& b) {
  return a.val > b.val;
}
template <typename T>
constexpr bool operator<=(const Dual<T>& a, const Dual<T>& b) {
  return a.val <= b.val;
}
template <typename T>
constexpr bool operator>=(const Dual<T>& a, const Dual<T>& b) {
  return a.val >= b.val;
}

template <typename T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.val), cos(a.val) * a.der};
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.val), -sin(a.val) * a.der};
}
template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.val);
  return {s, a.der / (T(2) * s)};
}
template <typename T>
Dual<T> atan(const Dual<T>& a) {
  using std::atan;
  return {atan(a.val), a.der / (T(1) + a.val * a.val)};
}
template <typename T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  using std::atan2;
  const T r2 = x.val * x.val + y.val * y.val;
  return {atan2(y.val, x.val), (x.val * y.der - y.val * x.der) / r2};
}
template <typename T>
Dual<T> abs(const Dual<T>& a) {
  return a.val < T(0) ? -a : a;
}

/// Value part of a scalar, identity for plain floating point.
template <typename T>
constexpr double value_of(const T& x) {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<double>(x);
  } else {
    return value_of(x.val);
  }
}

/// Integer power by repeated multiplication; keeps dual propagation exact.
template <typename T>
T ipow(T base, int exponent) {
  T result(1.0);
  for (int i = 0; i < exponent; ++i) result = result * base;
  return result;
}

using Dualf = Dual<double>;

}  // namespace hopfcert
