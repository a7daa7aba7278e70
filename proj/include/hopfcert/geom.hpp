#pragma once
/// @file geom.hpp
/// The unit 3-sphere as unit quaternions: points, tangent vectors,
/// great-circle geodesics, parallel transport and geodesic caps.

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hopfcert/quaternion.hpp"

namespace hopfcert {

inline constexpr double kPi = std::numbers::pi;

/// Largest norm drift a SpherePoint silently absorbs on construction.
inline constexpr double kPointDriftGuard = 1e-9;

class SpherePoint {
 public:
  SpherePoint() : x_{1.0, 0.0, 0.0, 0.0} {}

  /// Renormalizes x; throws if ||x|| is further than the drift guard from 1.
  explicit SpherePoint(const Vec4d& x) {
    const double n = norm(x);
    if (!(std::fabs(n - 1.0) <= kPointDriftGuard)) {
      std::ostringstream msg;
      msg << "SpherePoint: |x| = " << n << " is not within " << kPointDriftGuard << " of 1";
      throw std::invalid_argument(msg.str());
    }
    x_ = x / n;
  }
  SpherePoint(double a, double b, double c, double d) : SpherePoint(Vec4d{a, b, c, d}) {}

  /// Radial projection of any nonzero vector onto the sphere.
  static SpherePoint normalize(const Vec4d& x) {
    const double n = norm(x);
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("SpherePoint::normalize: zero or non-finite vector");
    SpherePoint p;
    p.x_ = x / n;
    return p;
  }

  /// Keeps x bit-for-bit (no rescaling) after the same drift check as the constructor.
  static SpherePoint adopt(const Vec4d& x) {
    const SpherePoint checked(x);
    SpherePoint p;
    p.x_ = x;
    return p;
  }

  const Vec4d& vec() const { return x_; }
  double operator[](std::size_t k) const { return x_[k]; }
  Quatd quat() const { return Quatd::from_vec(x_); }

 private:
  Vec4d x_;
};

class TangentVector {
 public:
  /// Throws unless <w, base> vanishes to 1e-9 relative to |w|; the residual is projected out.
  TangentVector(const SpherePoint& base, const Vec4d& w) : base_(base) {
    const double radial = dot(w, base.vec());
    if (std::fabs(radial) > 1e-9 * std::fmax(1.0, norm(w))) {
      std::ostringstream msg;
      msg << "TangentVector: <w, x> = " << radial << " is not tangent";
      throw std::invalid_argument(msg.str());
    }
    w_ = w - radial * base.vec();
  }

  /// Tangential part of an arbitrary ambient vector.
  static TangentVector project(const SpherePoint& base, const Vec4d& w) {
    return TangentVector(base, w - dot(w, base.vec()) * base.vec());
  }

  const SpherePoint& base() const { return base_; }
  const Vec4d& vec() const { return w_; }
  double length() const { return norm(w_); }

 private:
  SpherePoint base_;
  Vec4d w_;
};

/// Geodesic distance arccos<x, y>, evaluated through atan2 for accuracy near 0 and pi.
inline double geodesic_distance(const Vec4d& x, const Vec4d& y) {
  const double c = dot(x, y);
  return std::atan2(norm(x - c * y), c);
}
inline double geodesic_distance(const SpherePoint& x, const SpherePoint& y) {
  return geodesic_distance(x.vec(), y.vec());
}

/// Closed geodesic ball about `center`; radius pi means the whole sphere.
class CapDomain {
 public:
  CapDomain(const SpherePoint& center, double radius) : center_(center), radius_(radius) {
    if (!(radius > 0.0) || radius > kPi) {
      std::ostringstream msg;
      msg << "CapDomain: radius " << radius << " outside (0, pi]";
      throw std::invalid_argument(msg.str());
    }
  }

  static CapDomain full_sphere() { return CapDomain(SpherePoint(), kPi); }

  const SpherePoint& center() const { return center_; }
  double radius() const { return radius_; }
  bool is_full_sphere() const { return radius_ == kPi; }

  /// Orthonormal basis of the tangent space at the center: (i c, j c, k c).
  std::array<Vec4d, 3> tangent_basis() const {
    return {left_mul(kQuatI, center_.vec()), left_mul(kQuatJ, center_.vec()),
            left_mul(kQuatK, center_.vec())};
  }

 private:
  SpherePoint center_;
  double radius_;
};

/// vol(K) = 4 pi int_0^r sin^2 = 2 pi r - pi sin(2r).
/// pi (x - sin x) with x = 2r; the series branch avoids cancellation for small caps.
inline double cap_volume(double radius) {
  const double x = 2.0 * radius;
  if (x >= 0.5) return kPi * (x - std::sin(x));
  const double x2 = x * x;
  double term = x * x2 / 6.0;
  double sum = 0.0;
  for (int k = 1; term != 0.0 && std::fabs(term) > 1e-18 * sum; ++k) {
    sum += term;
    term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
  }
  return kPi * sum;
}
inline double cap_volume(const CapDomain& k) { return cap_volume(k.radius()); }

inline constexpr double kSphereVolume = 2.0 * std::numbers::pi * std::numbers::pi;

struct Containment {
  bool inside;
  double distance;
};

inline Containment contains(const CapDomain& k, const SpherePoint& x) {
  const double d = geodesic_distance(x, k.center());
  return {d <= k.radius() + 1e-12, d};
}

/// cos(rho) p + sin(rho) w for any scalar type; p and w orthonormal.
template <typename T>
Vec4<T> geodesic_point(const Vec4<T>& p, const Vec4<T>& w, const T& rho) {
  using std::cos;
  using std::sin;
  return cos(rho) * p + sin(rho) * w;
}

/// Velocity of the geodesic above at time rho.
template <typename T>
Vec4<T> geodesic_velocity(const Vec4<T>& p, const Vec4<T>& w, const T& rho) {
  using std::cos;
  using std::sin;
  return cos(rho) * w - sin(rho) * p;
}

inline void require_unit_direction(const TangentVector& w, const char* who) {
  if (std::fabs(w.length() - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << who << ": direction must be a unit vector, |w| = " << w.length();
    throw std::invalid_argument(msg.str());
  }
}

inline SpherePoint exp_map(const SpherePoint& p, const TangentVector& w, double rho) {
  require_unit_direction(w, "exp_map");
  return SpherePoint::normalize(geodesic_point(p.vec(), w.vec(), rho));
}

/// Transport of u0 from p along the unit-speed geodesic with initial direction w
/// for time rho. The component along w rotates in the (p, w) plane, the rest is constant.
template <typename T>
Vec4<T> transport_along(const Vec4<T>& p, const Vec4<T>& w, const Vec4<T>& u0, const T& rho) {
  const T a = dot(u0, w);
  const Vec4<T> normal = u0 - a * w;
  return normal + a * geodesic_velocity(p, w, rho);
}

inline TangentVector parallel_transport(const SpherePoint& p, const TangentVector& w, const TangentVector& u0,
                                        double rho) {
  require_unit_direction(w, "parallel_transport");
  const SpherePoint end = exp_map(p, w, rho);
  return TangentVector::project(end, transport_along(p.vec(), w.vec(), u0.vec(), rho));
}

}  // namespace hopfcert
