#pragma once
/// @file calculus.hpp
/// Ambient and covariant derivatives of unit fields, adapted frames and the
/// per-point jet (h matrix, sigma_1, sigma_2, energy density, volume integrand).

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "hopfcert/fields.hpp"

namespace hopfcert {

enum class DiffMode { ad, fd };

inline const char* to_string(DiffMode m) { return m == DiffMode::ad ? "ad" : "fd"; }

struct DiffOptions {
  DiffMode mode = DiffMode::ad;
  /// Central-difference step, scaled by max(1, |x|) / |Y|.
  double fd_step = 1e-5;
};

struct Derivative {
  Vec4d value;
  DiffMode mode_used;
  bool fell_back = false;
};

/// Dv[Y] of the 0-homogeneous ambient extension: d/ds v(x + s Y) at s = 0.
/// AD falls back to central differences when the field has no dual evaluator.
inline Derivative directional_derivative(const UnitField& v, const Vec4d& x, const Vec4d& y,
                                         const DiffOptions& opts = {}) {
  if (opts.mode == DiffMode::ad && v.has_dual()) {
    return {derivative_part(v(make_dual(x, y))), DiffMode::ad};
  }
  const double ylen = norm(y);
  if (ylen == 0.0) return {Vec4d{}, DiffMode::fd, opts.mode == DiffMode::ad};
  const double s = opts.fd_step * std::fmax(1.0, norm(x)) / ylen;
  const Vec4d diff = (v(x + s * y) - v(x - s * y)) / (2.0 * s);
  return {diff, DiffMode::fd, opts.mode == DiffMode::ad};
}

struct JacobianResult {
  Eigen::Matrix4d matrix;
  DiffMode mode_used;
  std::optional<std::string> warning;
};

/// Columns are Dv[e_k] for the standard basis of R^4.
inline JacobianResult ambient_jacobian(const UnitField& v, const SpherePoint& x, const DiffOptions& opts = {}) {
  JacobianResult out{Eigen::Matrix4d::Zero(), opts.mode, std::nullopt};
  for (int k = 0; k < 4; ++k) {
    Vec4d e{};
    e[static_cast<std::size_t>(k)] = 1.0;
    const Derivative d = directional_derivative(v, x.vec(), e, opts);
    for (int r = 0; r < 4; ++r) out.matrix(r, k) = d.value[static_cast<std::size_t>(r)];
    out.mode_used = d.mode_used;
    if (d.fell_back) out.warning = "field '" + v.label() + "' has no AD evaluator; used finite differences";
  }
  return out;
}

/// Tangential part of the ambient derivative: nabla_Y v = Dv[Y] - <Dv[Y], x> x.
inline Vec4d covariant_derivative(const UnitField& v, const Vec4d& x, const Vec4d& y, const DiffOptions& opts = {}) {
  const Vec4d dv = directional_derivative(v, x, y, opts).value;
  return dv - dot(dv, x) * x;
}

inline TangentVector covariant_derivative(const UnitField& v, const SpherePoint& x, const TangentVector& y,
                                          const DiffOptions& opts = {}) {
  if (geodesic_distance(y.base(), x) > 1e-12)
    throw std::invalid_argument("covariant_derivative: direction is not tangent at the evaluation point");
  return TangentVector::project(x, covariant_derivative(v, x.vec(), y.vec(), opts));
}

/// nabla_Y v computed intrinsically: transport v(gamma(s)) back to x along the
/// geodesic gamma with gamma'(0) = Y and differentiate at s = 0. Never touches
/// the normal component of the ambient derivative.
inline Vec4d covariant_derivative_by_transport(const UnitField& v, const Vec4d& x, const Vec4d& y,
                                               const DiffOptions& opts = {}) {
  const double ylen = norm(y);
  if (ylen == 0.0) return {};
  const Vec4d w = y / ylen;
  auto transported = [&](auto s) {
    using T = decltype(s);
    const Vec4<T> p = lift<T>(x);
    const Vec4<T> dir = lift<T>(w);
    const Vec4<T> point = geodesic_point(p, dir, s);
    const Vec4<T> back = -geodesic_velocity(p, dir, s);
    return transport_along(point, back, v(point), s);
  };
  if (opts.mode == DiffMode::ad && v.has_dual()) {
    return ylen * derivative_part(transported(Dualf(0.0, 1.0)));
  }
  const double h = opts.fd_step;
  return ylen * (transported(h) - transported(-h)) / (2.0 * h);
}

/// ||a||^2 ||b||^2 - <a, b>^2, the squared area of the parallelogram spanned by a and b.
inline double wedge_norm_sq(const Vec4d& a, const Vec4d& b) {
  const double ab = dot(a, b);
  return std::fmax(0.0, dot(a, a) * dot(b, b) - ab * ab);
}

struct Frame {
  Vec4d e1;
  Vec4d e2;
};

/// Orthonormal {e1, e2} completing v to a tangent basis at x with det(x, e1, e2, v) = +1.
/// e1 is seeded from whichever of i x, j x, k x is least aligned with v
/// (first index wins ties) and Gram-Schmidt against v.
inline Frame adapted_frame(const Vec4d& x, const Vec4d& v) {
  const std::array<Vec4d, 3> seeds{left_mul(kQuatI, x), left_mul(kQuatJ, x), left_mul(kQuatK, x)};
  std::size_t best = 0;
  double best_align = 2.0;
  for (std::size_t n = 0; n < 3; ++n) {
    const double align = std::fabs(dot(seeds[n], v));
    if (align < best_align - 1e-14) {
      best_align = align;
      best = n;
    }
  }
  const Vec4d e1 = normalized(seeds[best] - dot(seeds[best], v) * v);
  // <cross3(x, e1, v), y> = det(x, e1, v, y); det(x, e1, e2, v) = -det(x, e1, v, e2).
  const Vec4d e2 = -normalized(cross3(x, e1, v));
  return {e1, e2};
}

inline Frame adapted_frame(const SpherePoint& x, const TangentVector& v) { return adapted_frame(x.vec(), v.vec()); }

/// Everything the functionals and the phi map need at one point.
struct FieldJet {
  Vec4d point;
  Vec4d v;
  Vec4d e1;
  Vec4d e2;
  /// nabla_{e1} v, nabla_{e2} v, nabla_v v.
  std::array<Vec4d, 3> nabla;
  /// h[i][j] = <nabla_{e_i} v, e_j>.
  std::array<std::array<double, 2>, 2> h{};
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  /// (<nabla_v v, e1>, <nabla_v v, e2>).
  std::array<double, 2> accel{};
  double energy_density = 0.0;
  double volume_integrand = 0.0;
  DiffMode mode_used = DiffMode::ad;
};

/// Jet with a caller-supplied orthonormal frame of the complement of v.
inline FieldJet field_jet_in_frame(const UnitField& v, const Vec4d& x, const Vec4d& e1, const Vec4d& e2,
                                   const DiffOptions& opts = {}) {
  FieldJet j;
  j.point = x;
  j.v = v(x);
  j.e1 = e1;
  j.e2 = e2;
  const std::array<Vec4d, 3> dirs{e1, e2, j.v};
  for (std::size_t a = 0; a < 3; ++a) {
    const Derivative d = directional_derivative(v, x, dirs[a], opts);
    j.nabla[a] = d.value - dot(d.value, x) * x;
    j.mode_used = d.mode_used;
  }
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t k = 0; k < 2; ++k) j.h[i][k] = dot(j.nabla[i], dirs[k]);
  }
  j.accel = {dot(j.nabla[2], e1), dot(j.nabla[2], e2)};
  j.sigma1 = j.h[0][0] + j.h[1][1];
  j.sigma2 = j.h[0][0] * j.h[1][1] - j.h[0][1] * j.h[1][0];
  j.energy_density = j.h[0][0] * j.h[0][0] + j.h[0][1] * j.h[0][1] + j.h[1][0] * j.h[1][0] + j.h[1][1] * j.h[1][1] +
                     j.accel[0] * j.accel[0] + j.accel[1] * j.accel[1];
  double first = 0.0;
  for (const auto& n : j.nabla) first += dot(n, n);
  const double second =
      wedge_norm_sq(j.nabla[0], j.nabla[1]) + wedge_norm_sq(j.nabla[0], j.nabla[2]) + wedge_norm_sq(j.nabla[1], j.nabla[2]);
  j.volume_integrand = std::sqrt(1.0 + first + second);
  return j;
}

inline FieldJet field_jet(const UnitField& v, const Vec4d& x, const DiffOptions& opts = {}) {
  const Frame f = adapted_frame(x, v(x));
  return field_jet_in_frame(v, x, f.e1, f.e2, opts);
}

inline FieldJet field_jet(const UnitField& v, const SpherePoint& x, const DiffOptions& opts = {}) {
  return field_jet(v, x.vec(), opts);
}

/// Rotates the frame of the complement of v by theta.
inline Frame rotate_frame(const Frame& f, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * f.e1 + s * f.e2, -s * f.e1 + c * f.e2};
}

}  // namespace hopfcert
