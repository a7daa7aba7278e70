#pragma once
/// @file phimap.hpp
/// The map phi_t(x) = x + t v(x) from S^3 onto the sphere of radius sqrt(1 + t^2),
/// its Jacobian determinant (closed form in sigma_1, sigma_2 and a direct 3x3
/// determinant), and the volume of the image of a cap.

#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hopfcert/jet_table.hpp"

namespace hopfcert {

inline constexpr double kDefaultTMax = 0.5;
inline constexpr double kDefaultDetFloor = 1e-6;

struct PhiParams {
  double t;
  UnitField field;
  double t_max = kDefaultTMax;

  PhiParams(double t_, UnitField field_, double t_max_ = kDefaultTMax)
      : t(t_), field(std::move(field_)), t_max(t_max_) {
    if (!(t >= 0.0) || t > t_max) {
      std::ostringstream msg;
      msg << "PhiParams: t = " << t << " outside [0, " << t_max << "]";
      throw std::invalid_argument(msg.str());
    }
  }
};

inline Vec4d phi(const PhiParams& p, const Vec4d& x) { return x + p.t * p.field(x); }
inline Vec4d phi(const PhiParams& p, const SpherePoint& x) { return phi(p, x.vec()); }

/// u = (v - t x) / sqrt(1 + t^2): the unit normal-completing direction on the image sphere.
inline UnitField u_field(const PhiParams& p) {
  FieldInfo info;
  info.kind = FieldKind::custom;
  info.label = "u(" + p.field.label() + ")";
  info.parameters = {{"t", p.t}};
  const double t = p.t;
  const double scale = 1.0 / std::sqrt(1.0 + t * t);
  UnitField v = p.field;
  UnitField::Eval eval = [v, t, scale](const Vec4d& x) { return scale * (v(x) - t * x); };
  UnitField::DualEval dual;
  if (v.has_dual()) dual = [v, t, scale](const Vec4<Dualf>& x) { return scale * (v(x) - t * x); };
  return UnitField(std::move(info), std::move(eval), std::move(dual));
}

/// sqrt(1 + t^2) (1 + sigma_1 t + sigma_2 t^2).
inline double jacobian_det_analytic(double t, double sigma1, double sigma2) {
  return std::sqrt(1.0 + t * t) * (1.0 + sigma1 * t + sigma2 * t * t);
}
inline double jacobian_det_analytic(const PhiParams& p, const FieldJet& jet) {
  return jacobian_det_analytic(p.t, jet.sigma1, jet.sigma2);
}
inline double jacobian_det_analytic(const PhiParams& p, const SpherePoint& x, const DiffOptions& opts = {}) {
  return jacobian_det_analytic(p, field_jet(p.field, x, opts));
}

struct NumericJacobian {
  /// m(a, b) = <dphi(e_a), ebar_b> with e = (e1, e2, v), ebar = (e1, e2, u).
  Eigen::Matrix3d matrix;
  double det = 0.0;
  bool singular = false;
};

/// Differentiates phi along the geodesics through x in the adapted-frame
/// directions and takes the determinant of the projected 3x3 matrix.
inline NumericJacobian jacobian_det_numeric(const PhiParams& p, const SpherePoint& x, const DiffOptions& opts = {}) {
  const Vec4d xv = x.vec();
  const Vec4d v = p.field(xv);
  const Frame f = adapted_frame(xv, v);
  const double t = p.t;
  const Vec4d u = (v - t * xv) / std::sqrt(1.0 + t * t);
  const std::array<Vec4d, 3> dirs{f.e1, f.e2, v};
  const std::array<Vec4d, 3> image_frame{f.e1, f.e2, u};

  NumericJacobian out;
  for (std::size_t a = 0; a < 3; ++a) {
    auto along = [&](auto s) {
      using T = decltype(s);
      const Vec4<T> y = geodesic_point(lift<T>(xv), lift<T>(dirs[a]), s);
      return y + T(t) * p.field(y);
    };
    Vec4d d;
    if (opts.mode == DiffMode::ad && p.field.has_dual()) {
      d = derivative_part(along(Dualf(0.0, 1.0)));
    } else {
      const double h = opts.fd_step;
      d = (along(h) - along(-h)) / (2.0 * h);
    }
    for (std::size_t b = 0; b < 3; ++b)
      out.matrix(static_cast<int>(a), static_cast<int>(b)) = dot(d, image_frame[b]);
  }
  out.det = out.matrix.determinant();
  out.singular = !(out.det > 0.0);
  return out;
}

class DetPositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImageVolume {
  double value = 0.0;
  double error = 0.0;
  /// Smallest 1 + sigma_1 t + sigma_2 t^2 over the nodes.
  double min_factor = 0.0;
};

/// Integral over the cap of the analytic Jacobian determinant, from precomputed jets.
inline ImageVolume image_volume(double t, const QuadratureRule& rule, const JetTable& jets,
                                double det_floor = kDefaultDetFloor) {
  if (jets.size() != rule.size()) throw std::invalid_argument("image_volume: jet table does not match the rule");
  std::vector<double> dets(jets.size());
  double min_factor = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < jets.size(); ++i) {
    const double factor = 1.0 + jets.sigma1[i] * t + jets.sigma2[i] * t * t;
    if (!(factor > det_floor)) {
      std::ostringstream msg;
      msg << "image_volume: 1 + sigma1 t + sigma2 t^2 = " << factor << " <= det floor " << det_floor << " at node " << i
          << ' ' << rule.nodes[i].vec() << " for t = " << t << "; phi_t is outside its diffeomorphism regime";
      throw DetPositivityError(msg.str());
    }
    min_factor = std::fmin(min_factor, factor);
    dets[i] = std::sqrt(1.0 + t * t) * factor;
  }
  const IntegrationResult r = integrate_values(rule, dets);
  return {r.value, r.error, min_factor};
}

inline ImageVolume image_volume(const PhiParams& p, const QuadratureRule& rule, double det_floor = kDefaultDetFloor,
                                const DiffOptions& opts = {}) {
  return image_volume(p.t, rule, sample_jets(p.field, rule, opts), det_floor);
}

/// Coefficients of c0 + c1 t + c2 t^2 fitted by least squares to
/// image_volume(t) / sqrt(1 + t^2).
inline std::array<double, 3> fit_det_polynomial(std::span<const double> ts, std::span<const double> volumes) {
  if (ts.size() != volumes.size() || ts.size() < 3)
    throw std::invalid_argument("fit_det_polynomial: needs at least 3 matching (t, volume) pairs");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(ts.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(ts.size()));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    a(row, 0) = 1.0;
    a(row, 1) = ts[i];
    a(row, 2) = ts[i] * ts[i];
    b(row) = volumes[i] / std::sqrt(1.0 + ts[i] * ts[i]);
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  return {c(0), c(1), c(2)};
}

}  // namespace hopfcert
