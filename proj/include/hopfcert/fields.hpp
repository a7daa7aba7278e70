#pragma once
/// @file fields.hpp
/// Unit vector fields on S^3: Hopf fields, bump perturbations that agree with
/// a Hopf field on the boundary of a cap, and the radially parallel field on a
/// small cap.
///
/// Every field is stored as a pair of closures, one over doubles and one over
/// dual numbers, built from a single templated functor. Both closures receive
/// the ambient argument after radial normalization, so each field is the
/// 0-homogeneous extension v(x / |x|) and ambient derivatives are well posed.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hopfcert/geom.hpp"

namespace hopfcert {

enum class FieldKind { hopf, perturbed, small_cap, custom };

inline const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::hopf: return "hopf";
    case FieldKind::perturbed: return "perturbed";
    case FieldKind::small_cap: return "small-cap";
    case FieldKind::custom: return "custom";
  }
  return "unknown";
}

/// Orthonormal triple of unit imaginary quaternions with c = a b.
struct HopfTriple {
  Quatd a = kQuatI;
  Quatd b = kQuatJ;
  Quatd c = kQuatK;
};

struct FieldInfo {
  FieldKind kind = FieldKind::custom;
  std::string label;
  std::vector<std::pair<std::string, double>> parameters;
  /// Axis of the Hopf field this field coincides with outside `support`.
  std::optional<Quatd> boundary_axis;
  /// Region where the field may differ from the Hopf field; empty means nowhere.
  std::optional<CapDomain> support;
  std::vector<std::string> warnings;
};

class UnitField {
 public:
  using Eval = std::function<Vec4d(const Vec4d&)>;
  using DualEval = std::function<Vec4<Dualf>(const Vec4<Dualf>&)>;

  UnitField(FieldInfo info, Eval eval, DualEval dual_eval = {})
      : info_(std::move(info)), eval_(std::move(eval)), dual_eval_(std::move(dual_eval)) {}

  /// Builds both closures from a functor with a templated call operator taking unit vectors.
  template <typename F>
  static UnitField from_functor(FieldInfo info, F f) {
    return UnitField(
        std::move(info), [f](const Vec4d& x) { return f(x); },
        [f](const Vec4<Dualf>& x) { return f(x); });
  }

  Vec4d operator()(const Vec4d& x) const { return eval_(x / norm(x)); }
  Vec4d operator()(const SpherePoint& x) const { return eval_(x.vec()); }
  Vec4<Dualf> operator()(const Vec4<Dualf>& x) const {
    if (!dual_eval_) throw std::logic_error("UnitField '" + info_.label + "' has no dual-number evaluator");
    return dual_eval_(x / norm(x));
  }

  TangentVector at(const SpherePoint& x) const { return TangentVector::project(x, eval_(x.vec())); }

  bool has_dual() const { return static_cast<bool>(dual_eval_); }
  const FieldInfo& info() const { return info_; }
  const std::string& label() const { return info_.label; }
  FieldKind kind() const { return info_.kind; }

  /// True when the field is known to coincide with a Hopf field on the boundary of k.
  bool is_hopf_boundary_on(const CapDomain& k) const {
    if (!info_.boundary_axis) return false;
    if (!info_.support) return true;
    const double reach = geodesic_distance(info_.support->center(), k.center()) + info_.support->radius();
    return reach <= k.radius() + 1e-12;
  }

 private:
  FieldInfo info_;
  Eval eval_;
  DualEval dual_eval_;
};

inline void require_unit_imaginary(const Quatd& q, const char* who) {
  const double n = quat_norm(q);
  if (std::fabs(q.w) > 1e-12 || std::fabs(n - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << who << ": axis must be a unit imaginary quaternion, got " << q.vec();
    throw std::invalid_argument(msg.str());
  }
}

/// Completes a unit imaginary axis to a right-handed triple (a, b, a b).
/// b is seeded from the basis unit among i, j, k least aligned with a.
inline HopfTriple hopf_triple(const Quatd& axis) {
  require_unit_imaginary(axis, "hopf_triple");
  const std::array<Quatd, 3> units{kQuatI, kQuatJ, kQuatK};
  std::size_t best = 0;
  double best_align = 2.0;
  for (std::size_t n = 0; n < 3; ++n) {
    const double align = std::fabs(dot(units[n].vec(), axis.vec()));
    if (align < best_align) {
      best_align = align;
      best = n;
    }
  }
  Vec4d b = units[best].vec() - dot(units[best].vec(), axis.vec()) * axis.vec();
  b = normalized(b);
  const Quatd bq = Quatd::from_vec(b);
  return {axis, bq, quat_mul(axis, bq)};
}

namespace detail {

struct LeftMulField {
  Quatd a;
  template <typename T>
  Vec4<T> operator()(const Vec4<T>& x) const {
    return left_mul(a, x);
  }
};

/// Squared geodesic distance from `center`, smooth through the center itself.
template <typename T>
T geodesic_distance_sq(const Vec4<T>& x, const Vec4d& center) {
  using std::atan;
  using std::atan2;
  using std::sqrt;
  const Vec4<T> c = lift<T>(center);
  const T u = dot(x, c);
  const Vec4<T> perp = x - u * c;
  const T n2 = dot(perp, perp);
  if (value_of(u) > 0.0) {
    const T z2 = n2 / (u * u);
    if (value_of(z2) < 1e-3) {
      // atan(z)/z as a series in z^2; d^2 = n^2 (atan(z)/(z u))^2.
      const T q = T(1.0) - z2 / 3.0 + z2 * z2 / 5.0 - z2 * z2 * z2 / 7.0 + z2 * z2 * z2 * z2 / 9.0;
      const T ratio = q / u;
      return n2 * ratio * ratio;
    }
  }
  const T d = atan2(sqrt(n2), u);
  return d * d;
}

}  // namespace detail

inline UnitField hopf_field(const Quatd& axis = kQuatI) {
  require_unit_imaginary(axis, "hopf_field");
  FieldInfo info;
  info.kind = FieldKind::hopf;
  info.label = "hopf";
  info.parameters = {{"axis_i", axis.i}, {"axis_j", axis.j}, {"axis_k", axis.k}};
  info.boundary_axis = axis;
  return UnitField::from_functor(std::move(info), detail::LeftMulField{axis});
}

struct HopfFrame {
  UnitField h;
  UnitField e1;
  UnitField e2;
};

/// Left-invariant orthonormal frame (a x, b x, c x).
inline HopfFrame hopf_frame(const HopfTriple& t = {}) {
  require_unit_imaginary(t.a, "hopf_frame");
  require_unit_imaginary(t.b, "hopf_frame");
  require_unit_imaginary(t.c, "hopf_frame");
  if (std::fabs(dot(t.a.vec(), t.b.vec())) > 1e-12 || max_abs_diff(quat_mul(t.a, t.b).vec(), t.c.vec()) > 1e-12)
    throw std::invalid_argument("hopf_frame: triple must satisfy <a, b> = 0 and c = a b");
  auto make = [](const Quatd& q, const char* label) {
    FieldInfo info;
    info.kind = FieldKind::custom;
    info.label = label;
    return UnitField::from_functor(std::move(info), detail::LeftMulField{q});
  };
  return {hopf_field(t.a), make(t.b, "hopf-e1"), make(t.c, "hopf-e2")};
}

/// f(d) = A (1 - (d/r)^2)^m on the cap, 0 outside. Value and first derivative vanish at d = r.
struct BumpProfile {
  double amplitude = 0.5;
  int exponent = 3;
};

enum class TwistKind { none, constant, angular };

/// Angle g(x) rotating the perturbation direction inside the (E1, E2) plane.
/// `angular` is the phase along the Hopf fiber through the cap center,
/// atan2(<x, a c>, <x, c>), smooth on caps of radius below pi/2.
struct Twist {
  TwistKind kind = TwistKind::none;
  double angle = 0.0;
  double rate = 1.0;
};

inline const char* to_string(TwistKind k) {
  switch (k) {
    case TwistKind::none: return "none";
    case TwistKind::constant: return "constant";
    case TwistKind::angular: return "angular";
  }
  return "unknown";
}

namespace detail {

struct PerturbedFieldFn {
  HopfTriple triple;
  Vec4d center;
  Vec4d fiber_direction;  // a * center
  double radius;
  BumpProfile bump;
  Twist twist;

  template <typename T>
  Vec4<T> operator()(const Vec4<T>& x) const {
    using std::atan2;
    using std::cos;
    using std::sin;
    const Vec4<T> h = left_mul(triple.a, x);
    const T d2 = geodesic_distance_sq(x, center);
    const double r2 = radius * radius;
    if (!(value_of(d2) < r2) || bump.amplitude == 0.0) return h;
    const T f = bump.amplitude * ipow(T(1.0) - d2 / r2, bump.exponent);
    T g(twist.angle);
    if (twist.kind == TwistKind::angular) {
      g = g + twist.rate * atan2(dot(x, lift<T>(fiber_direction)), dot(x, lift<T>(center)));
    }
    const Vec4<T> e1 = left_mul(triple.b, x);
    const Vec4<T> e2 = left_mul(triple.c, x);
    return cos(f) * h + sin(f) * (cos(g) * e1 + sin(g) * e2);
  }
};

struct SmallCapFieldFn {
  Vec4d center;
  Vec4d u0;

  // Radial parallel extension of u0 in closed form: u0 - <u0, x> (x + p) / (1 + <x, p>).
  template <typename T>
  Vec4<T> operator()(const Vec4<T>& x) const {
    const Vec4<T> p = lift<T>(center);
    const T s = dot(x, lift<T>(u0));
    const T denom = T(1.0) + dot(x, p);
    return lift<T>(u0) - (s / denom) * (x + p);
  }
};

}  // namespace detail

/// cos(f) H + sin(f) (cos(g) E1 + sin(g) E2). Equals H on the boundary and outside of k.
inline UnitField perturbed_field(const CapDomain& k, const BumpProfile& bump, const Twist& twist = {},
                                 const HopfTriple& triple = {}) {
  hopf_frame(triple);  // validates the triple
  if (bump.exponent < 2) throw std::invalid_argument("perturbed_field: bump exponent must be >= 2");
  if (!std::isfinite(bump.amplitude)) throw std::invalid_argument("perturbed_field: amplitude must be finite");
  if (twist.kind == TwistKind::angular && !(k.radius() < kPi / 2.0))
    throw std::invalid_argument("perturbed_field: angular twist needs a cap radius below pi/2");

  FieldInfo info;
  info.kind = FieldKind::perturbed;
  std::ostringstream label;
  label << "perturbed(A=" << bump.amplitude << ",m=" << bump.exponent << ",twist=" << to_string(twist.kind) << ")";
  info.label = label.str();
  info.parameters = {{"amplitude", bump.amplitude},
                     {"exponent", static_cast<double>(bump.exponent)},
                     {"twist_angle", twist.angle},
                     {"twist_rate", twist.kind == TwistKind::angular ? twist.rate : 0.0},
                     {"radius", k.radius()}};
  info.boundary_axis = triple.a;
  info.support = k;
  if (std::fabs(bump.amplitude) >= kPi) info.warnings.emplace_back("amplitude |A| >= pi: the field reverses against H inside the cap");

  detail::PerturbedFieldFn fn{triple, k.center().vec(), left_mul(triple.a, k.center().vec()), k.radius(), bump, twist};
  return UnitField::from_functor(std::move(info), fn);
}

/// Parallel transport of u0 along every radial geodesic from the cap center.
inline UnitField small_cap_field(const CapDomain& k, const TangentVector& u0) {
  if (!(k.radius() < kPi)) throw std::invalid_argument("small_cap_field: cap must exclude the cut locus (radius < pi)");
  if (geodesic_distance(u0.base(), k.center()) > 1e-12)
    throw std::invalid_argument("small_cap_field: u0 must be based at the cap center");
  if (std::fabs(u0.length() - 1.0) > 1e-12) throw std::invalid_argument("small_cap_field: u0 must be a unit vector");

  FieldInfo info;
  info.kind = FieldKind::small_cap;
  info.label = "small-cap";
  info.parameters = {{"radius", k.radius()},   {"u0_1", u0.vec()[0]}, {"u0_2", u0.vec()[1]},
                     {"u0_3", u0.vec()[2]},    {"u0_4", u0.vec()[3]}};
  if (k.radius() > 0.2) info.warnings.emplace_back("small-cap field used on a cap wider than 0.2 rad");
  return UnitField::from_functor(std::move(info), detail::SmallCapFieldFn{k.center().vec(), u0.vec()});
}

/// Default u0 for small_cap_field: the Hopf direction i c at the cap center.
inline TangentVector default_small_cap_seed(const CapDomain& k) {
  return TangentVector(k.center(), left_mul(kQuatI, k.center().vec()));
}

/// Isometry x -> l x r of S^3 for unit quaternions l and r.
struct Isometry {
  Quatd left = kQuatOne;
  Quatd right = kQuatOne;

  template <typename T>
  Vec4<T> apply(const Vec4<T>& x) const {
    return right_mul(left_mul(left, x), right);
  }
  template <typename T>
  Vec4<T> apply_inverse(const Vec4<T>& y) const {
    return right_mul(left_mul(left.conj(), y), right.conj());
  }
  SpherePoint apply(const SpherePoint& x) const { return SpherePoint::normalize(apply(x.vec())); }
  CapDomain apply(const CapDomain& k) const { return CapDomain(apply(k.center()), k.radius()); }
};

/// Push-forward F_* v (y) = dF(v(F^-1 y)). The differential of a linear isometry is itself.
inline UnitField pushforward(const UnitField& v, const Isometry& iso) {
  FieldInfo info = v.info();
  info.label = "pushforward(" + v.label() + ")";
  if (info.boundary_axis) info.boundary_axis = quat_mul(quat_mul(iso.left, *info.boundary_axis), iso.left.conj());
  if (info.support) info.support = iso.apply(*info.support);
  UnitField::Eval eval = [v, iso](const Vec4d& y) { return iso.apply(v(iso.apply_inverse(y))); };
  UnitField::DualEval dual;
  if (v.has_dual()) dual = [v, iso](const Vec4<Dualf>& y) { return iso.apply(v(iso.apply_inverse(y))); };
  return UnitField(std::move(info), std::move(eval), std::move(dual));
}

}  // namespace hopfcert
