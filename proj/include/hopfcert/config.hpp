#pragma once
/// @file config.hpp
/// Run configuration shared by the command-line tool and tests: defaults,
/// validation, JSON round trip, and translation into a VerifyConfig.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopfcert/verify.hpp"

namespace hopfcert {

/// Invalid configuration (bad flag value, out-of-range radius, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command = "verify";
  std::array<double, 4> cap_center{1.0, 0.0, 0.0, 0.0};
  double cap_radius = 1.0;
  std::string field = "hopf";
  double amplitude = 0.5;
  int exponent = 3;
  std::string twist = "none";
  double twist_angle = 0.0;
  /// Imaginary components of the Hopf axis.
  std::array<double, 3> axis{1.0, 0.0, 0.0};
  std::string rule_kind = "gauss";
  std::array<int, 3> orders{64, 32, 64};
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 1;
  std::vector<double> t_grid{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  double det_floor = kDefaultDetFloor;
  std::optional<double> tolerance;
  std::string mode = "ad";
  double fd_step = 1e-5;
  std::vector<double> amplitudes{-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0};
  bool with_sweep = false;
  std::size_t hopf_samples = 100000;
  std::size_t jacobian_samples = 1000;
  std::string rule_cache;
  std::string output;
  std::string format = "json";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"command", c.command},
       {"cap_center", c.cap_center},
       {"cap_radius", c.cap_radius},
       {"field", c.field},
       {"amplitude", c.amplitude},
       {"exponent", c.exponent},
       {"twist", c.twist},
       {"twist_angle", c.twist_angle},
       {"axis", c.axis},
       {"rule_kind", c.rule_kind},
       {"orders", c.orders},
       {"mc_samples", c.mc_samples},
       {"seed", c.seed},
       {"t_grid", c.t_grid},
       {"det_floor", c.det_floor},
       {"tolerance", c.tolerance ? nlohmann::json(*c.tolerance) : nlohmann::json(nullptr)},
       {"mode", c.mode},
       {"fd_step", c.fd_step},
       {"amplitudes", c.amplitudes},
       {"with_sweep", c.with_sweep},
       {"hopf_samples", c.hopf_samples},
       {"jacobian_samples", c.jacobian_samples},
       {"rule_cache", c.rule_cache},
       {"output", c.output},
       {"format", c.format}};
}

/// Missing keys keep their defaults.
inline void from_json(const nlohmann::json& j, RunConfig& c) {
  auto get = [&](const char* key, auto& dst) {
    if (j.contains(key)) j.at(key).get_to(dst);
  };
  get("command", c.command);
  get("cap_center", c.cap_center);
  get("cap_radius", c.cap_radius);
  get("field", c.field);
  get("amplitude", c.amplitude);
  get("exponent", c.exponent);
  get("twist", c.twist);
  get("twist_angle", c.twist_angle);
  get("axis", c.axis);
  get("rule_kind", c.rule_kind);
  get("orders", c.orders);
  get("mc_samples", c.mc_samples);
  get("seed", c.seed);
  get("t_grid", c.t_grid);
  get("det_floor", c.det_floor);
  if (j.contains("tolerance")) {
    if (j.at("tolerance").is_null()) c.tolerance.reset();
    else c.tolerance = j.at("tolerance").get<double>();
  }
  get("mode", c.mode);
  get("fd_step", c.fd_step);
  get("amplitudes", c.amplitudes);
  get("with_sweep", c.with_sweep);
  get("hopf_samples", c.hopf_samples);
  get("jacobian_samples", c.jacobian_samples);
  get("rule_cache", c.rule_cache);
  get("output", c.output);
  get("format", c.format);
}

inline CapDomain cap_of(const RunConfig& c) {
  const Vec4d center{c.cap_center[0], c.cap_center[1], c.cap_center[2], c.cap_center[3]};
  return CapDomain(SpherePoint::normalize(center), c.cap_radius);
}

inline Quatd axis_of(const RunConfig& c) {
  const Quatd q{0.0, c.axis[0], c.axis[1], c.axis[2]};
  return Quatd::from_vec(normalized(q.vec()));
}

inline FieldSpec field_spec_of(const RunConfig& c) {
  FieldSpec spec;
  if (c.field == "hopf") spec.kind = FieldKind::hopf;
  else if (c.field == "perturbed") spec.kind = FieldKind::perturbed;
  else if (c.field == "small-cap") spec.kind = FieldKind::small_cap;
  else throw ConfigError("unknown field '" + c.field + "' (expected hopf, perturbed or small-cap)");
  spec.bump = {c.amplitude, c.exponent};
  if (c.twist == "none") spec.twist = {TwistKind::none, 0.0};
  else if (c.twist == "constant") spec.twist = {TwistKind::constant, c.twist_angle};
  else if (c.twist == "angular") spec.twist = {TwistKind::angular, c.twist_angle};
  else throw ConfigError("unknown twist '" + c.twist + "' (expected none, constant or angular)");
  spec.axis = axis_of(c);
  return spec;
}

inline DiffOptions diff_of(const RunConfig& c) {
  if (c.mode != "ad" && c.mode != "fd") throw ConfigError("mode must be ad or fd, got '" + c.mode + "'");
  return {c.mode == "ad" ? DiffMode::ad : DiffMode::fd, c.fd_step};
}

/// Throws ConfigError on the first invalid setting.
inline void validate(const RunConfig& c) {
  if (c.command != "verify" && c.command != "functionals" && c.command != "sweep")
    throw ConfigError("unknown command '" + c.command + "'");
  if (!(c.cap_radius > 0.0) || c.cap_radius > kPi) throw ConfigError("cap radius must lie in (0, pi]");
  double n2 = 0.0;
  for (double x : c.cap_center) n2 += x * x;
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw ConfigError("cap center must be a nonzero finite 4-vector");
  double a2 = 0.0;
  for (double x : c.axis) a2 += x * x;
  if (!(a2 > 0.0) || !std::isfinite(a2)) throw ConfigError("axis must be a nonzero imaginary quaternion");
  if (c.exponent < 2) throw ConfigError("bump exponent must be >= 2");
  if (!std::isfinite(c.amplitude)) throw ConfigError("amplitude must be finite");
  if (c.rule_kind != "gauss" && c.rule_kind != "montecarlo") throw ConfigError("rule kind must be gauss or montecarlo");
  for (int o : c.orders)
    if (o < 4) throw ConfigError("quadrature orders must be >= 4");
  if (c.rule_kind == "montecarlo" && c.mc_samples < 1000) throw ConfigError("Monte Carlo rules need >= 1000 samples");
  for (double t : c.t_grid)
    if (!(t > 0.0) || t > kDefaultTMax) throw ConfigError("t grid values must lie in (0, 0.5]");
  if (!(c.det_floor > 0.0)) throw ConfigError("det floor must be positive");
  if (c.tolerance && !(*c.tolerance >= 0.0)) throw ConfigError("tolerance must be nonnegative");
  if (!(c.fd_step > 0.0)) throw ConfigError("fd step must be positive");
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
  diff_of(c);
  const FieldSpec spec = field_spec_of(c);
  if (spec.kind == FieldKind::small_cap && !(c.cap_radius < kPi)) throw ConfigError("small-cap field needs radius < pi");
  if (spec.kind == FieldKind::perturbed && spec.twist.kind == TwistKind::angular && !(c.cap_radius < kPi / 2.0))
    throw ConfigError("angular twist needs cap radius < pi/2");
  if (c.command == "sweep" || c.with_sweep) {
    bool has_zero = false;
    for (double a : c.amplitudes) has_zero = has_zero || a == 0.0;
    if (!has_zero) throw ConfigError("sweep amplitude grid must contain 0");
  }
}

inline QuadratureOrders orders_of(const RunConfig& c) { return {c.orders[0], c.orders[1], c.orders[2]}; }

inline VerifyConfig to_verify_config(const RunConfig& c) {
  validate(c);
  VerifyConfig v;
  v.fields = {field_spec_of(c)};
  v.caps = {cap_of(c)};
  v.rule_kind = c.rule_kind == "gauss" ? RuleKind::gauss : RuleKind::montecarlo;
  v.orders = orders_of(c);
  v.mc_samples = c.mc_samples;
  v.seed = c.seed;
  v.t_grid = c.t_grid;
  v.det_floor = c.det_floor;
  v.diff = diff_of(c);
  v.tol.override_all = c.tolerance;
  v.hopf_samples = c.hopf_samples;
  v.jacobian_samples = c.jacobian_samples;
  if (c.with_sweep) v.sweep_amplitudes = c.amplitudes;
  v.sweep_family.exponent = c.exponent;
  v.sweep_family.twist = v.fields.front().twist;
  v.sweep_family.triple = hopf_triple(v.fields.front().axis);
  v.rule_cache = c.rule_cache;
  return v;
}

}  // namespace hopfcert
