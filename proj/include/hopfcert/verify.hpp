#pragma once
/// @file verify.hpp
/// Named, tolerance-bearing checks of the boundary-rigidity identities and
/// inequalities, the amplitude sweep, and the small-cap counterexample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopfcert/functionals.hpp"
#include "hopfcert/phimap.hpp"

namespace hopfcert {

/// How abs_err and rel_err decide `pass`.
///   absolute     abs_err <= tolerance
///   relative     rel_err <= tolerance
///   abs_or_rel   either of the above
///   lower_bound  lhs >= rhs - tolerance * scale; errors measure the violation only
///   strict_upper lhs < rhs; errors measure the violation only
enum class Policy { absolute, relative, abs_or_rel, lower_bound, strict_upper };

inline const char* to_string(Policy p) {
  switch (p) {
    case Policy::absolute: return "absolute";
    case Policy::relative: return "relative";
    case Policy::abs_or_rel: return "abs_or_rel";
    case Policy::lower_bound: return "lower_bound";
    case Policy::strict_upper: return "strict_upper";
  }
  return "unknown";
}

struct CheckReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  double tolerance = 0.0;
  Policy policy = Policy::relative;
  bool pass = false;
  nlohmann::json context = nlohmann::json::object();
};

/// Equality check. rel_err = abs_err / scale, scale defaulting to |rhs|.
inline CheckReport equality_check(std::string name, double lhs, double rhs, double tolerance, Policy policy,
                                  nlohmann::json context, std::optional<double> scale = std::nullopt) {
  CheckReport r{std::move(name), lhs, rhs, std::fabs(lhs - rhs), 0.0, tolerance, policy, false, std::move(context)};
  const double s = scale.value_or(std::fabs(rhs));
  r.rel_err = s > 0.0 ? r.abs_err / s : r.abs_err;
  switch (policy) {
    case Policy::absolute: r.pass = r.abs_err <= tolerance; break;
    case Policy::relative: r.pass = r.rel_err <= tolerance; break;
    default: r.pass = r.abs_err <= tolerance || r.rel_err <= tolerance; break;
  }
  return r;
}

/// lhs >= rhs - tolerance * scale.
inline CheckReport lower_bound_check(std::string name, double lhs, double rhs, double tolerance, double scale,
                                     nlohmann::json context) {
  CheckReport r{std::move(name), lhs, rhs, std::fmax(0.0, rhs - lhs), 0.0, tolerance, Policy::lower_bound, false,
                std::move(context)};
  r.rel_err = scale > 0.0 ? r.abs_err / scale : r.abs_err;
  r.pass = r.rel_err <= tolerance;
  return r;
}

/// lhs < rhs.
inline CheckReport strict_upper_check(std::string name, double lhs, double rhs, nlohmann::json context) {
  CheckReport r{std::move(name), lhs, rhs, std::fmax(0.0, lhs - rhs), 0.0, 0.0, Policy::strict_upper, lhs < rhs,
                std::move(context)};
  r.rel_err = rhs != 0.0 ? r.abs_err / std::fabs(rhs) : r.abs_err;
  return r;
}

struct Tolerances {
  double hopf_constants_ad = 1e-9;
  double hopf_constants_fd = 1e-6;
  double boundary_identity = 1e-5;
  double sigma1_integral = 1e-5;
  double energy_bound = 1e-6;
  double volume_bound = 1e-6;
  double hopf_equality = 1e-8;
  double energy_gap = 1e-8;
  double image_volume = 1e-6;
  double jacobian = 1e-6;
  double polynomial_fit = 1e-5;
  double sweep_localization = 0.02;
  /// Replaces every tolerance above when set.
  std::optional<double> override_all;

  double pick(double v) const { return override_all.value_or(v); }
  double hopf_constants(DiffMode mode) const {
    return pick(mode == DiffMode::ad ? hopf_constants_ad : hopf_constants_fd);
  }
};

// ---------------------------------------------------------------------------
// Context helpers

inline nlohmann::json cap_json(const CapDomain& k) {
  const Vec4d& c = k.center().vec();
  return {{"center", {c[0], c[1], c[2], c[3]}}, {"radius", k.radius()}};
}

inline nlohmann::json rule_json(const QuadratureRule& rule) {
  return {{"kind", to_string(rule.kind)},
          {"orders", {rule.orders.radial, rule.orders.polar, rule.orders.azimuthal}},
          {"nodes", rule.size()},
          {"seed", rule.seed}};
}

inline nlohmann::json check_context(const UnitField& v, const QuadratureRule& rule, DiffMode mode) {
  return {{"field", v.label()}, {"cap", cap_json(rule.domain)}, {"rule", rule_json(rule)}, {"mode", to_string(mode)}};
}

// ---------------------------------------------------------------------------
// Individual checks

/// Max |sigma_1(H)| and max |sigma_2(H) - 1| over uniformly sampled points of S^3.
inline std::vector<CheckReport> check_hopf_constants(std::size_t samples, std::uint64_t seed, const DiffOptions& opts,
                                                     const Tolerances& tol, const Quatd& axis = kQuatI) {
  const UnitField h = hopf_field(axis);
  std::mt19937_64 rng(seed);
  const CapDomain sphere = CapDomain::full_sphere();
  std::vector<SpherePoint> points;
  points.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) points.push_back(sample_cap_point(sphere, rng));
  struct Pair {
    double s1, s2;
  };
  const auto vals = parallel_map<Pair>(samples, [&](std::size_t i) {
    const FieldJet j = field_jet(h, points[i], opts);
    return Pair{j.sigma1, j.sigma2};
  });
  double max1 = 0.0;
  double max2 = 0.0;
  for (const auto& p : vals) {
    max1 = std::fmax(max1, std::fabs(p.s1));
    max2 = std::fmax(max2, std::fabs(p.s2 - 1.0));
  }
  const double t = tol.hopf_constants(opts.mode);
  const nlohmann::json ctx = {{"field", h.label()}, {"samples", samples}, {"seed", seed}, {"mode", to_string(opts.mode)}};
  return {equality_check("hopf_sigma1_zero", max1, 0.0, t, Policy::absolute, ctx),
          equality_check("hopf_sigma2_one", 1.0 + max2, 1.0, t, Policy::absolute, ctx)};
}

inline void require_hopf_boundary(const UnitField& v, const CapDomain& k, const char* who) {
  if (!v.is_hopf_boundary_on(k))
    throw std::invalid_argument(std::string(who) + ": field '" + v.label() +
                                "' is not known to coincide with a Hopf field on the cap boundary");
}

/// int_K sigma_2(v) = vol(K).
inline CheckReport check_boundary_identity(const UnitField& v, const QuadratureRule& rule, const JetTable& jets,
                                           const Tolerances& tol) {
  require_hopf_boundary(v, rule.domain, "check_boundary_identity");
  const double lhs = integrate_values(rule, jets.sigma2).value;
  return equality_check("boundary_identity_sigma2", lhs, cap_volume(rule.domain), tol.pick(tol.boundary_identity),
                        Policy::relative, check_context(v, rule, jets.mode_used));
}

/// int_K sigma_1(v) = 0, measured relative to vol(K).
inline CheckReport check_sigma1_integral(const UnitField& v, const QuadratureRule& rule, const JetTable& jets,
                                         const Tolerances& tol) {
  require_hopf_boundary(v, rule.domain, "check_sigma1_integral");
  const double lhs = integrate_values(rule, jets.sigma1).value;
  return equality_check("boundary_identity_sigma1", lhs, 0.0, tol.pick(tol.sigma1_integral), Policy::relative,
                        check_context(v, rule, jets.mode_used), cap_volume(rule.domain));
}

/// E(v) >= 5/2 vol(K) = E(H).
inline CheckReport check_energy_bound(const UnitField& v, const QuadratureRule& rule, const JetTable& jets,
                                      const Tolerances& tol) {
  require_hopf_boundary(v, rule.domain, "check_energy_bound");
  const double vol = cap_volume(rule.domain);
  return lower_bound_check("energy_bound", energy(rule, jets).value, hopf_energy(rule.domain),
                           tol.pick(tol.energy_bound), vol, check_context(v, rule, jets.mode_used));
}

/// vol(v) >= 2 vol(K) = vol(H).
inline CheckReport check_volume_bound(const UnitField& v, const QuadratureRule& rule, const JetTable& jets,
                                      const Tolerances& tol) {
  require_hopf_boundary(v, rule.domain, "check_volume_bound");
  const double vol = cap_volume(rule.domain);
  return lower_bound_check("volume_bound", volume(rule, jets).value, hopf_volume(rule.domain),
                           tol.pick(tol.volume_bound), vol, check_context(v, rule, jets.mode_used));
}

/// E(v) - (3/2 vol(K) + int sigma_2) >= -tolerance.
inline CheckReport check_energy_gap(const UnitField& v, const QuadratureRule& rule, const JetTable& jets,
                                    const Tolerances& tol) {
  return lower_bound_check("energy_sigma2_gap", energy_lower_bound_gap(rule, jets), 0.0, tol.pick(tol.energy_gap), 1.0,
                           check_context(v, rule, jets.mode_used));
}

/// vol(v) >= int (1 + sigma_2). When some node has sigma_2 < -1 the report says
/// so and compares against int |1 + sigma_2| instead.
inline CheckReport check_volume_sigma2_chain(const UnitField& v, const QuadratureRule& rule, const JetTable& jets,
                                             const Tolerances& tol) {
  const double min_s2 = jets.min_sigma2();
  const bool floor_ok = min_s2 >= -1.0;
  std::vector<double> lb(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i)
    lb[i] = floor_ok ? 1.0 + jets.sigma2[i] : std::fabs(1.0 + jets.sigma2[i]);
  auto ctx = check_context(v, rule, jets.mode_used);
  ctx["min_sigma2"] = min_s2;
  ctx["sigma2_floor_violated"] = !floor_ok;
  return lower_bound_check("volume_sigma2_chain", volume(rule, jets).value, integrate_values(rule, lb).value,
                           tol.pick(tol.volume_bound), cap_volume(rule.domain), std::move(ctx));
}

/// vol(phi_t(K)) = vol(K) (1 + t^2)^{3/2}.
inline CheckReport check_image_volume(const UnitField& v, const QuadratureRule& rule, const JetTable& jets, double t,
                                      double det_floor, const Tolerances& tol) {
  require_hopf_boundary(v, rule.domain, "check_image_volume");
  auto ctx = check_context(v, rule, jets.mode_used);
  ctx["t"] = t;
  const double expected = cap_volume(rule.domain) * std::pow(1.0 + t * t, 1.5);
  try {
    const ImageVolume iv = image_volume(t, rule, jets, det_floor);
    ctx["min_det_factor"] = iv.min_factor;
    return equality_check("image_volume", iv.value, expected, tol.pick(tol.image_volume), Policy::relative,
                          std::move(ctx));
  } catch (const DetPositivityError& e) {
    ctx["error"] = e.what();
    CheckReport r = equality_check("image_volume", std::numeric_limits<double>::quiet_NaN(), expected, 0.0,
                                   Policy::relative, std::move(ctx));
    r.lhs = 0.0;
    r.abs_err = expected;
    r.rel_err = 1.0;
    r.pass = false;
    return r;
  }
}

/// Least-squares fit of image_volume(t) / sqrt(1 + t^2) over the t grid
/// recovers (vol(K), int sigma_1, int sigma_2).
inline std::vector<CheckReport> check_polynomial_fit(const UnitField& v, const QuadratureRule& rule,
                                                     const JetTable& jets, std::span<const double> t_grid,
                                                     double det_floor, const Tolerances& tol) {
  std::vector<double> vols;
  vols.reserve(t_grid.size());
  for (double t : t_grid) vols.push_back(image_volume(t, rule, jets, det_floor).value);
  const auto c = fit_det_polynomial(t_grid, vols);
  const double vol = cap_volume(rule.domain);
  const double s1 = integrate_values(rule, jets.sigma1).value;
  const double s2 = integrate_values(rule, jets.sigma2).value;
  auto ctx = check_context(v, rule, jets.mode_used);
  ctx["t_grid"] = std::vector<double>(t_grid.begin(), t_grid.end());
  const double t = tol.pick(tol.polynomial_fit);
  return {equality_check("polynomial_fit_c0", c[0], vol, t, Policy::relative, ctx, vol),
          equality_check("polynomial_fit_c1", c[1], s1, t, Policy::relative, ctx, vol),
          equality_check("polynomial_fit_c2", c[2], s2, t, Policy::relative, ctx, vol)};
}

/// Worst relative disagreement between the closed-form and the direct Jacobian
/// determinant over random points of the cap and random t in (0, t_max].
inline CheckReport check_jacobian_identity(const UnitField& v, const CapDomain& k, std::size_t samples,
                                           std::uint64_t seed, double t_max, const DiffOptions& opts,
                                           const Tolerances& tol) {
  std::mt19937_64 rng(seed);
  double worst = -1.0;
  double worst_numeric = 0.0;
  double worst_analytic = 0.0;
  double worst_t = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const SpherePoint x = sample_cap_point(k, rng);
    const double t = t_max * (1.0 - detail::unit_uniform(rng));
    const PhiParams p(t, v);
    const double analytic = jacobian_det_analytic(p, x, opts);
    const double numeric = jacobian_det_numeric(p, x, opts).det;
    const double rel = std::fabs(numeric - analytic) / std::fabs(analytic);
    if (rel > worst) {
      worst = rel;
      worst_numeric = numeric;
      worst_analytic = analytic;
      worst_t = t;
    }
  }
  nlohmann::json ctx = {{"field", v.label()}, {"cap", cap_json(k)},         {"samples", samples},
                        {"seed", seed},       {"t_max", t_max},             {"worst_t", worst_t},
                        {"mode", to_string(opts.mode)}};
  return equality_check("jacobian_identity", worst_numeric, worst_analytic, tol.pick(tol.jacobian), Policy::relative,
                        std::move(ctx));
}

// ---------------------------------------------------------------------------
// Sweep over the perturbation amplitude

struct SweepResult {
  std::vector<double> amplitudes;
  std::vector<double> energies;
  std::vector<double> volumes;
  std::size_t argmin_energy = 0;
  std::size_t argmin_volume = 0;
  /// Golden-section minimizers in the bracket around the grid argmin.
  double refined_energy_argmin = 0.0;
  double refined_volume_argmin = 0.0;
  /// Values are nonincreasing before the argmin and nondecreasing after it.
  bool energy_unimodal = false;
  bool volume_unimodal = false;
};

struct SweepFamily {
  int exponent = 3;
  Twist twist;
  HopfTriple triple;
};

/// Minimizer of f on [lo, hi] by golden-section search to absolute width `tol`.
template <typename F>
double golden_section_minimize(F f, double lo, double hi, double tol = 1e-4) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace detail {

inline bool unimodal_about(const std::vector<double>& ys, std::size_t argmin) {
  for (std::size_t i = 0; i + 1 <= argmin && i + 1 < ys.size(); ++i)
    if (ys[i + 1] > ys[i]) return false;
  for (std::size_t i = argmin; i + 1 < ys.size(); ++i)
    if (ys[i + 1] < ys[i]) return false;
  return true;
}

}  // namespace detail

inline SweepResult sweep_family(const CapDomain& k, std::vector<double> amplitudes, const QuadratureRule& rule,
                                const SweepFamily& family = {}, const DiffOptions& opts = {}, bool refine = true) {
  std::sort(amplitudes.begin(), amplitudes.end());
  if (std::find(amplitudes.begin(), amplitudes.end(), 0.0) == amplitudes.end())
    throw std::invalid_argument("sweep_family: the amplitude grid must contain 0");
  auto evaluate = [&](double a) {
    const UnitField v = perturbed_field(k, {a, family.exponent}, family.twist, family.triple);
    const JetTable jets = sample_jets(v, rule, opts);
    return std::pair{energy(rule, jets).value, volume(rule, jets).value};
  };
  SweepResult s;
  s.amplitudes = amplitudes;
  for (double a : amplitudes) {
    const auto [e, vol] = evaluate(a);
    s.energies.push_back(e);
    s.volumes.push_back(vol);
  }
  auto argmin = [](const std::vector<double>& ys) {
    return static_cast<std::size_t>(std::min_element(ys.begin(), ys.end()) - ys.begin());
  };
  s.argmin_energy = argmin(s.energies);
  s.argmin_volume = argmin(s.volumes);
  s.energy_unimodal = detail::unimodal_about(s.energies, s.argmin_energy);
  s.volume_unimodal = detail::unimodal_about(s.volumes, s.argmin_volume);
  s.refined_energy_argmin = amplitudes[s.argmin_energy];
  s.refined_volume_argmin = amplitudes[s.argmin_volume];
  if (refine && amplitudes.size() > 1) {
    auto bracket = [&](std::size_t i) {
      const double lo = i > 0 ? amplitudes[i - 1] : amplitudes[i];
      const double hi = i + 1 < amplitudes.size() ? amplitudes[i + 1] : amplitudes[i];
      return std::pair{lo, hi};
    };
    const auto [elo, ehi] = bracket(s.argmin_energy);
    s.refined_energy_argmin = golden_section_minimize([&](double a) { return evaluate(a).first; }, elo, ehi);
    const auto [vlo, vhi] = bracket(s.argmin_volume);
    s.refined_volume_argmin = golden_section_minimize([&](double a) { return evaluate(a).second; }, vlo, vhi);
  }
  return s;
}

inline std::vector<CheckReport> sweep_checks(const SweepResult& s, const CapDomain& k, const QuadratureRule& rule,
                                             const SweepFamily& family, const Tolerances& tol) {
  nlohmann::json ctx = {{"family", {{"exponent", family.exponent}, {"twist", to_string(family.twist.kind)}}},
                        {"cap", cap_json(k)},
                        {"rule", rule_json(rule)},
                        {"amplitudes", s.amplitudes}};
  const double loc = tol.pick(tol.sweep_localization);
  return {equality_check("sweep_argmin_energy", s.amplitudes[s.argmin_energy], 0.0, 0.0, Policy::absolute, ctx),
          equality_check("sweep_argmin_volume", s.amplitudes[s.argmin_volume], 0.0, 0.0, Policy::absolute, ctx),
          equality_check("sweep_refined_energy_argmin", s.refined_energy_argmin, 0.0, loc, Policy::absolute, ctx),
          equality_check("sweep_refined_volume_argmin", s.refined_volume_argmin, 0.0, loc, Policy::absolute, ctx)};
}

// ---------------------------------------------------------------------------
// Small-cap counterexample: without the boundary constraint the Hopf field loses.

struct SmallCapStats {
  double radius = 0.0;
  double energy = 0.0;
  double volume = 0.0;
  /// mean |nabla v|^2 over the cap
  double mean_density = 0.0;
};

inline SmallCapStats small_cap_stats(const CapDomain& k, const QuadratureOrders& orders, const DiffOptions& opts = {}) {
  const UnitField v = small_cap_field(k, default_small_cap_seed(k));
  const QuadratureRule rule = build_gauss_rule(k, orders);
  const JetTable jets = sample_jets(v, rule, opts);
  const FunctionalReport e = energy(rule, jets);
  return {k.radius(), e.value, volume(rule, jets).value, e.derivative_term / cap_volume(k)};
}

/// Slope of log(mean density) against log(r) and the fitted constant C in C r^2.
struct ScalingFit {
  double slope = 0.0;
  double coefficient = 0.0;
};

inline ScalingFit fit_small_cap_scaling(std::span<const SmallCapStats> stats) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, num = 0, den = 0;
  const double n = static_cast<double>(stats.size());
  for (const auto& s : stats) {
    const double x = std::log(s.radius);
    const double y = std::log(s.mean_density);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    const double r2 = s.radius * s.radius;
    num += r2 * s.mean_density;
    den += r2 * r2;
  }
  return {(n * sxy - sx * sy) / (n * sxx - sx * sx), num / den};
}

inline std::vector<CheckReport> check_small_cap_counterexample(const CapDomain& k, const QuadratureOrders& orders,
                                                               const DiffOptions& opts = {}) {
  const SmallCapStats s = small_cap_stats(k, orders, opts);
  std::vector<SmallCapStats> scaling;
  for (double r : {0.05, 0.1, 0.2}) scaling.push_back(small_cap_stats(CapDomain(k.center(), r), orders, opts));
  const ScalingFit fit = fit_small_cap_scaling(scaling);

  nlohmann::json ctx = {{"field", "small-cap"}, {"cap", cap_json(k)}, {"mode", to_string(opts.mode)},
                        {"orders", {orders.radial, orders.polar, orders.azimuthal}}};
  nlohmann::json fit_ctx = ctx;
  fit_ctx["radii"] = {0.05, 0.1, 0.2};
  fit_ctx["coefficient"] = fit.coefficient;
  return {strict_upper_check("small_cap_energy_below_hopf", s.energy, hopf_energy(k), ctx),
          strict_upper_check("small_cap_volume_below_hopf", s.volume, hopf_volume(k), ctx),
          strict_upper_check("small_cap_mean_density", s.mean_density, 0.1, ctx),
          equality_check("small_cap_density_scaling_exponent", fit.slope, 2.0, 0.1, Policy::absolute, fit_ctx)};
}

// ---------------------------------------------------------------------------
// Full harness

struct FieldSpec {
  FieldKind kind = FieldKind::hopf;
  BumpProfile bump;
  Twist twist;
  Quatd axis = kQuatI;
  /// Seed vector at the cap center for small-cap fields; defaults to i c.
  std::optional<Vec4d> u0;
};

inline UnitField make_field(const FieldSpec& spec, const CapDomain& k) {
  switch (spec.kind) {
    case FieldKind::hopf: return hopf_field(spec.axis);
    case FieldKind::perturbed: return perturbed_field(k, spec.bump, spec.twist, hopf_triple(spec.axis));
    case FieldKind::small_cap:
      return small_cap_field(k, spec.u0 ? TangentVector(k.center(), *spec.u0) : default_small_cap_seed(k));
    case FieldKind::custom: break;
  }
  throw std::invalid_argument("make_field: custom fields cannot be built from a spec");
}

struct VerifyConfig {
  std::vector<FieldSpec> fields{FieldSpec{}};
  std::vector<CapDomain> caps{CapDomain(SpherePoint(), 1.0)};
  RuleKind rule_kind = RuleKind::gauss;
  QuadratureOrders orders;
  std::size_t mc_samples = 200000;
  std::uint64_t seed = 1;
  std::vector<double> t_grid{0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
  double det_floor = kDefaultDetFloor;
  DiffOptions diff;
  Tolerances tol;
  std::size_t hopf_samples = 100000;
  std::size_t jacobian_samples = 1000;
  double jacobian_t_max = 0.3;
  /// Amplitude grid of the sweep; empty disables it.
  std::vector<double> sweep_amplitudes;
  SweepFamily sweep_family;
  /// Directory of cached rules; empty disables caching.
  std::filesystem::path rule_cache;
};

inline QuadratureRule build_rule(const VerifyConfig& cfg, const CapDomain& k) {
  auto build = [&] {
    return cfg.rule_kind == RuleKind::gauss ? build_gauss_rule(k, cfg.orders) : build_mc_rule(k, cfg.mc_samples, cfg.seed);
  };
  if (cfg.rule_cache.empty()) return build();
  const auto path = cfg.rule_cache / (rule_cache_key(k, cfg.rule_kind, cfg.orders, cfg.mc_samples, cfg.seed) + ".cbor");
  if (std::filesystem::exists(path)) return load_rule(path);
  std::filesystem::create_directories(cfg.rule_cache);
  QuadratureRule rule = build();
  save_rule(rule, path);
  return rule;
}

/// Checks of one field on one cap, given its rule.
inline std::vector<CheckReport> field_checks(const UnitField& v, const QuadratureRule& rule, const VerifyConfig& cfg) {
  std::vector<CheckReport> out;
  const CapDomain& k = rule.domain;
  if (v.kind() == FieldKind::small_cap) return check_small_cap_counterexample(k, cfg.orders, cfg.diff);

  const JetTable jets = sample_jets(v, rule, cfg.diff);
  out.push_back(check_jacobian_identity(v, k, cfg.jacobian_samples, cfg.seed, cfg.jacobian_t_max, cfg.diff, cfg.tol));
  out.push_back(check_energy_gap(v, rule, jets, cfg.tol));
  out.push_back(check_volume_sigma2_chain(v, rule, jets, cfg.tol));
  if (!v.is_hopf_boundary_on(k)) return out;

  out.push_back(check_boundary_identity(v, rule, jets, cfg.tol));
  out.push_back(check_sigma1_integral(v, rule, jets, cfg.tol));
  out.push_back(check_energy_bound(v, rule, jets, cfg.tol));
  out.push_back(check_volume_bound(v, rule, jets, cfg.tol));
  if (v.kind() == FieldKind::hopf) {
    const auto ctx = check_context(v, rule, jets.mode_used);
    const double eq = cfg.tol.pick(cfg.tol.hopf_equality);
    out.push_back(equality_check("energy_equality_at_hopf", energy(rule, jets).value, hopf_energy(k), eq,
                                 Policy::relative, ctx));
    out.push_back(equality_check("volume_equality_at_hopf", volume(rule, jets).value, hopf_volume(k), eq,
                                 Policy::relative, ctx));
  }
  for (double t : cfg.t_grid) out.push_back(check_image_volume(v, rule, jets, t, cfg.det_floor, cfg.tol));
  if (cfg.t_grid.size() >= 3) {
    try {
      for (auto& r : check_polynomial_fit(v, rule, jets, cfg.t_grid, cfg.det_floor, cfg.tol)) out.push_back(std::move(r));
    } catch (const DetPositivityError&) {
      // already reported by the failing image_volume check
    }
  }
  return out;
}

/// Every configured check; an empty field list yields an empty report.
inline std::vector<CheckReport> run_all(const VerifyConfig& cfg) {
  std::vector<CheckReport> out;
  if (cfg.fields.empty()) return out;
  for (const auto& spec : cfg.fields) {
    if (spec.kind == FieldKind::hopf) {
      for (auto& r : check_hopf_constants(cfg.hopf_samples, cfg.seed, cfg.diff, cfg.tol, spec.axis))
        out.push_back(std::move(r));
    }
    for (const auto& k : cfg.caps) {
      const QuadratureRule rule = build_rule(cfg, k);
      for (auto& r : field_checks(make_field(spec, k), rule, cfg)) out.push_back(std::move(r));
    }
  }
  if (!cfg.sweep_amplitudes.empty()) {
    for (const auto& k : cfg.caps) {
      const QuadratureRule rule = build_rule(cfg, k);
      const SweepResult s = sweep_family(k, cfg.sweep_amplitudes, rule, cfg.sweep_family, cfg.diff);
      for (auto& r : sweep_checks(s, k, rule, cfg.sweep_family, cfg.tol)) out.push_back(std::move(r));
    }
  }
  return out;
}

inline bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

}  // namespace hopfcert
