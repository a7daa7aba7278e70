#pragma once
/// @file quadrature.hpp
/// Integration over geodesic caps. Tensor Gauss rules in geodesic polar
/// coordinates about the cap center, and Monte Carlo rules for cross-checks.
///
/// Node evaluation may run on several threads; every reduction is a pairwise
/// sum in node order, so a result depends only on the rule and the integrand.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "hopfcert/geom.hpp"

namespace hopfcert {

enum class RuleKind { gauss, montecarlo };

inline const char* to_string(RuleKind k) { return k == RuleKind::gauss ? "gauss" : "montecarlo"; }

struct QuadratureOrders {
  int radial = 64;
  int polar = 32;
  int azimuthal = 64;

  friend bool operator==(const QuadratureOrders&, const QuadratureOrders&) = default;
};

struct QuadratureRule {
  CapDomain domain = CapDomain::full_sphere();
  RuleKind kind = RuleKind::gauss;
  QuadratureOrders orders;
  std::uint64_t seed = 0;
  std::vector<SpherePoint> nodes;
  /// Volume-measure weights. Monte Carlo rules carry vol(K)/n for every node.
  std::vector<double> weights;
  /// Gauss: weight-sum defect against the closed-form cap volume. Monte Carlo: 0
  /// (the integrand-dependent standard error is reported by integrate()).
  double estimated_error = 0.0;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::fabs(step) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    nodes[lo] = -z;
    nodes[hi] = z;
    weights[lo] = w;
    weights[hi] = w;
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

/// Point at geodesic polar coordinates (rho, theta, phi) about the cap center.
inline Vec4d cap_point(const CapDomain& k, double rho, double theta, double phi) {
  const auto b = k.tangent_basis();
  const Vec4d dir = std::cos(theta) * b[0] + std::sin(theta) * (std::cos(phi) * b[1] + std::sin(phi) * b[2]);
  return std::cos(rho) * k.center().vec() + std::sin(rho) * dir;
}

/// Tensor rule with volume element sin^2(rho) sin(theta): Gauss-Legendre in rho
/// and theta, periodic trapezoid in phi.
inline QuadratureRule build_gauss_rule(const CapDomain& k, const QuadratureOrders& orders = {}) {
  if (orders.radial < 4 || orders.polar < 4 || orders.azimuthal < 4)
    throw std::invalid_argument("build_gauss_rule: every order must be >= 4");
  QuadratureRule rule;
  rule.domain = k;
  rule.kind = RuleKind::gauss;
  rule.orders = orders;

  std::vector<double> xr, wr, xt, wt;
  gauss_legendre(orders.radial, xr, wr);
  gauss_legendre(orders.polar, xt, wt);
  const double r = k.radius();
  const double dphi = 2.0 * kPi / orders.azimuthal;

  const std::size_t total = xr.size() * xt.size() * static_cast<std::size_t>(orders.azimuthal);
  rule.nodes.reserve(total);
  rule.weights.reserve(total);
  for (std::size_t a = 0; a < xr.size(); ++a) {
    const double rho = 0.5 * r * (xr[a] + 1.0);
    const double s = std::sin(rho);
    const double w_rho = 0.5 * r * wr[a] * s * s;
    for (std::size_t b = 0; b < xt.size(); ++b) {
      const double theta = 0.5 * kPi * (xt[b] + 1.0);
      const double w_theta = 0.5 * kPi * wt[b] * std::sin(theta);
      for (int c = 0; c < orders.azimuthal; ++c) {
        const double phi = dphi * (c + 0.5);
        rule.nodes.push_back(SpherePoint::normalize(cap_point(k, rho, theta, phi)));
        rule.weights.push_back(w_rho * w_theta * dphi);
      }
    }
  }
  double sum = 0.0;
  for (double w : rule.weights) sum += w;
  rule.estimated_error = std::fabs(sum - cap_volume(k));
  return rule;
}

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Solves (2 rho - sin 2 rho) = u (2 r - sin 2 r) for rho in [0, r].
inline double inverse_radial_cdf(double u, double r) {
  const double target = u * (2.0 * r - std::sin(2.0 * r));
  double lo = 0.0;
  double hi = r;
  double rho = u * r;
  for (int iter = 0; iter < 200; ++iter) {
    const double g = 2.0 * rho - std::sin(2.0 * rho) - target;
    if (g > 0.0) hi = rho;
    else lo = rho;
    const double dg = 2.0 - 2.0 * std::cos(2.0 * rho);
    double next = dg > 0.0 ? rho - g / dg : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - rho) < 1e-15 * std::fmax(1.0, r)) return next;
    rho = next;
  }
  return rho;
}

}  // namespace detail

/// Uniform random point of the cap: inverse CDF in rho (density proportional
/// to sin^2 rho), uniform direction on the unit 2-sphere of the tangent space.
inline SpherePoint sample_cap_point(const CapDomain& k, std::mt19937_64& rng) {
  double rho = detail::inverse_radial_cdf(detail::unit_uniform(rng), k.radius());
  // keep samples strictly interior
  rho = std::clamp(rho, 1e-300, std::nextafter(k.radius(), 0.0));
  const double z = 2.0 * detail::unit_uniform(rng) - 1.0;
  const double phi = 2.0 * kPi * detail::unit_uniform(rng);
  return SpherePoint::normalize(cap_point(k, rho, std::acos(z), phi));
}

inline QuadratureRule build_mc_rule(const CapDomain& k, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1000) throw std::invalid_argument("build_mc_rule: needs at least 1000 samples");
  QuadratureRule rule;
  rule.domain = k;
  rule.kind = RuleKind::montecarlo;
  rule.orders = {0, 0, 0};
  rule.seed = seed;
  std::mt19937_64 rng(seed);
  rule.nodes.reserve(n_samples);
  rule.weights.assign(n_samples, cap_volume(k) / static_cast<double>(n_samples));
  for (std::size_t i = 0; i < n_samples; ++i) rule.nodes.push_back(sample_cap_point(k, rng));
  return rule;
}

/// Pairwise (cascade) summation in index order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Worker count for node evaluation: HOPFCERT_THREADS or the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("HOPFCERT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[i] = fn(i) for i in [0, n). Results land in index order regardless of scheduling.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t n, Fn fn) {
  std::vector<R> out(n);
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / 256)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += workers) out[i] = fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct IntegrationResult {
  double value = 0.0;
  /// Monte Carlo: sample standard deviation times vol(K)/sqrt(n).
  /// Gauss: weight-sum defect scaled by |value| plus a rounding floor.
  double error = 0.0;
};

class NonFiniteIntegrand : public std::runtime_error {
 public:
  NonFiniteIntegrand(std::size_t index, const SpherePoint& node, double value)
      : std::runtime_error(describe(index, node, value)), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  static std::string describe(std::size_t index, const SpherePoint& node, double value) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "integrand is " << value << " at node " << index << ' ' << node.vec();
    return msg.str();
  }
  std::size_t index_;
};

/// Integrates precomputed node values (values[i] belongs to rule.nodes[i]).
inline IntegrationResult integrate_values(const QuadratureRule& rule, std::span<const double> values) {
  if (values.size() != rule.size()) throw std::invalid_argument("integrate_values: value count does not match the rule");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isfinite(values[i])) throw NonFiniteIntegrand(i, rule.nodes[i], values[i]);

  IntegrationResult out;
  const double n = static_cast<double>(values.size());
  if (rule.kind == RuleKind::montecarlo) {
    const double vol = cap_volume(rule.domain);
    const double mean = pairwise_sum(values) / n;
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    const double var = pairwise_sum(sq) / (n - 1.0);
    out.value = vol * mean;
    out.error = std::sqrt(var) * vol / std::sqrt(n);
    return out;
  }
  std::vector<double> terms(values.size());
  std::vector<double> mags(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    terms[i] = rule.weights[i] * values[i];
    mags[i] = std::fabs(terms[i]);
  }
  out.value = pairwise_sum(terms);
  const double vol = cap_volume(rule.domain);
  out.error = rule.estimated_error / vol * std::fabs(out.value) + 1e-16 * std::log2(n + 1.0) * pairwise_sum(mags);
  return out;
}

template <typename Fn>
IntegrationResult integrate(const QuadratureRule& rule, Fn f) {
  const auto values = parallel_map<double>(rule.size(), [&](std::size_t i) { return static_cast<double>(f(rule.nodes[i])); });
  return integrate_values(rule, values);
}

// Serialization: rules cache as CBOR-encoded JSON keyed by (center, radius, orders, kind, seed).

inline nlohmann::json to_json(const QuadratureRule& rule) {
  nlohmann::json j;
  const Vec4d& c = rule.domain.center().vec();
  j["center"] = {c[0], c[1], c[2], c[3]};
  j["radius"] = rule.domain.radius();
  j["kind"] = to_string(rule.kind);
  j["orders"] = {rule.orders.radial, rule.orders.polar, rule.orders.azimuthal};
  j["seed"] = rule.seed;
  j["estimated_error"] = rule.estimated_error;
  std::vector<double> flat;
  flat.reserve(rule.size() * 4);
  for (const auto& p : rule.nodes)
    for (std::size_t k = 0; k < 4; ++k) flat.push_back(p[k]);
  j["nodes"] = flat;
  j["weights"] = rule.weights;
  return j;
}

inline QuadratureRule rule_from_json(const nlohmann::json& j) {
  QuadratureRule rule;
  const auto c = j.at("center").get<std::vector<double>>();
  if (c.size() != 4) throw std::invalid_argument("rule_from_json: center needs 4 components");
  rule.domain = CapDomain(SpherePoint::adopt({c[0], c[1], c[2], c[3]}), j.at("radius").get<double>());
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gauss") rule.kind = RuleKind::gauss;
  else if (kind == "montecarlo") rule.kind = RuleKind::montecarlo;
  else throw std::invalid_argument("rule_from_json: unknown kind " + kind);
  const auto o = j.at("orders").get<std::vector<int>>();
  if (o.size() != 3) throw std::invalid_argument("rule_from_json: orders needs 3 entries");
  rule.orders = {o[0], o[1], o[2]};
  rule.seed = j.at("seed").get<std::uint64_t>();
  rule.estimated_error = j.at("estimated_error").get<double>();
  const auto flat = j.at("nodes").get<std::vector<double>>();
  rule.weights = j.at("weights").get<std::vector<double>>();
  if (flat.size() != 4 * rule.weights.size()) throw std::invalid_argument("rule_from_json: node/weight count mismatch");
  rule.nodes.reserve(rule.weights.size());
  for (std::size_t i = 0; i < rule.weights.size(); ++i)
    rule.nodes.push_back(SpherePoint::adopt({flat[4 * i], flat[4 * i + 1], flat[4 * i + 2], flat[4 * i + 3]}));
  return rule;
}

inline std::string rule_cache_key(const CapDomain& k, RuleKind kind, const QuadratureOrders& orders,
                                  std::size_t samples, std::uint64_t seed) {
  std::ostringstream key;
  key << std::hexfloat;
  const Vec4d& c = k.center().vec();
  key << to_string(kind) << '_' << c[0] << '_' << c[1] << '_' << c[2] << '_' << c[3] << '_' << k.radius();
  if (kind == RuleKind::gauss) key << '_' << orders.radial << 'x' << orders.polar << 'x' << orders.azimuthal;
  else key << '_' << samples << "_s" << seed;
  std::string s = key.str();
  for (char& ch : s)
    if (ch == '.' || ch == '+' || ch == '-') ch = (ch == '-') ? 'm' : 'p';
  return s;
}

inline void save_rule(const QuadratureRule& rule, const std::filesystem::path& path) {
  const auto bytes = nlohmann::json::to_cbor(to_json(rule));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_rule: cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline QuadratureRule load_rule(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_rule: cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return rule_from_json(nlohmann::json::from_cbor(bytes));
}

}  // namespace hopfcert
