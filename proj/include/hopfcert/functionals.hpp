#pragma once
/// @file functionals.hpp
/// Energy and volume of a unit field over a cap.
///
///   E(v)   = 3/2 vol(K) + 1/2 int_K |nabla v|^2
///   vol(v) = int_K sqrt(1 + sum_a |nabla_a v|^2 + sum_{a<b} |nabla_a v ^ nabla_b v|^2)
///
/// On S^3 the frame has three vectors and nabla v has rank at most two, so
/// the radical above is the complete integrand.

#include <cmath>
#include <cstdint>
#include <vector>

#include "hopfcert/jet_table.hpp"

namespace hopfcert {

struct RuleSummary {
  RuleKind kind = RuleKind::gauss;
  QuadratureOrders orders;
  std::size_t nodes = 0;
  std::uint64_t seed = 0;
};

inline RuleSummary summarize(const QuadratureRule& rule) { return {rule.kind, rule.orders, rule.size(), rule.seed}; }

struct FunctionalReport {
  double value = 0.0;
  /// Energy: 3/2 vol(K). Volume: vol(K).
  double base_term = 0.0;
  /// Energy: int |nabla v|^2. Volume: value - vol(K).
  double derivative_term = 0.0;
  double error = 0.0;
  RuleSummary rule;
  DiffMode mode_used = DiffMode::ad;
};

inline FunctionalReport energy(const QuadratureRule& rule, const JetTable& jets) {
  const IntegrationResult dens = integrate_values(rule, jets.energy_density);
  FunctionalReport r;
  r.base_term = 1.5 * cap_volume(rule.domain);
  r.derivative_term = dens.value;
  r.value = r.base_term + 0.5 * r.derivative_term;
  r.error = 0.5 * dens.error;
  r.rule = summarize(rule);
  r.mode_used = jets.mode_used;
  return r;
}

inline FunctionalReport volume(const QuadratureRule& rule, const JetTable& jets) {
  const IntegrationResult vol = integrate_values(rule, jets.volume_integrand);
  FunctionalReport r;
  r.value = vol.value;
  r.base_term = cap_volume(rule.domain);
  r.derivative_term = r.value - r.base_term;
  r.error = vol.error;
  r.rule = summarize(rule);
  r.mode_used = jets.mode_used;
  return r;
}

inline FunctionalReport energy(const UnitField& v, const QuadratureRule& rule, const DiffOptions& opts = {}) {
  return energy(rule, sample_jets(v, rule, opts));
}
inline FunctionalReport volume(const UnitField& v, const QuadratureRule& rule, const DiffOptions& opts = {}) {
  return volume(rule, sample_jets(v, rule, opts));
}

/// E(v) - (3/2 vol(K) + int sigma_2) = 1/2 int (|nabla v|^2 - 2 sigma_2). Nonnegative pointwise.
inline double energy_lower_bound_gap(const QuadratureRule& rule, const JetTable& jets) {
  std::vector<double> slack(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) slack[i] = 0.5 * (jets.energy_density[i] - 2.0 * jets.sigma2[i]);
  return integrate_values(rule, slack).value;
}
inline double energy_lower_bound_gap(const UnitField& v, const QuadratureRule& rule, const DiffOptions& opts = {}) {
  return energy_lower_bound_gap(rule, sample_jets(v, rule, opts));
}

/// int_K (1 + sigma_2), the lower bound for vol(v) whenever sigma_2 >= -1.
inline double volume_lower_bound(const QuadratureRule& rule, const JetTable& jets) {
  std::vector<double> lb(jets.size());
  for (std::size_t i = 0; i < jets.size(); ++i) lb[i] = 1.0 + jets.sigma2[i];
  return integrate_values(rule, lb).value;
}

/// Values of the Hopf field on the same cap, in closed form: E(H) = 5/2 vol(K), vol(H) = 2 vol(K).
inline double hopf_energy(const CapDomain& k) { return 2.5 * cap_volume(k); }
inline double hopf_volume(const CapDomain& k) { return 2.0 * cap_volume(k); }

}  // namespace hopfcert
