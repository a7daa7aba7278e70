#pragma once
/// @file jet_table.hpp
/// Scalar jet quantities of one field at every node of a rule, computed once
/// and shared by the functionals, the phi map and the checks.

#include <algorithm>
#include <limits>
#include <vector>

#include "hopfcert/calculus.hpp"
#include "hopfcert/quadrature.hpp"

namespace hopfcert {

struct JetTable {
  std::vector<double> sigma1;
  std::vector<double> sigma2;
  std::vector<double> energy_density;
  std::vector<double> volume_integrand;
  DiffMode mode_used = DiffMode::ad;

  std::size_t size() const { return sigma1.size(); }
  double min_sigma2() const {
    return sigma2.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(sigma2.begin(), sigma2.end());
  }
};

inline JetTable sample_jets(const UnitField& v, const QuadratureRule& rule, const DiffOptions& opts = {}) {
  struct Scalars {
    double s1, s2, e, vol;
  };
  const auto rows = parallel_map<Scalars>(rule.size(), [&](std::size_t i) {
    const FieldJet j = field_jet(v, rule.nodes[i].vec(), opts);
    return Scalars{j.sigma1, j.sigma2, j.energy_density, j.volume_integrand};
  });
  JetTable t;
  t.mode_used = (opts.mode == DiffMode::ad && v.has_dual()) ? DiffMode::ad : DiffMode::fd;
  t.sigma1.reserve(rows.size());
  t.sigma2.reserve(rows.size());
  t.energy_density.reserve(rows.size());
  t.volume_integrand.reserve(rows.size());
  for (const auto& r : rows) {
    t.sigma1.push_back(r.s1);
    t.sigma2.push_back(r.s2);
    t.energy_density.push_back(r.e);
    t.volume_integrand.push_back(r.vol);
  }
  return t;
}

}  // namespace hopfcert
