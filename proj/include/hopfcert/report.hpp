#pragma once
/// @file report.hpp
/// JSON and CSV encodings of check reports, sweeps and functional summaries.
/// Encodings are stable: keys sorted, doubles printed with 17 significant digits.

#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopfcert/verify.hpp"

namespace hopfcert {

inline constexpr std::array<const char*, 9> kCheckReportFields{"name",    "lhs",       "rhs",    "abs_err", "rel_err",
                                                               "tolerance", "policy", "pass",   "context"};

inline nlohmann::json to_json(const CheckReport& r) {
  return {{"name", r.name},           {"lhs", r.lhs},         {"rhs", r.rhs},
          {"abs_err", r.abs_err},     {"rel_err", r.rel_err}, {"tolerance", r.tolerance},
          {"policy", to_string(r.policy)}, {"pass", r.pass},  {"context", r.context}};
}

inline nlohmann::json to_json(const std::vector<CheckReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return os.str();
}

inline std::string checks_to_json_text(const std::vector<CheckReport>& reports) { return to_json(reports).dump(2) + "\n"; }

inline std::string checks_to_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "name,lhs,rhs,abs_err,rel_err,tolerance,policy,pass\n";
  for (const auto& r : reports) {
    os << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.abs_err) << ','
       << format_double(r.rel_err) << ',' << format_double(r.tolerance) << ',' << to_string(r.policy) << ','
       << (r.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

/// One row per amplitude: amplitude,energy,volume.
inline std::string sweep_to_csv(const SweepResult& s) {
  std::ostringstream os;
  os << "amplitude,energy,volume\n";
  for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
    os << format_double(s.amplitudes[i]) << ',' << format_double(s.energies[i]) << ',' << format_double(s.volumes[i])
       << '\n';
  return os.str();
}

inline nlohmann::json to_json(const SweepResult& s) {
  return {{"amplitudes", s.amplitudes},
          {"energies", s.energies},
          {"volumes", s.volumes},
          {"argmin_energy", s.argmin_energy},
          {"argmin_volume", s.argmin_volume},
          {"refined_energy_argmin", s.refined_energy_argmin},
          {"refined_volume_argmin", s.refined_volume_argmin},
          {"energy_unimodal", s.energy_unimodal},
          {"volume_unimodal", s.volume_unimodal}};
}

inline std::string sweep_summary(const SweepResult& s) {
  std::ostringstream os;
  os << "argmin energy: A = " << format_double(s.amplitudes[s.argmin_energy])
     << " (refined " << format_double(s.refined_energy_argmin) << ")\n"
     << "argmin volume: A = " << format_double(s.amplitudes[s.argmin_volume])
     << " (refined " << format_double(s.refined_volume_argmin) << ")\n";
  return os.str();
}

/// E(v), vol(v) next to the Hopf values on the same cap.
struct FunctionalsSummary {
  std::string field;
  double cap_volume = 0.0;
  double energy = 0.0;
  double volume = 0.0;
  double hopf_energy = 0.0;
  double hopf_volume = 0.0;

  double energy_surplus() const { return energy - hopf_energy; }
  double volume_surplus() const { return volume - hopf_volume; }
};

inline std::vector<std::pair<std::string, double>> summary_rows(const FunctionalsSummary& s) {
  return {{"cap_volume", s.cap_volume},     {"energy", s.energy},
          {"volume", s.volume},             {"hopf_energy", s.hopf_energy},
          {"hopf_volume", s.hopf_volume},   {"energy_surplus", s.energy_surplus()},
          {"volume_surplus", s.volume_surplus()}};
}

inline std::string functionals_to_csv(const FunctionalsSummary& s) {
  std::ostringstream os;
  os << "quantity,value\n";
  for (const auto& [k, v] : summary_rows(s)) os << k << ',' << format_double(v) << '\n';
  return os.str();
}

inline nlohmann::json to_json(const FunctionalsSummary& s) {
  nlohmann::json j = {{"field", s.field}};
  for (const auto& [k, v] : summary_rows(s)) j[k] = v;
  return j;
}

}  // namespace hopfcert
