#pragma once

#include "incapax/forbidden.hpp"
#include "incapax/json_io.hpp"

namespace incapax {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "incapax-report/1";

struct AnalyzeOptions {
  AntidegParams antideg;
  double tol_psd = kDefaultTol.psd;
  std::uint64_t seed = 1234;
  bool deterministic = false;
};

struct IncapacityReport {
  std::string channel_name;
  int dim_in = 0;
  int dim_out = 0;
  PptResult ppt{false, 0.0};
  FeasibilityStatus ad_status = FeasibilityStatus::Undetermined;
  double ad_distance = 0.0;
  int ad_iterations = 0;
  std::vector<ZeroCapacityCertificate> reasons;
  std::string classification;  // PPT-only | AD-only | both | undetected
  std::uint64_t seed = 0;
  AntidegParams params;
  double tol_psd = kDefaultTol.psd;
};

inline IncapacityReport analyze(const Channel& ch, const AnalyzeOptions& opts = {}) {
  IncapacityReport rep;
  rep.channel_name = ch.name;
  rep.dim_in = ch.dim_in;
  rep.dim_out = ch.dim_out;
  rep.seed = opts.seed;
  rep.params = opts.antideg;
  rep.tol_psd = opts.tol_psd;
  rep.ppt = ppt_test(ch, opts.tol_psd);
  FeasibilityResult fr = antidegradability_feasibility(ch, opts.antideg);
  rep.ad_status = fr.status;
  rep.ad_distance = fr.distance;
  rep.ad_iterations = fr.iterations;
  rep.reasons = lemma1_certify(ch, opts.antideg, opts.seed);
  const bool ad = rep.ad_status == FeasibilityStatus::Feasible;
  if (rep.ppt.is_ppt && ad)
    rep.classification = "both";
  else if (rep.ppt.is_ppt)
    rep.classification = "PPT-only";
  else if (ad)
    rep.classification = "AD-only";
  else
    rep.classification = "undetected";  // no incapacity detected; says nothing about capacity
  return rep;
}

inline Json report_to_json(const IncapacityReport& rep) {
  Json j;
  j["schema"] = kReportSchema;
  j["tool_version"] = kToolVersion;
  j["channel"] = {{"name", rep.channel_name}, {"dim_in", rep.dim_in}, {"dim_out", rep.dim_out}};
  j["ppt"] = {{"verdict", rep.ppt.is_ppt}, {"min_eig", rep.ppt.min_eig}};
  j["antidegradable"] = {{"status", to_string(rep.ad_status)},
                         {"distance", rep.ad_distance},
                         {"iterations", rep.ad_iterations}};
  Json reasons = Json::array();
  for (const auto& c : rep.reasons) {
    Json r;
    r["reason"] = to_string(c.reason);
    r["detail"] = c.detail;
    if (c.reason == IncapacityReason::TimeReversal) r["min_eig"] = c.min_eig;
    if (c.reason == IncapacityReason::Cloning) {
      r["feasibility_distance"] = c.feasibility_distance;
      r["verification_residual"] = c.verification_residual;
    }
    reasons.push_back(std::move(r));
  }
  j["zero_capacity_reasons"] = std::move(reasons);
  j["classification"] = rep.classification;
  j["seed"] = rep.seed;
  j["tolerances"] = {{"eps_feas", rep.params.eps_feas},
                     {"eps_marg", rep.params.eps_marg},
                     {"max_iter", rep.params.max_iter},
                     {"tol_psd", rep.tol_psd}};
  return j;
}

inline std::string report_to_text(const IncapacityReport& rep) {
  std::ostringstream os;
  os << "channel: " << rep.channel_name << " (" << rep.dim_in << " -> " << rep.dim_out << ")\n";
  os << "  PPT: " << (rep.ppt.is_ppt ? "yes" : "no") << " (min eig " << rep.ppt.min_eig << ")\n";
  os << "  antidegradable: " << to_string(rep.ad_status) << " (distance " << rep.ad_distance
     << ", iterations " << rep.ad_iterations << ")\n";
  os << "  classification: " << rep.classification << "\n";
  for (const auto& c : rep.reasons) os << "  reason: " << to_string(c.reason) << " - " << c.detail << "\n";
  if (rep.reasons.empty()) os << "  reason: none detected (not a capacity claim)\n";
  return os.str();
}

}  // namespace incapax
