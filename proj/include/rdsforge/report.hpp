#pragma once

// Single-function analysis reports (JSON and plain text).

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsforge/bent.hpp"
#include "rdsforge/differential.hpp"
#include "rdsforge/rds.hpp"
#include "rdsforge/sweep.hpp"
#include "rdsforge/value_table.hpp"

namespace rdsforge {

inline constexpr int kReportSchemaVersion = 1;

struct AnalysisReport {
  std::string descriptor;  // family name or "custom"
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  Field field;
  std::vector<std::pair<Check, bool>> verdicts;
  std::optional<DiffSpectrum> diff;
  std::optional<ImageProfile> image;
  std::optional<RdsReport> rds;
  std::optional<BentSummary> bent;
};

inline AnalysisReport analyze(const ValueTable& table, std::string descriptor, nlohmann::ordered_json params,
                              const std::vector<Check>& checks, unsigned threads = 1) {
  AnalysisReport r{std::move(descriptor), std::move(params), table.field(), {}, {}, {}, {}, {}};
  const auto wants = [&](Check c) { return std::find(checks.begin(), checks.end(), c) != checks.end(); };
  ImageProfile profile = image_profile(table);
  std::optional<RdsReport> rds;
  if (wants(Check::Rds) || wants(Check::Bent)) rds = detect_forbidden(profile.image, table.field().n());

  for (Check c : normalize_checks(checks)) {
    switch (c) {
      case Check::TwoToOne:
        r.image = profile;
        r.verdicts.emplace_back(c, profile.uniform_k == 2u);
        break;
      case Check::Apn:
        r.diff = diff_spectrum(table, threads);
        r.verdicts.emplace_back(c, r.diff->max_delta == 2);
        break;
      case Check::Rds:
        r.rds = rds;
        r.verdicts.emplace_back(c, rds->verdict);
        break;
      case Check::Bent:
        r.bent = bent_summary_from_image(table.field(), profile.image, *rds);
        r.verdicts.emplace_back(c, r.bent->is_bent);
        break;
    }
  }
  return r;
}

inline nlohmann::ordered_json report_json(const AnalysisReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["function"] = {{"family", r.descriptor}, {"params", r.params}};
  j["field"] = {{"n", r.field.n()}, {"poly", r.field.poly()}};
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::object();
  for (auto [c, v] : r.verdicts) verdicts[std::string(check_name(c))] = v;
  j["verdicts"] = verdicts;
  if (r.diff) {
    nlohmann::ordered_json hist = nlohmann::ordered_json::object();
    for (auto [delta, count] : r.diff->histogram) hist[std::to_string(delta)] = count;
    j["diff_spectrum"] = {{"max_delta", r.diff->max_delta}, {"histogram", hist}};
  }
  if (r.image) {
    j["image_profile"] = {{"size", r.image->image.size()},
                          {"uniform_k", r.image->uniform_k ? nlohmann::ordered_json(*r.image->uniform_k)
                                                           : nlohmann::ordered_json(nullptr)}};
  }
  if (r.rds) j["rds"] = rds_report_json(*r.rds);
  if (r.bent) {
    nlohmann::ordered_json b;
    b["carried"] = r.bent->carried;
    b["is_bent"] = r.bent->is_bent;
    b["degree"] = r.bent->carried ? nlohmann::ordered_json(r.bent->degree) : nlohmann::ordered_json(nullptr);
    b["bilinear_rank"] = r.bent->bilinear_rank ? nlohmann::ordered_json(*r.bent->bilinear_rank) : nlohmann::ordered_json(nullptr);
    b["epsilon"] = r.bent->carried ? nlohmann::ordered_json(r.bent->epsilon) : nlohmann::ordered_json(nullptr);
    j["bent"] = b;
  }
  return j;
}

inline std::string report_text(const AnalysisReport& r) {
  std::ostringstream os;
  os << "function  " << r.descriptor;
  if (!r.params.empty()) os << ' ' << r.params.dump();
  os << "\nfield     GF(2^" << r.field.n() << "), poly " << r.field.poly() << '\n';
  for (auto [c, v] : r.verdicts) os << "  " << check_name(c) << std::string(12 - check_name(c).size(), ' ') << (v ? "yes" : "no") << '\n';
  if (r.diff) os << "max delta " << r.diff->max_delta << '\n';
  if (r.image) {
    os << "image     " << r.image->image.size() << " values";
    if (r.image->uniform_k) os << ", each hit " << *r.image->uniform_k << " times";
    os << '\n';
  }
  if (r.rds) {
    if (r.rds->params) {
      const auto& p = *r.rds->params;
      os << "rds       (" << p.m << ", " << p.n_sub << ", " << p.k << ", " << p.lambda << ")";
    } else {
      os << "rds       none";
    }
    os << ", forbidden {";
    for (std::size_t i = 0; i < r.rds->forbidden.size() && i < 16; ++i) os << (i ? ", " : "") << r.rds->forbidden[i];
    if (r.rds->forbidden.size() > 16) os << ", ...";
    os << "}";
    if (r.rds->counterexample) {
      const auto& c = *r.rds->counterexample;
      os << ", difference " << c.element << " seen " << c.observed << " times, expected " << c.expected;
    }
    os << '\n';
  }
  if (r.bent) {
    if (!r.bent->carried) {
      os << "bent      image carries no Boolean function\n";
    } else {
      os << "bent      degree " << r.bent->degree;
      if (r.bent->bilinear_rank) os << ", bilinear rank " << *r.bent->bilinear_rank;
      os << ", epsilon " << r.bent->epsilon << '\n';
    }
  }
  return os.str();
}

}  // namespace rdsforge
