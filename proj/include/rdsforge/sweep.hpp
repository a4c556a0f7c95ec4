#pragma once

// Parameter-grid sweeps over APN families with JSONL persistence and resume.
//
// One record per grid point (n, parameter tuple). Records are appended to the
// output file as workers finish and the file is rewritten in canonical order
// (sorted by n, then parameter values) once the sweep completes.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsforge/bent.hpp"
#include "rdsforge/differential.hpp"
#include "rdsforge/families.hpp"
#include "rdsforge/field.hpp"
#include "rdsforge/rds.hpp"

namespace rdsforge {

inline constexpr int kSweepSchemaVersion = 1;
/// Parameter spaces up to this size are enumerated in full by default.
inline constexpr std::uint64_t kDefaultMaxEnumerate = 4096;
/// Largest n for which APN checks run without explicit opt-in.
inline constexpr int kApnDeskLimit = 16;

class InvalidJob : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IncompatibleResume : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SweepIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Check { TwoToOne, Apn, Rds, Bent };

inline constexpr std::array<std::pair<Check, std::string_view>, 4> kCheckNames{{
    {Check::TwoToOne, "two_to_one"},
    {Check::Apn, "apn"},
    {Check::Rds, "rds"},
    {Check::Bent, "bent"},
}};

inline std::string_view check_name(Check c) {
  for (const auto& [chk, name] : kCheckNames) {
    if (chk == c) return name;
  }
  return "unknown";
}

/// Accepts "two_to_one" and "two-to-one".
inline Check parse_check(std::string_view name) {
  std::string norm(name);
  std::replace(norm.begin(), norm.end(), '-', '_');
  for (const auto& [chk, n2] : kCheckNames) {
    if (n2 == norm) return chk;
  }
  throw std::invalid_argument("unknown check '" + std::string(name) + "'");
}

/// Sorted, deduplicated check list.
inline std::vector<Check> normalize_checks(std::vector<Check> checks) {
  std::sort(checks.begin(), checks.end());
  checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
  return checks;
}

struct SampleSpec {
  std::uint64_t seed = 0;
  std::uint64_t count = 0;

  friend bool operator==(const SampleSpec&, const SampleSpec&) = default;
};

struct SweepJob {
  Family family = Family::PaperLinear;
  std::vector<int> n_values;
  std::vector<Check> checks;
  /// Explicit sampling; otherwise spaces above max_enumerate are sampled
  /// with seed 0 and max_enumerate points.
  std::optional<SampleSpec> sample;
  std::uint64_t max_enumerate = kDefaultMaxEnumerate;
  /// Exponents for the Power family.
  std::vector<std::uint64_t> exponents;
  bool allow_large = false;
  std::string output;
};

/// Parameter names carried by each family's grid points.
inline std::vector<std::string_view> family_param_names(Family f) {
  switch (f) {
    case Family::PaperLinear:
    case Family::PaperCubic:
      return {"a"};
    case Family::KGamma:
      return {"alpha", "beta", "gamma"};
    case Family::Gold:
    case Family::Kasami:
      return {"i"};
    case Family::Power:
      return {"d"};
    default:
      return {};
  }
}

struct GridPoint {
  int n = 0;
  std::vector<std::uint64_t> values;

  friend auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

struct SweepRecord {
  Family family = Family::PaperLinear;
  int n = 0;
  std::uint32_t poly = 0;
  std::vector<std::uint64_t> params;  // ordered as family_param_names
  std::vector<std::pair<Check, bool>> verdicts;
  std::optional<RdsParams> rds_params;
  std::optional<std::vector<Elem>> forbidden;
  std::optional<int> bent_degree;
  std::optional<int> bilinear_rank;
  std::optional<SampleSpec> sampling;
  std::int64_t elapsed_us = 0;
  int schema_version = kSweepSchemaVersion;

  GridPoint key() const { return {n, params}; }

  std::optional<bool> verdict(Check c) const {
    for (auto [chk, v] : verdicts) {
      if (chk == c) return v;
    }
    return std::nullopt;
  }
};

// ---------------------------------------------------------------------------
// Job files

inline SweepJob job_from_json(const nlohmann::json& j) {
  try {
    SweepJob job;
    job.family = parse_family(j.at("family").get<std::string>());
    job.n_values = j.value("n_values", std::vector<int>{});
    for (const auto& c : j.at("checks")) job.checks.push_back(parse_check(c.get<std::string>()));
    job.checks = normalize_checks(job.checks);
    if (j.contains("sample") && !j["sample"].is_null()) {
      job.sample = SampleSpec{j["sample"].at("seed").get<std::uint64_t>(), j["sample"].at("count").get<std::uint64_t>()};
    }
    job.max_enumerate = j.value("max_enumerate", kDefaultMaxEnumerate);
    job.exponents = j.value("exponents", std::vector<std::uint64_t>{});
    job.allow_large = j.value("allow_large", false);
    job.output = j.value("output", std::string{});
    return job;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidJob(std::string("malformed job: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidJob(e.what());
  }
}

inline nlohmann::ordered_json job_to_json(const SweepJob& job) {
  nlohmann::ordered_json j;
  j["family"] = family_name(job.family);
  j["n_values"] = job.n_values;
  j["checks"] = nlohmann::ordered_json::array();
  for (auto c : job.checks) j["checks"].push_back(check_name(c));
  if (job.sample) j["sample"] = {{"seed", job.sample->seed}, {"count", job.sample->count}};
  j["max_enumerate"] = job.max_enumerate;
  if (!job.exponents.empty()) j["exponents"] = job.exponents;
  if (job.allow_large) j["allow_large"] = true;
  j["output"] = job.output;
  return j;
}

inline void validate_job(const SweepJob& job) {
  if (job.checks.empty()) throw InvalidJob("job requests no checks");
  if (job.sample && job.sample->count == 0) throw InvalidJob("sample count must be positive");
  if (job.max_enumerate == 0) throw InvalidJob("max_enumerate must be positive");
  if (job.family == Family::Power && job.exponents.empty()) throw InvalidJob("power family needs exponents");
  const bool wants_apn = std::find(job.checks.begin(), job.checks.end(), Check::Apn) != job.checks.end();
  for (int n : job.n_values) {
    if (n < kMinDegree || n > kMaxDegree) throw InvalidJob("n = " + std::to_string(n) + " outside [2, 24]");
    if (family_requires_odd_n(job.family) && n % 2 == 0) {
      throw InvalidJob(std::string(family_name(job.family)) + " family requires odd n, got " + std::to_string(n));
    }
    if ((job.family == Family::SpecialPower || job.family == Family::Welch) && n < 3) {
      throw InvalidJob("family requires n >= 3");
    }
    if (job.family == Family::KGamma && n > 19) throw InvalidJob("kgamma sweeps support n <= 19");
    if (wants_apn && n > kApnDeskLimit && !job.allow_large) {
      throw InvalidJob("APN checks above n = 16 require allow_large");
    }
  }
}

// ---------------------------------------------------------------------------
// Grid enumeration

namespace detail {

// Unbiased draw in [0, bound).
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % bound;
  }
}

// The parameter space of one family at one n, addressable by index.
class ParamSpace {
 public:
  ParamSpace(const SweepJob& job, const Field& field) : job_(job), field_(field) {
    const std::uint64_t q = field.size();
    switch (job.family) {
      case Family::PaperLinear:
      case Family::PaperCubic:
        size_ = q - 1;
        break;
      case Family::KGamma:
        size_ = (q - 1) * (q / 2) * (q / 2);
        break;
      case Family::Gold:
      case Family::Kasami:
        for (int i = 1; i <= (field.n() - 1) / 2; ++i) {
          if (std::gcd(i, field.n()) == 1) indices_.push_back(static_cast<std::uint64_t>(i));
        }
        size_ = indices_.size();
        break;
      case Family::Power:
        indices_ = job.exponents;
        size_ = indices_.size();
        break;
      default:
        size_ = 1;
    }
  }

  std::uint64_t size() const { return size_; }

  std::vector<std::uint64_t> at(std::uint64_t idx) {
    switch (job_.family) {
      case Family::PaperLinear:
      case Family::PaperCubic:
        return {idx + 1};
      case Family::KGamma: {
        const std::uint64_t half = field_.size() / 2;
        const Elem alpha = static_cast<Elem>(idx / (half * half) + 1);
        const auto& lists = kgamma_lists(alpha);
        const std::uint64_t rest = idx % (half * half);
        return {alpha, lists.first[rest / half], lists.second[rest % half]};
      }
      case Family::Gold:
      case Family::Kasami:
      case Family::Power:
        return {indices_[idx]};
      default:
        return {};
    }
  }

 private:
  // Valid betas (Tr(beta alpha) = 1) and gammas (outside {x^2 + alpha x}),
  // both sorted ascending; each has 2^{n-1} entries.
  const std::pair<std::vector<Elem>, std::vector<Elem>>& kgamma_lists(Elem alpha) {
    auto it = kgamma_cache_.find(alpha);
    if (it != kgamma_cache_.end()) return it->second;
    std::pair<std::vector<Elem>, std::vector<Elem>> lists;
    const auto img = linearized_image(field_, alpha);
    for (Elem v = 1; v < field_.size(); ++v) {
      if (field_.trace(field_.mul(v, alpha)) == 1) lists.first.push_back(v);
      if (!std::binary_search(img.begin(), img.end(), v)) lists.second.push_back(v);
    }
    return kgamma_cache_.emplace(alpha, std::move(lists)).first->second;
  }

  const SweepJob& job_;
  Field field_;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> indices_;
  std::map<Elem, std::pair<std::vector<Elem>, std::vector<Elem>>> kgamma_cache_;
};

}  // namespace detail

struct PlannedPoint {
  GridPoint point;
  std::optional<SampleSpec> sampling;
};

/// All grid points of a job in canonical order.
inline std::vector<PlannedPoint> plan_grid(const SweepJob& job) {
  validate_job(job);
  std::vector<PlannedPoint> out;
  std::vector<int> ns = job.n_values;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int n : ns) {
    const Field field = make_field(n);
    detail::ParamSpace space(job, field);
    std::optional<SampleSpec> sampling;
    if (job.sample) {
      if (space.size() > job.sample->count) sampling = job.sample;
    } else if (space.size() > job.max_enumerate) {
      sampling = SampleSpec{0, job.max_enumerate};
    }
    std::vector<std::uint64_t> idx;
    if (!sampling) {
      idx.resize(space.size());
      std::iota(idx.begin(), idx.end(), std::uint64_t{0});
    } else {
      std::mt19937_64 rng(sampling->seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(n)));
      std::set<std::uint64_t> chosen;
      while (chosen.size() < sampling->count) chosen.insert(detail::bounded_draw(rng, space.size()));
      idx.assign(chosen.begin(), chosen.end());
    }
    std::vector<PlannedPoint> block;
    block.reserve(idx.size());
    for (auto i : idx) block.push_back({GridPoint{n, space.at(i)}, sampling});
    std::sort(block.begin(), block.end(), [](const auto& x, const auto& y) { return x.point < y.point; });
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

inline FamilyParams family_params_for(Family family, const std::vector<std::uint64_t>& v) {
  FamilyParams p;
  p.family = family;
  switch (family) {
    case Family::PaperLinear:
    case Family::PaperCubic:
      p.a = static_cast<Elem>(v.at(0));
      break;
    case Family::KGamma:
      p.alpha = static_cast<Elem>(v.at(0));
      p.beta = static_cast<Elem>(v.at(1));
      p.gamma = static_cast<Elem>(v.at(2));
      break;
    case Family::Gold:
    case Family::Kasami:
      p.i = static_cast<int>(v.at(0));
      break;
    case Family::Power:
      p.d = v.at(0);
      break;
    default:
      break;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Runs the job's checks at one grid point.
///
/// The bent verdict is false unless the image carries a Boolean function
/// (see bent_summary_from_image).
inline SweepRecord evaluate_point(Family family, const std::vector<Check>& checks, const PlannedPoint& planned) {
  const auto start = std::chrono::steady_clock::now();
  const Field field = make_field(planned.point.n);
  const ValueTable table = build_family(field, family_params_for(family, planned.point.values));

  SweepRecord rec;
  rec.family = family;
  rec.n = field.n();
  rec.poly = field.poly();
  rec.params = planned.point.values;
  rec.sampling = planned.sampling;

  const bool want_rds = std::find(checks.begin(), checks.end(), Check::Rds) != checks.end();
  const bool want_bent = std::find(checks.begin(), checks.end(), Check::Bent) != checks.end();
  std::optional<ImageProfile> profile;
  std::optional<RdsReport> rds;
  if (want_rds || want_bent || std::find(checks.begin(), checks.end(), Check::TwoToOne) != checks.end()) {
    profile = image_profile(table);
  }
  if (want_rds || want_bent) rds = detect_forbidden(profile->image, field.n());

  for (Check c : checks) {
    bool v = false;
    switch (c) {
      case Check::TwoToOne:
        v = profile->uniform_k == 2u;
        break;
      case Check::Apn:
        v = is_apn(table);
        break;
      case Check::Rds:
        v = rds->verdict;
        if (v) {
          rec.rds_params = rds->params;
          rec.forbidden = rds->forbidden;
        }
        break;
      case Check::Bent: {
        const auto summary = bent_summary_from_image(field, profile->image, *rds);
        v = summary.is_bent;
        if (summary.carried) {
          rec.bent_degree = summary.degree;
          rec.bilinear_rank = summary.bilinear_rank;
        }
        break;
      }
    }
    rec.verdicts.emplace_back(c, v);
  }
  rec.elapsed_us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

// ---------------------------------------------------------------------------
// Record serialization

/// One JSONL line. `with_timing = false` gives the canonical form used for
/// determinism comparisons.
inline nlohmann::ordered_json record_to_json(const SweepRecord& r, bool with_timing = true) {
  nlohmann::ordered_json j;
  j["schema_version"] = r.schema_version;
  j["family"] = family_name(r.family);
  j["n"] = r.n;
  j["poly"] = r.poly;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  const auto names = family_param_names(r.family);
  for (std::size_t i = 0; i < names.size() && i < r.params.size(); ++i) params[std::string(names[i])] = r.params[i];
  j["params"] = params;
  if (r.sampling) {
    j["sampling"] = {{"seed", r.sampling->seed}, {"count", r.sampling->count}};
  } else {
    j["sampling"] = nullptr;
  }
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::object();
  for (auto [c, v] : r.verdicts) verdicts[std::string(check_name(c))] = v;
  j["verdicts"] = verdicts;
  j["rds_params"] = r.rds_params ? rds_params_json(*r.rds_params) : nlohmann::ordered_json(nullptr);
  j["forbidden"] = r.forbidden ? nlohmann::ordered_json(*r.forbidden) : nlohmann::ordered_json(nullptr);
  if (r.verdict(Check::Bent).has_value()) {
    j["bent_degree"] = r.bent_degree ? nlohmann::ordered_json(*r.bent_degree) : nlohmann::ordered_json(nullptr);
    j["bilinear_rank"] = r.bilinear_rank ? nlohmann::ordered_json(*r.bilinear_rank) : nlohmann::ordered_json(nullptr);
  }
  if (with_timing) j["elapsed_us"] = r.elapsed_us;
  return j;
}

inline SweepRecord record_from_json(const nlohmann::json& j) {
  SweepRecord r;
  r.schema_version = j.at("schema_version").get<int>();
  r.family = parse_family(j.at("family").get<std::string>());
  r.n = j.at("n").get<int>();
  r.poly = j.at("poly").get<std::uint32_t>();
  for (auto name : family_param_names(r.family)) r.params.push_back(j.at("params").at(std::string(name)).get<std::uint64_t>());
  if (!j.at("sampling").is_null()) {
    r.sampling = SampleSpec{j["sampling"].at("seed").get<std::uint64_t>(), j["sampling"].at("count").get<std::uint64_t>()};
  }
  for (const auto& [name, v] : j.at("verdicts").items()) r.verdicts.emplace_back(parse_check(name), v.get<bool>());
  std::sort(r.verdicts.begin(), r.verdicts.end());
  if (!j.at("rds_params").is_null()) {
    const auto& p = j["rds_params"];
    r.rds_params = RdsParams{p.at("m").get<std::uint64_t>(), p.at("n").get<std::uint64_t>(), p.at("k").get<std::uint64_t>(),
                             p.at("lambda").get<std::uint64_t>()};
  }
  if (!j.at("forbidden").is_null()) r.forbidden = j["forbidden"].get<std::vector<Elem>>();
  if (j.contains("bent_degree") && !j["bent_degree"].is_null()) r.bent_degree = j["bent_degree"].get<int>();
  if (j.contains("bilinear_rank") && !j["bilinear_rank"].is_null()) r.bilinear_rank = j["bilinear_rank"].get<int>();
  r.elapsed_us = j.value("elapsed_us", std::int64_t{0});
  return r;
}

inline std::string record_line(const SweepRecord& r, bool with_timing = true) {
  return record_to_json(r, with_timing).dump() + "\n";
}

/// Canonical rendering of a record list: sorted by key, timing stripped.
inline std::string canonical_jsonl(std::vector<SweepRecord> records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
  std::string out;
  for (const auto& r : records) out += record_line(r, false);
  return out;
}

/// Parses a JSONL file. A malformed final line (an interrupted append) is
/// dropped; a malformed line elsewhere is an error.
inline std::vector<SweepRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SweepIoError("cannot read " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  std::vector<SweepRecord> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(record_from_json(nlohmann::json::parse(lines[i])));
    } catch (const std::exception& e) {
      if (i + 1 == lines.size()) break;
      throw IncompatibleResume("malformed record on line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Running

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

namespace detail {

inline std::string render_file(const std::vector<SweepRecord>& sorted) {
  std::string out;
  for (const auto& r : sorted) out += record_line(r);
  return out;
}

inline void write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SweepIoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw SweepIoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw SweepIoError("cannot replace " + path.string() + ": " + ec.message());
}

// Evaluates `todo` across a worker pool, appending each finished record to
// `append` (if open) under a lock.
inline std::vector<SweepRecord> evaluate_all(const SweepJob& job, const std::vector<PlannedPoint>& todo,
                                             unsigned threads, std::ofstream* append, const ProgressFn& progress,
                                             std::size_t done_before, std::size_t total) {
  std::vector<SweepRecord> results(todo.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = done_before;
  std::mutex mu;
  bool io_failed = false;
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      results[i] = evaluate_point(job.family, job.checks, todo[i]);
      std::lock_guard lock(mu);
      if (append) {
        *append << record_line(results[i]);
        append->flush();
        io_failed |= !*append;
      }
      ++done;
      if (progress) progress(done, total);
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1 || todo.size() <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, todo.size()); ++t) pool.emplace_back(worker);
  }
  if (io_failed) throw SweepIoError("append to output failed");
  return results;
}

inline std::ofstream open_append(const std::string& path, bool truncate) {
  std::ofstream out(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app));
  if (!out) throw SweepIoError("cannot open " + path + " for writing");
  return out;
}

inline void sort_records(std::vector<SweepRecord>& records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.key() < b.key(); });
}

}  // namespace detail

/// Evaluates every grid point. With a non-empty job.output the records are
/// streamed to that file and the file is finally rewritten in canonical order.
inline std::vector<SweepRecord> run_sweep(const SweepJob& job, unsigned threads = 1, const ProgressFn& progress = {}) {
  const auto plan = plan_grid(job);
  std::optional<std::ofstream> out;
  if (!job.output.empty()) out = detail::open_append(job.output, true);
  auto records = detail::evaluate_all(job, plan, threads, out ? &*out : nullptr, progress, 0, plan.size());
  detail::sort_records(records);
  if (out) {
    out->close();
    detail::write_atomically(job.output, detail::render_file(records));
  }
  return records;
}

/// Continues a sweep from `existing_path`: keeps its records, evaluates only
/// the missing grid points, and writes the merged canonical file to
/// job.output (or back to existing_path when job.output is empty).
inline std::vector<SweepRecord> resume_sweep(const SweepJob& job, const std::string& existing_path,
                                             unsigned threads = 1, const ProgressFn& progress = {}) {
  const auto plan = plan_grid(job);
  std::set<GridPoint> planned_keys;
  for (const auto& p : plan) planned_keys.insert(p.point);

  std::vector<SweepRecord> existing;
  if (std::filesystem::exists(existing_path)) existing = read_records(existing_path);

  std::set<GridPoint> have;
  for (const auto& r : existing) {
    if (r.schema_version != kSweepSchemaVersion) throw IncompatibleResume("incompatible resume: schema version differs");
    if (r.family != job.family) throw IncompatibleResume("incompatible resume: family differs");
    std::vector<Check> got;
    for (auto [c, v] : r.verdicts) got.push_back(c);
    if (got != job.checks) throw IncompatibleResume("incompatible resume: checks differ");
    if (r.poly != make_field(r.n).poly()) throw IncompatibleResume("incompatible resume: field polynomial differs");
    if (!planned_keys.count(r.key())) throw IncompatibleResume("incompatible resume: record outside the job grid");
    if (!have.insert(r.key()).second) throw IncompatibleResume("incompatible resume: duplicate record");
  }

  std::vector<PlannedPoint> todo;
  for (const auto& p : plan) {
    if (!have.count(p.point)) todo.push_back(p);
  }

  const std::string target = job.output.empty() ? existing_path : job.output;
  detail::sort_records(existing);
  const std::string existing_rendered = detail::render_file(existing);

  if (todo.empty()) {
    std::string current;
    if (std::filesystem::exists(target)) {
      std::ifstream in(target, std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      current = ss.str();
    }
    if (current != existing_rendered) detail::write_atomically(target, existing_rendered);
    return existing;
  }

  // Start from a clean canonical prefix so appends never follow a torn line.
  detail::write_atomically(target, existing_rendered);
  auto out = detail::open_append(target, false);
  auto fresh = detail::evaluate_all(job, todo, threads, &out, progress, existing.size(), plan.size());
  out.close();
  existing.insert(existing.end(), std::make_move_iterator(fresh.begin()), std::make_move_iterator(fresh.end()));
  detail::sort_records(existing);
  detail::write_atomically(target, detail::render_file(existing));
  return existing;
}

}  // namespace rdsforge
