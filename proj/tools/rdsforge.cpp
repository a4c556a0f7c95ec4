// rdsforge command-line front end.
//
// Exit codes: 0 ran to completion (verdicts live in the report), 1 the
// verification suite failed or an I/O error occurred, 2 invalid arguments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rdsforge/families.hpp"
#include "rdsforge/field.hpp"
#include "rdsforge/report.hpp"
#include "rdsforge/sweep.hpp"
#include "rdsforge/value_table.hpp"
#include "rdsforge/verify.hpp"

namespace {

using namespace rdsforge;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Decimal, or hexadecimal with a 0x prefix.
std::uint64_t parse_uint(const std::string& text, const char* flag) {
  const bool hex = text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X');
  const std::string digits = hex ? text.substr(2) : text;
  if (digits.empty() || digits[0] == '-' || digits[0] == '+') throw UsageError(std::string("bad value for ") + flag);
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(digits, &used, hex ? 16 : 10);
  } catch (const std::exception&) {
    throw UsageError(std::string("bad value for ") + flag + ": " + text);
  }
  if (used != digits.size()) throw UsageError(std::string("bad value for ") + flag + ": " + text);
  return v;
}

unsigned default_threads() {
  if (const char* env = std::getenv("RDSFORGE_THREADS")) {
    try {
      const auto v = parse_uint(env, "RDSFORGE_THREADS");
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const UsageError&) {
    }
  }
  return 1;
}

std::vector<Check> parse_checks(const std::string& list) {
  std::vector<Check> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(parse_check(item));
  }
  if (out.empty()) throw UsageError("no checks requested");
  return normalize_checks(out);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw SweepIoError("cannot write " + out_path);
  out << text;
}

struct AnalyzeArgs {
  int n = 0;
  std::string family;
  std::optional<std::string> a, alpha, beta, gamma, d, i;
  std::string table;
  std::string checks = "two-to-one,apn,rds";
  bool json = false;
  bool allow_large = false;
  std::string out;
  unsigned jobs = 1;
};

int cmd_analyze(const AnalyzeArgs& args) {
  const auto checks = parse_checks(args.checks);
  std::optional<ValueTable> table;
  std::string descriptor;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();

  if (!args.table.empty()) {
    if (!args.family.empty()) throw UsageError("--table and --family are mutually exclusive");
    std::ifstream in(args.table);
    if (!in) throw UsageError("cannot read table file " + args.table);
    table = value_table_from_json(nlohmann::json::parse(in));
    descriptor = "custom";
  } else {
    if (args.family.empty()) throw UsageError("one of --family or --table is required");
    if (args.n == 0) throw UsageError("--family requires --n");
    const Family fam = parse_family(args.family);
    if (family_requires_odd_n(fam) && args.n % 2 == 0) throw UsageError("family requires odd n");
    const Field field = make_field(args.n);
    FamilyParams p;
    p.family = fam;
    auto elem = [&](const std::optional<std::string>& v, const char* flag, std::optional<Elem>& slot) {
      if (!v) return;
      const auto x = parse_uint(*v, flag);
      if (x >= field.size()) throw UsageError(std::string(flag) + " lies outside the field");
      slot = static_cast<Elem>(x);
      params[flag + 2] = x;
    };
    elem(args.a, "--a", p.a);
    elem(args.alpha, "--alpha", p.alpha);
    elem(args.beta, "--beta", p.beta);
    elem(args.gamma, "--gamma", p.gamma);
    if (args.d) {
      p.d = parse_uint(*args.d, "--d");
      params["d"] = *p.d;
    }
    if (args.i) {
      p.i = static_cast<int>(parse_uint(*args.i, "--i"));
      params["i"] = *p.i;
    }
    table = build_family(field, p);
    descriptor = std::string(family_name(fam));
  }

  const bool wants_apn = std::find(checks.begin(), checks.end(), Check::Apn) != checks.end();
  if (wants_apn && table->field().n() > kApnDeskLimit && !args.allow_large) {
    throw UsageError("APN checks above n = 16 require --allow-large");
  }
  const auto report = analyze(*table, descriptor, params, checks, args.jobs);
  emit(args.json ? report_json(report).dump(2) + "\n" : report_text(report), args.out);
  return kExitOk;
}

struct VerifyArgs {
  int n_max = 7;
  bool json = false;
  bool allow_large = false;
  unsigned jobs = 1;
};

int cmd_verify_paper(const VerifyArgs& args) {
  if (args.n_max < 3) throw UsageError("--n-max must be at least 3 (no odd n in range)");
  if (args.n_max > 13 && !args.allow_large) throw UsageError("--n-max above 13 requires --allow-large");
  if (args.n_max > kMaxDegree) throw UsageError("--n-max above 24 is unsupported");
  VerifyOptions opt;
  opt.n_max = args.n_max;
  opt.threads = args.jobs;
  const auto results = verify_paper(opt, [&](const InstanceResult& r) {
    if (!args.json) {
      std::cout << (r.passed ? "PASS" : "FAIL") << "  n=" << r.n << "  " << r.name << "  [" << r.detail << "]\n"
                << std::flush;
    }
  });
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    arr.push_back({{"statement", r.name}, {"n", r.n}, {"passed", r.passed}, {"detail", r.detail}});
  }
  if (args.json) {
    nlohmann::ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["n_max"] = args.n_max;
    j["all_passed"] = all;
    j["instances"] = arr;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (all ? "all instances passed" : "verification FAILED") << "\n";
  }
  return all ? kExitOk : kExitFailed;
}

struct SweepArgs {
  std::string job;
  bool resume = false;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepArgs& args) {
  std::ifstream in(args.job);
  if (!in) throw UsageError("cannot read job file " + args.job);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidJob(std::string("job file is not JSON: ") + e.what());
  }
  const SweepJob job = job_from_json(j);
  validate_job(job);
  if (job.output.empty()) throw InvalidJob("job has no output path");
  auto progress = [](std::size_t done, std::size_t total) {
    std::cerr << "\r" << done << "/" << total << " grid points" << (done == total ? "\n" : "") << std::flush;
  };
  const auto records = args.resume && std::filesystem::exists(job.output)
                           ? resume_sweep(job, job.output, args.jobs, progress)
                           : run_sweep(job, args.jobs, progress);
  std::cerr << records.size() << " records in " << job.output << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rdsforge: APN image sets, relative difference sets and bent functions over GF(2^n)"};
  app.require_subcommand(1);
  const unsigned threads = default_threads();

  AnalyzeArgs an;
  an.jobs = threads;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze one function");
  analyze_cmd->add_option("--n", an.n, "Field degree");
  analyze_cmd->add_option("--family", an.family,
                          "paper-linear, paper-cubic, kgamma, special, x3x4, gold, kasami, welch, power");
  analyze_cmd->add_option("--a", an.a, "Parameter a (decimal or 0x hex bitmask)");
  analyze_cmd->add_option("--alpha", an.alpha);
  analyze_cmd->add_option("--beta", an.beta);
  analyze_cmd->add_option("--gamma", an.gamma);
  analyze_cmd->add_option("--d", an.d, "Exponent for the power family");
  analyze_cmd->add_option("--i", an.i, "Index for gold/kasami");
  analyze_cmd->add_option("--table", an.table, "JSON value table {\"n\",\"poly\",\"table\"}");
  analyze_cmd->add_option("--checks", an.checks, "Comma list of two-to-one, apn, rds, bent");
  analyze_cmd->add_flag("--json", an.json);
  analyze_cmd->add_flag("--allow-large", an.allow_large, "Permit APN checks above n = 16");
  analyze_cmd->add_option("--out", an.out, "Write the report here instead of stdout");
  analyze_cmd->add_option("--jobs", an.jobs, "Threads for the APN pass")->check(CLI::PositiveNumber);

  VerifyArgs vr;
  vr.jobs = threads;
  auto* verify_cmd = app.add_subcommand("verify-paper", "Check every theorem instance for odd n up to --n-max");
  verify_cmd->add_option("--n-max", vr.n_max, "Largest n (default 7, cap 13)");
  verify_cmd->add_flag("--json", vr.json);
  verify_cmd->add_flag("--allow-large", vr.allow_large, "Permit --n-max above 13");
  verify_cmd->add_option("--jobs", vr.jobs)->check(CLI::PositiveNumber);

  SweepArgs sw;
  sw.jobs = threads;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep job to JSONL");
  sweep_cmd->add_option("--job", sw.job, "Job file (JSON)")->required();
  sweep_cmd->add_flag("--resume", sw.resume, "Continue from the job's existing output file");
  sweep_cmd->add_option("--jobs", sw.jobs)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(an);
    if (*verify_cmd) return cmd_verify_paper(vr);
    if (*sweep_cmd) return cmd_sweep(sw);
  } catch (const SweepIoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
