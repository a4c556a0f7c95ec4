#pragma once

// End-to-end checks of the image-set theorems, one result per
// (statement, n) instance.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rdsforge/bent.hpp"
#include "rdsforge/differential.hpp"
#include "rdsforge/equiv.hpp"
#include "rdsforge/families.hpp"
#include "rdsforge/field.hpp"
#include "rdsforge/rds.hpp"

namespace rdsforge {

struct InstanceResult {
  std::string name;
  int n = 0;
  bool passed = false;
  std::string detail;
};

/// `count` distinct nonzero elements of the field drawn with a seeded
/// generator, or all of them when count >= 2^n - 1. Sorted.
inline std::vector<Elem> sample_nonzero(const Field& f, std::size_t count, std::uint64_t seed) {
  std::vector<Elem> out;
  if (count >= f.order()) {
    for (Elem a = 1; a < f.size(); ++a) out.push_back(a);
    return out;
  }
  std::mt19937_64 rng(seed);
  std::set<Elem> chosen;
  while (chosen.size() < count) chosen.insert(static_cast<Elem>(rng() % f.order()) + 1);
  return {chosen.begin(), chosen.end()};
}

/// All (alpha, beta, gamma) satisfying the k(x) hypotheses, or `limit` of
/// them drawn with a seeded generator when there are more.
inline std::vector<std::array<Elem, 3>> kgamma_instances(const Field& f, std::size_t limit, std::uint64_t seed) {
  const std::uint64_t half = f.size() / 2;
  const std::uint64_t total = std::uint64_t{f.order()} * half * half;
  auto decode = [&](std::uint64_t idx) {
    const Elem alpha = static_cast<Elem>(idx / (half * half) + 1);
    std::uint64_t rest = idx % (half * half);
    const auto img = linearized_image(f, alpha);
    std::vector<Elem> betas, gammas;
    for (Elem v = 1; v < f.size(); ++v) {
      if (f.trace(f.mul(v, alpha)) == 1) betas.push_back(v);
      if (!std::binary_search(img.begin(), img.end(), v)) gammas.push_back(v);
    }
    return std::array<Elem, 3>{alpha, betas[rest / half], gammas[rest % half]};
  };
  std::vector<std::array<Elem, 3>> out;
  if (total <= limit) {
    for (Elem alpha = 1; alpha < f.size(); ++alpha) {
      const auto img = linearized_image(f, alpha);
      for (Elem beta = 1; beta < f.size(); ++beta) {
        if (f.trace(f.mul(beta, alpha)) != 1) continue;
        for (Elem gamma = 1; gamma < f.size(); ++gamma) {
          if (!std::binary_search(img.begin(), img.end(), gamma)) out.push_back({alpha, beta, gamma});
        }
      }
    }
    return out;
  }
  std::mt19937_64 rng(seed);
  std::set<std::uint64_t> chosen;
  while (chosen.size() < limit) chosen.insert(rng() % total);
  for (auto idx : chosen) out.push_back(decode(idx));
  return out;
}

namespace detail {

inline RdsParams expected_two_to_one_params(int n) {
  const std::uint64_t half = std::uint64_t{1} << (n - 1);
  return {half, 2, half, half / 2};
}

inline std::string describe(const RdsReport& r) {
  std::ostringstream os;
  if (r.params) {
    os << "(" << r.params->m << "," << r.params->n_sub << "," << r.params->k << "," << r.params->lambda << ")";
  } else if (r.counterexample) {
    os << "difference " << r.counterexample->element << " seen " << r.counterexample->observed << "x, expected "
       << r.counterexample->expected;
  } else {
    os << "no forbidden subgroup";
  }
  return os.str();
}

// Image of `table` is 2-to-1 and an RDS with the two-to-one parameters
// relative to {0, forbidden}.
inline bool image_is_expected_rds(const ValueTable& table, Elem forbidden, std::string& why) {
  const auto profile = image_profile(table);
  if (profile.uniform_k != 2u) {
    why = "not 2-to-1";
    return false;
  }
  const std::vector<Elem> n_sub{0, forbidden};
  const auto rep = check_rds(profile.image, n_sub, table.field().n());
  if (!rep.verdict || rep.params != expected_two_to_one_params(table.field().n())) {
    why = "rds " + describe(rep);
    return false;
  }
  return true;
}

}  // namespace detail

struct VerifyOptions {
  int n_max = 7;
  /// Every nonzero a is tested up to this n; above it, a_samples seeded draws.
  int full_a_up_to_n = 9;
  std::size_t a_samples = 32;
  std::size_t kgamma_limit = 512;
  std::size_t bent_samples = 8;
  std::uint64_t seed = 2024;
  unsigned threads = 1;
};

/// Runs every statement for odd n in [3, n_max]. `emit` is called as each
/// instance finishes.
inline std::vector<InstanceResult> verify_paper(const VerifyOptions& opt,
                                                const std::function<void(const InstanceResult&)>& emit = {}) {
  std::vector<InstanceResult> results;
  auto push = [&](std::string name, int n, bool ok, std::string detail) {
    results.push_back({std::move(name), n, ok, std::move(detail)});
    if (emit) emit(results.back());
  };

  std::vector<bool> x3x4_rds;
  for (int n = 3; n <= opt.n_max; n += 2) {
    const Field f = make_field(n);
    const auto as = sample_nonzero(f, n <= opt.full_a_up_to_n ? f.order() : opt.a_samples,
                                   opt.seed + static_cast<std::uint64_t>(n));
    const ValueTable cube = power_map(f, 3);

    {
      std::string why;
      bool ok = true;
      for (Elem a : as) {
        if (!detail::image_is_expected_rds(family_paper_linear(f, a), f.inv(a), why)) {
          ok = false;
          why = "a=" + std::to_string(a) + ": " + why;
          break;
        }
      }
      push("x + a^-1 Tr(a^3 x^3): 2-to-1, RDS rel. {0, a^-1}", n, ok,
           ok ? std::to_string(as.size()) + " values of a" : why);
    }

    {
      std::string why;
      bool ok = true;
      for (Elem a : as) {
        const auto h = family_paper_cubic(f, a);
        if (!(h == compose(family_paper_linear(f, a), cube))) {
          ok = false, why = "a=" + std::to_string(a) + ": composition identity fails";
        } else if (!is_apn(h, opt.threads)) {
          ok = false, why = "a=" + std::to_string(a) + ": not APN";
        } else if (!detail::image_is_expected_rds(h, f.inv(a), why)) {
          ok = false, why = "a=" + std::to_string(a) + ": " + why;
        }
        if (!ok) break;
      }
      push("x^3 + a^-1 Tr(a^3 x^9): APN, 2-to-1, RDS rel. {0, a^-1}", n, ok,
           ok ? std::to_string(as.size()) + " values of a" : why);
    }

    {
      const std::size_t limit = n <= 5 ? SIZE_MAX : (n == 7 ? opt.kgamma_limit : 16);
      const auto inst = kgamma_instances(f, limit, opt.seed + 100 + static_cast<std::uint64_t>(n));
      std::string why;
      bool ok = true;
      for (const auto& [alpha, beta, gamma] : inst) {
        const auto k = family_kgamma(f, alpha, beta, gamma);
        const auto l = kgamma_linear_part(f, alpha, beta, gamma);
        const auto h = family_paper_cubic(f, f.inv(alpha));
        const std::string tag = "(" + std::to_string(alpha) + "," + std::to_string(beta) + "," + std::to_string(gamma) + "): ";
        if (!(k == compose(l, h))) {
          ok = false, why = tag + "k != l o h";
        } else if (!is_apn(k, opt.threads)) {
          ok = false, why = tag + "not APN";
        } else if (!detail::image_is_expected_rds(k, gamma, why)) {
          ok = false, why = tag + why;
        }
        if (!ok) break;
      }
      push("k(x) = x^6 + alpha x^3 + gamma Tr(...): APN, 2-to-1, RDS rel. {0, gamma}", n, ok,
           ok ? std::to_string(inst.size()) + " instances" : why);
    }

    {
      const int k = special_index(f);
      const auto sp = family_special(f);
      const auto profile = image_profile(sp);
      const std::vector<Elem> n_sub{0, 1};
      const auto rep = check_rds(profile.image, n_sub, n);
      const std::uint64_t m = std::uint64_t{1} << (2 * k - 2);
      const bool ok = profile.uniform_k == 2u && is_apn(sp, opt.threads) && rep.verdict &&
                      rep.params == RdsParams{m, 2, m, m / 2};
      push("x^(2^k-1) + x^(2^k), k=" + std::to_string(k) + ": APN, 2-to-1, RDS rel. {0, 1}", n, ok,
           detail::describe(rep));

      const std::uint64_t root = exponent_inverse((std::uint64_t{1} << k) - 1, f.order());
      std::vector<Elem> trace_zero;
      for (Elem a = 0; a < f.size(); ++a) {
        if (f.trace(f.pow(a, (std::uint64_t{1} << k) + 1)) == 0) trace_zero.push_back(a);
      }
      const bool ok2 = root == (std::uint64_t{1} << k) + 1 && trace_zero == profile.image;
      push("image of x^(2^k-1) + x^(2^k) = {a : Tr(a^(2^k+1)) = 0}", n, ok2,
           "1/(2^k-1) = " + std::to_string(root) + " mod 2^n-1");
    }

    {
      const auto g = family_x3x4(f);
      const auto rep = detect_forbidden(image_profile(g).image, n);
      const bool ok = is_two_to_one(g) && is_apn(g, opt.threads);
      x3x4_rds.push_back(rep.verdict);
      push("x^3 + x^4: APN, 2-to-1 (image RDS: " + std::string(rep.verdict ? "yes" : "no") + ")", n, ok,
           detail::describe(rep));
    }

    {
      const auto bent_as = sample_nonzero(f, opt.bent_samples, opt.seed + 200 + static_cast<std::uint64_t>(n));
      std::string why;
      bool ok = true;
      for (Elem a : bent_as) {
        const auto fh = bent_from_apn(f, a);
        const auto graph = graph_rds_check(fh);
        const std::uint64_t half = std::uint64_t{1} << (n - 1);
        if (!is_bent(fh)) {
          ok = false, why = "not bent";
        } else if (!(eval_quadratic(quad_coeffs(f, a)) == fh)) {
          ok = false, why = "quadratic form mismatch";
        } else if (bilinear_rank(fh) != n - 1) {
          ok = false, why = "bilinear rank " + std::to_string(bilinear_rank(fh));
        } else if (!graph.verdict || graph.params != RdsParams{half, 2, half, half / 2}) {
          ok = false, why = "graph rds " + detail::describe(graph);
        }
        if (!ok) {
          why = "a=" + std::to_string(a) + ": " + why;
          break;
        }
      }
      push("F_h bent, quadratic, rank n-1, graph is (2^(n-1),2,2^(n-1),2^(n-2)) RDS", n, ok,
           ok ? std::to_string(bent_as.size()) + " values of a" : why);
    }

    {
      bool ok = true;
      std::string why;
      auto check_mono = [&](NamedExponent kind, int i, const char* label) {
        const auto d = named_exponent(kind, n, i);
        if (!is_apn(power_map(f, d), opt.threads)) {
          ok = false;
          why += std::string(label) + " d=" + std::to_string(d) + " not APN; ";
        }
      };
      int count = 0;
      for (int i = 1; i <= (n - 1) / 2; ++i) {
        if (std::gcd(i, n) != 1) continue;
        check_mono(NamedExponent::Gold, i, "gold");
        check_mono(NamedExponent::Kasami, i, "kasami");
        count += 2;
      }
      check_mono(NamedExponent::Welch, 0, "welch");
      push("Gold, Kasami, Welch monomials APN", n, ok, ok ? std::to_string(count + 1) + " exponents" : why);
    }

    {
      const int k = (n + 1) / 2;
      const std::uint64_t p = std::uint64_t{1} << k;
      const bool ok = cyclotomic_equivalent(p - 1, p + 1, n);
      push("x^(2^k-1) cyclotomic-equivalent to Gold x^(2^k+1)", n, ok, "k=" + std::to_string(k));
    }
  }

  if (opt.n_max >= 5) {
    const bool some_fail = std::find(x3x4_rds.begin(), x3x4_rds.end(), false) != x3x4_rds.end();
    push("x^3 + x^4 image is not always an RDS", opt.n_max, some_fail, some_fail ? "failing n found" : "all RDS");
  }
  return results;
}

}  // namespace rdsforge
