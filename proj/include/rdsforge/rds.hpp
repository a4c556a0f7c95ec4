#pragma once

// Relative difference sets in the elementary abelian group (F_2^bits, xor).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsforge/field.hpp"

namespace rdsforge {

struct RdsParams {
  std::uint64_t m = 0;       // |G| / |N|
  std::uint64_t n_sub = 0;   // |N|
  std::uint64_t k = 0;       // |D|
  std::uint64_t lambda = 0;  // common difference count outside N

  friend bool operator==(const RdsParams&, const RdsParams&) = default;
};

/// k(k-1) = lambda * n_sub * (m-1).
inline bool param_identity_check(const RdsParams& p) {
  return p.k * (p.k - (p.k > 0 ? 1 : 0)) == p.lambda * p.n_sub * (p.m > 0 ? p.m - 1 : 0);
}

struct RdsCounterexample {
  Elem element = 0;
  std::uint64_t observed = 0;
  std::uint64_t expected = 0;

  friend bool operator==(const RdsCounterexample&, const RdsCounterexample&) = default;
};

struct RdsReport {
  bool verdict = false;
  std::optional<RdsParams> params;
  std::vector<Elem> forbidden;
  std::optional<RdsCounterexample> counterexample;
};

namespace detail {

inline void check_members(std::span<const Elem> set, int group_bits, std::string_view what) {
  if (group_bits < 0 || group_bits > 30) throw std::invalid_argument("group_bits out of range");
  const std::uint64_t size = std::uint64_t{1} << group_bits;
  std::vector<bool> seen(size, false);
  for (Elem d : set) {
    if (d >= size) throw std::invalid_argument(std::string(what) + " element outside the group");
    if (seen[d]) throw std::invalid_argument(std::string(what) + " contains a repeated element");
    seen[d] = true;
  }
}

/// In-place unnormalized Walsh-Hadamard butterfly.
template <typename T>
void hadamard_in_place(std::vector<T>& v) {
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T x = v[j], y = v[j + h];
        v[j] = x + y;
        v[j + h] = x - y;
      }
    }
  }
}

}  // namespace detail

/// counts[g] = number of ordered pairs (d, d') in D x D, d != d', with d + d' = g.
/// Direct O(|D|^2) enumeration.
inline std::vector<std::uint64_t> difference_counts_pairwise(std::span<const Elem> set, int group_bits) {
  detail::check_members(set, group_bits, "difference set");
  std::vector<std::uint64_t> counts(std::size_t{1} << group_bits, 0);
  for (Elem d : set) {
    for (Elem e : set) ++counts[d ^ e];
  }
  counts[0] = 0;
  return counts;
}

/// Same counts via the autocorrelation of the indicator of D, computed with
/// two Walsh-Hadamard transforms in O(bits * 2^bits).
inline std::vector<std::uint64_t> difference_counts_walsh(std::span<const Elem> set, int group_bits) {
  detail::check_members(set, group_bits, "difference set");
  std::vector<std::int64_t> v(std::size_t{1} << group_bits, 0);
  for (Elem d : set) v[d] = 1;
  detail::hadamard_in_place(v);
  for (auto& x : v) x *= x;
  detail::hadamard_in_place(v);
  std::vector<std::uint64_t> counts(v.size());
  for (std::size_t g = 0; g < v.size(); ++g) counts[g] = static_cast<std::uint64_t>(v[g] >> group_bits);
  counts[0] = 0;
  return counts;
}

inline std::vector<std::uint64_t> difference_counts(std::span<const Elem> set, int group_bits) {
  if (set.empty()) throw std::invalid_argument("difference set must be nonempty");
  const std::uint64_t pairs = std::uint64_t{set.size()} * set.size();
  const std::uint64_t transform = 2 * std::uint64_t(group_bits + 1) << group_bits;
  return pairs > transform ? difference_counts_walsh(set, group_bits) : difference_counts_pairwise(set, group_bits);
}

namespace detail {

// Whether `sub` (distinct elements) is an F2-subspace: it must contain 0 and
// have exactly 2^rank elements.
inline bool is_subgroup(std::span<const Elem> sub, int group_bits) {
  bool has_zero = false;
  Gf2Echelon ech(group_bits);
  for (Elem g : sub) {
    has_zero |= (g == 0);
    ech.insert(g);
  }
  return has_zero && sub.size() == (std::size_t{1} << ech.rank());
}

inline RdsReport evaluate_rds(std::span<const std::uint64_t> counts, std::vector<Elem> forbidden, std::uint64_t k) {
  std::vector<bool> in_n(counts.size(), false);
  for (Elem g : forbidden) in_n[g] = true;
  const std::uint64_t group = counts.size();
  const std::uint64_t n_sub = forbidden.size();
  const std::uint64_t outside = group - n_sub;

  std::uint64_t lambda = 0;
  if (outside > 0) {
    const std::uint64_t total = k * (k - 1);
    if (total % outside == 0) {
      lambda = total / outside;
    } else {
      for (std::size_t g = 1; g < counts.size(); ++g) {
        if (!in_n[g]) {
          lambda = counts[g];
          break;
        }
      }
    }
  }

  RdsReport r;
  for (std::size_t g = 1; g < counts.size(); ++g) {
    const std::uint64_t expected = in_n[g] ? 0 : lambda;
    if (counts[g] != expected) {
      r.counterexample = RdsCounterexample{static_cast<Elem>(g), counts[g], expected};
      break;
    }
  }
  r.verdict = !r.counterexample.has_value();
  if (r.verdict) r.params = RdsParams{group / n_sub, n_sub, k, lambda};
  std::sort(forbidden.begin(), forbidden.end());
  r.forbidden = std::move(forbidden);
  return r;
}

}  // namespace detail

/// Checks that D is a relative difference set with forbidden subgroup N.
/// On failure the counterexample is the smallest violating group element.
inline RdsReport check_rds(std::span<const Elem> set, std::span<const Elem> forbidden, int group_bits) {
  detail::check_members(forbidden, group_bits, "forbidden subgroup");
  if (!detail::is_subgroup(forbidden, group_bits)) {
    throw std::invalid_argument("forbidden set is not a subgroup");
  }
  const auto counts = difference_counts(set, group_bits);
  return detail::evaluate_rds(counts, std::vector<Elem>(forbidden.begin(), forbidden.end()), set.size());
}

/// Finds the forbidden subgroup as {0} plus every uncovered difference, then
/// checks D against it.
inline RdsReport detect_forbidden(std::span<const Elem> set, int group_bits) {
  const auto counts = difference_counts(set, group_bits);
  std::vector<Elem> candidate{0};
  for (std::size_t g = 1; g < counts.size(); ++g) {
    if (counts[g] == 0) candidate.push_back(static_cast<Elem>(g));
  }
  if (detail::is_subgroup(candidate, group_bits)) {
    return detail::evaluate_rds(counts, std::move(candidate), set.size());
  }
  // The smallest element of span(N) \ N is a covered difference that a
  // subgroup would have to forbid.
  Gf2Echelon ech(group_bits);
  for (Elem g : candidate) ech.insert(g);
  RdsReport r;
  for (std::size_t g = 1; g < counts.size(); ++g) {
    if (counts[g] != 0 && ech.reduce(g) == 0) {
      r.counterexample = RdsCounterexample{static_cast<Elem>(g), counts[g], 0};
      break;
    }
  }
  r.forbidden = std::move(candidate);
  return r;
}

inline nlohmann::ordered_json rds_params_json(const RdsParams& p) {
  return nlohmann::ordered_json{{"m", p.m}, {"n", p.n_sub}, {"k", p.k}, {"lambda", p.lambda}};
}

inline nlohmann::ordered_json rds_report_json(const RdsReport& r) {
  nlohmann::ordered_json j;
  j["verdict"] = r.verdict;
  if (r.params) {
    j["m"] = r.params->m;
    j["n"] = r.params->n_sub;
    j["k"] = r.params->k;
    j["lambda"] = r.params->lambda;
  } else {
    j["m"] = nullptr;
    j["n"] = nullptr;
    j["k"] = nullptr;
    j["lambda"] = nullptr;
  }
  j["forbidden"] = r.forbidden;
  if (r.counterexample) {
    j["counterexample"] = nlohmann::ordered_json{{"element", r.counterexample->element},
                                                 {"observed", r.counterexample->observed},
                                                 {"expected", r.counterexample->expected}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

}  // namespace rdsforge
