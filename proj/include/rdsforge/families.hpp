#pragma once

// Constructors for the 2-to-1 APN families and the classical APN monomials.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rdsforge/field.hpp"
#include "rdsforge/value_table.hpp"

namespace rdsforge {

enum class Family { PaperLinear, PaperCubic, KGamma, SpecialPower, X3X4, Gold, Kasami, Welch, Power };

inline constexpr std::array<std::pair<Family, std::string_view>, 9> kFamilyNames{{
    {Family::PaperLinear, "paper-linear"},
    {Family::PaperCubic, "paper-cubic"},
    {Family::KGamma, "kgamma"},
    {Family::SpecialPower, "special"},
    {Family::X3X4, "x3x4"},
    {Family::Gold, "gold"},
    {Family::Kasami, "kasami"},
    {Family::Welch, "welch"},
    {Family::Power, "power"},
}};

inline std::string_view family_name(Family f) {
  for (const auto& [fam, name] : kFamilyNames) {
    if (fam == f) return name;
  }
  return "unknown";
}

inline Family parse_family(std::string_view name) {
  for (const auto& [fam, name2] : kFamilyNames) {
    if (name2 == name) return fam;
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

/// True for families only defined over odd-degree fields.
inline bool family_requires_odd_n(Family f) {
  switch (f) {
    case Family::PaperLinear:
    case Family::PaperCubic:
    case Family::KGamma:
    case Family::SpecialPower:
    case Family::X3X4:
    case Family::Welch:
      return true;
    default:
      return false;
  }
}

struct FamilyParams {
  Family family = Family::Power;
  std::optional<Elem> a, alpha, beta, gamma;
  std::optional<int> i;
  std::optional<std::uint64_t> d;
};

namespace detail {

inline void require_odd(const Field& f, std::string_view family) {
  if (f.n() % 2 == 0) {
    throw std::invalid_argument(std::string(family) + " family requires odd n");
  }
}

inline void require_nonzero(const Field& f, Elem v, std::string_view what) {
  if (v == 0) throw std::invalid_argument(std::string(what) + " must be nonzero");
  if (!f.contains(v)) throw std::invalid_argument(std::string(what) + " lies outside the field");
}

template <typename T>
const T& require_param(const std::optional<T>& p, std::string_view what) {
  if (!p) throw std::invalid_argument("missing parameter " + std::string(what));
  return *p;
}

}  // namespace detail

/// x -> x + a^{-1} Tr(a^3 x^3).
inline ValueTable family_paper_linear(const Field& f, Elem a) {
  detail::require_odd(f, "paper-linear");
  detail::require_nonzero(f, a, "a");
  const Elem a_inv = f.inv(a);
  const Elem a3 = f.pow(a, 3);
  return ValueTable::tabulate(f, [&](Elem x) {
    const Elem bit = f.trace(f.mul(a3, f.pow(x, 3)));
    return x ^ (a_inv & (0u - bit));
  });
}

/// x -> x^3 + a^{-1} Tr(a^3 x^9).
inline ValueTable family_paper_cubic(const Field& f, Elem a) {
  detail::require_odd(f, "paper-cubic");
  detail::require_nonzero(f, a, "a");
  const Elem a_inv = f.inv(a);
  const Elem a3 = f.pow(a, 3);
  return ValueTable::tabulate(f, [&](Elem x) {
    const Elem x3 = f.pow(x, 3);
    const Elem bit = f.trace(f.mul(a3, f.pow(x3, 3)));
    return x3 ^ (a_inv & (0u - bit));
  });
}

/// {x^2 + alpha x : x in GF(2^n)} as a sorted set.
inline std::vector<Elem> linearized_image(const Field& f, Elem alpha) {
  std::vector<bool> hit(f.size(), false);
  for (Elem x = 0; x < f.size(); ++x) hit[f.square(x) ^ f.mul(alpha, x)] = true;
  std::vector<Elem> out;
  for (Elem v = 0; v < f.size(); ++v) {
    if (hit[v]) out.push_back(v);
  }
  return out;
}

/// The linear map l(x) = x^2 + alpha x + gamma Tr(beta x).
inline ValueTable kgamma_linear_part(const Field& f, Elem alpha, Elem beta, Elem gamma) {
  return ValueTable::tabulate(f, [&](Elem x) {
    return f.square(x) ^ f.mul(alpha, x) ^ (gamma & (0u - f.trace(f.mul(beta, x))));
  });
}

/// k(x) = x^6 + alpha x^3 + gamma Tr(alpha^{-3} x^9 + beta x^3).
///
/// Rejects parameters outside the APN hypotheses: alpha, beta, gamma nonzero,
/// gamma not of the form x^2 + alpha x, and Tr(beta alpha) = 1.
inline ValueTable family_kgamma(const Field& f, Elem alpha, Elem beta, Elem gamma) {
  detail::require_odd(f, "kgamma");
  detail::require_nonzero(f, alpha, "alpha");
  detail::require_nonzero(f, beta, "beta");
  detail::require_nonzero(f, gamma, "gamma");
  const auto img = linearized_image(f, alpha);
  if (std::binary_search(img.begin(), img.end(), gamma)) {
    throw std::invalid_argument("gamma lies in {x^2 + alpha x}");
  }
  if (f.trace(f.mul(beta, alpha)) != 1) {
    throw std::invalid_argument("trace condition failed: Tr(beta * alpha) != 1");
  }
  const Elem alpha_m3 = f.inv(f.pow(alpha, 3));
  return ValueTable::tabulate(f, [&](Elem x) {
    const Elem x3 = f.pow(x, 3);
    const Elem x9 = f.pow(x3, 3);
    const Elem bit = f.trace(f.mul(alpha_m3, x9) ^ f.mul(beta, x3));
    return f.square(x3) ^ f.mul(alpha, x3) ^ (gamma & (0u - bit));
  });
}

/// k = (n + 1) / 2 for the field GF(2^{2k-1}).
inline int special_index(const Field& f) {
  detail::require_odd(f, "special");
  if (f.n() < 3) throw std::invalid_argument("special family requires n >= 3");
  return (f.n() + 1) / 2;
}

/// x^{2^k - 1} + x^{2^k} over GF(2^{2k-1}).
inline ValueTable family_special(const Field& f) {
  const int k = special_index(f);
  const std::uint64_t e = std::uint64_t{1} << k;
  return ValueTable::tabulate(f, [&](Elem x) { return f.pow(x, e - 1) ^ f.pow(x, e); });
}

inline ValueTable family_x3x4(const Field& f) {
  detail::require_odd(f, "x3x4");
  return ValueTable::tabulate(f, [&](Elem x) { return f.pow(x, 3) ^ f.pow(x, 4); });
}

enum class NamedExponent { Gold, Kasami, Welch };

/// Exponent of the Gold (2^i+1), Kasami (2^{2i}-2^i+1) or Welch (2^k+3,
/// n = 2k+1) monomial. `i` is ignored for Welch.
inline std::uint64_t named_exponent(NamedExponent kind, int n, int i) {
  if (kind == NamedExponent::Welch) {
    if (n % 2 == 0 || n < 3) throw std::invalid_argument("Welch exponent requires odd n >= 3");
    return (std::uint64_t{1} << ((n - 1) / 2)) + 3;
  }
  if (i < 1 || i > (n - 1) / 2) {
    throw std::invalid_argument("index i must satisfy 1 <= i <= (n-1)/2");
  }
  if (std::gcd(i, n) != 1) throw std::invalid_argument("index i must be coprime to n");
  const std::uint64_t p = std::uint64_t{1} << i;
  return kind == NamedExponent::Gold ? p + 1 : p * p - p + 1;
}

/// Builds any family from its parameter bundle.
inline ValueTable build_family(const Field& f, const FamilyParams& p) {
  switch (p.family) {
    case Family::PaperLinear:
      return family_paper_linear(f, detail::require_param(p.a, "a"));
    case Family::PaperCubic:
      return family_paper_cubic(f, detail::require_param(p.a, "a"));
    case Family::KGamma:
      return family_kgamma(f, detail::require_param(p.alpha, "alpha"), detail::require_param(p.beta, "beta"),
                           detail::require_param(p.gamma, "gamma"));
    case Family::SpecialPower:
      return family_special(f);
    case Family::X3X4:
      return family_x3x4(f);
    case Family::Gold:
      return power_map(f, named_exponent(NamedExponent::Gold, f.n(), detail::require_param(p.i, "i")));
    case Family::Kasami:
      return power_map(f, named_exponent(NamedExponent::Kasami, f.n(), detail::require_param(p.i, "i")));
    case Family::Welch:
      return power_map(f, named_exponent(NamedExponent::Welch, f.n(), 0));
    case Family::Power:
      return power_map(f, detail::require_param(p.d, "d"));
  }
  throw std::logic_error("unhandled family");
}

}  // namespace rdsforge
