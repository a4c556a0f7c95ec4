#pragma once

// Arithmetic in GF(2^n), polynomial basis.
//
// Elements are bitmasks: bit i is the coefficient of x^i. The defining
// polynomial uses the same convention with bit n always set, so x^3+x+1 is
// 0b1011.

#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rdsforge {

using Elem = std::uint32_t;

inline constexpr int kMinDegree = 2;
inline constexpr int kMaxDegree = 24;

namespace detail {

// Polynomials over F2 of degree < 64, bit i = coefficient of x^i.
inline int poly_degree(std::uint64_t p) {
  return p == 0 ? -1 : 63 - std::countl_zero(p);
}

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = poly_degree(m);
  for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) {
    a ^= m << (da - dm);
  }
  return a;
}

inline std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  const int dm = poly_degree(m);
  const std::uint64_t top = std::uint64_t{1} << dm;
  a = poly_mod(a, m);
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & top) a ^= m;
  }
  return r;
}

inline std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a = poly_mod(a, b);
    std::swap(a, b);
  }
  return a;
}

}  // namespace detail

/// True iff `poly` (degree >= 1) is irreducible over F2.
///
/// Uses the Frobenius gcd test: p of degree n is irreducible iff
/// gcd(x^(2^d) - x mod p, p) = 1 for every 1 <= d <= n/2.
inline bool is_irreducible(std::uint64_t poly) {
  const int n = detail::poly_degree(poly);
  if (n < 1) return false;
  if (n == 1) return true;
  std::uint64_t frob = 0b10;  // x^(2^d) mod p, starting at d = 0
  for (int d = 1; d <= n / 2; ++d) {
    frob = detail::poly_mulmod(frob, frob, poly);
    if (detail::poly_gcd(poly, frob ^ 0b10) != 1) return false;
  }
  return true;
}

/// GF(2^n) arithmetic context. Immutable after construction.
class Field {
 public:
  Field(int n, std::uint32_t poly) : n_(n), poly_(poly) {
    if (n < kMinDegree || n > kMaxDegree) {
      throw std::invalid_argument("field degree must lie in [2, 24], got " + std::to_string(n));
    }
    if (detail::poly_degree(poly) != n) {
      throw std::invalid_argument("defining polynomial does not have degree " + std::to_string(n));
    }
    if (!is_irreducible(poly)) {
      throw std::invalid_argument("defining polynomial is reducible");
    }
    for (int i = 0; i < n_; ++i) {
      if (trace_by_powers(Elem{1} << i)) trace_mask_ |= Elem{1} << i;
    }
  }

  int n() const { return n_; }
  std::uint32_t poly() const { return poly_; }
  std::uint32_t size() const { return std::uint32_t{1} << n_; }
  /// Order of the multiplicative group, 2^n - 1.
  std::uint32_t order() const { return size() - 1; }
  bool contains(Elem a) const { return a < size(); }

  Elem mul(Elem a, Elem b) const {
    const Elem top = Elem{1} << n_;
    Elem r = 0;
    while (b != 0) {
      r ^= a & (0u - (b & 1u));
      b >>= 1;
      a <<= 1;
      a ^= poly_ & (0u - ((a & top) >> n_));
    }
    return r;
  }

  Elem square(Elem a) const { return mul(a, a); }

  /// a^e by square-and-multiply. Exponents of nonzero bases are reduced
  /// mod 2^n - 1 first; pow(0, 0) = 1.
  Elem pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    e %= order();
    Elem r = 1;
    while (e != 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("zero has no multiplicative inverse");
    return pow(a, order() - 1);
  }

  /// Absolute trace, evaluated as the parity of a & mask where mask holds
  /// Tr(x^i) for each basis monomial (trace is F2-linear).
  unsigned trace(Elem a) const { return static_cast<unsigned>(std::popcount(a & trace_mask_)) & 1u; }

  Elem trace_mask() const { return trace_mask_; }

  friend bool operator==(const Field& x, const Field& y) {
    return x.n_ == y.n_ && x.poly_ == y.poly_;
  }

 private:
  unsigned trace_by_powers(Elem a) const {
    Elem t = 0;
    for (int i = 0; i < n_; ++i) {
      t ^= a;
      a = mul(a, a);
    }
    return static_cast<unsigned>(t);
  }

  int n_;
  std::uint32_t poly_;
  Elem trace_mask_ = 0;
};

/// GF(2^n) with the numerically smallest irreducible polynomial of degree n.
inline Field make_field(int n) {
  if (n < kMinDegree || n > kMaxDegree) {
    throw std::invalid_argument("field degree must lie in [2, 24], got " + std::to_string(n));
  }
  for (std::uint64_t p = std::uint64_t{1} << n; p < (std::uint64_t{2} << n); ++p) {
    if ((p & 1) && is_irreducible(p)) return Field(n, static_cast<std::uint32_t>(p));
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

inline Elem fmul(const Field& f, Elem a, Elem b) { return f.mul(a, b); }
inline Elem fpow(const Field& f, Elem a, std::uint64_t e) { return f.pow(a, e); }
inline Elem finv(const Field& f, Elem a) { return f.inv(a); }
inline unsigned trace(const Field& f, Elem a) { return f.trace(a); }

/// d with e*d = 1 (mod modulus) and 0 < d < modulus. For modulus 1 returns 1.
inline std::uint64_t exponent_inverse(std::uint64_t e, std::uint64_t modulus) {
  if (modulus == 0) throw std::invalid_argument("modulus must be positive");
  if (std::gcd(e, modulus) != 1) throw std::invalid_argument("exponent not invertible");
  if (modulus == 1) return 1;
  std::int64_t old_r = static_cast<std::int64_t>(e % modulus), r = static_cast<std::int64_t>(modulus);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
  }
  const auto m = static_cast<std::int64_t>(modulus);
  return static_cast<std::uint64_t>(((old_s % m) + m) % m);
}

/// Incremental row-echelon set of F2 vectors, keyed by leading bit.
class Gf2Echelon {
 public:
  explicit Gf2Echelon(int bits) : pivots_(static_cast<std::size_t>(bits), 0) {}

  /// Reduces v against the current span; zero iff v is dependent.
  std::uint64_t reduce(std::uint64_t v) const {
    for (int b = static_cast<int>(pivots_.size()) - 1; b >= 0; --b) {
      if (((v >> b) & 1) && pivots_[static_cast<std::size_t>(b)] != 0) v ^= pivots_[static_cast<std::size_t>(b)];
    }
    return v;
  }

  /// Adds v if independent; returns whether the rank grew.
  bool insert(std::uint64_t v) {
    v = reduce(v);
    if (v == 0) return false;
    pivots_[static_cast<std::size_t>(detail::poly_degree(v))] = v;
    ++rank_;
    return true;
  }

  int rank() const { return rank_; }

 private:
  std::vector<std::uint64_t> pivots_;
  int rank_ = 0;
};

/// F2-rank of a set of bit vectors.
inline int gf2_rank(const std::vector<std::uint64_t>& rows, int bits) {
  Gf2Echelon e(bits);
  for (auto r : rows) e.insert(r);
  return e.rank();
}

/// An ordered F2-basis of the field starting with `first`, completed by
/// greedily scanning 1, 2, 3, ... for independent elements.
inline std::vector<Elem> complete_basis(const Field& f, Elem first) {
  if (first == 0) throw std::invalid_argument("basis cannot start with zero");
  if (!f.contains(first)) throw std::invalid_argument("element outside the field");
  Gf2Echelon ech(f.n());
  std::vector<Elem> basis{first};
  ech.insert(first);
  for (Elem c = 1; ech.rank() < f.n(); ++c) {
    if (ech.insert(c)) basis.push_back(c);
  }
  return basis;
}

inline void to_json(nlohmann::json& j, const Field& f) {
  j = nlohmann::json{{"n", f.n()}, {"poly", f.poly()}};
}

inline Field field_from_json(const nlohmann::json& j) {
  return Field(j.at("n").get<int>(), j.at("poly").get<std::uint32_t>());
}

}  // namespace rdsforge
