#pragma once

// Cyclotomic equivalence of power maps and EA transforms under explicit
// affine witnesses.

#include <bit>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "rdsforge/field.hpp"
#include "rdsforge/value_table.hpp"

namespace rdsforge {

/// x^k ~ x^l over GF(2^n): l = k 2^a or k l = 2^a (mod 2^n - 1) for some
/// 0 <= a < n. Requires gcd(k, 2^n - 1) = 1.
inline bool cyclotomic_equivalent(std::uint64_t k, std::uint64_t l, int n) {
  if (n < 1 || n > 62) throw std::invalid_argument("n out of range");
  const std::uint64_t mod = (std::uint64_t{1} << n) - 1;
  if (std::gcd(k % mod, mod) != 1 && mod != 1) {
    throw std::invalid_argument("exponent k must be coprime to 2^n - 1");
  }
  const unsigned __int128 kk = k % mod, ll = l % mod;
  std::uint64_t two_a = 1;
  for (int a = 0; a < n; ++a, two_a <<= 1) {
    const std::uint64_t t = two_a % mod;
    if ((kk * two_a) % mod == ll) return true;
    if ((kk * ll) % mod == t) return true;
  }
  return false;
}

/// y -> linear[y] + constant, with `linear` an F2-linear bijection.
class AffineWitness {
 public:
  AffineWitness(ValueTable linear, Elem constant) : linear_(std::move(linear)), constant_(constant) {
    if (!is_linear(linear_) || !is_permutation(linear_)) {
      throw std::invalid_argument("affine witness requires a linear permutation");
    }
    if (!linear_.field().contains(constant_)) throw std::invalid_argument("constant outside the field");
  }

  static AffineWitness identity(const Field& f) { return AffineWitness(ValueTable::identity(f), 0); }

  const ValueTable& linear() const { return linear_; }
  Elem constant() const { return constant_; }
  const Field& field() const { return linear_.field(); }
  Elem operator()(Elem y) const { return linear_[y] ^ constant_; }

 private:
  ValueTable linear_;
  Elem constant_;
};

/// Linear map sending the i-th monomial basis vector to columns[i].
inline ValueTable linear_from_columns(const Field& f, const std::vector<Elem>& columns) {
  if (columns.size() != static_cast<std::size_t>(f.n())) throw std::invalid_argument("need n columns");
  std::vector<Elem> values(f.size(), 0);
  for (Elem x = 1; x < f.size(); ++x) {
    const Elem low = x & (0u - x);
    values[x] = values[x ^ low] ^ columns[static_cast<std::size_t>(std::countr_zero(low))];
  }
  return ValueTable(f, std::move(values));
}

/// Uniform random invertible F2-linear map by rejection sampling of column
/// matrices.
template <typename Rng>
ValueTable random_linear_permutation(const Field& f, Rng& rng) {
  std::uniform_int_distribution<Elem> pick(0, f.size() - 1);
  for (;;) {
    std::vector<Elem> cols(static_cast<std::size_t>(f.n()));
    Gf2Echelon ech(f.n());
    bool full = true;
    for (auto& c : cols) {
      c = pick(rng);
      full = full && ech.insert(c);
    }
    if (full) return linear_from_columns(f, cols);
  }
}

template <typename Rng>
AffineWitness random_affine_witness(const Field& f, Rng& rng) {
  std::uniform_int_distribution<Elem> pick(0, f.size() - 1);
  auto lin = random_linear_permutation(f, rng);
  return AffineWitness(std::move(lin), pick(rng));
}

/// Random affine (not necessarily bijective) function x -> L(x) + c.
template <typename Rng>
ValueTable random_affine_function(const Field& f, Rng& rng) {
  std::uniform_int_distribution<Elem> pick(0, f.size() - 1);
  std::vector<Elem> cols(static_cast<std::size_t>(f.n()));
  for (auto& c : cols) c = pick(rng);
  const auto lin = linear_from_columns(f, cols);
  const Elem c = pick(rng);
  return ValueTable::tabulate(f, [&](Elem x) { return lin[x] ^ c; });
}

/// True iff t(x) + t(0) is F2-linear.
inline bool is_affine(const ValueTable& t) {
  const Elem c = t[0];
  return is_linear(ValueTable::tabulate(t.field(), [&](Elem x) { return t[x] ^ c; }));
}

/// G = A o F o B + C.
inline ValueTable ea_apply(const ValueTable& f, const AffineWitness& a, const AffineWitness& b, const ValueTable& c) {
  if (!(a.field() == f.field()) || !(b.field() == f.field()) || !(c.field() == f.field())) {
    throw std::invalid_argument("EA components are over different fields");
  }
  if (!is_affine(c)) throw std::invalid_argument("C must be affine");
  return ValueTable::tabulate(f.field(), [&](Elem x) { return a(f[b(x)]) ^ c[x]; });
}

}  // namespace rdsforge
