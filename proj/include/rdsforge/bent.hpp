#pragma once

// Boolean functions on F_2^m: Walsh spectra, bentness, quadratic forms, and
// the bent function carried by a relative difference set with |N| = 2.
//
// Truth-table index u encodes (x_1, ..., x_m) with x_i = bit i-1 of u.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsforge/field.hpp"
#include "rdsforge/rds.hpp"

namespace rdsforge {

class TruthTable {
 public:
  TruthTable(int m, std::vector<std::uint8_t> bits) : m_(m), bits_(std::move(bits)) {
    if (m < 0 || m > 30) throw std::invalid_argument("variable count out of range");
    if (bits_.size() != (std::size_t{1} << m)) throw std::invalid_argument("truth table length must be 2^m");
    for (auto b : bits_) {
      if (b > 1) throw std::invalid_argument("truth table entries must be 0 or 1");
    }
  }

  template <typename Fn>
  static TruthTable tabulate(int m, Fn&& fn) {
    std::vector<std::uint8_t> bits(std::size_t{1} << m);
    for (std::uint32_t u = 0; u < bits.size(); ++u) bits[u] = static_cast<std::uint8_t>(fn(u) & 1u);
    return TruthTable(m, std::move(bits));
  }

  int m() const { return m_; }
  std::size_t size() const { return bits_.size(); }
  unsigned operator[](std::uint32_t u) const { return bits_[u]; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int m_;
  std::vector<std::uint8_t> bits_;
};

/// W(u) = sum_x (-1)^{F(x) + <u, x>}.
struct WalshSpectrum {
  std::vector<std::int64_t> values;
};

inline WalshSpectrum walsh(const TruthTable& f) {
  WalshSpectrum w;
  w.values.resize(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) w.values[x] = f[static_cast<std::uint32_t>(x)] ? -1 : 1;
  detail::hadamard_in_place(w.values);
  return w;
}

/// Flat spectrum test. Odd m always yields false and sets `why` if given.
inline bool is_bent(const TruthTable& f, std::string* why = nullptr) {
  if (f.m() % 2 != 0) {
    if (why) *why = "bent functions require an even number of variables";
    return false;
  }
  const std::int64_t flat = std::int64_t{1} << (f.m() / 2);
  const auto w = walsh(f);
  return std::all_of(w.values.begin(), w.values.end(), [&](std::int64_t v) { return std::llabs(v) == flat; });
}

/// Minimum Hamming distance to the 2^{m+1} affine functions,
/// 2^{m-1} - max|W| / 2.
inline std::uint64_t distance_to_affine(const TruthTable& f) {
  const auto w = walsh(f);
  std::int64_t peak = 0;
  for (auto v : w.values) peak = std::max<std::int64_t>(peak, std::llabs(v));
  return static_cast<std::uint64_t>((static_cast<std::int64_t>(f.size()) - peak) / 2);
}

/// Algebraic normal form via the binary Moebius transform: entry u is the
/// coefficient of the monomial prod_{i in u} x_i.
inline std::vector<std::uint8_t> anf(const TruthTable& f) {
  std::vector<std::uint8_t> a(f.bits().begin(), f.bits().end());
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i & h) a[i] ^= a[i ^ h];
    }
  }
  return a;
}

/// Highest monomial weight in the ANF; -1 for the zero function.
inline int algebraic_degree(const TruthTable& f) {
  const auto a = anf(f);
  int deg = -1;
  for (std::size_t u = 0; u < a.size(); ++u) {
    if (a[u]) deg = std::max(deg, std::popcount(u));
  }
  return deg;
}

/// sum_{i,j} a_ij x_i x_j with x_i^2 = x_i. Row i of `coeffs` is a bitmask
/// over j (0-based, so a_{i+1, j+1} in one-based notation).
struct QuadraticForm {
  int m = 0;
  std::vector<std::uint32_t> coeffs;

  unsigned coeff(int i, int j) const { return (coeffs[static_cast<std::size_t>(i)] >> j) & 1u; }
};

inline TruthTable eval_quadratic(const QuadraticForm& q) {
  return TruthTable::tabulate(q.m, [&](std::uint32_t x) {
    unsigned acc = 0;
    for (int i = 0; i < q.m; ++i) {
      if ((x >> i) & 1u) acc ^= static_cast<unsigned>(std::popcount(q.coeffs[static_cast<std::size_t>(i)] & x));
    }
    return acc & 1u;
  });
}

/// F2-rank of the bilinear form B(x, y) = F(x+y) + F(x) + F(y) + F(0).
///
/// Throws if F has algebraic degree above 2, where B is not bilinear.
/// Quadratic F is bent iff the rank equals m, and two quadratics are affine
/// equivalent iff their ranks agree.
inline int bilinear_rank(const TruthTable& f) {
  if (algebraic_degree(f) > 2) {
    throw std::invalid_argument("function has degree > 2; derived form is not bilinear");
  }
  const int m = f.m();
  std::vector<std::uint64_t> gram(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const std::uint32_t ei = 1u << i, ej = 1u << j;
      if (f[ei ^ ej] ^ f[ei] ^ f[ej] ^ f[0]) gram[static_cast<std::size_t>(i)] |= std::uint64_t{1} << j;
    }
  }
  return gf2_rank(gram, std::max(m, 1));
}

/// For every nonzero a, F(x+a) + F(x) is balanced.
inline bool derivative_balance(const TruthTable& f) {
  const std::uint32_t size = static_cast<std::uint32_t>(f.size());
  for (std::uint32_t a = 1; a < size; ++a) {
    std::uint32_t zeros = 0;
    for (std::uint32_t x = 0; x < size; ++x) zeros += (f[x ^ a] == f[x]);
    if (zeros * 2 != size) return false;
  }
  return true;
}

/// The graph {(x, F(x))} in F_2^{m+1} (value in the least significant bit),
/// checked as a relative difference set against N = {0, 1}.
inline RdsReport graph_rds_check(const TruthTable& f) {
  std::vector<Elem> graph(f.size());
  for (std::uint32_t x = 0; x < f.size(); ++x) graph[x] = (x << 1) | f[x];
  const std::vector<Elem> forbidden{0, 1};
  return check_rds(graph, forbidden, f.m() + 1);
}

/// Boolean function carried by a set D meeting each coset of {0, c} once.
///
/// With basis (c, w_1, ..., w_{n-1}) from complete_basis, the coset of
/// y = sum x_i w_i contributes y + F(x) c to D.
inline TruthTable graph_function_from_image(const Field& field, std::span<const Elem> image, Elem c) {
  const auto basis = complete_basis(field, c);
  std::vector<bool> in_d(field.size(), false);
  for (Elem d : image) in_d.at(d) = true;
  const int m = field.n() - 1;
  return TruthTable::tabulate(m, [&](std::uint32_t u) {
    Elem y = 0;
    for (int i = 0; i < m; ++i) {
      if ((u >> i) & 1u) y ^= basis[static_cast<std::size_t>(i + 1)];
    }
    if (in_d[y] == in_d[y ^ c]) {
      throw std::invalid_argument("image does not meet every coset of {0, c} exactly once");
    }
    return in_d[y] ? 0u : 1u;
  });
}

/// Bent-side view of an image set whose RDS report is known.
struct BentSummary {
  /// Image is an RDS with |N| = 2 meeting every coset once, so it carries
  /// a Boolean function on n-1 variables.
  bool carried = false;
  bool is_bent = false;
  int degree = -1;
  std::optional<int> bilinear_rank;
  /// F(0), the constant of the canonical quadratic form.
  unsigned epsilon = 0;
  std::optional<TruthTable> function;
};

inline BentSummary bent_summary_from_image(const Field& field, std::span<const Elem> image, const RdsReport& rds) {
  BentSummary s;
  s.carried = rds.verdict && rds.forbidden.size() == 2 && image.size() * 2 == field.size();
  if (!s.carried) return s;
  auto fn = graph_function_from_image(field, image, rds.forbidden[1]);
  s.is_bent = is_bent(fn);
  s.degree = algebraic_degree(fn);
  if (s.degree <= 2) s.bilinear_rank = bilinear_rank(fn);
  s.epsilon = fn[0];
  s.function = std::move(fn);
  return s;
}

namespace detail {
inline void require_bent_source(const Field& field, Elem a) {
  if (field.n() % 2 == 0) throw std::invalid_argument("bent construction requires odd n");
  if (a == 0 || !field.contains(a)) throw std::invalid_argument("a must be a nonzero field element");
}
}  // namespace detail

/// F_h(x_1, ..., x_{n-1}) = Tr(a^3 x^3) with x = sum x_i w_i, where
/// (a^{-1}, w_1, ..., w_{n-1}) is complete_basis(a^{-1}).
inline TruthTable bent_from_apn(const Field& field, Elem a) {
  detail::require_bent_source(field, a);
  const auto basis = complete_basis(field, field.inv(a));
  const Elem a3 = field.pow(a, 3);
  const int m = field.n() - 1;
  return TruthTable::tabulate(m, [&](std::uint32_t u) {
    Elem x = 0;
    for (int i = 0; i < m; ++i) {
      if ((u >> i) & 1u) x ^= basis[static_cast<std::size_t>(i + 1)];
    }
    return field.trace(field.mul(a3, field.pow(x, 3)));
  });
}

/// a_ij = Tr(b_i^2 b_j) with b_i = a w_i over the bent_from_apn basis.
inline QuadraticForm quad_coeffs(const Field& field, Elem a) {
  detail::require_bent_source(field, a);
  const auto basis = complete_basis(field, field.inv(a));
  QuadraticForm q;
  q.m = field.n() - 1;
  q.coeffs.assign(static_cast<std::size_t>(q.m), 0);
  std::vector<Elem> b(static_cast<std::size_t>(q.m));
  for (int i = 0; i < q.m; ++i) b[static_cast<std::size_t>(i)] = field.mul(a, basis[static_cast<std::size_t>(i + 1)]);
  for (int i = 0; i < q.m; ++i) {
    const Elem bi2 = field.square(b[static_cast<std::size_t>(i)]);
    for (int j = 0; j < q.m; ++j) {
      if (field.trace(field.mul(bi2, b[static_cast<std::size_t>(j)]))) q.coeffs[static_cast<std::size_t>(i)] |= 1u << j;
    }
  }
  return q;
}

inline void to_json(nlohmann::json& j, const TruthTable& t) {
  j = nlohmann::json{{"m", t.m()}, {"bits", t.bits()}};
}

inline TruthTable truth_table_from_json(const nlohmann::json& j) {
  return TruthTable(j.at("m").get<int>(), j.at("bits").get<std::vector<std::uint8_t>>());
}

}  // namespace rdsforge
