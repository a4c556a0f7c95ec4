#pragma once

// Vectorial functions GF(2^n) -> GF(2^n) materialized as full value tables.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rdsforge/field.hpp"

namespace rdsforge {

class ValueTable {
 public:
  ValueTable(Field field, std::vector<Elem> values) : field_(field), values_(std::move(values)) {
    if (values_.size() != field_.size()) {
      throw std::invalid_argument("value table length must be 2^n");
    }
    for (Elem v : values_) {
      if (!field_.contains(v)) throw std::invalid_argument("value table entry outside the field");
    }
  }

  /// Tabulates fn(x) for every x.
  template <typename Fn>
  static ValueTable tabulate(const Field& field, Fn&& fn) {
    std::vector<Elem> values(field.size());
    for (Elem x = 0; x < field.size(); ++x) values[x] = fn(x);
    return ValueTable(field, std::move(values));
  }

  static ValueTable identity(const Field& field) {
    return tabulate(field, [](Elem x) { return x; });
  }

  const Field& field() const { return field_; }
  std::size_t size() const { return values_.size(); }
  Elem operator[](Elem x) const { return values_[x]; }
  std::span<const Elem> values() const { return values_; }

  friend bool operator==(const ValueTable& a, const ValueTable& b) {
    return a.field_ == b.field_ && a.values_ == b.values_;
  }

 private:
  Field field_;
  std::vector<Elem> values_;
};

inline ValueTable power_map(const Field& field, std::uint64_t d) {
  return ValueTable::tabulate(field, [&](Elem x) { return field.pow(x, d); });
}

namespace detail {
inline void require_same_field(const ValueTable& f, const ValueTable& g) {
  if (!(f.field() == g.field())) throw std::invalid_argument("tables are over different fields");
}
}  // namespace detail

/// (f o g)(x) = f(g(x)).
inline ValueTable compose(const ValueTable& f, const ValueTable& g) {
  detail::require_same_field(f, g);
  return ValueTable::tabulate(f.field(), [&](Elem x) { return f[g[x]]; });
}

inline ValueTable pointwise_add(const ValueTable& f, const ValueTable& g) {
  detail::require_same_field(f, g);
  return ValueTable::tabulate(f.field(), [&](Elem x) { return f[x] ^ g[x]; });
}

inline bool is_permutation(const ValueTable& f) {
  std::vector<bool> seen(f.size(), false);
  for (Elem v : f.values()) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

/// F2-linearity. Checks f(0) = 0, then that f agrees everywhere with the
/// linear map determined by its values on the monomial basis; that is
/// equivalent to f(x+y) = f(x) + f(y) for all pairs.
inline bool is_linear(const ValueTable& f) {
  if (f[0] != 0) return false;
  for (Elem x = 1; x < f.size(); ++x) {
    const Elem low = x & (x - 1);  // x without its lowest set bit
    if (f[x] != (f[low] ^ f[x ^ low])) return false;
  }
  return true;
}

/// Image of the table as a sorted set.
inline std::vector<Elem> image_set(const ValueTable& f) {
  std::vector<bool> hit(f.size(), false);
  for (Elem v : f.values()) hit[v] = true;
  std::vector<Elem> out;
  for (Elem v = 0; v < f.size(); ++v) {
    if (hit[v]) out.push_back(v);
  }
  return out;
}

inline void to_json(nlohmann::json& j, const ValueTable& t) {
  j = nlohmann::json{{"n", t.field().n()}, {"poly", t.field().poly()}, {"table", t.values()}};
}

inline ValueTable value_table_from_json(const nlohmann::json& j) {
  Field field = field_from_json(j);
  return ValueTable(field, j.at("table").get<std::vector<Elem>>());
}

}  // namespace rdsforge
