#pragma once

// Differential uniformity and image multiplicities.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rdsforge/value_table.hpp"

namespace rdsforge {

/// |{x : f(x + a) + f(x) = b}|.
inline std::uint32_t delta_count(const ValueTable& f, Elem a, Elem b) {
  if (a == 0) throw std::invalid_argument("delta_count requires a nonzero input difference");
  std::uint32_t count = 0;
  for (Elem x = 0; x < f.size(); ++x) count += ((f[x ^ a] ^ f[x]) == b);
  return count;
}

struct DiffSpectrum {
  std::uint32_t max_delta = 0;
  /// delta value -> number of (a, b) pairs with a != 0 attaining it.
  std::map<std::uint32_t, std::uint64_t> histogram;
};

namespace detail {

// Runs body(a, counters) for a = 1 .. 2^n - 1 across `threads` workers, each
// owning its own 2^n counter array. body returns false to stop early.
template <typename Body>
void for_each_difference(const ValueTable& f, unsigned threads, Body&& body) {
  const Elem size = static_cast<Elem>(f.size());
  std::atomic<Elem> next{1};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    std::vector<std::uint32_t> counts(size);
    for (Elem a = next++; a < size && !stop.load(std::memory_order_relaxed); a = next++) {
      std::fill(counts.begin(), counts.end(), 0u);
      for (Elem x = 0; x < size; ++x) ++counts[f[x ^ a] ^ f[x]];
      if (!body(a, counts)) stop = true;
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
}

}  // namespace detail

inline DiffSpectrum diff_spectrum(const ValueTable& f, unsigned threads = 1) {
  DiffSpectrum out;
  std::mutex mu;
  detail::for_each_difference(f, threads, [&](Elem, const std::vector<std::uint32_t>& counts) {
    std::map<std::uint32_t, std::uint64_t> local;
    for (auto c : counts) ++local[c];
    std::lock_guard lock(mu);
    for (auto [delta, cnt] : local) {
      out.histogram[delta] += cnt;
      out.max_delta = std::max(out.max_delta, delta);
    }
    return true;
  });
  return out;
}

/// max_delta == 2, with early exit on the first delta above 2.
inline bool is_apn(const ValueTable& f, unsigned threads = 1) {
  std::atomic<bool> apn{true};
  detail::for_each_difference(f, threads, [&](Elem, const std::vector<std::uint32_t>& counts) {
    if (*std::max_element(counts.begin(), counts.end()) > 2) {
      apn = false;
      return false;
    }
    return true;
  });
  return apn;
}

struct ImageProfile {
  std::vector<Elem> image;
  /// image value -> number of preimages
  std::map<Elem, std::uint32_t> multiplicities;
  /// common preimage count, when all image values share one
  std::optional<std::uint32_t> uniform_k;
};

inline ImageProfile image_profile(const ValueTable& f) {
  std::vector<std::uint32_t> counts(f.size(), 0);
  for (Elem v : f.values()) ++counts[v];
  ImageProfile p;
  for (Elem v = 0; v < f.size(); ++v) {
    if (counts[v] == 0) continue;
    p.image.push_back(v);
    p.multiplicities.emplace(v, counts[v]);
  }
  const std::uint32_t first = counts[p.image.front()];
  if (std::all_of(p.image.begin(), p.image.end(), [&](Elem v) { return counts[v] == first; })) {
    p.uniform_k = first;
  }
  return p;
}

inline bool is_two_to_one(const ValueTable& f) {
  const auto p = image_profile(f);
  return p.uniform_k == 2u;
}

}  // namespace rdsforge
