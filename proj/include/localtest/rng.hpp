#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace localtest {

// Splittable counter-based generator (splitmix64 finalizer over a keyed
// counter). Every consumer derives its own stream from (seed, label/index),
// so parallel trials are reproducible and independent of scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

  uint64_t next() {
    ctr_ += 0x9e3779b97f4a7c15ull;
    return mix(key_ ^ ctr_);
  }

  Rng split(uint64_t index) const {
    return Rng(raw_tag{}, mix(key_ + 0xbf58476d1ce4e5b9ull * (index + 1)));
  }

  Rng split(std::string_view label) const {
    uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (char ch : label) {
      h ^= static_cast<unsigned char>(ch);
      h *= 0x100000001b3ull;
    }
    return Rng(raw_tag{}, mix(key_ ^ h));
  }

  // Uniform in [0, bound); rejection sampling keeps it exactly uniform.
  uint64_t below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  int64_t range(int64_t lo, int64_t hi) {  // inclusive
    if (lo > hi) throw std::invalid_argument("Rng::range: empty range");
    return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo) + 1));
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return uniform01() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0, m), order unspecified but deterministic.
  std::vector<uint64_t> sample_distinct(uint64_t m, uint64_t k) {
    if (k > m) throw std::invalid_argument("Rng::sample_distinct: k > m");
    std::vector<uint64_t> out;
    out.reserve(k);
    if (m <= 4 * k) {  // partial Fisher-Yates over the dense range
      std::vector<uint64_t> pool(m);
      for (uint64_t i = 0; i < m; ++i) pool[i] = i;
      for (uint64_t i = 0; i < k; ++i) {
        uint64_t j = i + below(m - i);
        std::swap(pool[i], pool[j]);
        out.push_back(pool[i]);
      }
    } else {  // sparse: rejection sampling
      while (out.size() < k) {
        uint64_t v = below(m);
        bool dup = false;
        for (uint64_t s : out)
          if (s == v) { dup = true; break; }
        if (!dup) out.push_back(v);
      }
    }
    return out;
  }

 private:
  struct raw_tag {};
  Rng(raw_tag, uint64_t key) : key_(key) {}

  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  uint64_t key_;
  uint64_t ctr_ = 0;
};

}  // namespace localtest
