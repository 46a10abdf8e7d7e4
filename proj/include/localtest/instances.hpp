#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "localtest/array.hpp"
#include "localtest/property.hpp"
#include "localtest/rng.hpp"

namespace localtest {

// Seeded input generators for experiments: random satisfying inputs per
// built-in property, and far inputs with known (or oracle-verified)
// distances.

inline Array<int64_t> gen_constant(int32_t n, int d, int64_t value = 0) {
  return Array<int64_t>(n, d, value);
}

// Monotone: a sum of per-axis nondecreasing staircases.
inline Array<int64_t> gen_monotone(int32_t n, int d, Rng& rng) {
  std::vector<std::vector<int64_t>> stairs(d, std::vector<int64_t>(n));
  for (int i = 0; i < d; ++i) {
    int64_t cur = static_cast<int64_t>(rng.below(8));
    for (int32_t j = 0; j < n; ++j) {
      cur += static_cast<int64_t>(rng.below(3));
      stairs[i][j] = cur;
    }
  }
  Array<int64_t> a(n, d);
  for (size_t idx = 0; idx < a.size(); ++idx) {
    Coord x = a.coord(idx);
    int64_t v = 0;
    for (int i = 0; i < d; ++i) v += stairs[i][x[i] - 1];
    a.at_index(idx) = v;
  }
  return a;
}

// c-Lipschitz random walk (1D).
inline Array<int64_t> gen_lipschitz_walk(int32_t n, int64_t c, Rng& rng) {
  Array<int64_t> a(n, 1);
  int64_t cur = static_cast<int64_t>(rng.below(16));
  for (int32_t i = 0; i < n; ++i) {
    a.at_index(i) = cur;
    cur += rng.range(-c, c);
  }
  return a;
}

// Convex 1D: double prefix sums of nonnegative second differences.
inline Array<int64_t> gen_convex(int32_t n, Rng& rng) {
  Array<int64_t> a(n, 1);
  int64_t value = rng.range(0, 10);
  int64_t slope = rng.range(-3, 1);
  for (int32_t i = 0; i < n; ++i) {
    a.at_index(i) = value;
    slope += static_cast<int64_t>(rng.below(2));
    value += slope;
  }
  return a;
}

// Greedy row-major sampler for explicit families: each cell completes at
// most one window (the one it closes), so a shuffled-symbol retry per cell
// suffices; stuck states restart the whole array.
inline Array<int64_t> gen_satisfying_explicit(const LocalProperty<int64_t>& p, int32_t n,
                                              Rng& rng, int max_restarts = 64) {
  if (!p.alphabet || p.alphabet->empty())
    throw std::invalid_argument("gen_satisfying_explicit: property lacks an explicit alphabet");
  const auto& alpha = *p.alphabet;
  const int d = p.d;
  const int32_t k = p.k;

  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    Rng sub = rng.split(static_cast<uint64_t>(attempt));
    Array<int64_t> a(n, d);
    bool ok = true;
    std::vector<size_t> order(alpha.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (size_t idx = 0; idx < a.size() && ok; ++idx) {
      Coord last = a.coord(idx);
      Coord anchor = last;
      bool closes = true;
      for (int i = 0; i < d; ++i) {
        anchor[i] = last[i] - (k - 1);
        if (anchor[i] < 1) closes = false;
      }
      sub.shuffle(order);
      bool placed = false;
      for (size_t oi = 0; oi < order.size() && !placed; ++oi) {
        a.at_index(idx) = alpha[order[oi]];
        if (!closes) {
          placed = true;
          break;
        }
        Window<int64_t> w = subarray(a, anchor, k);
        if (!p.forbidden(w)) placed = true;
      }
      if (!placed) ok = false;
    }
    if (ok) return a;
  }
  throw std::runtime_error("gen_satisfying_explicit: no satisfying array found");
}

// --- far inputs ---------------------------------------------------------------

inline Array<int64_t> gen_reverse_sorted(int32_t n) {
  Array<int64_t> a(n, 1);
  for (int32_t i = 0; i < n; ++i) a.at_index(i) = n - i;
  return a;
}

// Oscillation with per-step difference 3c+1; every window violates the
// c-Lipschitz condition.
inline Array<int64_t> gen_sawtooth(int32_t n, int64_t c) {
  Array<int64_t> a(n, 1);
  int64_t amp = 3 * c + 1;
  for (int32_t i = 0; i < n; ++i) a.at_index(i) = (i % 2) * amp;
  return a;
}

// Concave bump: every second difference is -2.
inline Array<int64_t> gen_concave_bump(int32_t n) {
  Array<int64_t> a(n, 1);
  for (int32_t i = 0; i < n; ++i) {
    int64_t x = 2 * i - (n - 1);
    a.at_index(i) = -(x * x) / 4 + static_cast<int64_t>(n) * n;
  }
  return a;
}

// Background satisfying array with `count` forbidden-pattern copies planted
// at disjoint anchors; the result is at Hamming distance >= count from the
// property.
inline Array<int64_t> plant_explicit_copies(const LocalProperty<int64_t>& p,
                                            const std::vector<int64_t>& pattern, int32_t n,
                                            int64_t count, Rng& rng) {
  if (p.d != 1) throw std::invalid_argument("plant_explicit_copies: 1D only");
  const int32_t k = p.k;
  Rng bg_rng = rng.split("background");
  Array<int64_t> a = gen_satisfying_explicit(p, n, bg_rng);

  int64_t slots = n / (2 * k);
  if (count > slots) throw std::invalid_argument("plant_explicit_copies: too many plants");
  auto chosen = rng.sample_distinct(static_cast<uint64_t>(slots), static_cast<uint64_t>(count));
  for (uint64_t s : chosen) {
    int32_t anchor = static_cast<int32_t>(s) * 2 * k + 1;
    for (int32_t j = 0; j < k; ++j) a.at_index(anchor - 1 + j) = pattern[j];
  }
  return a;
}

// A sparse random forbidden family over the given alphabet that still
// admits satisfying arrays (checked by running the greedy sampler once).
inline ExplicitFamily<int64_t> random_sparse_family(int32_t k, int d,
                                                    std::vector<int64_t> alphabet,
                                                    int forbid_count, Rng& rng) {
  size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<size_t>(k);
  uint64_t space = 1;
  for (size_t i = 0; i < cells; ++i) space *= alphabet.size();

  for (int attempt = 0; attempt < 32; ++attempt) {
    Rng sub = rng.split(static_cast<uint64_t>(attempt));
    ExplicitFamily<int64_t> fam;
    fam.k = k;
    fam.d = d;
    fam.alphabet = alphabet;
    auto picks = sub.sample_distinct(space, std::min<uint64_t>(forbid_count, space));
    for (uint64_t pidx : picks) {
      std::vector<int64_t> pat(cells);
      uint64_t rest = pidx;
      for (size_t i = cells; i-- > 0;) {
        pat[i] = alphabet[rest % alphabet.size()];
        rest /= alphabet.size();
      }
      fam.patterns.insert(std::move(pat));
    }
    try {
      auto p = from_explicit(fam);
      Rng probe = sub.split("probe");
      gen_satisfying_explicit(p, std::max<int32_t>(4 * k, 16), probe, 8);
      return fam;
    } catch (const std::runtime_error&) {
      continue;  // unsatisfiable-looking family; resample
    }
  }
  throw std::runtime_error("random_sparse_family: could not find a satisfiable family");
}

}  // namespace localtest
