#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "localtest/array.hpp"
#include "localtest/inference.hpp"
#include "localtest/property.hpp"

namespace localtest {
namespace oracle {

// Ground-truth implementations kept deliberately naive and separate from
// the library's main scanning/inference paths, so agreement tests compare
// genuinely independent code.

namespace detail {

// Naive full scan: checks every window by direct nested iteration.
template <class T>
bool violates(const LocalProperty<T>& p, const Array<T>& a) {
  const int d = a.dim();
  const int32_t k = p.k;
  if (a.width() < k) throw std::invalid_argument("oracle: n < k");
  const int32_t anchors = a.width() - k + 1;
  Coord loc = Coord::filled(d, 1);
  for (;;) {
    Window<T> w;
    w.loc = loc;
    w.k = k;
    w.d = d;
    Coord off = Coord::filled(d, 1);
    for (;;) {
      Coord x = loc;
      for (int i = 0; i < d; ++i) x[i] += off[i] - 1;
      w.values.push_back(a.at(x));
      int i = d - 1;
      for (; i >= 0; --i) {
        if (++off[i] <= k) break;
        off[i] = 1;
      }
      if (i < 0) break;
    }
    if (p.forbidden(w)) return true;
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++loc[i] <= anchors) break;
      loc[i] = 1;
    }
    if (i < 0) return false;
  }
}

}  // namespace detail

template <class T>
struct DistanceResult {
  int64_t distance = 0;
  std::optional<Array<T>> nearest;
};

// Longest non-decreasing subsequence length (patience style, O(n log n)).
template <class T>
int64_t lnds_length(const Array<T>& a) {
  std::vector<T> tails;
  for (size_t i = 0; i < a.size(); ++i) {
    const T& v = a.at_index(i);
    auto it = std::upper_bound(tails.begin(), tails.end(), v);
    if (it == tails.end())
      tails.push_back(v);
    else
      *it = v;
  }
  return static_cast<int64_t>(tails.size());
}

// Distance from 1D monotonicity with no alphabet restriction: keep a
// longest non-decreasing subsequence and overwrite everything else with a
// copy of the nearest kept value to its left.
template <class T>
DistanceResult<T> monotone_1d_distance(const Array<T>& a, bool want_nearest = false);

// Exact Hamming distance from a to the property, minimizing over all
// arrays with values drawn from `alphabet`. Exhaustive DFS with pruning on
// the running edit count and on forbidden windows already completed; the
// monotone(1) case short-circuits through the longest-non-decreasing-
// subsequence identity at any size.
template <class T>
DistanceResult<T> exact_distance(const LocalProperty<T>& p, const Array<T>& a,
                                 std::span<const T> alphabet, uint64_t budget = 50'000'000,
                                 bool want_nearest = false) {
  if (a.dim() != p.d) throw std::invalid_argument("exact_distance: dimension mismatch");

  // No alphabet restriction: only the monotone(1) shortcut applies.
  if (alphabet.empty()) {
    if (p.hint == InferenceHint::kMonotone && p.d == 1)
      return monotone_1d_distance(a, want_nearest);
    throw capability_error("exact_distance: explicit alphabet required");
  }
  const size_t cells = a.size();
  {
    long double space = 1;
    for (size_t i = 0; i < cells; ++i) {
      space *= static_cast<long double>(alphabet.size());
      if (space > static_cast<long double>(budget) * 64)
        throw resource_error("exact_distance: search space exceeds the budget");
    }
  }

  const int d = a.dim();
  const int32_t n = a.width();
  const int32_t k = p.k;
  if (n < k) throw std::invalid_argument("exact_distance: n < k");

  Array<T> cand(n, d, alphabet[0]);
  int64_t best = -1;
  std::optional<Array<T>> best_arr;
  uint64_t visited = 0;

  // Windows whose last cell (row-major) is `idx` become fully assigned
  // exactly when cell idx is written.
  auto completed_window_ok = [&](size_t idx) {
    Coord last = a.coord(idx);
    Coord anchor = last;
    for (int i = 0; i < d; ++i) {
      anchor[i] = last[i] - (k - 1);
      if (anchor[i] < 1) return true;  // no window ends here
    }
    Window<T> w;
    w.loc = anchor;
    w.k = k;
    w.d = d;
    Coord off = Coord::filled(d, 1);
    for (;;) {
      Coord x = anchor;
      for (int i = 0; i < d; ++i) x[i] += off[i] - 1;
      w.values.push_back(cand.at(x));
      int i = d - 1;
      for (; i >= 0; --i) {
        if (++off[i] <= k) break;
        off[i] = 1;
      }
      if (i < 0) break;
    }
    return !p.forbidden(w);
  };

  auto dfs = [&](auto&& self, size_t idx, int64_t edits) -> void {
    if (++visited > budget) throw resource_error("exact_distance: budget exceeded");
    if (best >= 0 && edits >= best) return;
    if (idx == cells) {
      best = edits;
      if (want_nearest) best_arr = cand;
      return;
    }
    for (const T& v : alphabet) {
      cand.at_index(idx) = v;
      int64_t e = edits + (v == a.at_index(idx) ? 0 : 1);
      if (best >= 0 && e >= best) continue;
      if (!completed_window_ok(idx)) continue;
      self(self, idx + 1, e);
    }
  };
  dfs(dfs, 0, 0);

  if (best < 0) throw std::invalid_argument("exact_distance: property is empty over this alphabet");
  DistanceResult<T> out;
  out.distance = best;
  out.nearest = std::move(best_arr);
  return out;
}

// True iff some interior assignment over `alphabet` makes the closure
// forbidden-free; every candidate is re-scanned from scratch.
template <class T>
bool repairable_bruteforce(const LocalProperty<T>& p, const BoxSpec& box,
                           const std::map<std::vector<int32_t>, T>& boundary,
                           std::span<const T> alphabet, uint64_t budget = kDefaultInferBudget) {
  if (alphabet.empty()) throw capability_error("repairable_bruteforce: alphabet required");
  const int d = box.d;

  std::vector<Coord> interior;
  box.for_each_interior_cell([&](const Coord& x) { interior.push_back(x); });

  uint64_t fills = 1;
  for (size_t i = 0; i < interior.size(); ++i) {
    if (fills > budget / alphabet.size())
      throw resource_error("repairable_bruteforce: fill space exceeds the budget");
    fills *= alphabet.size();
  }

  auto key = [&](const Coord& x) {
    std::vector<int32_t> v(d);
    for (int i = 0; i < d; ++i) v[i] = x[i];
    return v;
  };

  std::map<std::vector<int32_t>, T> values = boundary;
  {
    // the boundary must cover exactly closure \ interior
    size_t expected = 0;
    bool ok = true;
    box.for_each_boundary_cell([&](const Coord& x) {
      ++expected;
      if (!boundary.count(key(x))) ok = false;
    });
    if (!ok || expected != boundary.size())
      throw std::invalid_argument("repairable_bruteforce: boundary domain mismatch");
  }

  std::vector<size_t> digit(interior.size(), 0);
  for (uint64_t f = 0; f < fills; ++f) {
    for (size_t i = 0; i < interior.size(); ++i) values[key(interior[i])] = alphabet[digit[i]];

    // full naive scan of the closure
    bool bad = false;
    const int32_t k = p.k;
    Coord anchor = Coord::filled(d, 0);
    for (int i = 0; i < d; ++i) anchor[i] = box.lo[i];
    bool anchors_exist = true;
    for (int i = 0; i < d; ++i)
      if (box.hi[i] - box.lo[i] + 1 < k) anchors_exist = false;
    while (anchors_exist) {
      Window<T> w;
      w.loc = anchor;
      w.k = k;
      w.d = d;
      Coord off = Coord::filled(d, 1);
      for (;;) {
        Coord x = anchor;
        for (int i = 0; i < d; ++i) x[i] += off[i] - 1;
        w.values.push_back(values.at(key(x)));
        int i = d - 1;
        for (; i >= 0; --i) {
          if (++off[i] <= k) break;
          off[i] = 1;
        }
        if (i < 0) break;
      }
      if (p.forbidden(w)) {
        bad = true;
        break;
      }
      int i = d - 1;
      for (; i >= 0; --i) {
        if (++anchor[i] <= box.hi[i] - k + 1) break;
        anchor[i] = box.lo[i];
      }
      if (i < 0) break;
    }
    if (!bad) return true;

    for (size_t i = digit.size(); i-- > 0;) {
      if (++digit[i] < alphabet.size()) break;
      digit[i] = 0;
    }
  }
  return false;
}

template <class T>
DistanceResult<T> monotone_1d_distance(const Array<T>& a, bool want_nearest) {
  if (a.dim() != 1) throw std::invalid_argument("monotone_1d_distance: 1D arrays only");
  const size_t n = a.size();
  DistanceResult<T> out;
  if (!want_nearest) {
    out.distance = static_cast<int64_t>(n) - lnds_length(a);
    return out;
  }
  // O(n log n) with parent links to recover one kept subsequence.
  std::vector<T> tails;
  std::vector<size_t> tail_pos;
  std::vector<int64_t> parent(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const T& v = a.at_index(i);
    auto it = std::upper_bound(tails.begin(), tails.end(), v);
    size_t slot = static_cast<size_t>(it - tails.begin());
    if (it == tails.end()) {
      tails.push_back(v);
      tail_pos.push_back(i);
    } else {
      *it = v;
      tail_pos[slot] = i;
    }
    parent[i] = slot > 0 ? static_cast<int64_t>(tail_pos[slot - 1]) : -1;
  }
  std::vector<uint8_t> kept(n, 0);
  for (int64_t i = tails.empty() ? -1 : static_cast<int64_t>(tail_pos.back()); i >= 0;
       i = parent[i])
    kept[i] = 1;
  Array<T> nearest = a;
  bool have_prev = false;
  T prev{};
  // cells before the first kept one take the first kept value
  T first_kept{};
  for (size_t i = 0; i < n; ++i)
    if (kept[i]) {
      first_kept = a.at_index(i);
      break;
    }
  for (size_t i = 0; i < n; ++i) {
    if (kept[i]) {
      prev = a.at_index(i);
      have_prev = true;
    } else {
      nearest.at_index(i) = have_prev ? prev : first_kept;
    }
  }
  out.distance = static_cast<int64_t>(n) - static_cast<int64_t>(tails.size());
  out.nearest = std::move(nearest);
  return out;
}

template <class T>
bool verify_far(const LocalProperty<T>& p, const Array<T>& a, double eps,
                std::span<const T> alphabet, uint64_t budget = 50'000'000) {
  auto res = exact_distance(p, a, alphabet, budget);
  long double threshold = static_cast<long double>(eps) * static_cast<long double>(a.size());
  return static_cast<long double>(res.distance) >= threshold - 1e-9L;
}

// vector-friendly overloads (span deduction does not see through vectors)
template <class T>
DistanceResult<T> exact_distance(const LocalProperty<T>& p, const Array<T>& a,
                                 const std::vector<T>& alphabet, uint64_t budget = 50'000'000,
                                 bool want_nearest = false) {
  return exact_distance(p, a, std::span<const T>(alphabet), budget, want_nearest);
}

template <class T>
bool verify_far(const LocalProperty<T>& p, const Array<T>& a, double eps,
                const std::vector<T>& alphabet, uint64_t budget = 50'000'000) {
  return verify_far(p, a, eps, std::span<const T>(alphabet), budget);
}

template <class T>
bool repairable_bruteforce(const LocalProperty<T>& p, const BoxSpec& box,
                           const std::map<std::vector<int32_t>, T>& boundary,
                           const std::vector<T>& alphabet, uint64_t budget = kDefaultInferBudget) {
  return repairable_bruteforce(p, box, boundary, std::span<const T>(alphabet), budget);
}

}  // namespace oracle
}  // namespace localtest
