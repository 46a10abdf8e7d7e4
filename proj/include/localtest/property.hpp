#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "localtest/array.hpp"

namespace localtest {

struct capability_error : std::logic_error {
  using std::logic_error::logic_error;
};

// Which repairability engine the inference layer may use for a property.
// kGenericDp requires an explicit alphabet; the named engines are exact
// specializations whose running time tracks the query complexity.
enum class InferenceHint {
  kNone,
  kMonotone,
  kLipschitz,
  kConvex1d,
  kIntRangeDp,  // 1D DP over the integer range spanned by the boundary
};

// A k-local property: membership is "no [k]^d window is forbidden".
// Predicate-defined families avoid materializing F, whose natural size is
// |Sigma|^(k^d).
template <class T>
struct LocalProperty {
  int32_t k = 2;
  int d = 1;
  std::function<bool(const Window<T>&)> forbidden;  // true = window in F
  std::optional<std::vector<T>> alphabet;           // explicit finite alphabet
  InferenceHint hint = InferenceHint::kNone;
  int64_t lipschitz_c = 0;  // engine parameter when hint == kLipschitz
  std::string name;
};

template <class T>
struct ExplicitFamily {
  int32_t k = 2;
  int d = 1;
  std::vector<T> alphabet;
  std::set<std::vector<T>> patterns;  // row-major [k]^d value vectors
};

template <class T>
bool is_forbidden(const LocalProperty<T>& p, const Window<T>& w) {
  if (w.k != p.k || w.d != p.d)
    throw std::invalid_argument("is_forbidden: window shape mismatch");
  return p.forbidden(w);
}

// First forbidden-window location in lexicographic order, or nullopt.
template <class T>
std::optional<Coord> satisfies(const LocalProperty<T>& p, const Array<T>& a) {
  if (a.dim() != p.d) throw std::invalid_argument("satisfies: dimension mismatch");
  if (a.width() < p.k) throw std::invalid_argument("satisfies: n < k");
  const int32_t limit = a.width() - p.k + 1;
  Coord loc = Coord::filled(p.d, 1);
  for (;;) {
    Window<T> w = subarray(a, loc, p.k);
    if (p.forbidden(w)) return loc;
    int i = p.d - 1;
    for (; i >= 0; --i) {
      if (++loc[i] <= limit) break;
      loc[i] = 1;
    }
    if (i < 0) return std::nullopt;
  }
}

namespace detail {

// Walk all axis-aligned unit edges (x, x+e^i) inside a [2]^d window.
template <class T, class F>
bool any_adjacent_pair(const Window<T>& w, F&& bad) {
  size_t cells = w.values.size();
  for (size_t c = 0; c < cells; ++c) {
    Coord j = w.offset_coord(c);
    for (int i = 0; i < w.d; ++i) {
      if (j[i] != 1) continue;
      Coord j2 = j.shifted(i, 1);
      if (bad(w.values[c], w.at(j2))) return true;
    }
  }
  return false;
}

}  // namespace detail

template <std::totally_ordered T>
LocalProperty<T> monotone(int d) {
  LocalProperty<T> p;
  p.k = 2;
  p.d = d;
  p.hint = InferenceHint::kMonotone;
  p.name = "monotone";
  p.forbidden = [](const Window<T>& w) {
    return detail::any_adjacent_pair(w, [](const T& a, const T& b) { return a > b; });
  };
  return p;
}

template <std::integral T>
LocalProperty<T> lipschitz(int64_t c, int d) {
  if (c < 0) throw std::invalid_argument("lipschitz: c must be >= 0");
  LocalProperty<T> p;
  p.k = 2;
  p.d = d;
  p.hint = InferenceHint::kLipschitz;
  p.lipschitz_c = c;
  p.name = "lipschitz";
  p.forbidden = [c](const Window<T>& w) {
    return detail::any_adjacent_pair(w, [c](const T& a, const T& b) {
      int64_t diff = static_cast<int64_t>(a) - static_cast<int64_t>(b);
      return diff > c || diff < -c;
    });
  };
  return p;
}

template <std::integral T>
LocalProperty<T> convex_1d() {
  LocalProperty<T> p;
  p.k = 3;
  p.d = 1;
  p.hint = InferenceHint::kConvex1d;
  p.name = "convex_1d";
  p.forbidden = [](const Window<T>& w) {
    // forbidden iff A[x] - 2A[x+1] + A[x+2] < 0
    return static_cast<int64_t>(w.values[0]) - 2 * static_cast<int64_t>(w.values[1]) +
               static_cast<int64_t>(w.values[2]) < 0;
  };
  return p;
}

// Convex along each axis: every axis line of the [3]^d window must have a
// nonnegative second difference.
template <std::integral T>
LocalProperty<T> separately_convex(int d) {
  LocalProperty<T> p;
  p.k = 3;
  p.d = d;
  // For d > 1 the boundary-spanned-range trick is unproven; only the
  // explicit-alphabet path applies there.
  p.hint = d == 1 ? InferenceHint::kConvex1d : InferenceHint::kNone;
  p.name = "separately_convex";
  p.forbidden = [](const Window<T>& w) {
    size_t cells = w.values.size();
    for (size_t c = 0; c < cells; ++c) {
      Coord j = w.offset_coord(c);
      for (int i = 0; i < w.d; ++i) {
        if (j[i] != 1) continue;
        int64_t v0 = static_cast<int64_t>(w.values[c]);
        int64_t v1 = static_cast<int64_t>(w.at(j.shifted(i, 1)));
        int64_t v2 = static_cast<int64_t>(w.at(j.shifted(i, 2)));
        if (v0 - 2 * v1 + v2 < 0) return true;
      }
    }
    return false;
  };
  return p;
}

template <std::integral T>
LocalProperty<T> submodular(int d) {
  LocalProperty<T> p;
  p.k = 2;
  p.d = d;
  p.name = "submodular";
  p.forbidden = [](const Window<T>& w) {
    // A(x) + A(x+e^i+e^j) <= A(x+e^i) + A(x+e^j) for all axis pairs i < j
    size_t cells = w.values.size();
    for (size_t c = 0; c < cells; ++c) {
      Coord j = w.offset_coord(c);
      for (int i1 = 0; i1 < w.d; ++i1) {
        if (j[i1] != 1) continue;
        for (int i2 = i1 + 1; i2 < w.d; ++i2) {
          if (j[i2] != 1) continue;
          int64_t base = static_cast<int64_t>(w.values[c]);
          int64_t both = static_cast<int64_t>(w.at(j.shifted(i1, 1).shifted(i2, 1)));
          int64_t e1 = static_cast<int64_t>(w.at(j.shifted(i1, 1)));
          int64_t e2 = static_cast<int64_t>(w.at(j.shifted(i2, 1)));
          if (base + both > e1 + e2) return true;
        }
      }
    }
    return false;
  };
  return p;
}

template <class T>
LocalProperty<T> from_explicit(ExplicitFamily<T> family) {
  if (family.k < 2) throw std::invalid_argument("from_explicit: k must be >= 2");
  size_t cells = 1;
  for (int i = 0; i < family.d; ++i) cells *= static_cast<size_t>(family.k);
  for (const auto& pat : family.patterns)
    if (pat.size() != cells)
      throw std::invalid_argument("from_explicit: pattern shape mismatch");
  LocalProperty<T> p;
  p.k = family.k;
  p.d = family.d;
  p.alphabet = family.alphabet;
  p.name = "explicit";
  auto pats = std::make_shared<std::set<std::vector<T>>>(std::move(family.patterns));
  p.forbidden = [pats](const Window<T>& w) { return pats->count(w.values) != 0; };
  return p;
}

}  // namespace localtest
