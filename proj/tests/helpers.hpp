#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "localtest/adversarial.hpp"
#include "localtest/array.hpp"
#include "localtest/grid.hpp"
#include "localtest/inference.hpp"
#include "localtest/property.hpp"
#include "localtest/rng.hpp"

namespace testutil {

using namespace localtest;

inline Array<int64_t> random_array(int32_t n, int d, std::span<const int64_t> alphabet, Rng& rng) {
  Array<int64_t> a(n, d);
  for (size_t i = 0; i < a.size(); ++i)
    a.at_index(i) = alphabet[rng.below(alphabet.size())];
  return a;
}

// Independent double-scan used as an oracle against satisfies().
inline bool any_forbidden_window(const LocalProperty<int64_t>& p, const Array<int64_t>& a) {
  const int32_t limit = a.width() - p.k + 1;
  if (limit < 1) return false;
  std::vector<Coord> anchors;
  Coord loc = Coord::filled(a.dim(), 1);
  for (;;) {
    anchors.push_back(loc);
    int i = a.dim() - 1;
    for (; i >= 0; --i) {
      if (++loc[i] <= limit) break;
      loc[i] = 1;
    }
    if (i < 0) break;
  }
  for (const Coord& anchor : anchors)
    if (p.forbidden(subarray(a, anchor, p.k))) return true;
  return false;
}

// Random explicit family over the alphabet; each pattern forbidden with
// probability 1/2 (no satisfiability requirement: inference tests do not
// need satisfying arrays).
inline ExplicitFamily<int64_t> random_family(int32_t k, int d, std::vector<int64_t> alphabet,
                                             Rng& rng) {
  ExplicitFamily<int64_t> fam;
  fam.k = k;
  fam.d = d;
  fam.alphabet = alphabet;
  size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<size_t>(k);
  uint64_t space = 1;
  for (size_t i = 0; i < cells; ++i) space *= alphabet.size();
  for (uint64_t idx = 0; idx < space; ++idx) {
    if (!rng.chance(0.5)) continue;
    std::vector<int64_t> pat(cells);
    uint64_t rest = idx;
    for (size_t i = cells; i-- > 0;) {
      pat[i] = alphabet[rest % alphabet.size()];
      rest /= alphabet.size();
    }
    fam.patterns.insert(std::move(pat));
  }
  return fam;
}

// Boundary map keyed the way oracle::repairable_bruteforce expects.
inline std::map<std::vector<int32_t>, int64_t> boundary_map(const BoxSpec& box,
                                                            std::span<const int64_t> alphabet,
                                                            Rng& rng) {
  std::map<std::vector<int32_t>, int64_t> m;
  box.for_each_boundary_cell([&](const Coord& x) {
    std::vector<int32_t> key(box.d);
    for (int i = 0; i < box.d; ++i) key[i] = x[i];
    m[key] = alphabet[rng.below(alphabet.size())];
  });
  return m;
}

// Verifies a returned witness fill: interior values applied over the
// boundary must leave the closure forbidden-free.
inline bool fill_is_valid(const LocalProperty<int64_t>& p, const BoxSpec& box,
                          const std::map<std::vector<int32_t>, int64_t>& boundary,
                          const std::vector<std::pair<Coord, int64_t>>& fill) {
  std::map<std::vector<int32_t>, int64_t> values = boundary;
  auto key = [&](const Coord& x) {
    std::vector<int32_t> v(box.d);
    for (int i = 0; i < box.d; ++i) v[i] = x[i];
    return v;
  };
  for (const auto& [c, v] : fill) values[key(c)] = v;
  auto lookup = [&](const Coord& x) { return values.at(key(x)); };
  return !scan_box_for_forbidden(p, box, lookup).has_value();
}

// Single-cell corruption of an adversarial instance: pick a cell and a
// field, replace it with a uniformly random different value.
inline void mutate_one_cell(AdversarialInstance& inst, Rng& rng) {
  const int d = inst.cells.dim();
  const int32_t n = inst.cells.width();
  size_t idx = static_cast<size_t>(rng.below(inst.cells.size()));
  GravityValue& v = inst.cells.at_index(idx);
  uint64_t field = rng.below(3);
  auto random_coord = [&]() {
    Coord c = Coord::filled(d, 1);
    for (int i = 0; i < d; ++i) c[i] = static_cast<int32_t>(1 + rng.below(n));
    return c;
  };
  if (field == 0) {
    Coord c = random_coord();
    while (c == v.self_ptr) c = random_coord();
    v.self_ptr = c;
  } else if (field == 1) {
    Coord c = random_coord();
    while (c == v.center_ptr) c = random_coord();
    v.center_ptr = c;
  } else if (inst.variant == GravityVariant::kSet) {
    DynBitset fresh(v.data.bits());
    do {
      fresh = DynBitset(v.data.bits());
      for (int b = 0; b < v.data.bits(); ++b)
        if (rng.chance(0.5)) fresh.set(b);
    } while (fresh == v.data);
    v.data = fresh;
  } else {
    int32_t zmax = static_cast<int32_t>(inst.cells.size());
    int32_t z = static_cast<int32_t>(rng.below(zmax)), o = static_cast<int32_t>(rng.below(zmax));
    while (z == v.zeros && o == v.ones) {
      z = static_cast<int32_t>(rng.below(zmax));
      o = static_cast<int32_t>(rng.below(zmax));
    }
    v.zeros = z;
    v.ones = o;
  }
}

}  // namespace testutil
