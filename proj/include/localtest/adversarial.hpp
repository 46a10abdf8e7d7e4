#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "localtest/array.hpp"
#include "localtest/property.hpp"
#include "localtest/rng.hpp"

namespace localtest {

// Small dynamic bitset with hex round-tripping; value semantics.
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(int nbits) : nbits_(nbits), w_((nbits + 63) / 64, 0) {}

  int bits() const { return nbits_; }
  bool empty_universe() const { return nbits_ == 0; }

  void set(int i) { w_[i >> 6] |= uint64_t{1} << (i & 63); }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  int count() const {
    int c = 0;
    for (uint64_t x : w_) c += __builtin_popcountll(x);
    return c;
  }
  bool any() const {
    for (uint64_t x : w_)
      if (x) return true;
    return false;
  }
  bool is_singleton() const { return count() == 1; }

  DynBitset& operator|=(const DynBitset& o) {
    for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }

  bool intersects(const DynBitset& o) const {
    for (size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }

  bool operator==(const DynBitset& o) const { return nbits_ == o.nbits_ && w_ == o.w_; }

  std::string to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    int nibbles = (nbits_ + 3) / 4;
    for (int i = nibbles - 1; i >= 0; --i) {
      int word = i / 16, shift = (i % 16) * 4;
      s.push_back(digits[(w_[word] >> shift) & 0xf]);
    }
    return s.empty() ? "0" : s;
  }

  static DynBitset from_hex(int nbits, const std::string& hex) {
    DynBitset b(nbits);
    int nibble = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, ++nibble) {
      char c = *it;
      uint64_t v = c >= '0' && c <= '9'   ? c - '0'
                   : c >= 'a' && c <= 'f' ? c - 'a' + 10
                   : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                          : throw std::invalid_argument("DynBitset: bad hex");
      if (nibble / 16 < static_cast<int>(b.w_.size())) b.w_[nibble / 16] |= v << ((nibble % 16) * 4);
    }
    return b;
  }

 private:
  int nbits_ = 0;
  std::vector<uint64_t> w_;
};

enum class GravityVariant { kSet, kCounting };
enum class GravityKind { kAccept, kReject };

inline const char* variant_name(GravityVariant v) {
  return v == GravityVariant::kSet ? "set" : "counting";
}
inline const char* kind_name(GravityKind k) { return k == GravityKind::kAccept ? "accept" : "reject"; }

// One alphabet symbol of the lower-bound property: a self pointer, a
// center-of-gravity pointer, and the aggregated data (a set in the basic
// variant, a pair of zero/one counts in the alphabet-efficient one).
struct GravityValue {
  Coord self_ptr;
  Coord center_ptr;
  DynBitset data;        // set variant
  int32_t zeros = 0, ones = 0;  // counting variant

  bool operator==(const GravityValue& o) const {
    return self_ptr == o.self_ptr && center_ptr == o.center_ptr && data == o.data &&
           zeros == o.zeros && ones == o.ones;
  }
};

struct AdversarialInstance {
  Array<GravityValue> cells;
  Coord ell;    // lower center of gravity
  Coord upper;  // u = ell + e^1
  int32_t k = 2;
  GravityKind kind = GravityKind::kAccept;
  GravityVariant variant = GravityVariant::kSet;

  AdversarialInstance(int32_t n, int d)
      : cells(n, d) {}
};

namespace gravity {

// Per-axis extents of a (possibly non-hypercube) box construction; the
// small-epsilon embedding instantiates blocks of slightly varying sides.
struct BoxDims {
  int d = 0;
  std::array<int32_t, kMaxDim> m{};

  int64_t source_columns() const {  // number of axis-1 columns
    int64_t c = 1;
    for (int i = 1; i < d; ++i) c *= m[i];
    return c;
  }
};

inline bool in_lower_side(const Coord& x, const Coord& ell) { return x[0] <= ell[0]; }

// The flow path from x toward the given center: axis-1 jumps of k/2 until
// the run (ell_1 - k/2, ell_1] is reached, then one axis at a time toward
// the center's remaining coordinates. For k = 2 this is the unit-step path.
inline std::vector<Coord> flow_path(const Coord& x, const Coord& center, int32_t k) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("flow_path: k must be even and >= 2");
  const int d = x.dim();
  const int32_t jump = k / 2;
  std::vector<Coord> path;
  Coord cur = x;
  path.push_back(cur);
  if (x[0] <= center[0]) {
    while (cur[0] + jump <= center[0]) {
      cur[0] += jump;
      path.push_back(cur);
    }
  } else {
    while (cur[0] - jump >= center[0]) {
      cur[0] -= jump;
      path.push_back(cur);
    }
  }
  for (int i = 1; i < d; ++i) {
    while (cur[i] != center[i]) {
      cur[i] += center[i] > cur[i] ? 1 : -1;
      path.push_back(cur);
    }
  }
  return path;
}

// True iff `through` lies on the path from `from` toward `center`;
// closed form, O(d).
inline bool on_path(const Coord& from, const Coord& through, const Coord& center, int32_t k) {
  const int d = from.dim();
  const int32_t jump = k / 2;
  bool lower = from[0] <= center[0];
  // landing height of the jump phase
  int32_t steps = lower ? (center[0] - from[0]) / jump : (from[0] - center[0]) / jump;
  int32_t land = lower ? from[0] + steps * jump : from[0] - steps * jump;

  // jump leg: same tail coordinates, height in the jump sequence
  {
    bool tail_same = true;
    for (int i = 1; i < d; ++i)
      if (through[i] != from[i]) tail_same = false;
    if (tail_same) {
      int32_t diff = lower ? through[0] - from[0] : from[0] - through[0];
      if (diff >= 0 && diff % jump == 0 &&
          (lower ? through[0] <= land : through[0] >= land))
        return true;
    }
  }
  // lateral legs at the landing height: axes < i already centered, axis i
  // between from[i] and center[i], axes > i untouched
  if (through[0] != land) return false;
  for (int i = 1; i < d; ++i) {
    bool ok = true;
    for (int j = 1; j < i; ++j)
      if (through[j] != center[j]) ok = false;
    for (int j = i + 1; j < d; ++j)
      if (through[j] != from[j]) ok = false;
    if (!ok) continue;
    int32_t lo = std::min(from[i], center[i]), hi = std::max(from[i], center[i]);
    if (through[i] >= lo && through[i] <= hi) return true;
  }
  return false;
}

// Immediate predecessors of cell c on the flow: cells whose next path step
// is exactly c. Used by the local flow rule's guard.
inline std::vector<Coord> immediate_predecessors(const Coord& c, const Coord& ell,
                                                 const Coord& upper, int32_t k,
                                                 const BoxDims& dims) {
  const int d = c.dim();
  const int32_t jump = k / 2;
  std::vector<Coord> preds;
  auto next_step = [&](const Coord& z) -> std::optional<Coord> {
    bool lower = z[0] <= ell[0];
    const Coord& center = lower ? ell : upper;
    Coord nxt = z;
    if (lower ? z[0] + jump <= center[0] : z[0] - jump >= center[0]) {
      nxt[0] += lower ? jump : -jump;
      return nxt;
    }
    for (int i = 1; i < d; ++i) {
      if (z[i] != center[i]) {
        nxt[i] += center[i] > z[i] ? 1 : -1;
        return nxt;
      }
    }
    return std::nullopt;  // path ends here
  };

  auto consider = [&](Coord z) {
    for (int i = 0; i < d; ++i)
      if (z[i] < 1 || z[i] > dims.m[i]) return;
    auto nxt = next_step(z);
    if (nxt && *nxt == c) preds.push_back(z);
  };

  consider(c.shifted(0, -jump));
  consider(c.shifted(0, jump));
  for (int i = 1; i < d; ++i) {
    consider(c.shifted(i, -1));
    consider(c.shifted(i, 1));
  }
  return preds;
}

inline bool is_source(const Coord& x, const BoxDims& dims, int32_t k) {
  return x[0] <= k / 2 || x[0] > dims.m[0] - k / 2;
}
inline bool is_floor_source(const Coord& x, int32_t k) { return x[0] <= k / 2; }

// Source cells in row-major order: the k/2-floor then the k/2-ceiling.
inline std::vector<Coord> source_cells(const BoxDims& dims, int32_t k) {
  std::vector<Coord> out;
  const int d = dims.d;
  auto emit_layer = [&](int32_t height) {
    Coord x = Coord::filled(d, 1);
    x[0] = height;
    for (;;) {
      out.push_back(x);
      int i = d - 1;
      for (; i >= 1; --i) {
        if (++x[i] <= dims.m[i]) break;
        x[i] = 1;
      }
      if (i < 1) break;
    }
    if (d == 1) return;  // single cell per layer already emitted
  };
  for (int32_t h = 1; h <= k / 2; ++h) emit_layer(h);
  for (int32_t h = dims.m[0] - k / 2 + 1; h <= dims.m[0]; ++h) emit_layer(h);
  return out;
}

inline const Coord& center_for(const Coord& x, const Coord& ell, const Coord& upper) {
  return x[0] <= ell[0] ? ell : upper;
}

}  // namespace gravity

// --- generation --------------------------------------------------------------

namespace detail {

struct GravityParams {
  gravity::BoxDims dims;
  int32_t k;
  GravityKind kind;
  GravityVariant variant;
};

// Writes a full construction into `out` through `store(local_coord, value)`.
template <class Store>
void generate_gravity_box(const GravityParams& prm, Rng& rng, Coord& ell_out, Coord& upper_out,
                          Store&& store) {
  const auto& dims = prm.dims;
  const int d = dims.d;
  const int32_t m1 = dims.m[0];
  const int32_t k = prm.k;
  if (m1 < 6) throw std::invalid_argument("gravity: axis-1 extent must be at least 6");
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("gravity: k must be even and >= 2");
  // the jump construction (k > 2) additionally assumes k <= n/6
  if (k > 2 && 6 * k > m1)
    throw std::invalid_argument("gravity: the general-k variant needs k <= n/6");

  // lower center uniform with m1/3 < ell_1 <= 2*m1/3 - 1
  int32_t lo = m1 / 3 + 1;
  int32_t hi = (2 * m1 - 3) / 3;
  if (lo > hi) throw std::invalid_argument("gravity: no admissible center height");
  Coord ell = Coord::filled(d, 1);
  ell[0] = static_cast<int32_t>(lo + rng.below(static_cast<uint64_t>(hi - lo + 1)));
  for (int i = 1; i < d; ++i)
    ell[i] = static_cast<int32_t>(1 + rng.below(static_cast<uint64_t>(dims.m[i])));
  Coord upper = ell.shifted(0, 1);
  ell_out = ell;
  upper_out = upper;

  auto sources = gravity::source_cells(dims, k);
  const int64_t side = static_cast<int64_t>(sources.size()) / 2;  // (k/2) * columns
  const int universe = static_cast<int>(k * dims.source_columns());

  // Assign source data.
  std::vector<GravityValue> source_vals(sources.size());
  if (prm.variant == GravityVariant::kSet) {
    std::vector<uint64_t> ids;
    if (prm.kind == GravityKind::kReject) {
      // all 2*side singletons pairwise disjoint
      ids = rng.sample_distinct(universe, static_cast<uint64_t>(2 * side));
    } else {
      // floor singletons pairwise disjoint; the ceiling carries a random
      // bijection onto the same element set
      ids = rng.sample_distinct(universe, static_cast<uint64_t>(side));
      std::vector<uint64_t> mirror = ids;
      rng.shuffle(mirror);
      ids.insert(ids.end(), mirror.begin(), mirror.end());
    }
    for (size_t i = 0; i < sources.size(); ++i) {
      DynBitset b(universe);
      b.set(static_cast<int>(ids[i]));
      source_vals[i].data = b;
    }
  } else {
    // counting variant: each source holds (1,0) or (0,1); the zero counts
    // per side follow the kind
    int64_t zeros_per_side = prm.kind == GravityKind::kAccept ? (3 * side + 3) / 4  // ceil(3s/4)
                                                              : side / 4;           // floor(s/4)
    for (int half = 0; half < 2; ++half) {
      auto zero_cells = rng.sample_distinct(static_cast<uint64_t>(side),
                                            static_cast<uint64_t>(zeros_per_side));
      std::vector<uint8_t> is_zero(side, 0);
      for (uint64_t z : zero_cells) is_zero[z] = 1;
      for (int64_t i = 0; i < side; ++i) {
        auto& v = source_vals[half * side + i];
        v.zeros = is_zero[i] ? 1 : 0;
        v.ones = is_zero[i] ? 0 : 1;
      }
    }
  }

  // Aggregate along flow paths.
  const bool set_variant = prm.variant == GravityVariant::kSet;
  size_t total = 1;
  for (int i = 0; i < d; ++i) total *= static_cast<size_t>(dims.m[i]);
  std::vector<GravityValue> grid(total);
  auto local_index = [&](const Coord& x) {
    size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * dims.m[i] + static_cast<size_t>(x[i] - 1);
    return idx;
  };
  for (size_t i = 0; i < total; ++i) {
    if (set_variant) grid[i].data = DynBitset(universe);
    grid[i].zeros = 0;
    grid[i].ones = 0;
  }
  for (size_t si = 0; si < sources.size(); ++si) {
    const Coord& src = sources[si];
    grid[local_index(src)] = source_vals[si];
  }
  for (size_t si = 0; si < sources.size(); ++si) {
    const Coord& src = sources[si];
    const Coord& center = gravity::center_for(src, ell, upper);
    auto path = gravity::flow_path(src, center, k);
    for (size_t pi = 1; pi < path.size(); ++pi) {
      GravityValue& cell = grid[local_index(path[pi])];
      if (gravity::is_source(path[pi], dims, k)) continue;  // cannot happen; guard
      if (set_variant)
        cell.data |= source_vals[si].data;
      else {
        cell.zeros += source_vals[si].zeros;
        cell.ones += source_vals[si].ones;
      }
    }
  }

  // Self and center pointers.
  Coord x = Coord::filled(d, 1);
  for (size_t idx = 0; idx < total; ++idx) {
    GravityValue& v = grid[idx];
    v.self_ptr = x;
    v.center_ptr = ell;
    store(static_cast<const Coord&>(x), v);
    for (int i = d - 1; i >= 0; --i) {
      if (++x[i] <= dims.m[i]) break;
      x[i] = 1;
    }
  }
}

}  // namespace detail

// Generates a full [n]^d instance of the pointer/center-of-gravity/data-flow
// construction.
inline AdversarialInstance gen_instance(int32_t n, int d, int32_t k, GravityKind kind,
                                        GravityVariant variant, Rng& rng) {
  if (n < 6) throw std::invalid_argument("gen_instance: n must be at least 6");
  detail::GravityParams prm;
  prm.dims.d = d;
  for (int i = 0; i < d; ++i) prm.dims.m[i] = n;
  prm.k = k;
  prm.kind = kind;
  prm.variant = variant;
  AdversarialInstance inst(n, d);
  inst.k = k;
  inst.kind = kind;
  inst.variant = variant;
  detail::generate_gravity_box(prm, rng, inst.ell, inst.upper,
                               [&](const Coord& x, const GravityValue& v) { inst.cells.at(x) = v; });
  return inst;
}

// --- global checker ----------------------------------------------------------

// Direct evaluation of the global description: self pointers, a constant
// admissible center pointer, singleton sources, exact flow aggregation, and
// the final same-data / more-zeros condition.
inline bool check_global(const Array<GravityValue>& a, int32_t k, GravityVariant variant) {
  const int d = a.dim();
  const int32_t n = a.width();
  gravity::BoxDims dims;
  dims.d = d;
  for (int i = 0; i < d; ++i) dims.m[i] = n;

  const Coord ell = a.at_index(0).center_ptr;
  if (ell.dim() != d) return false;
  for (int i = 0; i < d; ++i)
    if (ell[i] < 1 || ell[i] > n) return false;
  int32_t lo = k == 2 ? 2 : k / 2;
  int32_t hi = k == 2 ? n - 2 : n - k / 2;
  if (ell[0] < lo || ell[0] > hi) return false;
  const Coord upper = ell.shifted(0, 1);

  for (size_t i = 0; i < a.size(); ++i) {
    const GravityValue& v = a.at_index(i);
    if (!(v.self_ptr == a.coord(i))) return false;
    if (!(v.center_ptr == ell)) return false;
  }

  auto sources = gravity::source_cells(dims, k);
  for (const Coord& s : sources) {
    const GravityValue& v = a.at(s);
    if (variant == GravityVariant::kSet) {
      if (!v.data.is_singleton()) return false;
    } else {
      bool zero = v.zeros == 1 && v.ones == 0;
      bool one = v.zeros == 0 && v.ones == 1;
      if (!zero && !one) return false;
    }
  }

  // Recompute the aggregation from scratch and compare non-source cells.
  Array<GravityValue> expect(n, d);
  const int universe = static_cast<int>(k * dims.source_columns());
  for (size_t i = 0; i < expect.size(); ++i) {
    if (variant == GravityVariant::kSet) expect.at_index(i).data = DynBitset(universe);
  }
  for (const Coord& s : sources) {
    const GravityValue& sv = a.at(s);
    if (variant == GravityVariant::kSet && sv.data.bits() != universe) return false;
    auto path = gravity::flow_path(s, gravity::center_for(s, ell, upper), k);
    for (size_t pi = 1; pi < path.size(); ++pi) {
      GravityValue& cell = expect.at(path[pi]);
      if (variant == GravityVariant::kSet)
        cell.data |= sv.data;
      else {
        cell.zeros += sv.zeros;
        cell.ones += sv.ones;
      }
    }
  }
  for (size_t i = 0; i < a.size(); ++i) {
    Coord x = a.coord(i);
    if (gravity::is_source(x, dims, k)) continue;
    const GravityValue& got = a.at_index(i);
    const GravityValue& want = expect.at_index(i);
    if (variant == GravityVariant::kSet) {
      if (!(got.data == want.data)) return false;
    } else {
      if (got.zeros != want.zeros || got.ones != want.ones) return false;
    }
  }

  // Final condition over the two k/2-runs at the centers.
  if (variant == GravityVariant::kSet) {
    DynBitset lower_union(universe), upper_union(universe);
    for (int32_t i = 0; i < k / 2; ++i) {
      lower_union |= a.at(ell.shifted(0, -i)).data;
      upper_union |= a.at(upper.shifted(0, i)).data;
    }
    return lower_union == upper_union;
  }
  int64_t zeros = 0, ones = 0;
  for (int32_t i = 0; i < k / 2; ++i) {
    const GravityValue& lv = a.at(ell.shifted(0, -i));
    const GravityValue& uv = a.at(upper.shifted(0, i));
    zeros += lv.zeros + uv.zeros;
    ones += lv.ones + uv.ones;
  }
  return zeros > ones;
}

inline bool check_global(const AdversarialInstance& inst) {
  return check_global(inst.cells, inst.k, inst.variant);
}

// --- local checker -----------------------------------------------------------

// The k-local allowed-window family: difference preservation, a constant
// admissible center pointer, singleton sources, flow aggregation whenever
// every immediate in-flow neighbor is visible in the window, and the
// same-data / more-zeros rule in windows spanning both center runs.
inline LocalProperty<GravityValue> gravity_property(int32_t n, int d, int32_t k,
                                                    GravityVariant variant) {
  if (k < 2 || k % 2 != 0) throw std::invalid_argument("gravity_property: k must be even");
  LocalProperty<GravityValue> p;
  p.k = k;
  p.d = d;
  p.name = std::string("gravity_") + variant_name(variant);
  gravity::BoxDims dims;
  dims.d = d;
  for (int i = 0; i < d; ++i) dims.m[i] = n;

  p.forbidden = [n, d, k, variant, dims](const Window<GravityValue>& w) -> bool {
    const size_t cells = w.values.size();

    // difference preservation (against cell 0) + in-domain pointers
    const Coord base = w.values[0].self_ptr;
    if (base.dim() != d) return true;
    for (size_t c = 0; c < cells; ++c) {
      const Coord& sp = w.values[c].self_ptr;
      if (sp.dim() != d) return true;
      Coord off = w.offset_coord(c);
      for (int i = 0; i < d; ++i) {
        if (sp[i] - base[i] != off[i] - 1) return true;
        if (sp[i] < 1 || sp[i] > n) return true;
      }
    }

    // constant center pointer with admissible height
    const Coord ell = w.values[0].center_ptr;
    if (ell.dim() != d) return true;
    for (size_t c = 1; c < cells; ++c)
      if (!(w.values[c].center_ptr == ell)) return true;
    for (int i = 0; i < d; ++i)
      if (ell[i] < 1 || ell[i] > n) return true;
    int32_t lo = k == 2 ? 2 : k / 2;
    int32_t hi = k == 2 ? n - 2 : n - k / 2;
    if (ell[0] < lo || ell[0] > hi) return true;
    const Coord upper = ell.shifted(0, 1);

    // data originates in the k/2-floor and k/2-ceiling
    for (size_t c = 0; c < cells; ++c) {
      if (!gravity::is_source(w.values[c].self_ptr, dims, k)) continue;
      const GravityValue& v = w.values[c];
      if (variant == GravityVariant::kSet) {
        if (!v.data.is_singleton()) return true;
      } else {
        bool zero = v.zeros == 1 && v.ones == 0;
        bool one = v.zeros == 0 && v.ones == 1;
        if (!zero && !one) return true;
      }
    }

    // flow aggregation at non-source cells whose full in-flow is visible
    for (size_t c = 0; c < cells; ++c) {
      const Coord& pos = w.values[c].self_ptr;
      if (gravity::is_source(pos, dims, k)) continue;
      auto preds = gravity::immediate_predecessors(pos, ell, upper, k, dims);
      bool all_visible = true;
      for (const Coord& pr : preds) {
        bool found = false;
        for (size_t c2 = 0; c2 < cells && !found; ++c2)
          if (w.values[c2].self_ptr == pr) found = true;
        if (!found) {
          all_visible = false;
          break;
        }
      }
      if (!all_visible) continue;

      if (variant == GravityVariant::kSet) {
        // union over every in-window cell whose path passes through pos
        DynBitset agg = w.values[c].data;  // preserve universe size
        bool inited = false;
        for (size_t c2 = 0; c2 < cells; ++c2) {
          if (c2 == c) continue;
          const Coord& from = w.values[c2].self_ptr;
          const Coord& center = gravity::center_for(from, ell, upper);
          if ((from[0] <= ell[0]) != (pos[0] <= ell[0])) continue;
          if (!gravity::on_path(from, pos, center, k)) continue;
          if (!inited) {
            agg = w.values[c2].data;
            inited = true;
          } else {
            agg |= w.values[c2].data;
          }
        }
        if (!inited) {
          if (w.values[c].data.any()) return true;
        } else if (!(agg == w.values[c].data)) {
          return true;
        }
      } else {
        // counts sum over exactly the immediate predecessors
        int64_t zeros = 0, ones = 0;
        for (const Coord& pr : preds)
          for (size_t c2 = 0; c2 < cells; ++c2)
            if (w.values[c2].self_ptr == pr) {
              zeros += w.values[c2].zeros;
              ones += w.values[c2].ones;
              break;
            }
        if (w.values[c].zeros != zeros || w.values[c].ones != ones) return true;
      }
    }

    // same data (or more zeros than ones) around the centers, when both
    // k/2-runs are fully visible
    {
      bool runs_visible = true;
      auto find_cell = [&](const Coord& pos) -> const GravityValue* {
        for (size_t c = 0; c < cells; ++c)
          if (w.values[c].self_ptr == pos) return &w.values[c];
        return nullptr;
      };
      std::vector<const GravityValue*> lower_run, upper_run;
      for (int32_t i = 0; i < k / 2 && runs_visible; ++i) {
        const GravityValue* lv = find_cell(ell.shifted(0, -i));
        const GravityValue* uv = find_cell(upper.shifted(0, i));
        if (!lv || !uv)
          runs_visible = false;
        else {
          lower_run.push_back(lv);
          upper_run.push_back(uv);
        }
      }
      if (runs_visible) {
        if (variant == GravityVariant::kSet) {
          DynBitset lu = lower_run[0]->data, uu = upper_run[0]->data;
          for (size_t i = 1; i < lower_run.size(); ++i) {
            lu |= lower_run[i]->data;
            uu |= upper_run[i]->data;
          }
          if (!(lu == uu)) return true;
        } else {
          int64_t zeros = 0, ones = 0;
          for (size_t i = 0; i < lower_run.size(); ++i) {
            zeros += lower_run[i]->zeros + upper_run[i]->zeros;
            ones += lower_run[i]->ones + upper_run[i]->ones;
          }
          if (!(zeros > ones)) return true;
        }
      }
    }

    return false;  // window is allowed
  };
  return p;
}

inline bool check_local(const Array<GravityValue>& a, int32_t k, GravityVariant variant) {
  auto p = gravity_property(a.width(), a.dim(), k, variant);
  return !satisfies(p, a).has_value();
}

inline bool check_local(const AdversarialInstance& inst) {
  return check_local(inst.cells, inst.k, inst.variant);
}

// --- distinguishing statistics -----------------------------------------------

struct DistStats {
  int64_t i_size = 0;       // |I(Q, A)|: sources whose path meets Q
  int64_t n_collisions = 0; // N(Q, A): matching floor/ceiling singleton pairs in I
  int64_t c_count = 0;      // C(Q, A): total zero/one mass over Q (counting)
};

inline DistStats distinguishing_stats(const AdversarialInstance& inst,
                                      const std::vector<Coord>& q) {
  DistStats st;
  const int d = inst.cells.dim();
  gravity::BoxDims dims;
  dims.d = d;
  for (int i = 0; i < d; ++i) dims.m[i] = inst.cells.width();

  auto sources = gravity::source_cells(dims, inst.k);
  std::vector<const Coord*> floor_hit, ceil_hit;
  for (const Coord& s : sources) {
    const Coord& center = gravity::center_for(s, inst.ell, inst.upper);
    bool hit = false;
    for (const Coord& qq : q)
      if (gravity::on_path(s, qq, center, inst.k)) {
        hit = true;
        break;
      }
    if (hit) {
      ++st.i_size;
      (gravity::is_floor_source(s, inst.k) ? floor_hit : ceil_hit).push_back(&s);
    }
  }
  if (inst.variant == GravityVariant::kSet) {
    for (const Coord* f : floor_hit)
      for (const Coord* c : ceil_hit)
        if (inst.cells.at(*f).data == inst.cells.at(*c).data) ++st.n_collisions;
  } else {
    for (const Coord& qq : q) {
      const GravityValue& v = inst.cells.at(qq);
      st.c_count += v.zeros + v.ones;
    }
  }
  return st;
}

// --- small-epsilon embedding ---------------------------------------------------

struct EmbedPlan {
  int32_t side = 0;                       // n' = floor(eps^(1/d) * n)
  std::vector<std::vector<int32_t>> axis_starts;  // per axis, interval starts
  std::vector<std::vector<int32_t>> axis_lens;
  int64_t block_count = 0;
};

inline EmbedPlan embed_plan(int32_t n, int d, double eps) {
  if (eps <= 0 || eps > 1) throw std::invalid_argument("embed_plan: eps must be in (0, 1]");
  EmbedPlan plan;
  plan.side = static_cast<int32_t>(std::floor(std::pow(eps, 1.0 / d) * n));
  if (plan.side < std::max(d, 6)) throw std::invalid_argument("embed_plan: block side too small");
  plan.block_count = 1;
  for (int i = 0; i < d; ++i) {
    int32_t t = std::max(1, n / plan.side);
    std::vector<int32_t> starts, lens;
    int32_t base = n / t, extra = n % t;
    int32_t cur = 1;
    for (int32_t j = 0; j < t; ++j) {
      int32_t len = base + (j < extra ? 1 : 0);
      starts.push_back(cur);
      lens.push_back(len);
      cur += len;
    }
    plan.block_count *= t;
    plan.axis_starts.push_back(std::move(starts));
    plan.axis_lens.push_back(std::move(lens));
  }
  return plan;
}

// Partitions [n]^d into ~1/eps consecutive blocks, embeds one random
// instance (local coordinates) in a uniformly chosen block, and fills every
// other block with a fixed satisfying configuration.
inline Array<GravityValue> embed_small_epsilon(int32_t n, int d, int32_t k, double eps,
                                               GravityKind kind, GravityVariant variant,
                                               Rng& rng) {
  if (std::pow(eps, 1.0 / d) * n / 5.0 < static_cast<double>(k))
    throw std::invalid_argument("embed_small_epsilon: requires k <= eps^(1/d) n / 5");
  EmbedPlan plan = embed_plan(n, d, eps);
  Array<GravityValue> out(n, d);

  int64_t chosen = static_cast<int64_t>(rng.below(static_cast<uint64_t>(plan.block_count)));

  std::vector<int64_t> block_index(d);
  {
    int64_t rest = chosen;
    for (int i = d - 1; i >= 0; --i) {
      int64_t t = static_cast<int64_t>(plan.axis_starts[i].size());
      block_index[i] = rest % t;
      rest /= t;
    }
  }

  std::vector<int64_t> counter(d, 0);
  for (;;) {
    detail::GravityParams prm;
    prm.dims.d = d;
    Coord origin = Coord::filled(d, 1);
    bool is_chosen = true;
    for (int i = 0; i < d; ++i) {
      prm.dims.m[i] = plan.axis_lens[i][counter[i]];
      origin[i] = plan.axis_starts[i][counter[i]];
      if (counter[i] != block_index[i]) is_chosen = false;
    }
    prm.k = k;
    prm.kind = is_chosen ? kind : GravityKind::kAccept;
    prm.variant = variant;
    Coord ell, upper;
    Rng block_rng = is_chosen ? rng.split("embedded") : Rng(0x9c0ffee0u);
    detail::generate_gravity_box(prm, block_rng, ell, upper,
                                 [&](const Coord& local, const GravityValue& v) {
                                   Coord g = origin;
                                   for (int i = 0; i < d; ++i) g[i] += local[i] - 1;
                                   out.at(g) = v;
                                 });
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++counter[i] < static_cast<int64_t>(plan.axis_starts[i].size())) break;
      counter[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace localtest
