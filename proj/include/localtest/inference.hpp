#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "localtest/grid.hpp"
#include "localtest/property.hpp"

namespace localtest {

struct resource_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr uint64_t kDefaultInferBudget = 10'000'000;

template <class T>
struct RepairVerdict {
  bool repairable = false;
  // Interior assignment witnessing repairability; present only on request.
  std::optional<std::vector<std::pair<Coord, T>>> fill;
};

// Scans every width-k window fully contained in `box`; returns the first
// forbidden anchor in lexicographic order.
template <class T, class ValueFn>
std::optional<Coord> scan_box_for_forbidden(const LocalProperty<T>& p, const BoxSpec& box,
                                            ValueFn&& value_at) {
  const int d = box.d;
  const int32_t k = p.k;
  for (int i = 0; i < d; ++i)
    if (box.hi[i] - box.lo[i] + 1 < k) return std::nullopt;  // no window fits

  Window<T> w;
  w.k = k;
  w.d = d;
  size_t cells = 1;
  for (int i = 0; i < d; ++i) cells *= static_cast<size_t>(k);
  w.values.resize(cells);

  Coord a = Coord::filled(d, 0);
  for (int i = 0; i < d; ++i) a[i] = box.lo[i];
  for (;;) {
    w.loc = a;
    Coord off = Coord::filled(d, 1);
    for (size_t c = 0; c < cells; ++c) {
      Coord x = a;
      for (int i = 0; i < d; ++i) x[i] += off[i] - 1;
      w.values[c] = value_at(x);
      for (int i = d - 1; i >= 0; --i) {
        if (++off[i] <= k) break;
        off[i] = 1;
      }
    }
    if (p.forbidden(w)) return a;
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++a[i] <= box.hi[i] - k + 1) break;
      a[i] = box.lo[i];
    }
    if (i < 0) return std::nullopt;
  }
}

namespace detail {

template <class T>
size_t alphabet_index(std::span<const T> alphabet, const T& v, const char* who) {
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == v) return i;
  throw std::invalid_argument(std::string(who) + ": boundary value outside alphabet");
}

}  // namespace detail

template <class T>
struct Repair1dResult {
  bool repairable = false;
  std::vector<T> completion;  // all m values, when repairable and requested
};

// The level-by-level predicate DP over patterns of length k. Level 1 is
// seeded by the left boundary and F-membership; level i is true iff the
// pattern is allowed and some one-step-left pattern was true; the final
// level is masked by the right boundary (when one exists). Runs in
// O(m * |alphabet|^(k+1)).
template <class T>
Repair1dResult<T> infer_1d(const LocalProperty<T>& p, int32_t m, std::span<const T> left,
                           std::span<const T> right, std::span<const T> alphabet,
                           bool want_fill = false) {
  if (p.d != 1) throw std::invalid_argument("infer_1d: property is not one-dimensional");
  const int32_t k = p.k;
  if (static_cast<int32_t>(left.size()) != k - 1)
    throw std::invalid_argument("infer_1d: left boundary must have k-1 values");
  if (!right.empty() && static_cast<int32_t>(right.size()) != k - 1)
    throw std::invalid_argument("infer_1d: right boundary must have k-1 values or be absent");
  if (m < k || (!right.empty() && m < 2 * k - 2))
    throw std::invalid_argument("infer_1d: closure too short");
  if (alphabet.empty()) throw capability_error("infer_1d: explicit alphabet required");

  const size_t s = alphabet.size();
  size_t patterns = 1;
  for (int32_t i = 0; i < k; ++i) {
    if (patterns > kDefaultInferBudget / s)
      throw resource_error("infer_1d: |alphabet|^k exceeds the DP budget");
    patterns *= s;
  }
  const size_t prefix_mod = patterns / s;  // s^(k-1)

  // Pattern index: sigma_1 * s^(k-1) + ... + sigma_k.
  std::vector<uint8_t> allowed(patterns);
  {
    Window<T> w;
    w.loc = Coord{1};
    w.k = k;
    w.d = 1;
    w.values.assign(k, alphabet[0]);
    for (size_t idx = 0; idx < patterns; ++idx) {
      size_t rest = idx;
      for (int32_t j = k - 1; j >= 0; --j) {
        w.values[j] = alphabet[rest % s];
        rest /= s;
      }
      allowed[idx] = !p.forbidden(w);
    }
  }

  size_t left_idx = 0;
  for (const T& v : left) left_idx = left_idx * s + detail::alphabet_index(alphabet, v, "infer_1d");
  size_t right_idx = 0;
  for (const T& v : right) right_idx = right_idx * s + detail::alphabet_index(alphabet, v, "infer_1d");

  const int32_t levels = m - k + 1;
  std::vector<std::vector<uint8_t>> table;
  table.reserve(want_fill ? levels : 2);

  std::vector<uint8_t> cur(patterns, 0);
  for (size_t idx = left_idx * s; idx < left_idx * s + s; ++idx) cur[idx] = allowed[idx];
  if (want_fill) table.push_back(cur);

  for (int32_t lvl = 2; lvl <= levels; ++lvl) {
    std::vector<uint8_t> next(patterns, 0);
    for (size_t idx = 0; idx < patterns; ++idx) {
      if (!allowed[idx]) continue;
      size_t pref = idx / s;  // sigma_1..sigma_(k-1)
      for (size_t c0 = 0; c0 < s; ++c0) {
        if (cur[c0 * prefix_mod + pref]) {
          next[idx] = 1;
          break;
        }
      }
    }
    cur = std::move(next);
    if (want_fill) table.push_back(cur);
  }

  Repair1dResult<T> out;
  size_t chosen = patterns;
  if (right.empty()) {
    for (size_t idx = 0; idx < patterns; ++idx)
      if (cur[idx]) { chosen = idx; break; }
  } else {
    for (size_t first = 0; first < s; ++first) {
      size_t idx = first * prefix_mod + right_idx;
      if (cur[idx]) { chosen = idx; break; }
    }
  }
  out.repairable = chosen < patterns;
  if (!out.repairable || !want_fill) return out;

  // Backtrack one pattern per level; position i+k-1 is the last symbol of
  // the level-i pattern.
  std::vector<size_t> chain(levels);
  chain[levels - 1] = chosen;
  for (int32_t lvl = levels - 1; lvl >= 1; --lvl) {
    size_t idx = chain[lvl];
    size_t pref = idx / s;
    bool found = false;
    for (size_t c0 = 0; c0 < s; ++c0) {
      size_t prev = c0 * prefix_mod + pref;
      if (table[lvl - 1][prev]) {
        chain[lvl - 1] = prev;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("infer_1d: backtrack failed");
  }
  out.completion.resize(m);
  for (int32_t j = 0; j < k - 1; ++j) out.completion[j] = left[j];
  for (int32_t lvl = 1; lvl <= levels; ++lvl)
    out.completion[lvl + k - 2] = alphabet[chain[lvl - 1] % s];
  return out;
}

template <class T>
Repair1dResult<T> infer_1d(const LocalProperty<T>& p, int32_t m, const std::vector<T>& left,
                           const std::vector<T>& right, std::span<const T> alphabet,
                           bool want_fill = false) {
  return infer_1d(p, m, std::span<const T>(left), std::span<const T>(right), alphabet, want_fill);
}

// --- block-level engines -------------------------------------------------

namespace detail {

template <class T, class ValueFn>
std::vector<std::pair<Coord, T>> boundary_values(const BoxSpec& box, ValueFn&& value_at) {
  std::vector<std::pair<Coord, T>> out;
  out.reserve(static_cast<size_t>(box.boundary_size()));
  box.for_each_boundary_cell([&](const Coord& x) { out.emplace_back(x, value_at(x)); });
  return out;
}

// Max-value Fenwick tree over 1-based positions; supports prefix queries.
template <class T>
class PrefixMax {
 public:
  explicit PrefixMax(int32_t size) : vals_(size + 1), set_(size + 1, 0) {}

  void update(int32_t pos, const T& v) {
    for (; pos < static_cast<int32_t>(vals_.size()); pos += pos & -pos) {
      if (!set_[pos] || vals_[pos] < v) {
        vals_[pos] = v;
        set_[pos] = 1;
      }
    }
  }

  // Largest value at position <= pos, if any.
  std::optional<T> query(int32_t pos) const {
    std::optional<T> best;
    for (; pos > 0; pos -= pos & -pos) {
      if (set_[pos] && (!best || *best < vals_[pos])) best = vals_[pos];
    }
    return best;
  }

 private:
  std::vector<T> vals_;
  std::vector<uint8_t> set_;
};

}  // namespace detail

// Exact monotone repairability: the boundary is consistent iff no pair
// x <= y (componentwise) has value(x) > value(y). The witness fill assigns
// each interior cell the max over boundary cells below it.
template <class T, class ValueFn>
RepairVerdict<T> infer_monotone(const BoxSpec& box, ValueFn&& value_at, bool want_fill = false) {
  auto cells = detail::boundary_values<T>(box, value_at);
  bool consistent = true;

  if (box.d == 2 && cells.size() > 64) {
    std::sort(cells.begin(), cells.end(),
              [](const auto& a, const auto& b) {
                if (a.first[0] != b.first[0]) return a.first[0] < b.first[0];
                return a.first[1] < b.first[1];
              });
    detail::PrefixMax<T> fen(box.hi[1]);
    for (const auto& [x, v] : cells) {
      auto best = fen.query(x[1]);
      if (best && v < *best) { consistent = false; break; }
      fen.update(x[1], v);
    }
  } else {
    for (size_t i = 0; i < cells.size() && consistent; ++i)
      for (size_t j = 0; j < cells.size(); ++j) {
        if (i == j) continue;
        if (cells[i].first.dominated_by(cells[j].first) && cells[j].second < cells[i].second) {
          consistent = false;
          break;
        }
      }
  }

  RepairVerdict<T> out;
  out.repairable = consistent;
  if (!consistent || !want_fill) return out;

  T floor_value = cells.front().second;
  for (const auto& [x, v] : cells)
    if (v < floor_value) floor_value = v;

  std::vector<std::pair<Coord, T>> fill;
  box.for_each_interior_cell([&](const Coord& z) {
    T best = floor_value;
    bool found = false;
    for (const auto& [x, v] : cells) {
      if (x.dominated_by(z) && (!found || best < v)) {
        best = v;
        found = true;
      }
    }
    fill.emplace_back(z, best);
  });
  out.fill = std::move(fill);
  return out;
}

// Exact 1D Lipschitz repairability (k = 2): a gap is fillable iff the value
// difference across it is at most c times its length.
template <std::integral T, class ValueFn>
RepairVerdict<T> infer_lipschitz(int64_t c, const BoxSpec& box, ValueFn&& value_at,
                                 bool want_fill = false) {
  if (box.d != 1) throw std::invalid_argument("infer_lipschitz: 1D blocks only");
  const int32_t left_pos = box.lo[0];
  const bool has_left = box.ilo[0] > box.lo[0];
  const bool has_right = box.ihi[0] < box.hi[0];
  if (!has_left && has_right)
    throw std::invalid_argument("infer_lipschitz: right-only boundaries are not grid blocks");
  RepairVerdict<T> out;
  out.repairable = true;
  if (has_left && has_right) {
    int64_t vl = value_at(Coord{left_pos});
    int64_t vr = value_at(Coord{box.hi[0]});
    int64_t gap = box.hi[0] - left_pos;
    int64_t diff = vr > vl ? vr - vl : vl - vr;
    out.repairable = diff <= c * gap;
  }
  if (!out.repairable || !want_fill) return out;

  std::vector<std::pair<Coord, T>> fill;
  int64_t cur = has_left ? static_cast<int64_t>(value_at(Coord{left_pos})) : 0;
  int64_t target = has_right ? static_cast<int64_t>(value_at(Coord{box.hi[0]})) : cur;
  for (int32_t x = box.ilo[0]; x <= box.ihi[0]; ++x) {
    cur += std::clamp<int64_t>(target - cur, -c, c);
    fill.emplace_back(Coord{x}, static_cast<T>(cur));
  }
  out.fill = std::move(fill);
  return out;
}

// Exact 1D convexity repairability (k = 3): slopes must be nondecreasing,
// so a fill exists iff s_left * g <= (b1 - a2) <= s_right * g, where g is
// the number of slope steps between the inner boundary cells.
template <std::integral T, class ValueFn>
RepairVerdict<T> infer_convex_1d(const BoxSpec& box, ValueFn&& value_at, bool want_fill = false) {
  if (box.d != 1) throw std::invalid_argument("infer_convex_1d: 1D blocks only");
  const bool has_left = box.ilo[0] > box.lo[0];
  const bool has_right = box.ihi[0] < box.hi[0];
  if (has_left && box.ilo[0] - box.lo[0] != 2)
    throw std::invalid_argument("infer_convex_1d: expected a 2-cell left boundary");
  if (has_right && box.hi[0] - box.ihi[0] != 2)
    throw std::invalid_argument("infer_convex_1d: expected a 2-cell right boundary");
  if (!has_left && has_right)
    throw std::invalid_argument("infer_convex_1d: right-only boundaries are not grid blocks");

  RepairVerdict<T> out;
  out.repairable = true;
  int64_t a1 = 0, a2 = 0, b1 = 0, b2 = 0;
  if (has_left) {
    a1 = value_at(Coord{box.lo[0]});
    a2 = value_at(Coord{box.lo[0] + 1});
  }
  if (has_right) {
    b1 = value_at(Coord{box.hi[0] - 1});
    b2 = value_at(Coord{box.hi[0]});
  }
  if (has_left && has_right) {
    int64_t s_left = a2 - a1;
    int64_t s_right = b2 - b1;
    int64_t g = (box.hi[0] - 1) - (box.lo[0] + 1);  // slope steps between a2 and b1
    int64_t delta = b1 - a2;
    out.repairable = s_left * g <= delta && delta <= s_right * g;
  }
  if (!out.repairable || !want_fill) return out;

  // Flattest nondecreasing slope sequence summing to delta: floor(delta/g)
  // with the remainder spread over the last steps. The feasibility bounds
  // guarantee it starts at >= s_left and ends at <= s_right.
  std::vector<std::pair<Coord, T>> fill;
  if (has_left && has_right) {
    int64_t g = (box.hi[0] - 1) - (box.lo[0] + 1);
    int64_t delta = b1 - a2;
    int64_t base = delta >= 0 ? delta / g : -((-delta + g - 1) / g);  // floor(delta/g)
    int64_t rem = delta - base * g;  // 0 <= rem < g
    int64_t cur = a2;
    int32_t pos = box.lo[0] + 2;
    for (int64_t i = 0; i < g - 1; ++i) {
      cur += base + (i >= g - rem ? 1 : 0);
      fill.emplace_back(Coord{pos++}, static_cast<T>(cur));
    }
  } else if (has_left) {
    int64_t slope = a2 - a1;
    int64_t cur = a2;
    for (int32_t x = box.ilo[0]; x <= box.ihi[0]; ++x) {
      cur += slope;
      fill.emplace_back(Coord{x}, static_cast<T>(cur));
    }
  } else {
    for (int32_t x = box.ilo[0]; x <= box.ihi[0]; ++x)
      fill.emplace_back(Coord{x}, static_cast<T>(0));
  }
  out.fill = std::move(fill);
  return out;
}

// Generic 1D repairability through the pattern DP.
template <class T, class ValueFn>
RepairVerdict<T> infer_block_1d(const LocalProperty<T>& p, const BoxSpec& box, ValueFn&& value_at,
                                std::span<const T> alphabet, bool want_fill = false) {
  if (box.d != 1) throw std::invalid_argument("infer_block_1d: 1D blocks only");
  const int32_t k = p.k;
  const int32_t m = box.hi[0] - box.lo[0] + 1;
  std::vector<T> left, right;
  const bool has_left = box.ilo[0] > box.lo[0];
  const bool has_right = box.ihi[0] < box.hi[0];
  if (has_left && box.ilo[0] - box.lo[0] != k - 1)
    throw std::invalid_argument("infer_block_1d: left boundary must be k-1 cells");
  if (has_right && box.hi[0] - box.ihi[0] != k - 1)
    throw std::invalid_argument("infer_block_1d: right boundary must be k-1 cells");
  if (!has_left)
    throw std::invalid_argument("infer_block_1d: grid blocks always carry a left boundary");
  for (int32_t x = box.lo[0]; x < box.ilo[0]; ++x) left.push_back(value_at(Coord{x}));
  if (has_right)
    for (int32_t x = box.ihi[0] + 1; x <= box.hi[0]; ++x) right.push_back(value_at(Coord{x}));

  auto res = infer_1d(p, m, std::span<const T>(left), std::span<const T>(right), alphabet, want_fill);
  RepairVerdict<T> out;
  out.repairable = res.repairable;
  if (res.repairable && want_fill) {
    std::vector<std::pair<Coord, T>> fill;
    for (int32_t x = box.ilo[0]; x <= box.ihi[0]; ++x)
      fill.emplace_back(Coord{x}, res.completion[x - box.lo[0]]);
    out.fill = std::move(fill);
  }
  return out;
}

// Exhaustive d-dimensional repairability: enumerate alphabet^interior and
// look for a forbidden-free closure. Exceeding the fill budget is a hard
// error, never a silent guess.
template <class T, class ValueFn>
RepairVerdict<T> infer_block_nd(const LocalProperty<T>& p, const BoxSpec& box, ValueFn&& value_at,
                                std::span<const T> alphabet, uint64_t budget = kDefaultInferBudget,
                                bool want_fill = false) {
  if (alphabet.empty()) throw capability_error("infer_block_nd: explicit alphabet required");
  std::vector<Coord> interior;
  box.for_each_interior_cell([&](const Coord& x) { interior.push_back(x); });

  const size_t s = alphabet.size();
  uint64_t fills = 1;
  for (size_t i = 0; i < interior.size(); ++i) {
    if (fills > budget / s)
      throw resource_error("infer_block_nd: alphabet^interior exceeds the enumeration budget");
    fills *= s;
  }

  // Materialize the closure box once; rewrite interior cells per candidate.
  std::array<int32_t, kMaxDim> dims{};
  size_t total = 1;
  for (int i = 0; i < box.d; ++i) {
    dims[i] = box.hi[i] - box.lo[i] + 1;
    total *= static_cast<size_t>(dims[i]);
  }
  auto local_index = [&](const Coord& x) {
    size_t idx = 0;
    for (int i = 0; i < box.d; ++i) idx = idx * dims[i] + static_cast<size_t>(x[i] - box.lo[i]);
    return idx;
  };
  std::vector<T> buf(total, alphabet[0]);
  box.for_each_boundary_cell([&](const Coord& x) { buf[local_index(x)] = value_at(x); });

  std::vector<size_t> digit(interior.size(), 0);
  std::vector<size_t> interior_idx(interior.size());
  for (size_t i = 0; i < interior.size(); ++i) interior_idx[i] = local_index(interior[i]);
  auto buffered = [&](const Coord& x) -> const T& { return buf[local_index(x)]; };

  RepairVerdict<T> out;
  for (uint64_t f = 0; f < fills; ++f) {
    for (size_t i = 0; i < interior.size(); ++i) buf[interior_idx[i]] = alphabet[digit[i]];
    if (!scan_box_for_forbidden(p, box, buffered)) {
      out.repairable = true;
      if (want_fill) {
        std::vector<std::pair<Coord, T>> fill;
        for (size_t i = 0; i < interior.size(); ++i)
          fill.emplace_back(interior[i], alphabet[digit[i]]);
        out.fill = std::move(fill);
      }
      return out;
    }
    for (size_t i = digit.size(); i-- > 0;) {
      if (++digit[i] < s) break;
      digit[i] = 0;
    }
  }
  return out;
}

// Engine dispatch: named fast engines first, then the explicit-alphabet DP
// or enumeration, then the boundary-spanned integer range for 1D
// distance-style properties.
template <class T, class ValueFn>
RepairVerdict<T> infer_block(const LocalProperty<T>& p, const BoxSpec& box, ValueFn&& value_at,
                             uint64_t budget = kDefaultInferBudget, bool want_fill = false) {
  switch (p.hint) {
    case InferenceHint::kMonotone:
      return infer_monotone<T>(box, value_at, want_fill);
    case InferenceHint::kLipschitz:
      if constexpr (std::integral<T>) {
        if (box.d == 1 && p.k == 2) return infer_lipschitz<T>(p.lipschitz_c, box, value_at, want_fill);
      }
      break;
    case InferenceHint::kConvex1d:
      if constexpr (std::integral<T>) {
        if (box.d == 1 && p.k == 3) return infer_convex_1d<T>(box, value_at, want_fill);
      }
      break;
    default:
      break;
  }

  if (p.alphabet) {
    std::span<const T> alpha(*p.alphabet);
    if (box.d == 1) return infer_block_1d(p, box, value_at, alpha, want_fill);
    return infer_block_nd(p, box, value_at, alpha, budget, want_fill);
  }

  if constexpr (std::integral<T>) {
    if (box.d == 1 &&
        (p.hint == InferenceHint::kIntRangeDp || p.hint == InferenceHint::kLipschitz ||
         p.hint == InferenceHint::kConvex1d)) {
      // Effective alphabet: the integer range spanned by the boundary.
      // Clamping any completion into this range preserves these
      // distance-style constraints, so the restriction is exact.
      bool any = false;
      int64_t lo = 0, hi = 0;
      box.for_each_boundary_cell([&](const Coord& x) {
        int64_t v = value_at(x);
        if (!any) {
          lo = hi = v;
          any = true;
        } else {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      });
      if (!any) {
        RepairVerdict<T> out;
        out.repairable = true;
        return out;
      }
      if (static_cast<uint64_t>(hi - lo) + 1 > budget)
        throw resource_error("infer_block: boundary-spanned range too large");
      std::vector<T> alpha;
      alpha.reserve(static_cast<size_t>(hi - lo + 1));
      for (int64_t v = lo; v <= hi; ++v) alpha.push_back(static_cast<T>(v));
      return infer_block_1d(p, box, value_at, std::span<const T>(alpha), want_fill);
    }
  }

  throw capability_error("infer_block: property has no usable inference engine");
}

// A G_i-block is a witness if (i = 0) its closure contains a forbidden
// window, or (i > 0) it is unrepairable from its boundary values alone.
template <class T, class ValueFn>
bool is_witness(int level, const LocalProperty<T>& p, const BoxSpec& box, ValueFn&& value_at,
                uint64_t budget = kDefaultInferBudget) {
  if (level == 0) return scan_box_for_forbidden(p, box, value_at).has_value();
  return !infer_block(p, box, value_at, budget, false).repairable;
}

}  // namespace localtest
