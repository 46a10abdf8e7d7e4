#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "localtest/coord.hpp"

namespace localtest {

struct Interval {
  int32_t start = 1;  // 1-based
  int32_t len = 0;
  int32_t end() const { return start + len - 1; }
};

// An (n, w)-interval partition from the dyadic family: level i has exactly
// 2^i intervals, each of length floor(n/2^i) or floor(n/2^i)+1, and level
// i+1 refines level i. The split rule is fixed (left child takes the
// ceiling half), so partitions are reproducible.
class IntervalPartition {
 public:
  static IntervalPartition dyadic(int32_t n, int level) {
    if (n < 1) throw std::invalid_argument("IntervalPartition: n must be >= 1");
    if (level < 0 || (int64_t{1} << level) > n)
      throw std::invalid_argument("IntervalPartition: level out of range");
    IntervalPartition p;
    p.n_ = n;
    p.iv_ = {Interval{1, n}};
    for (int i = 0; i < level; ++i) {
      std::vector<Interval> next;
      next.reserve(p.iv_.size() * 2);
      for (const Interval& iv : p.iv_) {
        int32_t left = (iv.len + 1) / 2;
        next.push_back(Interval{iv.start, left});
        next.push_back(Interval{iv.start + left, iv.len - left});
      }
      p.iv_ = std::move(next);
    }
    p.build_index();
    return p;
  }

  int32_t n() const { return n_; }
  int count() const { return static_cast<int>(iv_.size()); }
  const Interval& interval(int i) const { return iv_[i]; }
  const std::vector<Interval>& intervals() const { return iv_; }

  int interval_of(int32_t cell) const {
    if (cell < 1 || cell > n_) throw std::out_of_range("IntervalPartition: cell out of range");
    return cell_to_iv_[cell - 1];
  }

  int32_t min_len() const {
    int32_t m = n_;
    for (const Interval& iv : iv_)
      if (iv.len < m) m = iv.len;
    return m;
  }

 private:
  void build_index() {
    cell_to_iv_.assign(n_, 0);
    for (size_t j = 0; j < iv_.size(); ++j)
      for (int32_t c = iv_[j].start; c <= iv_[j].end(); ++c)
        cell_to_iv_[c - 1] = static_cast<int>(j);
  }

  int32_t n_ = 0;
  std::vector<Interval> iv_;
  std::vector<int> cell_to_iv_;
};

// A block identified by its interval index per axis (0-based indices into
// the grid's partition). Blocks are never materialized as cell sets.
struct Block {
  std::array<int32_t, kMaxDim> iv{};
  int d = 0;

  bool operator==(const Block& o) const {
    if (d != o.d) return false;
    for (int i = 0; i < d; ++i)
      if (iv[i] != o.iv[i]) return false;
    return true;
  }
};

// Axis-aligned geometry of one block: the closure box [lo, hi] and the
// block (interior) box [ilo, ihi] inside it. Boundary = closure \ block.
struct BoxSpec {
  int d = 0;
  std::array<int32_t, kMaxDim> lo{}, hi{};
  std::array<int32_t, kMaxDim> ilo{}, ihi{};

  int64_t closure_size() const {
    int64_t s = 1;
    for (int i = 0; i < d; ++i) s *= hi[i] - lo[i] + 1;
    return s;
  }
  int64_t interior_size() const {
    int64_t s = 1;
    for (int i = 0; i < d; ++i) s *= ihi[i] >= ilo[i] ? ihi[i] - ilo[i] + 1 : 0;
    return s;
  }
  int64_t boundary_size() const { return closure_size() - interior_size(); }

  bool in_closure(const Coord& x) const {
    for (int i = 0; i < d; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
  }
  bool in_interior(const Coord& x) const {
    for (int i = 0; i < d; ++i)
      if (x[i] < ilo[i] || x[i] > ihi[i]) return false;
    return true;
  }
  bool on_boundary(const Coord& x) const { return in_closure(x) && !in_interior(x); }

  template <class F>
  void for_each_closure_cell(F&& fn) const {
    Coord x = Coord::filled(d, 0);
    for (int i = 0; i < d; ++i) x[i] = lo[i];
    for (;;) {
      fn(static_cast<const Coord&>(x));
      int i = d - 1;
      for (; i >= 0; --i) {
        if (++x[i] <= hi[i]) break;
        x[i] = lo[i];
      }
      if (i < 0) return;
    }
  }

  template <class F>
  void for_each_interior_cell(F&& fn) const {
    for (int i = 0; i < d; ++i)
      if (ilo[i] > ihi[i]) return;  // degenerate: no interior cells
    Coord x = Coord::filled(d, 0);
    for (int i = 0; i < d; ++i) x[i] = ilo[i];
    for (;;) {
      fn(static_cast<const Coord&>(x));
      int i = d - 1;
      for (; i >= 0; --i) {
        if (++x[i] <= ihi[i]) break;
        x[i] = ilo[i];
      }
      if (i < 0) return;
    }
  }

  // Disjoint cover of the boundary: cells whose first off-interior axis is
  // j run over (interior axes < j) x (off-interior axis j) x (closure > j).
  // This enumerates the boundary in O(|boundary|), never O(|closure|).
  template <class F>
  void for_each_boundary_cell(F&& fn) const {
    for (int j = 0; j < d; ++j) {
      // slots whose prefix axes walk an empty interior contribute nothing
      bool prefix_empty = false;
      for (int i = 0; i < j; ++i)
        if (ilo[i] > ihi[i]) prefix_empty = true;
      if (prefix_empty) continue;
      Coord x = Coord::filled(d, 0);
      // axis j walks the off-interior cells of [lo_j, hi_j]
      for (int32_t xj = lo[j]; xj <= hi[j]; ++xj) {
        if (xj >= ilo[j] && xj <= ihi[j]) continue;
        x[j] = xj;
        // axes < j walk interior, axes > j walk closure
        for (int i = 0; i < j; ++i) x[i] = ilo[i];
        for (int i = j + 1; i < d; ++i) x[i] = lo[i];
        for (;;) {
          fn(static_cast<const Coord&>(x));
          int i = d - 1;
          for (; i >= 0; --i) {
            if (i == j) continue;
            int32_t limit = i < j ? ihi[i] : hi[i];
            int32_t base = i < j ? ilo[i] : lo[i];
            if (++x[i] <= limit) break;
            x[i] = base;
          }
          if (i < 0) break;
        }
      }
    }
  }
};

// The (n, d, k, w)-grid induced by an interval partition: a cell belongs to
// the grid iff some coordinate lies among the first k-1 elements of its
// interval. Blocks are the Cartesian products of interval tails I[k:].
class Grid {
 public:
  Grid(int d, int32_t k, IntervalPartition part)
      : d_(d), k_(k), part_(std::move(part)) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Grid: bad dimension");
    if (k < 2) throw std::invalid_argument("Grid: k must be >= 2");
    if (part_.min_len() < k)
      throw std::invalid_argument("Grid: partition has an interval shorter than k");
  }

  int32_t n() const { return part_.n(); }
  int dim() const { return d_; }
  int32_t k() const { return k_; }
  int32_t width() const { return part_.min_len(); }  // nominal w of the partition
  const IntervalPartition& partition() const { return part_; }

  bool contains(const Coord& x) const {
    for (int i = 0; i < d_; ++i) {
      const Interval& iv = part_.interval(part_.interval_of(x[i]));
      if (x[i] - iv.start < k_ - 1) return true;
    }
    return false;
  }

  int64_t cell_count() const {  // |G|, by inclusion of the complement
    int64_t non_grid_axis = 0;
    for (const Interval& iv : part_.intervals()) non_grid_axis += iv.len - (k_ - 1);
    int64_t complement = 1;
    for (int i = 0; i < d_; ++i) complement *= non_grid_axis;
    int64_t total = 1;
    for (int i = 0; i < d_; ++i) total *= part_.n();
    return total - complement;
  }

  int64_t block_count() const {
    int64_t t = part_.count();
    int64_t c = 1;
    for (int i = 0; i < d_; ++i) c *= t;
    return c;
  }

  Block block_at(int64_t ordinal) const {
    if (ordinal < 0 || ordinal >= block_count())
      throw std::out_of_range("Grid: block ordinal out of range");
    Block b;
    b.d = d_;
    int64_t t = part_.count();
    for (int i = d_ - 1; i >= 0; --i) {
      b.iv[i] = static_cast<int32_t>(ordinal % t);
      ordinal /= t;
    }
    return b;
  }

  std::vector<Block> blocks() const {
    std::vector<Block> out;
    out.reserve(static_cast<size_t>(block_count()));
    for (int64_t o = 0; o < block_count(); ++o) out.push_back(block_at(o));
    return out;
  }

  // block = prod I[k:], closure = prod (I u next[:k-1]); boundary follows.
  BoxSpec geometry(const Block& b) const {
    BoxSpec box;
    box.d = d_;
    for (int i = 0; i < d_; ++i) {
      const Interval& iv = part_.interval(b.iv[i]);
      box.ilo[i] = iv.start + k_ - 1;
      box.ihi[i] = iv.end();
      box.lo[i] = iv.start;
      bool has_next = b.iv[i] + 1 < part_.count();
      box.hi[i] = has_next ? part_.interval(b.iv[i] + 1).start + k_ - 2 : iv.end();
    }
    return box;
  }

  // The unique block whose closure contains the width-k window at loc.
  Block locate_window(const Coord& loc) const {
    if (loc.dim() != d_) throw std::invalid_argument("locate_window: dimension mismatch");
    for (int i = 0; i < d_; ++i)
      if (loc[i] < 1 || loc[i] > part_.n() - k_ + 1)
        throw std::out_of_range("locate_window: location out of range");
    Block b;
    b.d = d_;
    for (int i = 0; i < d_; ++i) b.iv[i] = part_.interval_of(loc[i]);
    return b;
  }

 private:
  int d_;
  int32_t k_;
  IntervalPartition part_;
};

inline int dyadic_levels(int32_t n) {  // floor(log2 n)
  int l = 0;
  while ((int64_t{1} << (l + 1)) <= n) ++l;
  return l;
}

// Picks a dyadic width w' = floor(n/2^i) in [w_request/2, w_request] (the
// largest such, matching the choice used by the simple test), or failing
// that the smallest dyadic width >= k.
inline Grid build_grid(int32_t n, int d, int32_t k, int32_t w_request) {
  if (k < 2 || w_request < k || w_request > n)
    throw std::invalid_argument("build_grid: need 2 <= k <= w <= n");
  int best_level = -1;
  int32_t best_w = 0;
  int fallback_level = -1;  // smallest dyadic width still >= k
  for (int i = 0; i <= dyadic_levels(n); ++i) {
    int32_t w = static_cast<int32_t>(n >> i);
    if (w < k) break;
    if (2 * w >= w_request && w <= w_request && w > best_w) {
      best_w = w;
      best_level = i;
    }
    fallback_level = i;
  }
  int level = best_level >= 0 ? best_level : fallback_level;
  if (level < 0) throw std::invalid_argument("build_grid: no dyadic width >= k exists");
  return Grid(d, k, IntervalPartition::dyadic(n, level));
}

// An (n, d, k, w)-system of grids G_0 superset ... superset G_r with G_i of
// width floor(n/2^(r-i)), all induced by the nested dyadic partitions.
class GridSystem {
 public:
  static GridSystem build(int32_t n, int d, int32_t k, int32_t w) {
    if (k < 2 || w < k || w > n)
      throw std::invalid_argument("GridSystem: need 2 <= k <= w <= n");
    int r = 0;
    while ((int64_t{1} << (r + 1)) <= n / w) ++r;  // r = floor(log2(n/w))
    GridSystem sys;
    sys.levels_.reserve(r + 1);
    for (int i = 0; i <= r; ++i)
      sys.levels_.emplace_back(d, k, IntervalPartition::dyadic(n, r - i));
    return sys;
  }

  int top_level() const { return static_cast<int>(levels_.size()) - 1; }
  const Grid& level(int i) const { return levels_.at(i); }

  // Parent of a G_i-block: the unique containing G_(i+1)-block, or nullopt
  // for the top block (whose parent is the whole domain).
  std::optional<Block> parent(int level, const Block& b) const {
    if (level < 0 || level > top_level()) throw std::out_of_range("GridSystem: bad level");
    if (level == top_level()) return std::nullopt;
    Block p;
    p.d = b.d;
    for (int i = 0; i < b.d; ++i) p.iv[i] = b.iv[i] / 2;
    return p;
  }

 private:
  std::vector<Grid> levels_;
};

}  // namespace localtest
