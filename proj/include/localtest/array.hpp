#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "localtest/coord.hpp"
#include "localtest/rng.hpp"

namespace localtest {

// A d-dimensional array [n]^d -> T, row-major with the first axis slowest,
// so slices along the last axis are contiguous. Immutable by convention
// once built (testers and oracles only ever read it).
template <class T>
class Array {
 public:
  Array(int32_t n, int d, T init = T{})
      : n_(n), d_(d), data_(checked_size(n, d), init) {}

  static Array from_data(int32_t n, int d, std::vector<T> data) {
    Array a(n, d);
    if (data.size() != a.data_.size())
      throw std::invalid_argument("Array: data length != n^d");
    a.data_ = std::move(data);
    return a;
  }

  int32_t width() const { return n_; }
  int dim() const { return d_; }
  size_t size() const { return data_.size(); }

  size_t index(const Coord& x) const {
    check_coord(x);
    size_t idx = 0;
    for (int i = 0; i < d_; ++i) idx = idx * n_ + static_cast<size_t>(x[i] - 1);
    return idx;
  }

  Coord coord(size_t idx) const {
    Coord x = Coord::filled(d_, 1);
    for (int i = d_ - 1; i >= 0; --i) {
      x[i] = static_cast<int32_t>(idx % n_) + 1;
      idx /= n_;
    }
    return x;
  }

  const T& at(const Coord& x) const { return data_[index(x)]; }
  T& at(const Coord& x) { return data_[index(x)]; }
  const T& at_index(size_t i) const { return data_[i]; }
  T& at_index(size_t i) { return data_[i]; }

  const std::vector<T>& data() const { return data_; }

  bool same_shape(const Array& o) const { return n_ == o.n_ && d_ == o.d_; }
  bool operator==(const Array& o) const { return n_ == o.n_ && d_ == o.d_ && data_ == o.data_; }

 private:
  static size_t checked_size(int32_t n, int d) {
    if (n < 1) throw std::invalid_argument("Array: n must be >= 1");
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Array: bad dimension");
    size_t s = 1;
    for (int i = 0; i < d; ++i) {
      if (s > (static_cast<size_t>(1) << 56) / static_cast<size_t>(n))
        throw std::invalid_argument("Array: n^d too large");
      s *= static_cast<size_t>(n);
    }
    return s;
  }

  void check_coord(const Coord& x) const {
    if (x.dim() != d_) throw std::out_of_range("Array: coordinate dimension mismatch");
    for (int i = 0; i < d_; ++i)
      if (x[i] < 1 || x[i] > n_) throw std::out_of_range("Array: coordinate out of range");
  }

  int32_t n_;
  int d_;
  std::vector<T> data_;
};

// A [k]^d window of values anchored at `loc` in the host array.
template <class T>
struct Window {
  Coord loc;
  int32_t k = 0;
  int d = 0;
  std::vector<T> values;  // row-major over [k]^d

  size_t offset_index(const Coord& j) const {  // j in [k]^d, 1-based
    size_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * k + static_cast<size_t>(j[i] - 1);
    return idx;
  }
  const T& at(const Coord& j) const { return values[offset_index(j)]; }
  Coord offset_coord(size_t idx) const {
    Coord j = Coord::filled(d, 1);
    for (int i = d - 1; i >= 0; --i) {
      j[i] = static_cast<int32_t>(idx % k) + 1;
      idx /= k;
    }
    return j;
  }
};

template <class T>
Window<T> subarray(const Array<T>& a, const Coord& loc, int32_t k) {
  if (loc.dim() != a.dim()) throw std::out_of_range("subarray: dimension mismatch");
  if (k < 1 || k > a.width()) throw std::out_of_range("subarray: bad width");
  for (int i = 0; i < a.dim(); ++i)
    if (loc[i] < 1 || loc[i] > a.width() - k + 1)
      throw std::out_of_range("subarray: location out of range");
  Window<T> w;
  w.loc = loc;
  w.k = k;
  w.d = a.dim();
  size_t cells = 1;
  for (int i = 0; i < w.d; ++i) cells *= static_cast<size_t>(k);
  w.values.reserve(cells);
  Coord j = Coord::filled(w.d, 1);
  for (size_t c = 0; c < cells; ++c) {
    Coord x = loc;
    for (int i = 0; i < w.d; ++i) x[i] += j[i] - 1;
    w.values.push_back(a.at(x));
    for (int i = w.d - 1; i >= 0; --i) {
      if (++j[i] <= k) break;
      j[i] = 1;
    }
  }
  return w;
}

template <class T>
int64_t hamming_distance(const Array<T>& a, const Array<T>& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("hamming_distance: shape mismatch");
  int64_t count = 0;
  for (size_t i = 0; i < a.size(); ++i)
    if (!(a.at_index(i) == b.at_index(i))) ++count;
  return count;
}

// Per-run record of oracle accesses. raw_count counts every read;
// distinct holds the deduplicated cell set (as linear indices).
struct QueryLog {
  uint64_t raw_count = 0;
  std::unordered_set<uint64_t> distinct;

  uint64_t distinct_count() const { return distinct.size(); }
};

template <class T>
const T& queried_read(const Array<T>& a, const Coord& loc, QueryLog& log) {
  size_t idx = a.index(loc);  // range-checks
  ++log.raw_count;
  log.distinct.insert(static_cast<uint64_t>(idx));
  return a.at_index(idx);
}

// Value-caching oracle wrapper used by the testers: all queries flow
// through read(), and later inference may only look at queried cells.
template <class T>
class QueriedArray {
 public:
  explicit QueriedArray(const Array<T>& a) : a_(a) {}

  const Array<T>& host() const { return a_; }
  int32_t width() const { return a_.width(); }
  int dim() const { return a_.dim(); }

  const T& read(const Coord& x) {
    size_t idx = a_.index(x);
    ++log_.raw_count;
    log_.distinct.insert(idx);
    auto [it, unused] = cache_.try_emplace(idx, a_.at_index(idx));
    (void)unused;
    return it->second;
  }

  const T& value(const Coord& x) const {
    auto it = cache_.find(a_.index(x));
    if (it == cache_.end())
      throw std::logic_error("QueriedArray: inference touched an unqueried cell");
    return it->second;
  }

  bool has(const Coord& x) const { return cache_.count(a_.index(x)) != 0; }

  const QueryLog& log() const { return log_; }

 private:
  const Array<T>& a_;
  QueryLog log_;
  std::unordered_map<uint64_t, T> cache_;
};

// Returns a copy of `a` with exactly `count` cells (uniform, without
// replacement) rewritten by `rule`; the rule must return a different value.
template <class T, class Rule>
Array<T> plant_violations(const Array<T>& a, int64_t count, Rule&& rule, Rng& rng) {
  if (count < 0 || static_cast<size_t>(count) > a.size())
    throw std::invalid_argument("plant_violations: count out of range");
  Array<T> out = a;
  auto cells = rng.sample_distinct(a.size(), static_cast<uint64_t>(count));
  for (uint64_t idx : cells) {
    const T& old = a.at_index(idx);
    T fresh = rule(old, rng);
    if (fresh == old)
      throw std::invalid_argument("plant_violations: replacement rule returned the old value");
    out.at_index(idx) = fresh;
  }
  return out;
}

}  // namespace localtest
