#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <stdexcept>

namespace localtest {

// Dimensions are small by design; 4 leaves headroom over the d <= 3 scale
// the library is exercised at.
inline constexpr int kMaxDim = 4;

// A point of the hypergrid [n]^d. Coordinate values are 1-based, matching
// the usual [n] = {1,...,n} convention; axis indices are 0-based.
class Coord {
 public:
  Coord() = default;

  Coord(std::initializer_list<int32_t> xs) {
    if (xs.size() == 0 || xs.size() > static_cast<size_t>(kMaxDim))
      throw std::invalid_argument("Coord: bad dimension");
    d_ = static_cast<int8_t>(xs.size());
    int i = 0;
    for (int32_t x : xs) c_[i++] = x;
  }

  static Coord filled(int d, int32_t value) {
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("Coord: bad dimension");
    Coord r;
    r.d_ = static_cast<int8_t>(d);
    for (int i = 0; i < d; ++i) r.c_[i] = value;
    return r;
  }

  int dim() const { return d_; }

  int32_t operator[](int axis) const { return c_[axis]; }
  int32_t& operator[](int axis) { return c_[axis]; }

  bool operator==(const Coord& o) const {
    if (d_ != o.d_) return false;
    for (int i = 0; i < d_; ++i)
      if (c_[i] != o.c_[i]) return false;
    return true;
  }
  bool operator!=(const Coord& o) const { return !(*this == o); }

  // Lexicographic; used for "first forbidden window" ordering.
  bool operator<(const Coord& o) const {
    for (int i = 0; i < d_ && i < o.d_; ++i) {
      if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
    }
    return d_ < o.d_;
  }

  // Componentwise partial order (the monotonicity order).
  bool dominated_by(const Coord& o) const {
    for (int i = 0; i < d_; ++i)
      if (c_[i] > o.c_[i]) return false;
    return true;
  }

  Coord shifted(int axis, int32_t delta) const {
    Coord r = *this;
    r.c_[axis] += delta;
    return r;
  }

  Coord plus(const Coord& o) const {
    Coord r = *this;
    for (int i = 0; i < d_; ++i) r.c_[i] += o.c_[i];
    return r;
  }

  Coord minus(const Coord& o) const {
    Coord r = *this;
    for (int i = 0; i < d_; ++i) r.c_[i] -= o.c_[i];
    return r;
  }

  bool in_box(int32_t lo, int32_t hi) const {
    for (int i = 0; i < d_; ++i)
      if (c_[i] < lo || c_[i] > hi) return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const Coord& c) {
    os << '(';
    for (int i = 0; i < c.d_; ++i) {
      if (i) os << ',';
      os << c.c_[i];
    }
    return os << ')';
  }

 private:
  std::array<int32_t, kMaxDim> c_{};
  int8_t d_ = 0;
};

}  // namespace localtest
