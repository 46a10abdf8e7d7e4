#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "localtest/grid.hpp"

using namespace localtest;

namespace {

std::vector<std::pair<int32_t, int32_t>> spans(const IntervalPartition& p) {
  std::vector<std::pair<int32_t, int32_t>> out;
  for (const Interval& iv : p.intervals()) out.emplace_back(iv.start, iv.end());
  return out;
}

std::set<std::vector<int32_t>> cell_set(const BoxSpec& box, bool boundary) {
  std::set<std::vector<int32_t>> out;
  auto insert = [&](const Coord& c) {
    std::vector<int32_t> v(box.d);
    for (int i = 0; i < box.d; ++i) v[i] = c[i];
    out.insert(v);
  };
  if (boundary)
    box.for_each_boundary_cell(insert);
  else
    box.for_each_closure_cell(insert);
  return out;
}

}  // namespace

TEST_CASE("dyadic interval partitions") {
  CHECK(spans(IntervalPartition::dyadic(7, 0)) ==
        std::vector<std::pair<int32_t, int32_t>>{{1, 7}});
  CHECK(spans(IntervalPartition::dyadic(10, 1)) ==
        std::vector<std::pair<int32_t, int32_t>>{{1, 5}, {6, 10}});
  CHECK(spans(IntervalPartition::dyadic(10, 2)) ==
        std::vector<std::pair<int32_t, int32_t>>{{1, 3}, {4, 5}, {6, 8}, {9, 10}});
  CHECK_THROWS_AS(IntervalPartition::dyadic(4, 3), std::invalid_argument);
}

TEST_CASE("partition lengths and nesting, exhaustively") {
  for (int32_t n = 1; n <= 64; ++n) {
    for (int level = 0; (int64_t{1} << level) <= n; ++level) {
      auto p = IntervalPartition::dyadic(n, level);
      REQUIRE(p.count() == (1 << level));
      int32_t w = n >> level;
      int32_t covered = 0;
      for (const Interval& iv : p.intervals()) {
        REQUIRE((iv.len == w || iv.len == w + 1));
        REQUIRE(iv.start == covered + 1);
        covered += iv.len;
      }
      REQUIRE(covered == n);
      if (level > 0) {
        auto coarse = IntervalPartition::dyadic(n, level - 1);
        for (int j = 0; j < p.count(); ++j) {
          const Interval& fine = p.interval(j);
          const Interval& parent = coarse.interval(j / 2);
          REQUIRE(fine.start >= parent.start);
          REQUIRE(fine.end() <= parent.end());
        }
      }
    }
  }
}

TEST_CASE("grid membership for the 8-cell example") {
  Grid g1 = build_grid(8, 1, 2, 4);
  CHECK(g1.width() == 4);
  std::vector<int32_t> cells;
  for (int32_t x = 1; x <= 8; ++x)
    if (g1.contains(Coord{x})) cells.push_back(x);
  CHECK(cells == std::vector<int32_t>{1, 5});

  Grid g2 = build_grid(8, 2, 2, 4);
  for (int32_t x = 1; x <= 8; ++x)
    for (int32_t y = 1; y <= 8; ++y) {
      bool expect = x == 1 || x == 5 || y == 1 || y == 5;
      CHECK(g2.contains(Coord{x, y}) == expect);
    }

  Grid g3 = build_grid(8, 1, 2, 8);
  CHECK(g3.partition().count() == 1);
  std::vector<int32_t> cells3;
  for (int32_t x = 1; x <= 8; ++x)
    if (g3.contains(Coord{x})) cells3.push_back(x);
  CHECK(cells3 == std::vector<int32_t>{1});
}

TEST_CASE("blocks, closure, boundary for small grids") {
  Grid g = build_grid(8, 1, 2, 4);
  auto blocks = g.blocks();
  REQUIRE(blocks.size() == 2);

  BoxSpec b0 = g.geometry(blocks[0]);
  CHECK(cell_set(b0, false) == std::set<std::vector<int32_t>>{{1}, {2}, {3}, {4}, {5}});
  CHECK(cell_set(b0, true) == std::set<std::vector<int32_t>>{{1}, {5}});
  CHECK(b0.interior_size() == 3);

  BoxSpec b1 = g.geometry(blocks[1]);
  CHECK(cell_set(b1, false) == std::set<std::vector<int32_t>>{{5}, {6}, {7}, {8}});
  CHECK(cell_set(b1, true) == std::set<std::vector<int32_t>>{{5}});

  Grid single = build_grid(8, 1, 8, 8);
  auto sb = single.blocks();
  REQUIRE(sb.size() == 1);
  BoxSpec sbox = single.geometry(sb[0]);
  CHECK(sbox.ilo[0] == 8);
  CHECK(sbox.ihi[0] == 8);

  Grid g2 = build_grid(8, 2, 2, 4);
  REQUIRE(g2.block_count() == 4);
  BoxSpec q = g2.geometry(g2.block_at(0));
  CHECK(q.ilo[0] == 2);
  CHECK(q.ihi[0] == 4);
  CHECK(q.ilo[1] == 2);
  CHECK(q.ihi[1] == 4);
}

TEST_CASE("boundary enumeration matches closure minus interior") {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 1 + static_cast<int>(rng.below(3));
    int32_t n = static_cast<int32_t>(6 + rng.below(18));
    int32_t k = static_cast<int32_t>(2 + rng.below(2));
    if (n < 2 * k) continue;
    int32_t w_req = std::min<int32_t>(n, std::max<int32_t>(k, static_cast<int32_t>(rng.below(n)) + k));
    Grid g = build_grid(n, d, k, w_req);
    Block b = g.block_at(static_cast<int64_t>(rng.below(g.block_count())));
    BoxSpec box = g.geometry(b);

    auto closure = cell_set(box, false);
    auto boundary = cell_set(box, true);
    std::set<std::vector<int32_t>> expect;
    for (const auto& c : closure) {
      Coord x = Coord::filled(d, 1);
      for (int i = 0; i < d; ++i) x[i] = c[i];
      if (!box.in_interior(x)) expect.insert(c);
    }
    REQUIRE(boundary == expect);
    REQUIRE(static_cast<int64_t>(boundary.size()) == box.boundary_size());
  }
}

TEST_CASE("block size bounds hold exhaustively") {
  for (int d = 1; d <= 3; ++d) {
    for (int32_t n = 4; n <= 32; n += (d == 3 ? 4 : 1)) {
      for (int32_t k = 2; k <= 3; ++k) {
        for (int32_t w = k; w <= n; w *= 2) {
          Grid g = build_grid(n, d, k, w);
          int32_t gw = g.width();
          for (int64_t o = 0; o < g.block_count(); ++o) {
            BoxSpec box = g.geometry(g.block_at(o));
            CHECK(box.interior_size() <= static_cast<int64_t>(std::pow(gw + 2 - k, d)));
            CHECK(box.closure_size() <= static_cast<int64_t>(std::pow(gw + k, d)));
            CHECK(box.boundary_size() <=
                  2 * d * (k - 1) * static_cast<int64_t>(std::pow(gw + k, d - 1)));
          }
        }
      }
    }
  }
}

TEST_CASE("every window lands in exactly one block, inside its closure") {
  for (int d = 1; d <= 2; ++d) {
    for (int32_t n = 4; n <= 12; ++n) {
      for (int32_t k = 2; k <= 3; ++k) {
        if (n < k) continue;
        for (int32_t w = k; w <= n; w *= 2) {
          Grid g = build_grid(n, d, k, w);
          const int32_t limit = n - k + 1;
          Coord loc = Coord::filled(d, 1);
          for (;;) {
            Block b = g.locate_window(loc);
            BoxSpec box = g.geometry(b);
            // window inside closure
            for (int i = 0; i < d; ++i) {
              REQUIRE(loc[i] >= box.lo[i]);
              REQUIRE(loc[i] + k - 1 <= box.hi[i]);
            }
            // intersects its own block and no other: check via interval
            // membership against every block
            int hits = 0;
            for (int64_t o = 0; o < g.block_count(); ++o) {
              BoxSpec other = g.geometry(g.block_at(o));
              bool intersects = true;
              for (int i = 0; i < d; ++i)
                if (loc[i] + k - 1 < other.ilo[i] || loc[i] > other.ihi[i]) intersects = false;
              hits += intersects ? 1 : 0;
            }
            REQUIRE(hits == 1);
            int i = d - 1;
            for (; i >= 0; --i) {
              if (++loc[i] <= limit) break;
              loc[i] = 1;
            }
            if (i < 0) break;
          }
        }
      }
    }
  }
}

TEST_CASE("grid systems: widths, nesting, parents") {
  GridSystem sys = GridSystem::build(32, 1, 2, 4);
  REQUIRE(sys.top_level() == 3);
  CHECK(sys.level(0).width() == 4);
  CHECK(sys.level(1).width() == 8);
  CHECK(sys.level(2).width() == 16);
  CHECK(sys.level(3).width() == 32);

  // parent of the first width-4 block is the first width-8 block
  Block b0 = sys.level(0).block_at(0);
  auto par = sys.parent(0, b0);
  REQUIRE(par.has_value());
  BoxSpec child = sys.level(0).geometry(b0);
  BoxSpec parent_box = sys.level(1).geometry(*par);
  CHECK(parent_box.ilo[0] <= child.ilo[0]);
  CHECK(parent_box.ihi[0] >= child.ihi[0]);

  // top block's parent is the whole domain
  CHECK_FALSE(sys.parent(3, sys.level(3).block_at(0)).has_value());
}

TEST_CASE("grid containment across system levels") {
  GridSystem sys = GridSystem::build(24, 2, 2, 4);
  for (int32_t x = 1; x <= 24; ++x)
    for (int32_t y = 1; y <= 24; ++y) {
      Coord c{x, y};
      for (int i = 0; i + 1 <= sys.top_level(); ++i)
        if (sys.level(i + 1).contains(c)) REQUIRE(sys.level(i).contains(c));
    }
}

TEST_CASE("parent-to-block size ratio stays below 3^d") {
  for (int d = 1; d <= 2; ++d) {
    for (int32_t k = 2; k <= 3; ++k) {
      for (int32_t n = 4 * k; n <= 64; ++n) {
        GridSystem sys = GridSystem::build(n, d, k, 2 * k);
        for (int level = 0; level <= sys.top_level(); ++level) {
          const Grid& g = sys.level(level);
          for (int64_t o = 0; o < g.block_count(); ++o) {
            Block b = g.block_at(o);
            auto par = sys.parent(level, b);
            int64_t child = g.geometry(b).interior_size();
            int64_t parent = par ? sys.level(level + 1).geometry(*par).interior_size()
                                 : static_cast<int64_t>(std::pow(n, d));
            REQUIRE(parent < child * static_cast<int64_t>(std::pow(3, d)));
          }
        }
      }
    }
  }
}

TEST_CASE("block boundaries are contained in the grid") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    int d = 1 + static_cast<int>(rng.below(2));
    int32_t n = static_cast<int32_t>(8 + rng.below(24));
    int32_t k = static_cast<int32_t>(2 + rng.below(2));
    Grid g = build_grid(n, d, k, 2 * k);
    for (int64_t o = 0; o < g.block_count(); ++o) {
      BoxSpec box = g.geometry(g.block_at(o));
      box.for_each_boundary_cell([&](const Coord& c) { REQUIRE(g.contains(c)); });
    }
  }
}

TEST_CASE("locate_window examples") {
  Grid g = build_grid(8, 1, 2, 4);
  auto block_of = [&](int32_t loc) { return g.geometry(g.locate_window(Coord{loc})); };
  CHECK(block_of(4).ilo[0] == 2);  // window {4,5} -> block {2,3,4}
  CHECK(block_of(4).ihi[0] == 4);
  CHECK(block_of(1).ilo[0] == 2);
  CHECK(block_of(7).ilo[0] == 6);  // block {6,7,8}
}
