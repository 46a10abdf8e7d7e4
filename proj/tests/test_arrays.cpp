#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "helpers.hpp"
#include "localtest/array.hpp"
#include "localtest/io.hpp"

using namespace localtest;

TEST_CASE("subarray matches direct indexing") {
  auto a = Array<int64_t>::from_data(3, 1, {1, 2, 3});
  CHECK(subarray(a, Coord{1}, 2).values == std::vector<int64_t>{1, 2});
  CHECK(subarray(a, Coord{2}, 2).values == std::vector<int64_t>{2, 3});

  auto b = Array<int64_t>::from_data(2, 2, {1, 2, 3, 4});
  CHECK(subarray(b, Coord{1, 1}, 2).values == std::vector<int64_t>{1, 2, 3, 4});

  CHECK_THROWS_AS(subarray(a, Coord{3}, 2), std::out_of_range);
}

TEST_CASE("subarray agrees with A(loc + j - 1) exhaustively") {
  Rng rng(101);
  for (int d = 1; d <= 3; ++d) {
    for (int32_t n = 1; n <= 6; ++n) {
      Array<int64_t> a(n, d);
      for (size_t i = 0; i < a.size(); ++i) a.at_index(i) = static_cast<int64_t>(rng.below(100));
      for (int32_t k = 1; k <= n; ++k) {
        const int32_t limit = n - k + 1;
        Coord loc = Coord::filled(d, 1);
        for (;;) {
          Window<int64_t> w = subarray(a, loc, k);
          for (size_t c = 0; c < w.values.size(); ++c) {
            Coord j = w.offset_coord(c);
            Coord x = loc;
            for (int i = 0; i < d; ++i) x[i] += j[i] - 1;
            REQUIRE(w.values[c] == a.at(x));
          }
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

TEST_CASE("hamming distance basics") {
  auto a = Array<int64_t>::from_data(3, 1, {1, 2, 3});
  auto b = Array<int64_t>::from_data(3, 1, {1, 9, 3});
  auto c = Array<int64_t>::from_data(3, 1, {3, 2, 1});
  CHECK(hamming_distance(a, a) == 0);
  CHECK(hamming_distance(a, b) == 1);
  CHECK(hamming_distance(c, a) == 2);
  auto d2 = Array<int64_t>::from_data(2, 2, {1, 2, 3, 4});
  CHECK_THROWS_AS(hamming_distance(a, d2), std::invalid_argument);
}

TEST_CASE("hamming distance is a metric on random triples") {
  Rng rng(7);
  std::vector<int64_t> alpha{0, 1, 2};
  for (int trial = 0; trial < 300; ++trial) {
    auto a = testutil::random_array(5, 2, alpha, rng);
    auto b = testutil::random_array(5, 2, alpha, rng);
    auto c = testutil::random_array(5, 2, alpha, rng);
    CHECK(hamming_distance(a, b) == hamming_distance(b, a));
    CHECK(hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c));
    CHECK((hamming_distance(a, b) == 0) == (a == b));
  }
}

TEST_CASE("query log dedupes distinct cells") {
  auto a = Array<int64_t>::from_data(4, 1, {5, 6, 7, 8});
  QueryLog log;
  CHECK(log.raw_count == 0);
  CHECK(log.distinct_count() == 0);

  queried_read(a, Coord{2}, log);
  queried_read(a, Coord{2}, log);
  CHECK(log.raw_count == 2);
  CHECK(log.distinct_count() == 1);

  queried_read(a, Coord{1}, log);
  queried_read(a, Coord{3}, log);
  queried_read(a, Coord{4}, log);
  CHECK(log.distinct_count() == 4);
  CHECK(a.at(Coord{2}) == 6);  // reads never mutate
}

TEST_CASE("plant_violations hits the exact count") {
  Rng rng(11);
  Array<int64_t> a(8, 1);
  for (int32_t i = 0; i < 8; ++i) a.at_index(i) = i + 1;
  auto bump = [](const int64_t& old, Rng&) { return old + 100; };

  CHECK(hamming_distance(a, plant_violations(a, 0, bump, rng)) == 0);
  CHECK(hamming_distance(a, plant_violations(a, 8, bump, rng)) == 8);
  CHECK(hamming_distance(a, plant_violations(a, 2, bump, rng)) == 2);
  CHECK_THROWS_AS(plant_violations(a, 9, bump, rng), std::invalid_argument);

  auto stuck = [](const int64_t& old, Rng&) { return old; };
  CHECK_THROWS_AS(plant_violations(a, 1, stuck, rng), std::invalid_argument);
}

TEST_CASE("binary and json array round trips") {
  Rng rng(13);
  std::vector<int64_t> alpha{-3, 0, 7, 120};
  auto a = testutil::random_array(5, 2, alpha, rng);

  std::stringstream bin;
  write_array_binary(bin, a, 4);
  CHECK(read_array_binary(bin) == a);

  std::stringstream js;
  write_array_json(js, a);
  CHECK(read_array_json(js).values == a);
}

TEST_CASE("token alphabets round trip through json") {
  AlphabetSpec alpha;
  alpha.kind = AlphabetSpec::Kind::kTokens;
  alpha.tokens = {"low", "mid", "high"};
  auto a = Array<int64_t>::from_data(4, 1, {0, 2, 1, 2});

  std::stringstream js;
  write_array_json(js, a, alpha);
  CHECK(js.str().find("\"high\"") != std::string::npos);
  auto loaded = read_array_json(js);
  CHECK(loaded.values == a);
  CHECK(loaded.alphabet.tokens == alpha.tokens);

  // token data in an int-alphabet array is rejected
  std::stringstream bad;
  bad << R"({"n":2,"d":1,"alphabet":{"kind":"int"},"data":["low",1]})";
  CHECK_THROWS_AS(read_array_json(bad), io_error);
}
