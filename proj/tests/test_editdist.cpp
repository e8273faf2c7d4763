#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cpcer/editdist.hpp"

using namespace cpcer;

namespace {

TokenSeq random_seq(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<int> script(0, 1);
  std::uniform_int_distribution<char32_t> ascii(0x20, 0x7E);
  std::uniform_int_distribution<char32_t> cjk(0x4E00, 0x4E9F);
  TokenSeq s(len_dist(rng), U' ');
  for (auto& t : s) t = script(rng) ? ascii(rng) : cjk(rng);
  return s;
}

}  // namespace

TEST_CASE("dp distance matches hand-checked values", "[editdist]") {
  CHECK(edit_distance_dp(U"", U"").distance == 0);
  CHECK(edit_distance_dp(U"", U"abc").distance == 3);
  CHECK(edit_distance_dp(U"abc", U"").distance == 3);
  CHECK(edit_distance_dp(U"kitten", U"sitting").distance == 3);
  CHECK(edit_distance_dp(U"abcd", U"abxd").distance == 1);
  CHECK(edit_distance_dp(U"abcd", U"q").distance == 4);
  CHECK(edit_distance_dp(U"你好世界", U"你好世界").distance == 0);
  CHECK(edit_distance_dp(U"你好世界", U"你坏世界").distance == 1);
}

TEST_CASE("dp identity is zero for arbitrary sequences", "[editdist]") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const TokenSeq x = random_seq(rng, 64);
    const auto r = edit_distance_dp(x, x);
    CHECK(r.distance == 0);
    CHECK(r.ref_length == x.size());
    CHECK(r.hyp_length == x.size());
  }
}

TEST_CASE("fast path reproduces frozen examples", "[editdist]") {
  CHECK(edit_distance_fast(U"abcd", U"abxd").distance == 1);
  CHECK(edit_distance_fast(U"", U"abc").distance == 3);
  CHECK(edit_distance_fast(U"kitten", U"sitting").distance == 3);
  CHECK(edit_distance_fast(U"你好", U"你好").distance == 0);
}

TEST_CASE("fast path equals dp oracle on random pairs", "[editdist]") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 2000; ++t) {
    const TokenSeq a = random_seq(rng, 160);
    const TokenSeq b = random_seq(rng, 160);
    REQUIRE(edit_distance_fast(a, b).distance == edit_distance_dp(a, b).distance);
  }
}

TEST_CASE("fast path equals dp oracle across word-boundary lengths", "[editdist]") {
  // The bit-parallel kernel works in 64-row stripes; lengths straddling the
  // stripe boundary are the risky ones.
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<char32_t> alpha(U'a', U'f');  // dense matches
  for (std::size_t la : {1, 63, 64, 65, 127, 128, 129, 200}) {
    for (std::size_t lb : {0, 1, 63, 64, 65, 128, 300}) {
      TokenSeq a(la, U'a');
      TokenSeq b(lb, U'a');
      for (auto& t : a) t = alpha(rng);
      for (auto& t : b) t = alpha(rng);
      REQUIRE(edit_distance_fast(a, b).distance == edit_distance_dp(a, b).distance);
    }
  }
}

TEST_CASE("fast path equals dp on two random 20k-token sequences", "[editdist][slow]") {
  std::mt19937_64 rng(20230101);
  std::uniform_int_distribution<char32_t> cjk(0x4E00, 0x51FF);
  TokenSeq a(20000, U'x');
  TokenSeq b(20000, U'x');
  for (auto& t : a) t = cjk(rng);
  for (auto& t : b) t = cjk(rng);
  REQUIRE(edit_distance_fast(a, b).distance == edit_distance_dp(a, b).distance);
}

TEST_CASE("distance satisfies metric axioms", "[editdist]") {
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 300; ++t) {
    const TokenSeq a = random_seq(rng, 48);
    const TokenSeq b = random_seq(rng, 48);
    const TokenSeq c = random_seq(rng, 48);
    const auto d = [](const TokenSeq& x, const TokenSeq& y) {
      return edit_distance_fast(x, y).distance;
    };
    const std::uint64_t dab = d(a, b);
    CHECK((dab == 0) == (a == b));
    CHECK(dab == d(b, a));
    CHECK(d(a, c) <= dab + d(b, c));
    const std::uint64_t lo =
        a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    CHECK(dab >= lo);
    CHECK(dab <= std::max(a.size(), b.size()));
  }
}

TEST_CASE("cer follows the distance-over-reference definition", "[editdist]") {
  CHECK(cer(U"abcd", U"abxd") == 0.25);
  CHECK(cer(U"abcd", U"abcd") == 0.0);
  CHECK(cer(U"ab", U"abcd") == 1.0);
  // More hypothesis than reference tokens: rate above 1.0 is legitimate.
  CHECK(cer(U"a", U"xyzw") == 4.0);
  CHECK_THROWS_AS(cer(U"", U"abc"), EmptyReference);
}

TEST_CASE("engine selector routes to the same value", "[editdist]") {
  std::mt19937_64 rng(99);
  const TokenSeq a = random_seq(rng, 100);
  const TokenSeq b = random_seq(rng, 100);
  CHECK(edit_distance(a, b, DistanceEngine::kBitParallel).distance ==
        edit_distance(a, b, DistanceEngine::kDpReference).distance);
}
