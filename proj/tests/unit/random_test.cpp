#include <doctest.h>

#include <algorithm>
#include <unordered_set>

#include "juliart/random.hpp"

using namespace juliart;

TEST_SUITE("random") {
  TEST_CASE("variation hash vectors") {
    CHECK(hash_variation("") == 0xcbf29ce484222325ULL);
    CHECK(hash_variation("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(hash_variation("foobar") == 0x85944171f73967e8ULL);
    CHECK(hash_variation("PAJBHA") == 0x8cad0bb30d17fe91ULL);
    CHECK(VariationSeed("PAJBHA").value == 0x8cad0bb30d17fe91ULL);
    CHECK(VariationSeed().value == 0xcbf29ce484222325ULL);
  }

  TEST_CASE("streams replay") {
    const VariationSeed seed("PAJBHA");
    const std::uint64_t path[] = {3, 1, 4};
    RandomStream a = derive_stream(seed, path);
    RandomStream b = derive_stream(seed, path);
    for (int k = 0; k < 1000; ++k) REQUIRE(a.next_u64() == b.next_u64());

    RandomStream c(42);
    c.next_unit();
    RandomStream copy = c;
    CHECK(copy.next_unit() == c.next_unit());
    CHECK(c.position() == 2);
  }

  TEST_CASE("uniform range") {
    RandomStream s(1);
    for (int k = 0; k < 100000; ++k) {
      const double u = s.next_unit();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      const double r = s.uniform(60, 74);
      REQUIRE(r >= 60.0);
      REQUIRE(r < 74.0);
    }
    CHECK(s.uniform(5, 5) == 5.0);
  }

  TEST_CASE("path order matters") {
    const VariationSeed seed;
    const std::uint64_t ab[] = {0, 1};
    const std::uint64_t ba[] = {1, 0};
    CHECK(derive_stream(seed, ab).next_u64() != derive_stream(seed, ba).next_u64());
  }

  TEST_CASE("no first-draw collisions over a million path pairs") {
    // 1000 x 1000 two-level paths, both orders of each pair included. With
    // 64-bit draws an accidental collision has probability ~3e-8.
    const VariationSeed seed("PAJBHA");
    std::vector<std::uint64_t> draws;
    draws.reserve(1'000'000);
    for (std::uint64_t i = 0; i < 1000; ++i) {
      for (std::uint64_t j = 0; j < 1000; ++j) {
        const std::uint64_t path[] = {i, j};
        draws.push_back(derive_stream(seed, path).next_u64());
      }
    }
    std::sort(draws.begin(), draws.end());
    CHECK(std::adjacent_find(draws.begin(), draws.end()) == draws.end());
  }

  TEST_CASE("different tags give different streams") {
    const std::uint64_t path[] = {0};
    CHECK(derive_stream(VariationSeed("PAJBHA"), path).next_u64() !=
          derive_stream(VariationSeed("PAJBHB"), path).next_u64());
  }
}
