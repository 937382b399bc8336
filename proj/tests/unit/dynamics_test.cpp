#include <doctest.h>

#include <complex>
#include <random>

#include "juliart/dynamics.hpp"

using namespace juliart;

namespace {

// Straight loop over std::complex, written without reference to the library.
int loop_oracle(std::complex<double> z, std::complex<double> c, int n_max) {
  int n = 0;
  for (; n < n_max; ++n) {
    if (!(std::norm(z) < 4.0)) break;
    z = z * z + c;
  }
  return n;
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("quad_step examples") {
    CHECK(quad_step(Complexd{0, 0}, Complexd{0.39, -0.252857}) == Complexd{0.39, -0.252857});
    CHECK(quad_step(Complexd{0, 1}, Complexd{0, 0}) == Complexd{-1, 0});
    CHECK(quad_step(Complexd{1, 1}, Complexd{0.5, 0}) == Complexd{0.5, 2});
  }

  TEST_CASE("escape_steps examples") {
    const EscapeBudget n40(40);
    CHECK(escape_steps(Complexd{0, 0}, Complexd{0, 0}, n40) == 40);
    CHECK(escape_steps(Complexd{3, 0}, Complexd{0, 0}, n40) == 0);
    CHECK(escape_steps(Complexd{1.5, 0}, Complexd{0, 0}, n40) == 1);
    // |z|^2 == 4 exactly counts as escaped.
    CHECK(escape_steps(Complexd{2, 0}, Complexd{0, 0}, n40) == 0);
    CHECK(escape_steps(Complexd{0, 0}, Complexd{0, 0}, EscapeBudget(1)) == 1);
  }

  TEST_CASE("non-finite iterates escape") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(escape_steps(Complexd{nan, 0}, Complexd{0, 0}, EscapeBudget(10)) == 0);
    CHECK(escape_steps(Complexd{inf, 0}, Complexd{0, 0}, EscapeBudget(10)) == 0);
    CHECK(escape_steps(Complexd{1e200, 1e200}, Complexd{0, 0}, EscapeBudget(10)) == 0);
  }

  TEST_CASE("budget must be positive") {
    CHECK_THROWS_AS(EscapeBudget(0), std::invalid_argument);
    CHECK_THROWS_AS(EscapeBudget(-3), std::invalid_argument);
  }

  TEST_CASE("index_to_coord and cell_size") {
    CHECK(index_to_coord(0, -1.4, 1.4, 1000) == -1.4);
    CHECK(index_to_coord(999, -1.4, 1.4, 1000) == 1.4);
    CHECK(index_to_coord(500, 0.0, 1.0, 1001) == 0.5);
    CHECK_THROWS_AS(index_to_coord(0, 0.0, 1.0, 1), std::invalid_argument);

    const auto [w, h] = cell_size(Viewportd::bounds(-1.4, 1.4, -1.4, 1.4), 1000);
    CHECK(w == 2.8 / 999);
    CHECK(h == 2.8 / 999);
    const auto unit = cell_size(Viewportd::bounds(0, 1, 0, 1), 2);
    CHECK(unit.first == 1.0);
    CHECK(unit.second == 1.0);
    const auto fjords = cell_size(Viewportd::bounds(0.01, 0.09, 0.02, 0.10), 1000);
    CHECK(fjords.first == doctest::Approx(0.08 / 999).epsilon(1e-12));
    CHECK(fjords.second == doctest::Approx(0.08 / 999).epsilon(1e-12));
    CHECK_THROWS_AS(cell_size(Viewportd::bounds(0, 1, 0, 1), 1), std::invalid_argument);
  }

  TEST_CASE("index_to_coord endpoints") {
    // i = 0 reproduces lo for any interval. The upper end goes through
    // (hi - lo) * (r - 1) / (r - 1) + lo, which is exact for every gallery
    // viewport and within a couple of ulps elsewhere.
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_int_distribution<int> res(2, 5000);
    for (int k = 0; k < 10000; ++k) {
      double lo = coord(rng);
      double hi = coord(rng);
      if (lo == hi) continue;
      if (lo > hi) std::swap(lo, hi);
      const int r = res(rng);
      REQUIRE(index_to_coord(0, lo, hi, r) == lo);
      REQUIRE(std::abs(index_to_coord(r - 1, lo, hi, r) - hi) <= 4 * std::numeric_limits<double>::epsilon() * 3.0);
    }
    const Viewportd gallery[] = {Viewportd::bounds(-1.4, 1.4, -1.4, 1.4), Viewportd::bounds(0.01, 0.09, 0.02, 0.10),
                                 Viewportd::bounds(-0.6, 0.6, -0.6, 0.6), Viewportd::centered(0.21, -0.445714, 0.84),
                                 Viewportd::bounds(-0.02, 0.02, -0.355, -0.315)};
    for (const auto& v : gallery) {
      CHECK(index_to_coord(999, v.left, v.right, 1000) == v.right);
      CHECK(index_to_coord(999, v.bottom, v.top, 1000) == v.top);
    }
  }

  TEST_CASE("viewport construction") {
    CHECK_THROWS_AS(Viewportd::bounds(1, 0, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Viewportd::bounds(0, 1, 0, 0), std::invalid_argument);
    const auto v = Viewportd::centered(0.21, -0.445714, 0.84);
    CHECK(v.left == 0.21 - 0.42);
    CHECK(v.top == -0.445714 + 0.42);
  }

  TEST_CASE("escape count range, budget monotonicity, loop oracle") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> budget(1, 200);
    for (int k = 0; k < 10000; ++k) {
      const Complexd z{u(rng), u(rng)};
      const Complexd c{u(rng), u(rng)};
      const int n1 = budget(rng);
      const int n2 = n1 + budget(rng);
      const int a = escape_steps(z, c, EscapeBudget(n1));
      const int b = escape_steps(z, c, EscapeBudget(n2));
      REQUIRE(a >= 0);
      REQUIRE(a <= n1);
      if (a < n1) {
        REQUIRE(b == a);
      } else {
        REQUIRE(b >= n1);
      }
      REQUIRE(b == loop_oracle({z.re, z.im}, {c.re, c.im}, n2));
    }
  }

  TEST_CASE("conjugation symmetry") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 10000; ++k) {
      const Complexd z{u(rng), u(rng)};
      const Complexd c{u(rng), u(rng)};
      REQUIRE(quad_step(conj(z), conj(c)) == conj(quad_step(z, c)));
      REQUIRE(escape_steps(conj(z), conj(c), EscapeBudget(100)) == escape_steps(z, c, EscapeBudget(100)));
    }
  }
}
