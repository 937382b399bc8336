#include <doctest.h>

#include <cmath>
#include <random>

#include "juliart/color.hpp"
#include "juliart/render.hpp"

using namespace juliart;

namespace {

// Textbook sector formulation (p, q, t), kept separate from the library's
// chroma-based conversion.
RgbColor pqt_oracle(double h, double s, double v) {
  const double hh = h / 60.0;
  const int i = static_cast<int>(std::floor(hh)) % 6;
  const double f = hh - std::floor(hh);
  const double p = v * (1 - s);
  const double q = v * (1 - s * f);
  const double t = v * (1 - s * (1 - f));
  switch (i) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

void check_close(const RgbColor& a, const RgbColor& b, double tol = 1e-12) {
  CHECK(a.r == doctest::Approx(b.r).epsilon(tol));
  CHECK(a.g == doctest::Approx(b.g).epsilon(tol));
  CHECK(a.b == doctest::Approx(b.b).epsilon(tol));
}

}  // namespace

TEST_SUITE("color") {
  TEST_CASE("hsv_to_rgb anchors are exact") {
    CHECK(hsv_to_rgb({0, 1, 1}) == RgbColor{1, 0, 0});
    CHECK(hsv_to_rgb({60, 1, 1}) == RgbColor{1, 1, 0});
    CHECK(hsv_to_rgb({120, 1, 1}) == RgbColor{0, 1, 0});
    CHECK(hsv_to_rgb({180, 1, 1}) == RgbColor{0, 1, 1});
    CHECK(hsv_to_rgb({240, 1, 1}) == RgbColor{0, 0, 1});
    CHECK(hsv_to_rgb({300, 1, 1}) == RgbColor{1, 0, 1});
  }

  TEST_CASE("zero brightness is black") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> hue(0, 360), unit(0, 1);
    for (int k = 0; k < 1000; ++k) CHECK(hsv_to_rgb({hue(rng), unit(rng), 0.0}) == RgbColor{0, 0, 0});
  }

  TEST_CASE("blue ocean fill against the sector oracle") {
    const RgbColor oracle = pqt_oracle(214, 0.89, 0.95);
    CHECK(oracle.r == 0.10449999999999998);
    CHECK(oracle.g == 0.47088333333333315);
    CHECK(oracle.b == 0.95);
    check_close(hsv_to_rgb({214, 0.89, 0.95}), oracle);
    CHECK(to_rgb8({214, 0.89, 0.95}) == std::array<std::uint8_t, 3>{27, 120, 242});
  }

  TEST_CASE("hsv_to_rgb agrees with the sector oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> hue(0, 360), unit(0, 1);
    for (int k = 0; k < 20000; ++k) {
      const double h = hue(rng), s = unit(rng), v = unit(rng);
      const RgbColor a = hsv_to_rgb({h, s, v});
      const RgbColor b = pqt_oracle(h, s, v);
      REQUIRE(std::abs(a.r - b.r) < 1e-12);
      REQUIRE(std::abs(a.g - b.g) < 1e-12);
      REQUIRE(std::abs(a.b - b.b) < 1e-12);
    }
  }

  TEST_CASE("normalization wraps hue and clamps channels") {
    CHECK(HsvColor::normalized(370, 2, -1) == HsvColor{10, 1, 0});
    CHECK(HsvColor::normalized(-90, 0.5, 0.5) == HsvColor{270, 0.5, 0.5});
    CHECK(HsvColor::normalized(-1e-20, 0.5, 0.5).hue < 360.0);
  }

  TEST_CASE("apply_adjustment examples") {
    const HsvColor black{0, 0, 0};
    CHECK(apply_adjustment(black, {214.0, 0.89, 0.95}) == HsvColor{214, 0.89, 0.95});
    CHECK(apply_adjustment({100, 0.5, 0.5}, {{}, {}, 0.5}) == HsvColor{100, 0.5, 0.75});
    CHECK(apply_adjustment({100, 0.5, 0.5}, {{}, {}, -0.5}) == HsvColor{100, 0.5, 0.25});
    CHECK(apply_adjustment({350, 0.5, 0.5}, {20.0, {}, {}}).hue == doctest::Approx(10));
    // Amounts beyond [-1, 1] saturate.
    CHECK(apply_adjustment({0, 0.3, 0.3}, {{}, 5.0, -5.0}) == HsvColor{0, 1, 0});
  }

  TEST_CASE("zero adjustment is the identity; channels stay in range") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> hue(0, 360), unit(0, 1), amount(-3, 3), delta(-1000, 1000);
    for (int k = 0; k < 2000; ++k) {
      HsvColor c{hue(rng), unit(rng), unit(rng)};
      CHECK(apply_adjustment(c, {}) == c);
      CHECK(apply_adjustment(c, {0.0, 0.0, 0.0}) == c);
      for (int step = 0; step < 20; ++step) {
        c = apply_adjustment(c, {delta(rng), amount(rng), amount(rng)});
        REQUIRE(c.hue >= 0.0);
        REQUIRE(c.hue < 360.0);
        REQUIRE(c.saturation >= 0.0);
        REQUIRE(c.saturation <= 1.0);
        REQUIRE(c.brightness >= 0.0);
        REQUIRE(c.brightness <= 1.0);
      }
    }
  }

  TEST_CASE("escape ramps") {
    CHECK(escape_ramp_up(1, 60) == 0.0);
    CHECK(escape_ramp_up(60, 60) == 1.0);
    CHECK(escape_ramp_up(201, 401) == 0.5);
    CHECK(escape_ramp_down(1, 300) == 1.0);
    CHECK(escape_ramp_down(300, 300) == 0.0);
    CHECK(escape_ramp_down(1, 200, 0.5) == 0.5);
    CHECK(escape_ramp_up(0, 10) == 0.0);  // clamped
    CHECK_THROWS_AS(escape_ramp_up(1, 1), std::invalid_argument);
    CHECK_THROWS_AS(escape_ramp_down(1, 1), std::invalid_argument);

    for (int n_max = 2; n_max <= 400; ++n_max) {
      for (int n = 1; n <= n_max; ++n) {
        REQUIRE(escape_ramp_up(n, n_max) + escape_ramp_down(n, n_max) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }
}
