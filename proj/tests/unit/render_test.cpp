#include <doctest.h>

#include <algorithm>

#include "juliart/dynamics.hpp"
#include "juliart/transform.hpp"
#include "support.hpp"

using namespace juliart;
using juliart::scene::AdjustmentKind;

namespace {

Evaluation run(std::string_view source, EvaluationOptions options = {}) {
  return evaluate_scene(scene::load_scene(source), VariationSeed(), options);
}

SceneError eval_error(std::string_view source, EvaluationOptions options = {}) {
  try {
    run(source, options);
  } catch (const SceneError& e) {
    return e;
  }
  FAIL("expected a SceneError");
  return SceneError(ErrorKind::Io, "unreachable");
}

Primitive square_at(double x, double y, double side, HsvColor color) {
  Primitive p;
  p.transform.translate(x, y).scale(side, side);
  p.color = color;
  return p;
}

std::array<std::uint8_t, 3> rgb_at(const PixelBuffer& b, int x, int y) {
  const auto* p = b.at(x, y);
  return {p[0], p[1], p[2]};
}

bool same_primitives(const std::vector<Primitive>& a, const std::vector<Primitive>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].kind != b[i].kind || a[i].color != b[i].color || a[i].index != b[i].index ||
        !a[i].transform.affine().matrix().isApprox(b[i].transform.affine().matrix(), 0.0)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("renderer") {
  TEST_CASE("adjustments compose in the local frame") {
    const AdjustmentValue adjs[] = {{AdjustmentKind::X, 3.0, {}}, {AdjustmentKind::Rotate, 90.0, {}}};
    const DrawState s = compose_adjustments(Transform2Dd(), HsvColor{}, adjs);
    const auto p = s.transform.apply(1, 0);
    CHECK(p.x() == 3.0);
    CHECK(p.y() == 1.0);

    const AdjustmentValue swapped[] = {adjs[1], adjs[0]};
    const auto q = compose_adjustments(Transform2Dd(), HsvColor{}, swapped).transform.apply(1, 0);
    CHECK(q.x() == 0.0);
    CHECK(q.y() == 4.0);

    const DrawState parent{Transform2Dd().translate(1, 2), HsvColor{10, 0.5, 0.5}};
    const DrawState same = compose_adjustments(parent, {});
    CHECK(same.transform.affine().matrix() == parent.transform.affine().matrix());
    CHECK(same.color == parent.color);
  }

  TEST_CASE("rotation then offset, as the blood sprinkle calls do") {
    const AdjustmentValue adjs[] = {{AdjustmentKind::Rotate, 120.0, {}}, {AdjustmentKind::X, -0.21, 0.445714}};
    const auto t = compose_adjustments(Transform2Dd(), HsvColor{}, adjs).transform;
    const auto origin = t.apply(0, 0);
    const Eigen::Vector2d expected = Transform2Dd::rotation(120.0) * Eigen::Vector2d(-0.21, 0.445714);
    CHECK(origin == expected);
  }

  TEST_CASE("size and color adjustments") {
    const AdjustmentValue adjs[] = {{AdjustmentKind::Size, 2.0, {}},
                                    {AdjustmentKind::Size, 1.0, 3.0},
                                    {AdjustmentKind::Hue, 370.0, {}},
                                    {AdjustmentKind::Saturation, 0.5, {}},
                                    {AdjustmentKind::Brightness, -0.5, {}}};
    const DrawState s = compose_adjustments(Transform2Dd(), HsvColor{0, 0, 0.5}, adjs);
    CHECK(s.transform.linear() == Eigen::Matrix2d{{2, 0}, {0, 6}});
    CHECK(s.color == HsvColor{10, 0.5, 0.25});
  }

  TEST_CASE("empty start shape emits nothing") {
    CHECK(run("startshape s shape s {}").primitives.empty());
  }

  TEST_CASE("basic scene emits one sized square per grid point") {
    const Preset& p = preset("basic");
    const Evaluation ev = testing::evaluate_preset("basic");
    REQUIRE(ev.primitives.size() == 1'000'000u);
    const auto [sx, sy] = cell_size(p.viewport, p.resolution);
    for (std::size_t k = 0; k < ev.primitives.size(); k += 997) {
      const auto& prim = ev.primitives[k];
      REQUIRE(prim.kind == PrimitiveKind::Square);
      REQUIRE(prim.index == k);
      REQUIRE(prim.transform.linear()(0, 0) == sx);
      REQUIRE(prim.transform.linear()(1, 1) == sy);
    }

    // One pixel per grid point; row 0 of the image is the top grid row.
    const PixelBuffer buf = rasterize(ev.primitives, p.resolution, 0);
    const auto black = to_rgb8({0, 0, 0});
    const auto gray = to_rgb8({0, 0, 0.9});
    for (int i = 0; i < p.resolution; ++i) {
      const double zi = index_to_coord(i, p.viewport.bottom, p.viewport.top, p.resolution);
      for (int j = 0; j < p.resolution; ++j) {
        const double zr = index_to_coord(j, p.viewport.left, p.viewport.right, p.resolution);
        const bool inside = escape_steps(Complexd{zr, zi}, p.seed, EscapeBudget(p.max_steps)) == p.max_steps;
        REQUIRE(rgb_at(buf, j, p.resolution - 1 - i) == (inside ? black : gray));
      }
    }
  }

  TEST_CASE("fjords emits one fill plus the escaping points") {
    const Preset& p = preset("fjords");
    const Evaluation ev = testing::evaluate_preset("fjords");
    std::size_t escaping = 0;
    for (int i = 0; i < p.resolution; ++i) {
      const double zi = index_to_coord(i, p.viewport.bottom, p.viewport.top, p.resolution);
      for (int j = 0; j < p.resolution; ++j) {
        const double zr = index_to_coord(j, p.viewport.left, p.viewport.right, p.resolution);
        if (escape_steps(Complexd{zr, zi}, p.seed, EscapeBudget(p.max_steps)) < p.max_steps) ++escaping;
      }
    }
    REQUIRE(!ev.primitives.empty());
    CHECK(ev.primitives.front().kind == PrimitiveKind::Fill);
    CHECK(ev.primitives.front().color == HsvColor{214, 0.89, 0.95});
    CHECK(ev.primitives.size() == escaping + 1);
    CHECK(std::count_if(ev.primitives.begin(), ev.primitives.end(),
                        [](const Primitive& q) { return q.kind == PrimitiveKind::Fill; }) == 1);
  }

  TEST_CASE("loop counts truncate and adjustments accumulate") {
    const Evaluation a = run("startshape s shape s { loop i = 2.9 [] { SQUARE[x i] } }");
    REQUIRE(a.primitives.size() == 2);
    CHECK(a.primitives[1].transform.translation().x() == 1.0);

    const Evaluation b = run("startshape s shape s { loop 3 [x 2 r 90] { SQUARE[] } }");
    REQUIRE(b.primitives.size() == 3);
    const Transform2Dd step = Transform2Dd().translate(2, 0).rotate(90);
    Transform2Dd expected;
    for (const auto& prim : b.primitives) {
      CHECK(prim.transform.affine().matrix().isApprox(expected.affine().matrix(), 1e-15));
      expected = expected * step;
    }
    CHECK(run("startshape s shape s { loop 0 [] { SQUARE[] } }").primitives.empty());
  }

  TEST_CASE("loop count errors") {
    CHECK(eval_error("startshape s shape s { loop -1 [] { SQUARE[] } }").kind() == ErrorKind::Evaluation);
    CHECK(eval_error("startshape s shape s { loop 1e300*1e300 [] { SQUARE[] } }").kind() == ErrorKind::Evaluation);
    CHECK(eval_error("startshape s shape s { loop 2e9 [] { SQUARE[] } }").kind() == ErrorKind::Limit);
  }

  TEST_CASE("caps") {
    EvaluationOptions few;
    few.limits.max_primitives = 10;
    CHECK(eval_error("startshape s shape s { loop 11 [] { SQUARE[] } }", few).kind() == ErrorKind::Limit);
    CHECK(run("startshape s shape s { loop 10 [] { SQUARE[] } }", few).primitives.size() == 10);

    EvaluationOptions short_budget;
    short_budget.limits.max_escape_iterations = 100'000;
    const SceneError e = [&] {
      try {
        evaluate_scene(testing::preset_program("basic"), VariationSeed(), short_budget);
      } catch (const SceneError& err) {
        return err;
      }
      FAIL("no error");
      return SceneError(ErrorKind::Io, "");
    }();
    CHECK(e.kind() == ErrorKind::Limit);

    CHECK(eval_error("startshape s shape s { t()[] } shape t { s()[] }").kind() == ErrorKind::Limit);
  }

  TEST_CASE("degenerate squares are skipped, non-finite ones rejected") {
    CHECK(run("startshape s shape s { SQUARE[size 0] SQUARE[size 1 0] SQUARE[] }").primitives.size() == 1);
    CHECK(eval_error("startshape s shape s { SQUARE[x 1e300*1e300] }").kind() == ErrorKind::Evaluation);
  }

  TEST_CASE("evaluation errors carry the shape trace") {
    const SceneError e = eval_error("startshape s\nshape s { t(0)[] }\nshape t(d) {\n  SQUARE[x 1/d]\n}\n");
    CHECK(e.kind() == ErrorKind::Evaluation);
    CHECK(e.pos() == SourcePos{4, 13});
    CHECK(e.trace().size() == 2);
  }

  TEST_CASE("parallel evaluation matches sequential") {
    for (const char* name : {"forest", "blood", "ragnarok"}) {
      CAPTURE(name);
      const Evaluation one = testing::evaluate_preset(name, 1);
      const Evaluation many = testing::evaluate_preset(name, 4);
      CHECK(one.escape_iterations == many.escape_iterations);
      CHECK(same_primitives(one.primitives, many.primitives));
    }
  }

  TEST_CASE("a single unit square fills the canvas") {
    const Primitive sq = square_at(0, 0, 1, {120, 1, 1});
    const PixelBuffer buf = rasterize({&sq, 1}, 10, 0);
    CHECK(buf.width == 10);
    for (int y = 0; y < 10; ++y) {
      for (int x = 0; x < 10; ++x) REQUIRE(rgb_at(buf, x, y) == std::array<std::uint8_t, 3>{0, 255, 0});
    }
    const PixelBuffer framed = rasterize({&sq, 1}, 10, 2);
    CHECK(rgb_at(framed, 0, 0) == std::array<std::uint8_t, 3>{255, 255, 255});
    CHECK(rgb_at(framed, 1, 5) == std::array<std::uint8_t, 3>{255, 255, 255});
    CHECK(rgb_at(framed, 2, 2) == std::array<std::uint8_t, 3>{0, 255, 0});
    CHECK(rgb_at(framed, 7, 7) == std::array<std::uint8_t, 3>{0, 255, 0});
    CHECK(rgb_at(framed, 8, 7) == std::array<std::uint8_t, 3>{255, 255, 255});
  }

  TEST_CASE("painter order") {
    const Primitive red = square_at(0, 0, 2, {0, 1, 1});
    const Primitive blue = square_at(0.5, 0, 2, {240, 1, 1});
    const Primitive far = square_at(10, 10, 1, {120, 1, 1});
    const Primitive rb[] = {red, blue}, br[] = {blue, red};
    CHECK(!(rasterize(rb, 50, 0) == rasterize(br, 50, 0)));
    const Primitive rf[] = {red, far}, fr[] = {far, red};
    CHECK(rasterize(rf, 50, 0) == rasterize(fr, 50, 0));
    // The overlap takes the later color.
    const PixelBuffer buf = rasterize(rb, 50, 0);
    const auto mid = buf.world_to_image * Eigen::Vector2d(0.5, 0);
    CHECK(rgb_at(buf, int(mid.x()), int(mid.y())) == std::array<std::uint8_t, 3>{0, 0, 255});
  }

  TEST_CASE("fill covers everything painted before it and the border") {
    Primitive fill;
    fill.kind = PrimitiveKind::Fill;
    fill.color = {0, 1, 1};
    const Primitive sq = square_at(0, 0, 1, {120, 1, 1});
    const Primitive prims[] = {sq, fill};
    const PixelBuffer buf = rasterize(prims, 8, 2);
    for (int y = 0; y < 8; ++y) {
      for (int x = 0; x < 8; ++x) REQUIRE(rgb_at(buf, x, y) == std::array<std::uint8_t, 3>{255, 0, 0});
    }
    const Primitive only_fill[] = {fill};
    CHECK(rgb_at(rasterize(only_fill, 4, 0), 3, 3) == std::array<std::uint8_t, 3>{255, 0, 0});
    CHECK(rgb_at(rasterize({}, 4, 0), 0, 0) == std::array<std::uint8_t, 3>{255, 255, 255});
  }

  TEST_CASE("rasterize argument checks") {
    const Primitive sq = square_at(0, 0, 1, {});
    CHECK_THROWS_AS(rasterize({&sq, 1}, 4, 2), SceneError);
    CHECK_THROWS_AS(rasterize({&sq, 1}, 0, 0), SceneError);
    CHECK_THROWS_AS(rasterize({&sq, 1}, 4, -1), SceneError);
    CHECK_NOTHROW(rasterize({&sq, 1}, 5, 2));
  }

  TEST_CASE("raster workers do not change pixels") {
    const Evaluation ev = testing::evaluate_preset("blood");
    CHECK(rasterize(ev.primitives, 700, 10, 1) == rasterize(ev.primitives, 700, 10, 5));
  }

  TEST_CASE("rand trace records every draw") {
    std::vector<scene::RandomDraw> trace;
    EvaluationOptions options;
    options.trace = &trace;
    run("startshape s shape s { loop 4 [] { SQUARE[h rand(1, 2) b rand(0.5, 0.5)] } }", options);
    REQUIRE(trace.size() == 8);
    CHECK(trace[0].lo == 1);
    CHECK(trace[1].value == 0.5);
    CHECK(trace[0].pos == SourcePos{1, 45});
  }
}
