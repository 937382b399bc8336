#include <doctest.h>

#include <random>

#include "juliart/dynamics.hpp"
#include "juliart/gallery.hpp"
#include "juliart/scene/evaluator.hpp"
#include "juliart/scene/lexer.hpp"
#include "juliart/scene/parser.hpp"

using namespace juliart;
using namespace juliart::scene;

namespace {

Expr expr(std::string_view text) {
  const auto tokens = tokenize("E = " + std::string(text));
  const SceneProgram p = parse(tokens);
  return p.find_constant("E")->value;
}

std::vector<TokenKind> kinds(std::string_view text) {
  std::vector<TokenKind> out;
  for (const auto& t : tokenize(text)) out.push_back(t.kind);
  return out;
}

SceneError error_of(std::string_view source) {
  try {
    load_scene(source);
  } catch (const SceneError& e) {
    return e;
  }
  FAIL("expected a SceneError for: " << source);
  return SceneError(ErrorKind::Io, "unreachable");
}

SceneProgram steps_program(int max_steps) {
  SceneProgram p = load_scene(preset("basic").source);
  override_constant(p, "MAXSTEPS", max_steps);
  return p;
}

}  // namespace

TEST_SUITE("scene") {
  TEST_CASE("tokenize examples") {
    using K = TokenKind;
    CHECK(kinds("loop i = (LIMIT) [] {") ==
          std::vector<K>{K::Loop, K::Identifier, K::Assign, K::LParen, K::Identifier, K::RParen, K::LBracket,
                         K::RBracket, K::LBrace});
    CHECK(tokenize("").empty());
    const auto t = tokenize("0.39, -0.252857");
    REQUIRE(t.size() == 4);
    CHECK(t[0].number == 0.39);
    CHECK(t[1].kind == K::Comma);
    CHECK(t[2].kind == K::Minus);
    CHECK(t[3].number == 0.252857);
  }

  TEST_CASE("comments, underscores and positions") {
    const auto t = tokenize("LIMIT = 1000 # Image resolution\nz_r");
    REQUIRE(t.size() == 4);
    CHECK(t[3].text == "z_r");
    CHECK(t[3].pos == SourcePos{2, 1});
  }

  TEST_CASE("lexical errors carry a position") {
    try {
      tokenize("A = 1\nB = 2 @ 3");
      FAIL("no error");
    } catch (const SceneError& e) {
      CHECK(e.kind() == ErrorKind::Lexical);
      CHECK(e.pos() == SourcePos{2, 7});
    }
  }

  TEST_CASE("basic scene structure") {
    const SceneProgram p = load_scene(preset("basic").source);
    CHECK(p.count_start_shapes() == 1);
    // LIMIT, MAXSTEPS, four borders, SIZEX, SIZEY.
    CHECK(p.count_constants() == 8);
    CHECK(p.count_functions() == 1);
    CHECK(p.count_shapes() == 1);
    CHECK(p.start_shape()->shape == "julia");
  }

  TEST_CASE("minimal programs") {
    const SceneProgram p = load_scene("startshape s  shape s {}");
    CHECK(p.count_shapes() == 1);
    CHECK(pretty_print(p) == "startshape s\nshape s {}\n");
    CHECK(error_of("shape s {}").message() == "missing startshape");
    CHECK(error_of("startshape s startshape s shape s {}").kind() == ErrorKind::Semantic);
    CHECK(error_of("startshape t shape s {}").kind() == ErrorKind::Semantic);
    CHECK(error_of("startshape s shape s {} shape s {}").kind() == ErrorKind::Semantic);
    CHECK(error_of("startshape s shape s { SQUARE[x q] }").kind() == ErrorKind::Semantic);
    CHECK(error_of("startshape s f(a) = a shape s { SQUARE[x f(1, 2)] }").kind() == ErrorKind::Semantic);
  }

  TEST_CASE("adjustment without value") {
    const SceneError e = error_of("shape s { SQUARE[x] }");
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(e.message() == "adjustment 'x' requires a value expression");
  }

  TEST_CASE("syntax errors report their line") {
    struct Case {
      const char* source;
      int line;
    };
    const Case cases[] = {
        // comma inside a parenthesized operand
        {"startshape s\n\nf(a, b) =\n  if((a < b, a, b)\nshape s {}\n", 4},
        // doubled closing bracket after an adjustment list
        {"startshape s\nshape s {\n  t()[x 1]\n  t()[r 120 x -1 -2 ]]\n}\nshape t {}\n", 4},
        // adjustment keyword without a value
        {"startshape s\nshape s {\n  loop 3 [] {\n    SQUARE[size]\n  }\n}\n", 4},
    };
    for (const auto& c : cases) {
      CAPTURE(c.source);
      const SceneError e = error_of(c.source);
      CHECK(e.kind() == ErrorKind::Syntax);
      CHECK(e.pos().line == c.line);
    }
  }

  TEST_CASE("corpus round-trips through the printer") {
    for (const auto& p : presets()) {
      CAPTURE(p.name);
      const SceneProgram first = load_scene(p.source);
      const std::string printed = pretty_print(first);
      const SceneProgram second = load_scene(printed);
      CHECK(same_structure(first, second));
      CHECK(pretty_print(second) == printed);
    }
  }

  TEST_CASE("two-value x and spaced minus") {
    const SceneProgram p = load_scene("startshape s\nshape s { SQUARE[x -1 -2 size 3 4] SQUARE[x 1-2] }");
    const auto& body = p.find_shape("s")->body;
    const auto& first = std::get<PrimitiveStmt>(body[0].node);
    REQUIRE(first.adjustments.size() == 2);
    CHECK(first.adjustments[0].values.size() == 2);
    CHECK(first.adjustments[1].values.size() == 2);
    const auto& second = std::get<PrimitiveStmt>(body[1].node);
    CHECK(second.adjustments[0].values.size() == 1);
  }

  TEST_CASE("eval_expr examples") {
    RandomStream rng(0);
    CHECK(eval_expr(expr("steps(0, 0, 0, 0, 0)"), {}, rng, steps_program(40)) == 40);
    CHECK(eval_expr(expr("if(1 < 2, 10, 20)"), {}, rng) == 10);
    CHECK(eval_expr(expr("rand(5, 5)"), {}, rng) == 5);
    CHECK(eval_expr(expr("-x*2 + y/4"), {{"x", 3}, {"y", 2}}, rng) == -5.5);
    CHECK(eval_expr(expr("(1 <= 1) + (2 >= 3) + (1 == 1) + (1 != 1)"), {}, rng) == 2);
  }

  TEST_CASE("short-circuit guards division by zero") {
    RandomStream rng(0);
    const Bindings env{{"d", 0}};
    CHECK(eval_expr(expr("(d != 0) && (1/d > 0)"), env, rng) == 0);
    CHECK(eval_expr(expr("(d == 0) || (1/d > 0)"), env, rng) == 1);
    CHECK(eval_expr(expr("if(d == 0, 7, 1/d)"), env, rng) == 7);
    try {
      eval_expr(expr("1 + 1/d"), env, rng);
      FAIL("no error");
    } catch (const SceneError& e) {
      CHECK(e.kind() == ErrorKind::Evaluation);
      CHECK(e.pos() == SourcePos{1, 10});
    }
  }

  TEST_CASE("unbound names") {
    RandomStream rng(0);
    CHECK_THROWS_AS(eval_expr(expr("nope + 1"), {}, rng), SceneError);
    CHECK_THROWS_AS(eval_expr(expr("nope(1)"), {}, rng), SceneError);
  }

  TEST_CASE("recursion depth cap and tail calls") {
    const SceneProgram p = load_scene(
        "startshape s\nshape s {}\n"
        "deep(n) = if(n < 2000000, 1 + deep(n + 1), 0)\n"
        "tail(n) = if(n < 2000000, tail(n + 1), n)\n");
    RandomStream rng(0);
    ExpressionEvaluator ev(p);
    CHECK(ev(expr("tail(0)"), {}, rng) == 2000000);
    CHECK(ev.last_invocations() == 2000001);
    CHECK(ev(expr("deep(1999000)"), {}, rng) == 1000);
    try {
      ev(expr("deep(0)"), {}, rng);
      FAIL("no error");
    } catch (const SceneError& e) {
      CHECK(e.kind() == ErrorKind::Limit);
    }
  }

  TEST_CASE("rand draws are reproducible") {
    const Expr e = expr("rand(0, 1) + 10 * rand(0, 1)");
    RandomStream a(1234), b(1234), c(1235);
    for (int k = 0; k < 100; ++k) {
      const double x = eval_expr(e, {}, a);
      REQUIRE(x == eval_expr(e, {}, b));
      REQUIRE(x != eval_expr(e, {}, c));
    }
  }

  TEST_CASE("constants see rand and each other") {
    const SceneProgram p = load_scene("startshape s\nshape s {}\nB = A * 2\nA = rand(1, 2)\n");
    const ExpressionEvaluator one(p, VariationSeed("x"));
    const ExpressionEvaluator two(p, VariationSeed("x"));
    const ExpressionEvaluator other(p, VariationSeed("y"));
    CHECK(one.constant("B") == 2 * one.constant("A"));
    CHECK(one.constant("A") == two.constant("A"));
    CHECK(one.constant("A") != other.constant("A"));
    CHECK(one.constant("A") >= 1.0);
    CHECK(one.constant("A") < 2.0);
    CHECK_THROWS_AS(one.constant("C"), SceneError);
    CHECK(error_of("startshape s shape s {} A = B B = A").kind() == ErrorKind::Semantic);
  }

  TEST_CASE("DSL steps agrees with escape_steps") {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> budget(1, 400);
    const Expr call = expr("steps(0, zr, zi, cr, ci)");
    for (int k = 0; k < 1000; ++k) {
      const int n = budget(gen);
      const Complexd z{u(gen), u(gen)}, c{u(gen), u(gen)};
      ExpressionEvaluator ev(steps_program(n));
      const Bindings env{{"zr", z.re}, {"zi", z.im}, {"cr", c.re}, {"ci", c.im}};
      RandomStream rng(0);
      const double native_path = ev(call, env, rng);
      const auto native_calls = ev.last_invocations();
      ev.set_native_idioms(false);
      const double bytecode = ev(call, env, rng);
      const int expected = escape_steps(z, c, EscapeBudget(n));
      REQUIRE(bytecode == expected);
      REQUIRE(native_path == expected);
      // One invocation per recursion level, whichever path runs it.
      REQUIRE(ev.last_invocations() == static_cast<std::uint64_t>(expected) + 1);
      REQUIRE(native_calls == ev.last_invocations());
    }
  }

  TEST_CASE("override_constant") {
    SceneProgram p = load_scene(preset("basic").source);
    override_constant(p, "LIMIT", 10);
    CHECK(ExpressionEvaluator(p).constant("SIZEX") == doctest::Approx(2.8 / 9));
    CHECK_THROWS_AS(override_constant(p, "NOPE", 1), SceneError);
  }
}
