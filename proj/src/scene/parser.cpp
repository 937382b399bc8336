#include "juliart/scene/parser.hpp"

#include <string>
#include <unordered_map>

#include "juliart/scene/compiler.hpp"

namespace juliart::scene {

namespace {

const std::unordered_map<std::string_view, AdjustmentKind>& adjustment_keywords() {
  static const std::unordered_map<std::string_view, AdjustmentKind> table = {
      {"x", AdjustmentKind::X},
      {"y", AdjustmentKind::Y},
      {"r", AdjustmentKind::Rotate},
      {"size", AdjustmentKind::Size},
      {"s", AdjustmentKind::Size},
      {"h", AdjustmentKind::Hue},
      {"hue", AdjustmentKind::Hue},
      {"sat", AdjustmentKind::Saturation},
      {"saturation", AdjustmentKind::Saturation},
      {"b", AdjustmentKind::Brightness},
      {"brightness", AdjustmentKind::Brightness},
  };
  return table;
}

int precedence(TokenKind kind) {
  switch (kind) {
    case TokenKind::OrOr: return 1;
    case TokenKind::AndAnd: return 2;
    case TokenKind::Less:
    case TokenKind::LessEqual:
    case TokenKind::Greater:
    case TokenKind::GreaterEqual:
    case TokenKind::EqualEqual:
    case TokenKind::NotEqual: return 3;
    case TokenKind::Plus:
    case TokenKind::Minus: return 4;
    case TokenKind::Star:
    case TokenKind::Slash: return 5;
    default: return 0;
  }
}

BinaryOp binary_op(TokenKind kind) {
  switch (kind) {
    case TokenKind::OrOr: return BinaryOp::Or;
    case TokenKind::AndAnd: return BinaryOp::And;
    case TokenKind::Less: return BinaryOp::Less;
    case TokenKind::LessEqual: return BinaryOp::LessEqual;
    case TokenKind::Greater: return BinaryOp::Greater;
    case TokenKind::GreaterEqual: return BinaryOp::GreaterEqual;
    case TokenKind::EqualEqual: return BinaryOp::Equal;
    case TokenKind::NotEqual: return BinaryOp::NotEqual;
    case TokenKind::Plus: return BinaryOp::Add;
    case TokenKind::Minus: return BinaryOp::Sub;
    case TokenKind::Star: return BinaryOp::Mul;
    default: return BinaryOp::Div;
  }
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {
    end_.kind = TokenKind::End;
    if (!toks_.empty()) {
      const Token& last = toks_.back();
      end_.pos = {last.pos.line, last.pos.column + static_cast<int>(last.text.size())};
    } else {
      end_.pos = {1, 1};
    }
  }

  SceneProgram program() {
    SceneProgram p;
    while (!at(TokenKind::End)) p.items.push_back(item());
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return i_ + ahead < toks_.size() ? toks_[i_ + ahead] : end_;
  }
  bool at(TokenKind kind) const { return peek().kind == kind; }
  const Token& advance() {
    const Token& t = peek();
    if (i_ < toks_.size()) ++i_;
    return t;
  }
  bool accept(TokenKind kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw SceneError(ErrorKind::Syntax, "expected " + expected + ", found " + found, t.pos);
  }

  const Token& expect(TokenKind kind, std::string_view what = {}) {
    if (!at(kind)) fail(what.empty() ? std::string(to_string(kind)) : std::string(what));
    return advance();
  }

  Item item() {
    const Token& head = peek();
    switch (head.kind) {
      case TokenKind::Startshape: {
        advance();
        StartShape s;
        s.pos = head.pos;
        s.shape = expect(TokenKind::Identifier, "shape name").text;
        if (accept(TokenKind::LParen)) s.args = expr_list();
        return s;
      }
      case TokenKind::Shape: {
        advance();
        ShapeDef s;
        s.pos = head.pos;
        s.name = expect(TokenKind::Identifier, "shape name").text;
        if (accept(TokenKind::LParen)) s.params = ident_list();
        s.body = block();
        return s;
      }
      case TokenKind::Identifier: {
        if (peek(1).kind == TokenKind::Assign) {
          advance();
          advance();
          ConstantDef c;
          c.pos = head.pos;
          c.name = head.text;
          c.value = expr();
          return c;
        }
        if (peek(1).kind == TokenKind::LParen) {
          advance();
          advance();
          FunctionDef f;
          f.pos = head.pos;
          f.name = head.text;
          f.params = ident_list();
          expect(TokenKind::Assign);
          f.body = expr();
          return f;
        }
        advance();
        fail("'=' or '(' after '" + head.text + "'");
      }
      default:
        fail("'startshape', 'shape' or a definition");
    }
  }

  // After '(' has been consumed.
  std::vector<std::string> ident_list() {
    std::vector<std::string> names;
    if (accept(TokenKind::RParen)) return names;
    do {
      names.push_back(expect(TokenKind::Identifier, "parameter name").text);
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RParen, "',' or ')'");
    return names;
  }

  // After '(' has been consumed.
  std::vector<Expr> expr_list() {
    std::vector<Expr> args;
    if (accept(TokenKind::RParen)) return args;
    do {
      args.push_back(expr());
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RParen, "',' or ')'");
    return args;
  }

  Block block() {
    expect(TokenKind::LBrace);
    Block body;
    while (!at(TokenKind::RBrace)) {
      if (at(TokenKind::End)) fail("'}'");
      body.push_back(statement());
    }
    advance();
    return body;
  }

  Statement statement() {
    const Token& head = peek();
    Statement s;
    s.pos = head.pos;
    switch (head.kind) {
      case TokenKind::Loop: {
        advance();
        LoopStmt loop;
        if (at(TokenKind::Identifier) && peek(1).kind == TokenKind::Assign) {
          loop.variable = advance().text;
          advance();
        }
        loop.count = expr();
        loop.adjustments = adjustment_list();
        loop.body = block();
        s.node = std::move(loop);
        return s;
      }
      case TokenKind::If: {
        advance();
        IfStmt cond;
        expect(TokenKind::LParen);
        cond.condition = expr();
        expect(TokenKind::RParen);
        cond.then_body = block();
        if (accept(TokenKind::Else)) cond.else_body = block();
        s.node = std::move(cond);
        return s;
      }
      case TokenKind::Square:
      case TokenKind::Fill: {
        advance();
        PrimitiveStmt prim;
        prim.kind = head.kind == TokenKind::Square ? PrimitiveKind::Square : PrimitiveKind::Fill;
        prim.adjustments = adjustment_list();
        s.node = std::move(prim);
        return s;
      }
      case TokenKind::Identifier: {
        if (peek(1).kind == TokenKind::Assign) {
          advance();
          advance();
          s.node = BindStmt{head.text, expr()};
          return s;
        }
        if (peek(1).kind == TokenKind::LParen) {
          advance();
          advance();
          CallStmt call;
          call.shape = head.text;
          call.args = expr_list();
          call.adjustments = adjustment_list();
          s.node = std::move(call);
          return s;
        }
        advance();
        fail("'=' or '(' after '" + head.text + "'");
      }
      default:
        fail("a statement");
    }
  }

  std::vector<Adjustment> adjustment_list() {
    expect(TokenKind::LBracket);
    std::vector<Adjustment> adjs;
    while (!accept(TokenKind::RBracket)) adjs.push_back(adjustment());
    return adjs;
  }

  static bool is_adjustment_keyword(const Token& t) {
    return t.kind == TokenKind::Identifier && adjustment_keywords().count(t.text) != 0;
  }

  static bool starts_expression(const Token& t) {
    switch (t.kind) {
      case TokenKind::Number:
      case TokenKind::Identifier:
      case TokenKind::If:
      case TokenKind::LParen:
      case TokenKind::Minus: return true;
      default: return false;
    }
  }

  Adjustment adjustment() {
    const Token& key = peek();
    if (key.kind != TokenKind::Identifier) fail("an adjustment or ']'");
    auto it = adjustment_keywords().find(key.text);
    if (it == adjustment_keywords().end()) {
      throw SceneError(ErrorKind::Syntax, "unknown adjustment '" + key.text + "'", key.pos);
    }
    advance();
    Adjustment adj;
    adj.kind = it->second;
    adj.pos = key.pos;
    if (!starts_expression(peek())) {
      throw SceneError(ErrorKind::Syntax,
                       "adjustment '" + key.text + "' requires a value expression", key.pos);
    }
    const bool two_valued = adj.kind == AdjustmentKind::X || adj.kind == AdjustmentKind::Size;
    adj.values.push_back(expr(two_valued));
    if (two_valued && starts_expression(peek()) && !is_adjustment_keyword(peek())) {
      adj.values.push_back(expr(true));
    }
    return adj;
  }

  // `split_values`: inside "x a b" / "size a b", a '-' written with space
  // before it and none after starts the next value instead of subtracting.
  Expr expr(bool split_values = false) { return binary(1, split_values); }

  Expr binary(int min_prec, bool split_values) {
    Expr lhs = unary(split_values);
    while (true) {
      const Token& op = peek();
      const int prec = precedence(op.kind);
      if (prec == 0 || prec < min_prec) break;
      if (split_values && op.kind == TokenKind::Minus && op.space_before && !op.space_after) break;
      advance();
      Expr rhs = binary(prec + 1, split_values);
      lhs = Expr::make_binary(binary_op(op.kind), std::move(lhs), std::move(rhs), op.pos);
    }
    return lhs;
  }

  Expr unary(bool split_values) {
    if (at(TokenKind::Minus)) {
      const SourcePos pos = advance().pos;
      return Expr::make_negate(unary(split_values), pos);
    }
    return atom();
  }

  Expr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
        advance();
        return Expr::make_number(t.number, t.pos);
      case TokenKind::Identifier:
        advance();
        if (accept(TokenKind::LParen)) return Expr::make_call(t.text, expr_list(), t.pos);
        return Expr::make_name(t.text, t.pos);
      case TokenKind::If: {
        advance();
        expect(TokenKind::LParen, "'(' after 'if'");
        std::vector<Expr> args = expr_list();
        if (args.size() != 3) {
          throw SceneError(ErrorKind::Syntax, "if(...) takes exactly 3 arguments", t.pos);
        }
        return Expr::make_if(std::move(args[0]), std::move(args[1]), std::move(args[2]), t.pos);
      }
      case TokenKind::LParen: {
        advance();
        Expr inner = expr();
        expect(TokenKind::RParen);
        return inner;
      }
      default:
        fail("an expression");
    }
  }

  std::span<const Token> toks_;
  std::size_t i_ = 0;
  Token end_;
};

}  // namespace

SceneProgram parse(std::span<const Token> tokens) { return Parser(tokens).program(); }

SceneProgram load_scene(std::string_view source) {
  const std::vector<Token> tokens = tokenize(source);
  SceneProgram program = parse(tokens);
  check_program(program);
  return program;
}

}  // namespace juliart::scene
