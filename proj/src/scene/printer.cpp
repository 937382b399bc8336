#include <charconv>
#include <string>

#include "juliart/scene/parser.hpp"

namespace juliart::scene {

namespace {

constexpr int kAtomPrec = 7;
constexpr int kNegatePrec = 6;

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Less:
    case BinaryOp::LessEqual:
    case BinaryOp::Greater:
    case BinaryOp::GreaterEqual:
    case BinaryOp::Equal:
    case BinaryOp::NotEqual: return 3;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 4;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 5;
  }
  return 0;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void print_expr(std::string& out, const Expr& e, int parent_prec, bool right_operand);

void print_args(std::string& out, const std::vector<Expr>& args) {
  out += '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    print_expr(out, args[i], 0, false);
  }
  out += ')';
}

void print_expr(std::string& out, const Expr& e, int parent_prec, bool right_operand) {
  switch (e.kind) {
    case ExprKind::Number:
      out += format_number(e.number);
      return;
    case ExprKind::Name:
      out += e.name;
      return;
    case ExprKind::Call:
      out += e.name;
      print_args(out, e.args);
      return;
    case ExprKind::If:
      out += "if";
      print_args(out, e.args);
      return;
    case ExprKind::Negate:
      out += '-';
      print_expr(out, e.args[0], kNegatePrec, false);
      return;
    case ExprKind::Binary: {
      const int prec = precedence(e.op);
      const bool parens = prec < parent_prec || (prec == parent_prec && right_operand);
      if (parens) out += '(';
      print_expr(out, e.args[0], prec, false);
      out += ' ';
      out += to_string(e.op);
      out += ' ';
      print_expr(out, e.args[1], prec, true);
      if (parens) out += ')';
      return;
    }
  }
}

// Adjustment values sit in a space-separated list, so anything that is not a
// single atom gets parentheses.
void print_value(std::string& out, const Expr& e) {
  const bool atomic = e.kind != ExprKind::Binary && e.kind != ExprKind::Negate;
  if (!atomic) out += '(';
  print_expr(out, e, 0, false);
  if (!atomic) out += ')';
}

void print_adjustments(std::string& out, const std::vector<Adjustment>& adjs) {
  out += '[';
  for (std::size_t i = 0; i < adjs.size(); ++i) {
    if (i) out += ' ';
    out += to_string(adjs[i].kind);
    for (const auto& v : adjs[i].values) {
      out += ' ';
      print_value(out, v);
    }
  }
  out += ']';
}

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 4, ' '); }

void print_block(std::string& out, const Block& block, int depth);

void print_statement(std::string& out, const Statement& s, int depth) {
  indent(out, depth);
  if (const auto* loop = std::get_if<LoopStmt>(&s.node)) {
    out += "loop ";
    if (loop->variable) out += *loop->variable + " = ";
    print_expr(out, loop->count, 0, false);
    out += ' ';
    print_adjustments(out, loop->adjustments);
    out += ' ';
    print_block(out, loop->body, depth);
  } else if (const auto* cond = std::get_if<IfStmt>(&s.node)) {
    out += "if (";
    print_expr(out, cond->condition, 0, false);
    out += ") ";
    print_block(out, cond->then_body, depth);
    if (cond->else_body) {
      out += " else ";
      print_block(out, *cond->else_body, depth);
    }
  } else if (const auto* bind = std::get_if<BindStmt>(&s.node)) {
    out += bind->name + " = ";
    print_expr(out, bind->value, 0, false);
  } else if (const auto* prim = std::get_if<PrimitiveStmt>(&s.node)) {
    out += prim->kind == PrimitiveKind::Square ? "SQUARE" : "FILL";
    print_adjustments(out, prim->adjustments);
  } else if (const auto* call = std::get_if<CallStmt>(&s.node)) {
    out += call->shape;
    print_args(out, call->args);
    out += ' ';
    print_adjustments(out, call->adjustments);
  }
  out += '\n';
}

void print_block(std::string& out, const Block& block, int depth) {
  if (block.empty()) {
    out += "{}";
    return;
  }
  out += "{\n";
  for (const auto& s : block) print_statement(out, s, depth + 1);
  indent(out, depth);
  out += '}';
}

void print_params(std::string& out, const std::vector<std::string>& params) {
  out += '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i];
  }
  out += ')';
}

struct ItemPrinter {
  std::string& out;

  void operator()(const StartShape& s) const {
    out += "startshape " + s.shape;
    if (!s.args.empty()) print_args(out, s.args);
  }
  void operator()(const ConstantDef& c) const {
    out += c.name + " = ";
    print_expr(out, c.value, 0, false);
  }
  void operator()(const FunctionDef& f) const {
    out += f.name;
    print_params(out, f.params);
    out += " = ";
    print_expr(out, f.body, 0, false);
  }
  void operator()(const ShapeDef& s) const {
    out += "shape " + s.name;
    if (!s.params.empty()) print_params(out, s.params);
    out += ' ';
    print_block(out, s.body, 0);
  }
};

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::string out;
  print_expr(out, expr, 0, false);
  return out;
}

std::string pretty_print(const SceneProgram& program) {
  std::string out;
  for (const auto& item : program.items) {
    std::visit(ItemPrinter{out}, item);
    out += '\n';
  }
  return out;
}

}  // namespace juliart::scene
