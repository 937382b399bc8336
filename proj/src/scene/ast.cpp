#include "juliart/scene/ast.hpp"

#include <cmath>

namespace juliart::scene {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Less: return "<";
    case BinaryOp::LessEqual: return "<=";
    case BinaryOp::Greater: return ">";
    case BinaryOp::GreaterEqual: return ">=";
    case BinaryOp::Equal: return "==";
    case BinaryOp::NotEqual: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

std::string_view to_string(AdjustmentKind kind) {
  switch (kind) {
    case AdjustmentKind::X: return "x";
    case AdjustmentKind::Y: return "y";
    case AdjustmentKind::Rotate: return "r";
    case AdjustmentKind::Size: return "size";
    case AdjustmentKind::Hue: return "h";
    case AdjustmentKind::Saturation: return "sat";
    case AdjustmentKind::Brightness: return "b";
  }
  return "?";
}

Expr Expr::make_number(double v, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Number;
  e.number = v;
  e.pos = pos;
  return e;
}

Expr Expr::make_name(std::string name, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Name;
  e.name = std::move(name);
  e.pos = pos;
  return e;
}

Expr Expr::make_negate(Expr operand, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Negate;
  e.args.push_back(std::move(operand));
  e.pos = pos;
  return e;
}

Expr Expr::make_binary(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  e.pos = pos;
  return e;
}

Expr Expr::make_if(Expr cond, Expr then, Expr otherwise, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::If;
  e.args.push_back(std::move(cond));
  e.args.push_back(std::move(then));
  e.args.push_back(std::move(otherwise));
  e.pos = pos;
  return e;
}

Expr Expr::make_call(std::string name, std::vector<Expr> args, SourcePos pos) {
  Expr e;
  e.kind = ExprKind::Call;
  e.name = std::move(name);
  e.args = std::move(args);
  e.pos = pos;
  return e;
}

namespace {

template <typename T, typename Eq>
bool same_list(const std::vector<T>& a, const std::vector<T>& b, Eq eq) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!eq(a[i], b[i])) return false;
  }
  return true;
}

bool same_exprs(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  return same_list(a, b, [](const Expr& x, const Expr& y) { return same_structure(x, y); });
}

bool same_adjustments(const std::vector<Adjustment>& a, const std::vector<Adjustment>& b) {
  return same_list(a, b, [](const Adjustment& x, const Adjustment& y) {
    return x.kind == y.kind && same_exprs(x.values, y.values);
  });
}

bool same_block(const Block& a, const Block& b);

struct SameStatement {
  bool operator()(const LoopStmt& a, const LoopStmt& b) const {
    return a.variable == b.variable && same_structure(a.count, b.count) &&
           same_adjustments(a.adjustments, b.adjustments) && same_block(a.body, b.body);
  }
  bool operator()(const IfStmt& a, const IfStmt& b) const {
    if (!same_structure(a.condition, b.condition) || !same_block(a.then_body, b.then_body)) return false;
    if (a.else_body.has_value() != b.else_body.has_value()) return false;
    return !a.else_body || same_block(*a.else_body, *b.else_body);
  }
  bool operator()(const BindStmt& a, const BindStmt& b) const {
    return a.name == b.name && same_structure(a.value, b.value);
  }
  bool operator()(const PrimitiveStmt& a, const PrimitiveStmt& b) const {
    return a.kind == b.kind && same_adjustments(a.adjustments, b.adjustments);
  }
  bool operator()(const CallStmt& a, const CallStmt& b) const {
    return a.shape == b.shape && same_exprs(a.args, b.args) &&
           same_adjustments(a.adjustments, b.adjustments);
  }
  template <typename A, typename B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};

bool same_block(const Block& a, const Block& b) {
  return same_list(a, b, [](const Statement& x, const Statement& y) {
    return std::visit(SameStatement{}, x.node, y.node);
  });
}

struct SameItem {
  bool operator()(const StartShape& a, const StartShape& b) const {
    return a.shape == b.shape && same_exprs(a.args, b.args);
  }
  bool operator()(const ConstantDef& a, const ConstantDef& b) const {
    return a.name == b.name && same_structure(a.value, b.value);
  }
  bool operator()(const FunctionDef& a, const FunctionDef& b) const {
    return a.name == b.name && a.params == b.params && same_structure(a.body, b.body);
  }
  bool operator()(const ShapeDef& a, const ShapeDef& b) const {
    return a.name == b.name && a.params == b.params && same_block(a.body, b.body);
  }
  template <typename A, typename B>
  bool operator()(const A&, const B&) const {
    return false;
  }
};

template <typename T>
const T* find_item(const std::vector<Item>& items, std::string_view name) {
  for (const auto& item : items) {
    if (const auto* p = std::get_if<T>(&item); p && p->name == name) return p;
  }
  return nullptr;
}

template <typename T>
std::size_t count_items(const std::vector<Item>& items) {
  std::size_t n = 0;
  for (const auto& item : items) n += std::holds_alternative<T>(item) ? 1 : 0;
  return n;
}

}  // namespace

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Number:
      // Bitwise-equal reals; NaN literals cannot be written.
      return a.number == b.number && std::signbit(a.number) == std::signbit(b.number);
    case ExprKind::Name:
      return a.name == b.name;
    case ExprKind::Binary:
      return a.op == b.op && same_exprs(a.args, b.args);
    case ExprKind::Call:
      return a.name == b.name && same_exprs(a.args, b.args);
    case ExprKind::Negate:
    case ExprKind::If:
      return same_exprs(a.args, b.args);
  }
  return false;
}

bool same_structure(const SceneProgram& a, const SceneProgram& b) {
  return same_list(a.items, b.items,
                   [](const Item& x, const Item& y) { return std::visit(SameItem{}, x, y); });
}

const StartShape* SceneProgram::start_shape() const {
  for (const auto& item : items) {
    if (const auto* p = std::get_if<StartShape>(&item)) return p;
  }
  return nullptr;
}

const ConstantDef* SceneProgram::find_constant(std::string_view name) const {
  return find_item<ConstantDef>(items, name);
}
const FunctionDef* SceneProgram::find_function(std::string_view name) const {
  return find_item<FunctionDef>(items, name);
}
const ShapeDef* SceneProgram::find_shape(std::string_view name) const {
  return find_item<ShapeDef>(items, name);
}

std::size_t SceneProgram::count_constants() const { return count_items<ConstantDef>(items); }
std::size_t SceneProgram::count_functions() const { return count_items<FunctionDef>(items); }
std::size_t SceneProgram::count_shapes() const { return count_items<ShapeDef>(items); }
std::size_t SceneProgram::count_start_shapes() const { return count_items<StartShape>(items); }

void override_constant(SceneProgram& program, std::string_view name, double value) {
  for (auto& item : program.items) {
    auto* def = std::get_if<ConstantDef>(&item);
    if (!def || def->name != name) continue;
    const SourcePos pos = def->value.pos;
    // Negative values are spelled as a negated literal, which is how the
    // parser reads them back.
    def->value = std::signbit(value) ? Expr::make_negate(Expr::make_number(-value, pos), pos)
                                     : Expr::make_number(value, pos);
    return;
  }
  throw SceneError(ErrorKind::Semantic, "no constant named '" + std::string(name) + "' to override");
}

}  // namespace juliart::scene
