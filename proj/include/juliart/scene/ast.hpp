#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "juliart/diagnostic.hpp"

namespace juliart::scene {

enum class ExprKind {
  Number,
  Name,
  Negate,
  Binary,
  If,    // if(cond, a, b)
  Call,  // rand(lo, hi) or a user function
};

enum class BinaryOp {
  Add,
  Sub,
  Mul,
  Div,
  Less,
  LessEqual,
  Greater,
  GreaterEqual,
  Equal,
  NotEqual,
  And,
  Or,
};

std::string_view to_string(BinaryOp op);

struct Expr {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;
  std::string name;  // Name, Call
  BinaryOp op = BinaryOp::Add;
  std::vector<Expr> args;  // operands / call arguments
  SourcePos pos;

  static Expr make_number(double v, SourcePos pos = {});
  static Expr make_name(std::string name, SourcePos pos = {});
  static Expr make_negate(Expr operand, SourcePos pos = {});
  static Expr make_binary(BinaryOp op, Expr lhs, Expr rhs, SourcePos pos = {});
  static Expr make_if(Expr cond, Expr then, Expr otherwise, SourcePos pos = {});
  static Expr make_call(std::string name, std::vector<Expr> args, SourcePos pos = {});
};

/// Structural equality: ignores source positions.
bool same_structure(const Expr& a, const Expr& b);

enum class AdjustmentKind {
  X,  // x dx [dy]
  Y,
  Rotate,
  Size,  // size w [h]
  Hue,
  Saturation,
  Brightness,
};

std::string_view to_string(AdjustmentKind kind);

struct Adjustment {
  AdjustmentKind kind = AdjustmentKind::X;
  std::vector<Expr> values;  // one, or two for X and Size
  SourcePos pos;
};

enum class PrimitiveKind { Square, Fill };

struct Statement;
using Block = std::vector<Statement>;

struct LoopStmt {
  std::optional<std::string> variable;
  Expr count;
  std::vector<Adjustment> adjustments;
  Block body;
};

struct IfStmt {
  Expr condition;
  Block then_body;
  std::optional<Block> else_body;
};

struct BindStmt {
  std::string name;
  Expr value;
};

struct PrimitiveStmt {
  PrimitiveKind kind = PrimitiveKind::Square;
  std::vector<Adjustment> adjustments;
};

struct CallStmt {
  std::string shape;
  std::vector<Expr> args;
  std::vector<Adjustment> adjustments;
};

struct Statement {
  std::variant<LoopStmt, IfStmt, BindStmt, PrimitiveStmt, CallStmt> node;
  SourcePos pos;
};

struct StartShape {
  std::string shape;
  std::vector<Expr> args;
  SourcePos pos;
};

struct ConstantDef {
  std::string name;
  Expr value;
  SourcePos pos;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> params;
  Expr body;
  SourcePos pos;
};

struct ShapeDef {
  std::string name;
  std::vector<std::string> params;
  Block body;
  SourcePos pos;
};

using Item = std::variant<StartShape, ConstantDef, FunctionDef, ShapeDef>;

/// A parsed scene file: its top-level items in source order.
struct SceneProgram {
  std::vector<Item> items;

  const StartShape* start_shape() const;
  const ConstantDef* find_constant(std::string_view name) const;
  const FunctionDef* find_function(std::string_view name) const;
  const ShapeDef* find_shape(std::string_view name) const;

  std::size_t count_constants() const;
  std::size_t count_functions() const;
  std::size_t count_shapes() const;
  std::size_t count_start_shapes() const;
};

bool same_structure(const SceneProgram& a, const SceneProgram& b);

/// Replaces the definition of constant `name` by a numeric literal.
/// Throws SceneError(Semantic) when no such constant exists.
void override_constant(SceneProgram& program, std::string_view name, double value);

}  // namespace juliart::scene
