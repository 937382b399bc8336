#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "juliart/scene/ast.hpp"

namespace juliart::scene {

enum class OpCode : std::uint8_t {
  Constant,      // push value
  Global,        // push globals[operand]
  Local,         // push locals[operand]
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
  // The binary operators again, taking the right operand from
  // locals[operand] (L), globals[operand] (G) or value (K) instead of the
  // stack. The emitter fuses a push followed by an operator into these.
  AddL, SubL, MulL, DivL, LessL, LessEqualL, GreaterL, GreaterEqualL, EqualL, NotEqualL,
  AddG, SubG, MulG, DivG, LessG, LessEqualG, GreaterG, GreaterEqualG, EqualG, NotEqualG,
  AddK, SubK, MulK, DivK, LessK, LessEqualK, GreaterK, GreaterEqualK, EqualK, NotEqualK,
  Negate,
  AndJump,       // top == 0 ? (keep 0, jump) : pop
  OrJump,        // top != 0 ? (top = 1, jump) : pop
  Truth,         // top = top != 0
  JumpIfFalse,   // pop; jump when zero
  Jump,
  Rand,          // pop hi, lo; push uniform draw
  Call,          // operand = chunk of the callee; arguments on the stack
  TailCall,
  Return,
};

inline constexpr int kBinaryOpCount = 10;

/// True for instructions whose operand indexes the globals.
constexpr bool reads_global(OpCode op) {
  return op == OpCode::Global || (op >= OpCode::AddG && op <= OpCode::NotEqualG);
}

struct Instruction {
  OpCode op;
  std::int32_t operand = 0;
  double value = 0.0;
};

/// Marks a user function of the exact escape-time shape
///   f(n, x, y, a, b) = if((n < L) && (x*x + y*y < 4),
///                         f(n + 1, x*x - y*y + a, 2*x*y + b, a, b), n)
/// where L is a constant or a literal. The machine may run such a function
/// as a native loop performing the same floating-point operations in the
/// same order, so results and invocation counts are unchanged.
struct EscapeIdiom {
  bool present = false;
  int limit_global = -1;  // globals slot of L, or -1 when L is a literal
  double limit_value = 0.0;
  SourcePos call_pos;  // the recursive call, for limit diagnostics
};

/// One straight-line unit of bytecode: a user function body, a constant
/// initializer, or one expression inside a shape.
struct Chunk {
  std::string name;
  std::vector<Instruction> code;
  std::vector<SourcePos> positions;  // parallel to code
  int arity = 0;                     // user functions only
  int max_stack = 0;
  EscapeIdiom escape;
};

using ChunkId = std::int32_t;

struct CompiledAdjustment {
  AdjustmentKind kind = AdjustmentKind::X;
  std::vector<ChunkId> values;
  SourcePos pos;
};

struct CompiledStatement {
  enum class Kind { Loop, If, Bind, Square, Fill, Call };

  Kind kind = Kind::Bind;
  SourcePos pos;
  std::uint32_t ordinal = 0;  // index within its block; part of the random-stream path
  ChunkId expr = -1;          // loop count, condition, or bound value
  int slot = -1;              // loop variable or binding
  int shape = -1;             // callee
  std::vector<ChunkId> args;
  std::vector<CompiledAdjustment> adjustments;
  std::vector<CompiledStatement> body;
  std::vector<CompiledStatement> otherwise;
  bool has_else = false;
};

struct CompiledShape {
  std::string name;
  int arity = 0;
  int slot_count = 0;
  std::vector<CompiledStatement> body;
  SourcePos pos;
};

struct CompiledConstant {
  std::string name;
  ChunkId init = -1;
  SourcePos pos;
};

/// Name-resolved, bytecode form of a SceneProgram. Immutable once built and
/// safe to share between render workers.
struct CompiledScene {
  std::vector<Chunk> chunks;
  std::vector<CompiledConstant> constants;  // indexed by global slot
  std::vector<int> constant_order;          // dependency order for initialization
  std::vector<ChunkId> functions;           // chunk of each user function, source order
  std::vector<CompiledShape> shapes;
  int start_shape = -1;
  std::vector<ChunkId> start_args;
  SourcePos start_pos;

  int find_constant(std::string_view name) const;
  int find_shape(std::string_view name) const;
  ChunkId find_function(std::string_view name) const;
};

/// Resolves names and arities and emits bytecode. Throws SceneError(Semantic)
/// for a missing or duplicate startshape, duplicate definitions, unresolved
/// names, arity mismatches and cyclic constants.
CompiledScene compile(const SceneProgram& program);

/// compile() for its diagnostics only.
void check_program(const SceneProgram& program);

/// Compiles a free-standing expression whose unbound names are looked up in
/// `locals` (slot i holds locals[i]) and then in the program's constants.
ChunkId compile_expression(CompiledScene& scene, const Expr& expr, const std::vector<std::string>& locals);

}  // namespace juliart::scene
