#include "juliart/scene/machine.hpp"

#include <algorithm>
#include <string>

namespace juliart::scene {

namespace {

constexpr std::uint32_t kCheckInterval = 1u << 14;

[[noreturn]] void eval_error(const std::string& message, SourcePos pos) {
  throw SceneError(ErrorKind::Evaluation, message, pos);
}

}  // namespace

Machine::Machine(const CompiledScene& scene, std::span<const double> globals, InvocationBudget* budget,
                 std::uint32_t max_depth)
    : chunks_(scene.chunks), globals_(globals), budget_(budget), max_depth_(max_depth), stack_(256) {}

void Machine::flush() {
  if (!budget_) return;
  const std::uint64_t pending = invocations_ - reported_;
  reported_ = invocations_;
  const std::uint64_t total = budget_->used.fetch_add(pending, std::memory_order_relaxed) + pending;
  if (total > budget_->limit) {
    throw SceneError(ErrorKind::Limit,
                     "escape-iteration cap of " + std::to_string(budget_->limit) + " exceeded");
  }
}

void Machine::checkpoint(SourcePos pos) {
  until_check_ = kCheckInterval;
  try {
    flush();
  } catch (SceneError& e) {
    throw SceneError(e.kind(), e.message(), pos);
  }
}

// Same operations, in the same order, as the bytecode of the idiom; the
// first invocation has already been counted by the caller.
double Machine::run_escape(const EscapeIdiom& idiom, const double* args) {
  double n = args[0];
  double x = args[1];
  double y = args[2];
  const double a = args[3];
  const double b = args[4];
  const double limit =
      idiom.limit_global >= 0 ? globals_[static_cast<std::size_t>(idiom.limit_global)] : idiom.limit_value;
  for (;;) {
    if (!(n < limit)) return n;
    if (!(x * x + y * y < 4.0)) return n;
    const double next_x = x * x - y * y + a;
    const double next_y = 2.0 * x * y + b;
    n = n + 1.0;
    x = next_x;
    y = next_y;
    ++invocations_;
    if (--until_check_ == 0) checkpoint(idiom.call_pos);
  }
}

double Machine::run(ChunkId entry, std::span<const double> locals, RandomStream& rng) {
  frames_.clear();
  const Chunk* chunk = &chunks_[static_cast<std::size_t>(entry)];
  if (stack_.size() < static_cast<std::size_t>(chunk->max_stack) + 1) {
    stack_.resize(static_cast<std::size_t>(chunk->max_stack) * 2 + 16);
  }

  double* stack = stack_.data();
  double* sp = stack;
  std::size_t base = 0;
  bool external = true;
  const double* lp = locals.data();
  const Instruction* code = chunk->code.data();
  const Instruction* ip = code;

  // Plain macros rather than lambdas: capturing sp and ip by reference would
  // keep them out of registers.
#define here() (chunk->positions[static_cast<std::size_t>(ip - code - 1)])
  // Makes room for `needed` slots above the current stack top.
#define reserve(needed)                                                   \
  do {                                                                    \
    const std::size_t top = static_cast<std::size_t>(sp - stack);         \
    if (top + (needed) > stack_.size()) {                                 \
      stack_.resize(std::max(stack_.size() * 2, top + (needed) + 16));    \
      stack = stack_.data();                                              \
      sp = stack + top;                                                   \
      if (!external) lp = stack + base;                                   \
    }                                                                     \
  } while (0)

  // Direct-threaded dispatch; the table follows the OpCode order.
#define JULIART_BINARY_LABELS(suffix)                                                                  \
  &&op_Add##suffix, &&op_Sub##suffix, &&op_Mul##suffix, &&op_Div##suffix, &&op_Less##suffix,        \
      &&op_LessEqual##suffix, &&op_Greater##suffix, &&op_GreaterEqual##suffix, &&op_Equal##suffix, \
      &&op_NotEqual##suffix
  static void* const dispatch[] = {
      &&op_Constant,     &&op_Global, &&op_Local, JULIART_BINARY_LABELS(), JULIART_BINARY_LABELS(L),
      JULIART_BINARY_LABELS(G), JULIART_BINARY_LABELS(K), &&op_Negate, &&op_AndJump, &&op_OrJump,
      &&op_Truth,        &&op_JumpIfFalse, &&op_Jump, &&op_Rand, &&op_Call, &&op_TailCall, &&op_Return,
  };
  static_assert(sizeof dispatch / sizeof dispatch[0] == static_cast<std::size_t>(OpCode::Return) + 1);
#undef JULIART_BINARY_LABELS

  const Instruction* in = nullptr;
#define NEXT()         \
  do {                 \
    in = ip++;         \
    goto* dispatch[static_cast<int>(in->op)]; \
  } while (0)

  // Binary operator over the second-from-top and a right operand `rhs`.
#define BINARY(name, rhs_expr, pops, result_expr) \
  op_##name : {                                   \
    sp -= (pops);                                 \
    const double rhs = (rhs_expr);                \
    const double lhs = sp[-1];                    \
    sp[-1] = (result_expr);                       \
    NEXT();                                       \
  }
#define DIVIDE(name, rhs_expr, pops)                          \
  op_##name : {                                               \
    sp -= (pops);                                             \
    const double rhs = (rhs_expr);                            \
    if (rhs == 0.0) eval_error("division by zero", here());   \
    sp[-1] = sp[-1] / rhs;                                    \
    NEXT();                                                   \
  }
#define BINARY_FAMILY(suffix, rhs_expr, pops)                                  \
  BINARY(Add##suffix, rhs_expr, pops, lhs + rhs)                               \
  BINARY(Sub##suffix, rhs_expr, pops, lhs - rhs)                               \
  BINARY(Mul##suffix, rhs_expr, pops, lhs * rhs)                               \
  DIVIDE(Div##suffix, rhs_expr, pops)                                          \
  BINARY(Less##suffix, rhs_expr, pops, lhs < rhs ? 1.0 : 0.0)                  \
  BINARY(LessEqual##suffix, rhs_expr, pops, lhs <= rhs ? 1.0 : 0.0)            \
  BINARY(Greater##suffix, rhs_expr, pops, lhs > rhs ? 1.0 : 0.0)               \
  BINARY(GreaterEqual##suffix, rhs_expr, pops, lhs >= rhs ? 1.0 : 0.0)         \
  BINARY(Equal##suffix, rhs_expr, pops, lhs == rhs ? 1.0 : 0.0)                \
  BINARY(NotEqual##suffix, rhs_expr, pops, lhs != rhs ? 1.0 : 0.0)

  NEXT();

op_Constant:
  *sp++ = in->value;
  NEXT();
op_Global:
  *sp++ = globals_[static_cast<std::size_t>(in->operand)];
  NEXT();
op_Local:
  *sp++ = lp[in->operand];
  NEXT();

  BINARY_FAMILY(, sp[0], 1)
  BINARY_FAMILY(L, lp[in->operand], 0)
  BINARY_FAMILY(G, globals_[static_cast<std::size_t>(in->operand)], 0)
  BINARY_FAMILY(K, in->value, 0)

op_Negate:
  sp[-1] = -sp[-1];
  NEXT();
op_AndJump:
  if (sp[-1] == 0.0) {
    sp[-1] = 0.0;
    ip = code + in->operand;
  } else {
    --sp;
  }
  NEXT();
op_OrJump:
  if (sp[-1] != 0.0) {
    sp[-1] = 1.0;
    ip = code + in->operand;
  } else {
    --sp;
  }
  NEXT();
op_Truth:
  sp[-1] = sp[-1] != 0.0 ? 1.0 : 0.0;
  NEXT();
op_JumpIfFalse:
  --sp;
  if (*sp == 0.0) ip = code + in->operand;
  NEXT();
op_Jump:
  ip = code + in->operand;
  NEXT();
op_Rand: {
  --sp;
  const double lo = sp[-1];
  const double hi = sp[0];
  const double v = rng.uniform(lo, hi);
  sp[-1] = v;
  if (trace_) trace_->push_back({here(), lo, hi, v});
  NEXT();
}
op_Call: {
  ++invocations_;
  if (--until_check_ == 0) checkpoint(here());
  if (frames_.size() >= max_depth_) {
    throw SceneError(ErrorKind::Limit, "recursion depth cap of " + std::to_string(max_depth_) + " exceeded",
                     here());
  }
  const Chunk* callee = &chunks_[static_cast<std::size_t>(in->operand)];
  if (callee->escape.present && native_idioms_) {
    sp -= 5;
    *sp = run_escape(callee->escape, sp);
    ++sp;
    NEXT();
  }
  frames_.push_back({chunk, ip, base, external});
  reserve(static_cast<std::size_t>(callee->max_stack));
  base = static_cast<std::size_t>(sp - stack) - static_cast<std::size_t>(callee->arity);
  external = false;
  lp = stack + base;
  chunk = callee;
  code = chunk->code.data();
  ip = code;
  NEXT();
}
op_TailCall: {
  ++invocations_;
  if (--until_check_ == 0) checkpoint(here());
  const Chunk* callee = &chunks_[static_cast<std::size_t>(in->operand)];
  if (callee->escape.present && native_idioms_) {
    sp -= 5;
    *sp = run_escape(callee->escape, sp);
    ++sp;
    goto op_Return;
  }
  const auto arity = static_cast<std::size_t>(callee->arity);
  double* frame = stack + base;
  std::copy(sp - arity, sp, frame);
  sp = frame + arity;
  reserve(static_cast<std::size_t>(callee->max_stack));
  chunk = callee;
  code = chunk->code.data();
  ip = code;
  NEXT();
}
op_Return: {
  const double result = sp[-1];
  if (frames_.empty()) return result;
  const Frame f = frames_.back();
  frames_.pop_back();
  sp = stack + base;
  *sp++ = result;
  chunk = f.chunk;
  code = chunk->code.data();
  ip = f.return_ip;
  base = f.base;
  external = f.external;
  lp = external ? locals.data() : stack + base;
  NEXT();
}

#undef BINARY_FAMILY
#undef DIVIDE
#undef BINARY
#undef NEXT
#undef reserve
#undef here
}

}  // namespace juliart::scene
