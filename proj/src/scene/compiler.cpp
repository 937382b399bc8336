#include "juliart/scene/compiler.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace juliart::scene {

int CompiledScene::find_constant(std::string_view name) const {
  for (std::size_t i = 0; i < constants.size(); ++i) {
    if (constants[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int CompiledScene::find_shape(std::string_view name) const {
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (shapes[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

ChunkId CompiledScene::find_function(std::string_view name) const {
  for (ChunkId id : functions) {
    if (chunks[static_cast<std::size_t>(id)].name == name) return id;
  }
  return -1;
}

namespace {

[[noreturn]] void semantic(std::string message, SourcePos pos) {
  throw SceneError(ErrorKind::Semantic, std::move(message), pos);
}

class Emitter {
 public:
  explicit Emitter(std::string name) { chunk_.name = std::move(name); }

  std::size_t emit(OpCode op, SourcePos pos, int stack_effect, std::int32_t operand = 0,
                   double value = 0.0) {
    chunk_.code.push_back({op, operand, value});
    chunk_.positions.push_back(pos);
    depth_ += stack_effect;
    chunk_.max_stack = std::max(chunk_.max_stack, depth_);
    return chunk_.code.size() - 1;
  }

  void patch_to_here(std::size_t at) {
    chunk_.code[at].operand = static_cast<std::int32_t>(chunk_.code.size());
    label_ = chunk_.code.size();
  }

  /// Emits a binary operator (Add .. NotEqual). When the right operand was a
  /// plain push, and nothing jumps to the operator itself, the two are fused.
  void emit_binary(OpCode op, SourcePos pos) {
    const int offset = static_cast<int>(op) - static_cast<int>(OpCode::Add);
    if (!chunk_.code.empty() && label_ != chunk_.code.size()) {
      Instruction& prev = chunk_.code.back();
      OpCode fused = op;
      if (prev.op == OpCode::Local) fused = static_cast<OpCode>(static_cast<int>(OpCode::AddL) + offset);
      if (prev.op == OpCode::Global) fused = static_cast<OpCode>(static_cast<int>(OpCode::AddG) + offset);
      if (prev.op == OpCode::Constant) fused = static_cast<OpCode>(static_cast<int>(OpCode::AddK) + offset);
      if (fused != op) {
        prev.op = fused;
        chunk_.positions.back() = pos;
        depth_ -= 1;
        return;
      }
    }
    emit(op, pos, -1);
  }
  void adjust_depth(int delta) { depth_ += delta; }

  Chunk finish(SourcePos pos, int arity = 0) {
    emit(OpCode::Return, pos, 0);
    chunk_.arity = arity;
    // Headroom for the arguments a call leaves behind before the callee's
    // frame takes over.
    chunk_.max_stack += 1;
    return std::move(chunk_);
  }

 private:
  Chunk chunk_;
  int depth_ = 0;
  std::size_t label_ = static_cast<std::size_t>(-1);  // last jump target
};

using LocalLookup = std::function<std::optional<int>(const std::string&)>;

class Compiler {
 public:
  explicit Compiler(const SceneProgram& program) : program_(program) {}

  CompiledScene run() {
    declare();
    for (std::size_t f = 0; f < function_defs_.size(); ++f) compile_function(f);
    for (std::size_t c = 0; c < constant_defs_.size(); ++c) compile_constant(c);
    for (std::size_t s = 0; s < shape_defs_.size(); ++s) compile_shape(s);
    compile_start();
    order_constants();
    return std::move(out_);
  }

  // Used by compile_expression on an already compiled scene.
  static ChunkId compile_free(CompiledScene& scene, const Expr& expr, const std::vector<std::string>& locals) {
    SceneProgram empty;
    Compiler c(empty);
    c.out_ = std::move(scene);
    for (std::size_t i = 0; i < c.out_.constants.size(); ++i) c.constants_[c.out_.constants[i].name] = static_cast<int>(i);
    for (ChunkId id : c.out_.functions) c.functions_[c.out_.chunks[static_cast<std::size_t>(id)].name] = id;
    Emitter em("expression");
    LocalLookup lookup = [&](const std::string& name) -> std::optional<int> {
      for (std::size_t i = locals.size(); i-- > 0;) {
        if (locals[i] == name) return static_cast<int>(i);
      }
      return std::nullopt;
    };
    try {
      c.expr(em, expr, lookup, false, false);
    } catch (...) {
      scene = std::move(c.out_);
      throw;
    }
    ChunkId id = c.add_chunk(em.finish(expr.pos));
    scene = std::move(c.out_);
    return id;
  }

 private:
  ChunkId add_chunk(Chunk chunk) {
    out_.chunks.push_back(std::move(chunk));
    return static_cast<ChunkId>(out_.chunks.size() - 1);
  }

  void declare() {
    for (const auto& item : program_.items) {
      if (const auto* s = std::get_if<StartShape>(&item)) {
        if (start_) semantic("duplicate startshape", s->pos);
        start_ = s;
      } else if (const auto* c = std::get_if<ConstantDef>(&item)) {
        if (constants_.count(c->name)) semantic("duplicate constant '" + c->name + "'", c->pos);
        constants_[c->name] = static_cast<int>(constant_defs_.size());
        constant_defs_.push_back(c);
        out_.constants.push_back({c->name, -1, c->pos});
      } else if (const auto* f = std::get_if<FunctionDef>(&item)) {
        if (f->name == "rand") semantic("'rand' is a builtin and cannot be redefined", f->pos);
        if (functions_.count(f->name)) semantic("duplicate function '" + f->name + "'", f->pos);
        check_params(f->params, f->pos);
        Chunk placeholder;
        placeholder.name = f->name;
        placeholder.arity = static_cast<int>(f->params.size());
        const ChunkId id = add_chunk(std::move(placeholder));
        functions_[f->name] = id;
        out_.functions.push_back(id);
        function_defs_.push_back(f);
      } else if (const auto* sh = std::get_if<ShapeDef>(&item)) {
        if (shapes_.count(sh->name)) semantic("duplicate shape '" + sh->name + "'", sh->pos);
        check_params(sh->params, sh->pos);
        shapes_[sh->name] = static_cast<int>(shape_defs_.size());
        shape_defs_.push_back(sh);
        CompiledShape shape;
        shape.name = sh->name;
        shape.arity = static_cast<int>(sh->params.size());
        shape.pos = sh->pos;
        out_.shapes.push_back(std::move(shape));
      }
    }
    if (!start_) semantic("missing startshape", {});
  }

  static void check_params(const std::vector<std::string>& params, SourcePos pos) {
    std::unordered_set<std::string> seen;
    for (const auto& p : params) {
      if (!seen.insert(p).second) semantic("duplicate parameter '" + p + "'", pos);
    }
  }

  void expr(Emitter& em, const Expr& e, const LocalLookup& lookup, bool tail, bool in_function) {
    switch (e.kind) {
      case ExprKind::Number:
        em.emit(OpCode::Constant, e.pos, +1, 0, e.number);
        return;
      case ExprKind::Name: {
        if (auto slot = lookup(e.name)) {
          em.emit(OpCode::Local, e.pos, +1, *slot);
          return;
        }
        if (auto it = constants_.find(e.name); it != constants_.end()) {
          em.emit(OpCode::Global, e.pos, +1, it->second);
          return;
        }
        if (functions_.count(e.name)) semantic("function '" + e.name + "' used without arguments", e.pos);
        semantic("unresolved name '" + e.name + "'", e.pos);
      }
      case ExprKind::Negate:
        expr(em, e.args[0], lookup, false, in_function);
        em.emit(OpCode::Negate, e.pos, 0);
        return;
      case ExprKind::Binary:
        binary(em, e, lookup, in_function);
        return;
      case ExprKind::If: {
        expr(em, e.args[0], lookup, false, in_function);
        const std::size_t to_else = em.emit(OpCode::JumpIfFalse, e.pos, -1);
        expr(em, e.args[1], lookup, tail, in_function);
        const std::size_t to_end = em.emit(OpCode::Jump, e.pos, 0);
        em.patch_to_here(to_else);
        em.adjust_depth(-1);
        expr(em, e.args[2], lookup, tail, in_function);
        em.patch_to_here(to_end);
        return;
      }
      case ExprKind::Call: {
        if (e.name == "rand") {
          if (e.args.size() != 2) semantic("rand() takes 2 arguments", e.pos);
          expr(em, e.args[0], lookup, false, in_function);
          expr(em, e.args[1], lookup, false, in_function);
          em.emit(OpCode::Rand, e.pos, -1);
          return;
        }
        auto it = functions_.find(e.name);
        if (it == functions_.end()) semantic("unresolved function '" + e.name + "'", e.pos);
        const int arity = out_.chunks[static_cast<std::size_t>(it->second)].arity;
        if (static_cast<int>(e.args.size()) != arity) {
          semantic("function '" + e.name + "' takes " + std::to_string(arity) + " arguments, got " +
                       std::to_string(e.args.size()),
                   e.pos);
        }
        for (const auto& a : e.args) expr(em, a, lookup, false, in_function);
        em.emit(tail && in_function ? OpCode::TailCall : OpCode::Call, e.pos, 1 - arity, it->second);
        return;
      }
    }
  }

  void binary(Emitter& em, const Expr& e, const LocalLookup& lookup, bool in_function) {
    if (e.op == BinaryOp::And || e.op == BinaryOp::Or) {
      expr(em, e.args[0], lookup, false, in_function);
      const std::size_t jump =
          em.emit(e.op == BinaryOp::And ? OpCode::AndJump : OpCode::OrJump, e.pos, -1);
      expr(em, e.args[1], lookup, false, in_function);
      em.emit(OpCode::Truth, e.pos, 0);
      em.patch_to_here(jump);
      return;
    }
    expr(em, e.args[0], lookup, false, in_function);
    expr(em, e.args[1], lookup, false, in_function);
    OpCode op = OpCode::Add;
    switch (e.op) {
      case BinaryOp::Add: op = OpCode::Add; break;
      case BinaryOp::Sub: op = OpCode::Sub; break;
      case BinaryOp::Mul: op = OpCode::Mul; break;
      case BinaryOp::Div: op = OpCode::Div; break;
      case BinaryOp::Less: op = OpCode::Less; break;
      case BinaryOp::LessEqual: op = OpCode::LessEqual; break;
      case BinaryOp::Greater: op = OpCode::Greater; break;
      case BinaryOp::GreaterEqual: op = OpCode::GreaterEqual; break;
      case BinaryOp::Equal: op = OpCode::Equal; break;
      case BinaryOp::NotEqual: op = OpCode::NotEqual; break;
      case BinaryOp::And:
      case BinaryOp::Or: break;
    }
    em.emit_binary(op, e.pos);
  }

  void compile_function(std::size_t index) {
    const FunctionDef& f = *function_defs_[index];
    const ChunkId id = functions_.at(f.name);
    Emitter em(f.name);
    LocalLookup lookup = [&](const std::string& name) -> std::optional<int> {
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (f.params[i] == name) return static_cast<int>(i);
      }
      return std::nullopt;
    };
    expr(em, f.body, lookup, true, true);
    Chunk& chunk = out_.chunks[static_cast<std::size_t>(id)];
    chunk = em.finish(f.pos, static_cast<int>(f.params.size()));
    chunk.escape = match_escape_idiom(f);
  }

  EscapeIdiom match_escape_idiom(const FunctionDef& f) const {
    EscapeIdiom none;
    if (f.params.size() != 5) return none;
    const auto& p = f.params;
    auto is_name = [](const Expr& e, const std::string& name) { return e.kind == ExprKind::Name && e.name == name; };
    auto is_number = [](const Expr& e, double v) { return e.kind == ExprKind::Number && e.number == v; };
    auto is_binary = [](const Expr& e, BinaryOp op) { return e.kind == ExprKind::Binary && e.op == op; };
    auto is_product = [&](const Expr& e, const std::string& l, const std::string& r) {
      return is_binary(e, BinaryOp::Mul) && is_name(e.args[0], l) && is_name(e.args[1], r);
    };

    const Expr& body = f.body;
    if (body.kind != ExprKind::If) return none;
    const Expr& cond = body.args[0];
    const Expr& recurse = body.args[1];
    if (!is_name(body.args[2], p[0])) return none;

    // (n < L) && (x*x + y*y < 4)
    if (!is_binary(cond, BinaryOp::And)) return none;
    const Expr& budget = cond.args[0];
    const Expr& bounded = cond.args[1];
    if (!is_binary(budget, BinaryOp::Less) || !is_name(budget.args[0], p[0])) return none;
    if (!is_binary(bounded, BinaryOp::Less) || !is_number(bounded.args[1], 4.0)) return none;
    const Expr& norm = bounded.args[0];
    if (!is_binary(norm, BinaryOp::Add) || !is_product(norm.args[0], p[1], p[1]) ||
        !is_product(norm.args[1], p[2], p[2])) {
      return none;
    }

    EscapeIdiom idiom;
    const Expr& limit = budget.args[1];
    if (limit.kind == ExprKind::Number) {
      idiom.limit_value = limit.number;
    } else if (limit.kind == ExprKind::Name && std::find(p.begin(), p.end(), limit.name) == p.end()) {
      auto it = constants_.find(limit.name);
      if (it == constants_.end()) return none;
      idiom.limit_global = it->second;
    } else {
      return none;
    }

    // f(n + 1, x*x - y*y + a, 2*x*y + b, a, b)
    if (recurse.kind != ExprKind::Call || recurse.name != f.name || recurse.args.size() != 5) return none;
    const auto& a = recurse.args;
    if (!is_binary(a[0], BinaryOp::Add) || !is_name(a[0].args[0], p[0]) || !is_number(a[0].args[1], 1.0)) {
      return none;
    }
    const Expr& re = a[1];
    if (!is_binary(re, BinaryOp::Add) || !is_name(re.args[1], p[3])) return none;
    const Expr& diff = re.args[0];
    if (!is_binary(diff, BinaryOp::Sub) || !is_product(diff.args[0], p[1], p[1]) ||
        !is_product(diff.args[1], p[2], p[2])) {
      return none;
    }
    const Expr& im = a[2];
    if (!is_binary(im, BinaryOp::Add) || !is_name(im.args[1], p[4])) return none;
    const Expr& twice = im.args[0];
    if (!is_binary(twice, BinaryOp::Mul) || !is_name(twice.args[1], p[2])) return none;
    if (!is_binary(twice.args[0], BinaryOp::Mul) || !is_number(twice.args[0].args[0], 2.0) ||
        !is_name(twice.args[0].args[1], p[1])) {
      return none;
    }
    if (!is_name(a[3], p[3]) || !is_name(a[4], p[4])) return none;
    idiom.present = true;
    idiom.call_pos = recurse.pos;
    return idiom;
  }

  ChunkId free_chunk(const Expr& e, const std::string& name, const LocalLookup& lookup) {
    Emitter em(name);
    expr(em, e, lookup, false, false);
    return add_chunk(em.finish(e.pos));
  }

  static std::optional<int> no_locals(const std::string&) { return std::nullopt; }

  void compile_constant(std::size_t index) {
    const ConstantDef& c = *constant_defs_[index];
    out_.constants[index].init = free_chunk(c.value, c.name, no_locals);
  }

  // Lexical scope of a shape body: a stack of (name, slot), popped per block.
  struct ShapeScope {
    std::vector<std::pair<std::string, int>> names;
    int next_slot = 0;

    std::optional<int> find(const std::string& name) const {
      for (auto it = names.rbegin(); it != names.rend(); ++it) {
        if (it->first == name) return it->second;
      }
      return std::nullopt;
    }
    int bind(const std::string& name) {
      names.emplace_back(name, next_slot);
      return next_slot++;
    }
  };

  void compile_shape(std::size_t index) {
    const ShapeDef& def = *shape_defs_[index];
    ShapeScope scope;
    for (const auto& p : def.params) scope.bind(p);
    current_shape_ = def.name;
    auto body = block(def.body, scope);
    CompiledShape& shape = out_.shapes[index];
    shape.body = std::move(body);
    shape.slot_count = scope.next_slot;
  }

  std::vector<CompiledStatement> block(const Block& stmts, ShapeScope& scope) {
    const std::size_t mark = scope.names.size();
    std::vector<CompiledStatement> out;
    out.reserve(stmts.size());
    for (std::size_t i = 0; i < stmts.size(); ++i) {
      out.push_back(statement(stmts[i], scope));
      out.back().ordinal = static_cast<std::uint32_t>(i);
    }
    scope.names.resize(mark);
    return out;
  }

  ChunkId shape_expr(const Expr& e, const ShapeScope& scope) {
    LocalLookup lookup = [&scope](const std::string& name) { return scope.find(name); };
    return free_chunk(e, current_shape_, lookup);
  }

  std::vector<CompiledAdjustment> adjustments(const std::vector<Adjustment>& adjs, const ShapeScope& scope) {
    std::vector<CompiledAdjustment> out;
    for (const auto& a : adjs) {
      CompiledAdjustment c;
      c.kind = a.kind;
      c.pos = a.pos;
      const std::size_t allowed = (a.kind == AdjustmentKind::X || a.kind == AdjustmentKind::Size) ? 2 : 1;
      if (a.values.empty() || a.values.size() > allowed) {
        semantic("adjustment '" + std::string(to_string(a.kind)) + "' takes at most " +
                     std::to_string(allowed) + " value(s)",
                 a.pos);
      }
      for (const auto& v : a.values) c.values.push_back(shape_expr(v, scope));
      out.push_back(std::move(c));
    }
    return out;
  }

  CompiledStatement statement(const Statement& s, ShapeScope& scope) {
    CompiledStatement c;
    c.pos = s.pos;
    if (const auto* loop = std::get_if<LoopStmt>(&s.node)) {
      c.kind = CompiledStatement::Kind::Loop;
      c.expr = shape_expr(loop->count, scope);
      c.adjustments = adjustments(loop->adjustments, scope);
      const std::size_t mark = scope.names.size();
      if (loop->variable) c.slot = scope.bind(*loop->variable);
      c.body = block(loop->body, scope);
      scope.names.resize(mark);
    } else if (const auto* cond = std::get_if<IfStmt>(&s.node)) {
      c.kind = CompiledStatement::Kind::If;
      c.expr = shape_expr(cond->condition, scope);
      c.body = block(cond->then_body, scope);
      if (cond->else_body) {
        c.has_else = true;
        c.otherwise = block(*cond->else_body, scope);
      }
    } else if (const auto* bind = std::get_if<BindStmt>(&s.node)) {
      c.kind = CompiledStatement::Kind::Bind;
      c.expr = shape_expr(bind->value, scope);
      c.slot = scope.bind(bind->name);
    } else if (const auto* prim = std::get_if<PrimitiveStmt>(&s.node)) {
      c.kind = prim->kind == PrimitiveKind::Square ? CompiledStatement::Kind::Square
                                                   : CompiledStatement::Kind::Fill;
      c.adjustments = adjustments(prim->adjustments, scope);
    } else if (const auto* call = std::get_if<CallStmt>(&s.node)) {
      c.kind = CompiledStatement::Kind::Call;
      auto it = shapes_.find(call->shape);
      if (it == shapes_.end()) semantic("unresolved shape '" + call->shape + "'", s.pos);
      c.shape = it->second;
      const int arity = out_.shapes[static_cast<std::size_t>(c.shape)].arity;
      if (static_cast<int>(call->args.size()) != arity) {
        semantic("shape '" + call->shape + "' takes " + std::to_string(arity) + " arguments, got " +
                     std::to_string(call->args.size()),
                 s.pos);
      }
      for (const auto& a : call->args) c.args.push_back(shape_expr(a, scope));
      c.adjustments = adjustments(call->adjustments, scope);
    }
    return c;
  }

  void compile_start() {
    auto it = shapes_.find(start_->shape);
    if (it == shapes_.end()) semantic("startshape refers to unknown shape '" + start_->shape + "'", start_->pos);
    out_.start_shape = it->second;
    out_.start_pos = start_->pos;
    const int arity = out_.shapes[static_cast<std::size_t>(it->second)].arity;
    if (static_cast<int>(start_->args.size()) != arity) {
      semantic("startshape '" + start_->shape + "' takes " + std::to_string(arity) + " arguments, got " +
                   std::to_string(start_->args.size()),
               start_->pos);
    }
    for (const auto& a : start_->args) out_.start_args.push_back(free_chunk(a, "startshape", no_locals));
  }

  // Constants a chunk reads directly or through the functions it calls.
  const std::unordered_set<int>& reads(ChunkId id) {
    if (auto it = reads_.find(id); it != reads_.end()) return it->second;
    auto& set = reads_[id];
    std::vector<ChunkId> pending{id};
    std::unordered_set<ChunkId> visited{id};
    while (!pending.empty()) {
      const ChunkId cur = pending.back();
      pending.pop_back();
      for (const auto& in : out_.chunks[static_cast<std::size_t>(cur)].code) {
        if (reads_global(in.op)) set.insert(in.operand);
        if ((in.op == OpCode::Call || in.op == OpCode::TailCall) && visited.insert(in.operand).second) {
          pending.push_back(in.operand);
        }
      }
    }
    return set;
  }

  void order_constants() {
    enum class Mark { None, Active, Done };
    std::vector<Mark> marks(out_.constants.size(), Mark::None);
    std::function<void(int)> visit = [&](int c) {
      if (marks[static_cast<std::size_t>(c)] == Mark::Done) return;
      const auto& def = out_.constants[static_cast<std::size_t>(c)];
      if (marks[static_cast<std::size_t>(c)] == Mark::Active) {
        semantic("cyclic definition of constant '" + def.name + "'", def.pos);
      }
      marks[static_cast<std::size_t>(c)] = Mark::Active;
      std::vector<int> deps(reads(def.init).begin(), reads(def.init).end());
      std::sort(deps.begin(), deps.end());
      for (int d : deps) visit(d);
      marks[static_cast<std::size_t>(c)] = Mark::Done;
      out_.constant_order.push_back(c);
    };
    for (std::size_t c = 0; c < out_.constants.size(); ++c) visit(static_cast<int>(c));
  }

  const SceneProgram& program_;
  CompiledScene out_;
  const StartShape* start_ = nullptr;
  std::vector<const ConstantDef*> constant_defs_;
  std::vector<const FunctionDef*> function_defs_;
  std::vector<const ShapeDef*> shape_defs_;
  std::unordered_map<std::string, int> constants_;
  std::unordered_map<std::string, ChunkId> functions_;
  std::unordered_map<std::string, int> shapes_;
  std::unordered_map<ChunkId, std::unordered_set<int>> reads_;
  std::string current_shape_;
};

}  // namespace

CompiledScene compile(const SceneProgram& program) { return Compiler(program).run(); }

void check_program(const SceneProgram& program) { (void)compile(program); }

ChunkId compile_expression(CompiledScene& scene, const Expr& expr, const std::vector<std::string>& locals) {
  return Compiler::compile_free(scene, expr, locals);
}

}  // namespace juliart::scene
