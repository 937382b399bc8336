#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "juliart/render.hpp"
#include "juliart/scene/compiler.hpp"
#include "juliart/scene/evaluator.hpp"

namespace juliart {

namespace {

using scene::ChunkId;
using scene::CompiledAdjustment;
using scene::CompiledScene;
using scene::CompiledStatement;

constexpr std::uint64_t kStartStreamTag = 0x7374617274ULL;  // "start"
constexpr std::uint64_t kPrimitiveFlushInterval = 4096;
constexpr std::size_t kMaxTraceFrames = 24;
constexpr std::uint64_t kChunksPerWorker = 64;

std::string where(SourcePos pos) { return std::to_string(pos.line) + ":" + std::to_string(pos.column); }

std::string number_text(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

struct Shared {
  const CompiledScene& scene;
  std::span<const double> globals;
  const RenderLimits& limits;
  scene::InvocationBudget budget;
  std::atomic<std::uint64_t> primitives{0};
  unsigned workers = 1;
  std::vector<scene::RandomDraw>* trace = nullptr;
  bool native_idioms = true;
};

class Executor {
 public:
  Executor(Shared& shared, bool parallel_region, std::uint32_t depth)
      : shared_(shared),
        machine_(shared.scene, shared.globals, &shared.budget, shared.limits.max_recursion_depth),
        in_parallel_(parallel_region),
        depth_(depth) {
    machine_.set_trace(shared.trace);
    machine_.set_native_idioms(shared.native_idioms);
  }

  void run_start(std::uint64_t root, std::vector<Primitive>& sink) {
    const auto& scene = shared_.scene;
    const auto& shape = scene.shapes[static_cast<std::size_t>(scene.start_shape)];
    const std::uint64_t key = path_combine(root, kStartStreamTag);
    RandomStream rng(key);
    std::vector<double> frame(static_cast<std::size_t>(shape.slot_count), 0.0);
    for (std::size_t i = 0; i < scene.start_args.size(); ++i) {
      frame[i] = machine_.run(scene.start_args[i], {}, rng);
    }
    try {
      block(shape.body, frame, DrawState{}, path_combine(key, 0), sink);
    } catch (SceneError& e) {
      add_frame(e, shape.name, scene.start_pos, "startshape");
      throw;
    }
  }

  /// Reports outstanding counters to the shared budgets.
  void flush() {
    machine_.flush();
    flush_primitives();
  }

 private:
  static void add_frame(SceneError& e, const std::string& shape, SourcePos pos, const char* how) {
    if (e.trace().size() < kMaxTraceFrames) {
      e.push_trace("in shape '" + shape + "' (" + how + " at " + where(pos) + ")");
    } else if (e.trace().size() == kMaxTraceFrames) {
      e.push_trace("...");
    }
  }

  void flush_primitives() {
    const std::uint64_t total = shared_.primitives.fetch_add(pending_primitives_) + pending_primitives_;
    pending_primitives_ = 0;
    if (total > shared_.limits.max_primitives) {
      throw SceneError(ErrorKind::Limit,
                       "primitive cap of " + std::to_string(shared_.limits.max_primitives) + " exceeded");
    }
  }

  double eval(ChunkId chunk, const std::vector<double>& locals, RandomStream& rng) {
    return machine_.run(chunk, locals, rng);
  }

  void eval_adjustments(const std::vector<CompiledAdjustment>& adjs, const std::vector<double>& locals,
                        RandomStream& rng, std::vector<AdjustmentValue>& out) {
    out.clear();
    for (const auto& a : adjs) {
      AdjustmentValue v;
      v.kind = a.kind;
      v.first = eval(a.values[0], locals, rng);
      if (a.values.size() > 1) v.second = eval(a.values[1], locals, rng);
      if (!std::isfinite(v.first) || (v.second && !std::isfinite(*v.second))) {
        throw SceneError(ErrorKind::Evaluation,
                         "adjustment '" + std::string(scene::to_string(a.kind)) + "' evaluated to a non-finite value",
                         a.pos);
      }
      out.push_back(v);
    }
  }

  void emit(PrimitiveKind kind, const DrawState& state, SourcePos pos, std::vector<Primitive>& sink) {
    Primitive p;
    p.kind = kind;
    p.color = state.color;
    if (kind == PrimitiveKind::Square) {
      const double det = state.transform.determinant();
      const auto t = state.transform.translation();
      if (!std::isfinite(det) || !std::isfinite(t.x()) || !std::isfinite(t.y())) {
        throw SceneError(ErrorKind::Evaluation, "square transform is not finite", pos);
      }
      if (det == 0.0) return;
      p.transform = state.transform;
    }
    sink.push_back(p);
    if (++pending_primitives_ == kPrimitiveFlushInterval) {
      try {
        flush_primitives();
      } catch (SceneError& e) {
        throw SceneError(e.kind(), e.message(), pos);
      }
    }
  }

  void block(const std::vector<CompiledStatement>& stmts, std::vector<double>& locals, const DrawState& state,
             std::uint64_t key, std::vector<Primitive>& sink) {
    for (const auto& s : stmts) statement(s, locals, state, key, sink);
  }

  void statement(const CompiledStatement& s, std::vector<double>& locals, const DrawState& state,
                 std::uint64_t block_key, std::vector<Primitive>& sink) {
    const std::uint64_t key = path_combine(block_key, s.ordinal);
    RandomStream rng(key);
    switch (s.kind) {
      case CompiledStatement::Kind::Bind:
        locals[static_cast<std::size_t>(s.slot)] = eval(s.expr, locals, rng);
        return;
      case CompiledStatement::Kind::Square:
      case CompiledStatement::Kind::Fill: {
        eval_adjustments(s.adjustments, locals, rng, scratch_);
        const DrawState next = compose_adjustments(state, scratch_);
        emit(s.kind == CompiledStatement::Kind::Square ? PrimitiveKind::Square : PrimitiveKind::Fill, next, s.pos,
             sink);
        return;
      }
      case CompiledStatement::Kind::If:
        if (eval(s.expr, locals, rng) != 0.0) {
          block(s.body, locals, state, path_combine(key, 0), sink);
        } else if (s.has_else) {
          block(s.otherwise, locals, state, path_combine(key, 1), sink);
        }
        return;
      case CompiledStatement::Kind::Loop:
        loop(s, locals, state, key, rng, sink);
        return;
      case CompiledStatement::Kind::Call:
        call(s, locals, state, key, rng, sink);
        return;
    }
  }

  void loop(const CompiledStatement& s, std::vector<double>& locals, const DrawState& state, std::uint64_t key,
            RandomStream& rng, std::vector<Primitive>& sink) {
    const double n = eval(s.expr, locals, rng);
    if (!std::isfinite(n) || n < 0.0) {
      throw SceneError(ErrorKind::Evaluation,
                       "loop count must be a non-negative finite number, got " + number_text(n), s.pos);
    }
    const double whole = std::trunc(n);
    if (whole > static_cast<double>(shared_.limits.max_loop_iterations)) {
      throw SceneError(ErrorKind::Limit,
                       "loop count " + number_text(whole) + " exceeds the cap of " +
                           std::to_string(shared_.limits.max_loop_iterations),
                       s.pos);
    }
    const auto count = static_cast<std::uint64_t>(whole);
    std::vector<AdjustmentValue> step;
    eval_adjustments(s.adjustments, locals, rng, step);

    if (step.empty() && !in_parallel_ && shared_.workers > 1 && count > 1 && !shared_.trace) {
      parallel_loop(s, count, locals, state, key, sink);
      return;
    }
    DrawState current = state;
    for (std::uint64_t k = 0; k < count; ++k) {
      if (s.slot >= 0) locals[static_cast<std::size_t>(s.slot)] = static_cast<double>(k);
      block(s.body, locals, current, path_combine(key, k), sink);
      if (!step.empty()) current = compose_adjustments(current, step);
    }
  }

  // Iterations are claimed in chunks, in order, from a shared counter. Each
  // chunk has its own sink; sinks are concatenated in iteration order, so the
  // output does not depend on scheduling. When iterations fail, the error of
  // the lowest one is reported, as a sequential run would.
  void parallel_loop(const CompiledStatement& s, std::uint64_t count, const std::vector<double>& locals,
                     const DrawState& state, std::uint64_t key, std::vector<Primitive>& sink) {
    const std::uint64_t workers = std::min<std::uint64_t>(shared_.workers, count);
    const std::uint64_t chunk_size = std::max<std::uint64_t>(1, (count + workers * kChunksPerWorker - 1) /
                                                                      (workers * kChunksPerWorker));
    const std::uint64_t chunks = (count + chunk_size - 1) / chunk_size;

    std::vector<std::vector<Primitive>> parts(chunks);
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::exception_ptr> flush_errors(workers);
    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> first_failed{chunks};

    auto work = [&](std::size_t worker) {
      Executor ex(shared_, true, depth_);
      std::vector<double> frame = locals;
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= chunks || c > first_failed.load()) break;
        try {
          const std::uint64_t end = std::min(count, (c + 1) * chunk_size);
          for (std::uint64_t k = c * chunk_size; k < end; ++k) {
            if (s.slot >= 0) frame[static_cast<std::size_t>(s.slot)] = static_cast<double>(k);
            ex.block(s.body, frame, state, path_combine(key, k), parts[c]);
          }
        } catch (...) {
          errors[c] = std::current_exception();
          std::uint64_t seen = first_failed.load();
          while (c < seen && !first_failed.compare_exchange_weak(seen, c)) {
          }
        }
      }
      try {
        ex.flush();
      } catch (...) {
        flush_errors[worker] = std::current_exception();
      }
    };

    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();

    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const auto& e : flush_errors) {
      if (e) std::rethrow_exception(e);
    }
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    sink.reserve(sink.size() + total);
    for (auto& p : parts) {
      sink.insert(sink.end(), p.begin(), p.end());
      std::vector<Primitive>().swap(p);
    }
  }

  void call(const CompiledStatement& s, const std::vector<double>& locals, const DrawState& state,
            std::uint64_t key, RandomStream& rng, std::vector<Primitive>& sink) {
    const auto& callee = shared_.scene.shapes[static_cast<std::size_t>(s.shape)];
    std::vector<double> frame(static_cast<std::size_t>(callee.slot_count), 0.0);
    for (std::size_t i = 0; i < s.args.size(); ++i) frame[i] = eval(s.args[i], locals, rng);
    eval_adjustments(s.adjustments, locals, rng, scratch_);
    const DrawState next = compose_adjustments(state, scratch_);
    if (depth_ >= shared_.limits.max_shape_depth) {
      throw SceneError(ErrorKind::Limit,
                       "shape nesting depth cap of " + std::to_string(shared_.limits.max_shape_depth) + " exceeded",
                       s.pos);
    }
    ++depth_;
    try {
      block(callee.body, frame, next, path_combine(key, 0), sink);
    } catch (SceneError& e) {
      --depth_;
      add_frame(e, callee.name, s.pos, "called");
      throw;
    }
    --depth_;
  }

  Shared& shared_;
  scene::Machine machine_;
  bool in_parallel_;
  std::uint32_t depth_;
  std::uint64_t pending_primitives_ = 0;
  std::vector<AdjustmentValue> scratch_;
};

}  // namespace

Evaluation evaluate_scene(const scene::SceneProgram& program, const VariationSeed& variation,
                          const EvaluationOptions& options) {
  const CompiledScene compiled = scene::compile(program);
  Shared shared{compiled, {}, options.limits, scene::InvocationBudget(options.limits.max_escape_iterations)};
  shared.workers = options.trace ? 1u : std::max(1u, options.workers);
  shared.trace = options.trace;
  shared.native_idioms = options.native_idioms;

  const std::vector<double> globals = scene::evaluate_constants(compiled, variation, &shared.budget);
  shared.globals = globals;

  Evaluation out;
  Executor root(shared, false, 0);
  root.run_start(variation.value, out.primitives);
  root.flush();

  for (std::size_t i = 0; i < out.primitives.size(); ++i) out.primitives[i].index = i;
  out.escape_iterations = shared.budget.used.load();
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("JULIART_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace juliart
