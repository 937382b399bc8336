#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "juliart/random.hpp"
#include "juliart/scene/compiler.hpp"

namespace juliart::scene {

/// One rand(lo, hi) evaluation, recorded when tracing is enabled.
struct RandomDraw {
  SourcePos pos;
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

/// Cap on user-function invocations, shared by every machine of one render.
struct InvocationBudget {
  explicit InvocationBudget(std::uint64_t cap) : limit(cap) {}
  std::atomic<std::uint64_t> used{0};
  std::uint64_t limit;
};

/// Stack machine for compiled chunks. Frames live on the heap, so recursion
/// depth is bounded by `max_depth` rather than by the native stack; calls in
/// tail position reuse their frame. Not thread-safe: one machine per worker.
class Machine {
 public:
  static constexpr std::uint32_t kDefaultMaxDepth = 1'000'000;

  Machine(const CompiledScene& scene, std::span<const double> globals, InvocationBudget* budget,
          std::uint32_t max_depth = kDefaultMaxDepth);

  /// Runs `chunk` with shape-level locals; rand() draws from `rng`.
  double run(ChunkId chunk, std::span<const double> locals, RandomStream& rng);

  /// Total user-function invocations (the escape-iteration count).
  std::uint64_t invocations() const { return invocations_; }

  /// Pushes unreported invocations to the shared budget; throws
  /// SceneError(Limit) if the cap is exceeded.
  void flush();

  void set_trace(std::vector<RandomDraw>* trace) { trace_ = trace; }

  /// Whether functions marked with an EscapeIdiom run natively (default) or
  /// through the bytecode like any other function.
  void set_native_idioms(bool enabled) { native_idioms_ = enabled; }

 private:
  void checkpoint(SourcePos pos);
  double run_escape(const EscapeIdiom& idiom, const double* args);

  const std::vector<Chunk>& chunks_;
  std::span<const double> globals_;
  InvocationBudget* budget_;
  std::uint32_t max_depth_;
  std::vector<double> stack_;

  struct Frame {
    const Chunk* chunk;
    const Instruction* return_ip;
    std::size_t base;
    bool external;
  };
  std::vector<Frame> frames_;

  std::uint64_t invocations_ = 0;
  std::uint64_t reported_ = 0;
  std::uint32_t until_check_ = 1;
  std::vector<RandomDraw>* trace_ = nullptr;
  bool native_idioms_ = true;
};

}  // namespace juliart::scene
