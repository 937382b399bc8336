#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "juliart/random.hpp"
#include "juliart/scene/ast.hpp"
#include "juliart/scene/compiler.hpp"
#include "juliart/scene/machine.hpp"

namespace juliart::scene {

using Bindings = std::map<std::string, double, std::less<>>;

/// Global constant values in slot order. Initializers run in dependency order;
/// rand() inside constant i draws from a stream keyed by (seed, i).
std::vector<double> evaluate_constants(const CompiledScene& scene, const VariationSeed& seed,
                                       InvocationBudget* budget);

/// Evaluates free-standing expressions against a program's constants and
/// functions. Names in the supplied bindings shadow program constants.
class ExpressionEvaluator {
 public:
  /// Without a program only literals, bound names and rand() are available.
  ExpressionEvaluator();
  explicit ExpressionEvaluator(const SceneProgram& program, const VariationSeed& seed = VariationSeed{});

  double operator()(const Expr& e, const Bindings& env, RandomStream& rng);

  /// Value of a program constant; throws SceneError(Semantic) if undefined.
  double constant(std::string_view name) const;
  bool has_constant(std::string_view name) const { return scene_.find_constant(name) >= 0; }

  const CompiledScene& compiled() const { return scene_; }
  std::span<const double> globals() const { return globals_; }

  /// See Machine::set_native_idioms.
  void set_native_idioms(bool enabled) { native_idioms_ = enabled; }

  /// Invocation count of the most recent evaluation.
  std::uint64_t last_invocations() const { return last_invocations_; }

 private:
  CompiledScene scene_;
  std::vector<double> globals_;
  std::uint64_t last_invocations_ = 0;
  bool native_idioms_ = true;
};

/// One-shot convenience over ExpressionEvaluator.
double eval_expr(const Expr& e, const Bindings& env, RandomStream& rng);
double eval_expr(const Expr& e, const Bindings& env, RandomStream& rng, const SceneProgram& program);

}  // namespace juliart::scene
