#include "juliart/scene/evaluator.hpp"

namespace juliart::scene {

namespace {

constexpr std::uint64_t kConstantStreamTag = 0x636f6e7374616e74ULL;  // "constant"

}  // namespace

std::vector<double> evaluate_constants(const CompiledScene& scene, const VariationSeed& seed,
                                       InvocationBudget* budget) {
  std::vector<double> globals(scene.constants.size(), 0.0);
  Machine machine(scene, globals, budget);
  const std::uint64_t root = path_combine(seed.value, kConstantStreamTag);
  for (int index : scene.constant_order) {
    const auto& c = scene.constants[static_cast<std::size_t>(index)];
    RandomStream rng(path_combine(root, static_cast<std::uint64_t>(index)));
    globals[static_cast<std::size_t>(index)] = machine.run(c.init, {}, rng);
  }
  machine.flush();
  return globals;
}

ExpressionEvaluator::ExpressionEvaluator() = default;

ExpressionEvaluator::ExpressionEvaluator(const SceneProgram& program, const VariationSeed& seed)
    : scene_(compile(program)) {
  globals_ = evaluate_constants(scene_, seed, nullptr);
}

double ExpressionEvaluator::operator()(const Expr& e, const Bindings& env, RandomStream& rng) {
  std::vector<std::string> names;
  std::vector<double> values;
  names.reserve(env.size());
  values.reserve(env.size());
  for (const auto& [name, value] : env) {
    names.push_back(name);
    values.push_back(value);
  }
  // Chunks are appended per call; drop them again so repeated evaluation
  // does not grow the scene.
  const std::size_t mark = scene_.chunks.size();
  const ChunkId chunk = compile_expression(scene_, e, names);
  Machine machine(scene_, globals_, nullptr);
  machine.set_native_idioms(native_idioms_);
  double result = 0.0;
  try {
    result = machine.run(chunk, values, rng);
  } catch (...) {
    scene_.chunks.resize(mark);
    last_invocations_ = machine.invocations();
    throw;
  }
  scene_.chunks.resize(mark);
  last_invocations_ = machine.invocations();
  return result;
}

double ExpressionEvaluator::constant(std::string_view name) const {
  const int index = scene_.find_constant(name);
  if (index < 0) throw SceneError(ErrorKind::Semantic, "undefined constant '" + std::string(name) + "'");
  return globals_[static_cast<std::size_t>(index)];
}

double eval_expr(const Expr& e, const Bindings& env, RandomStream& rng) {
  ExpressionEvaluator evaluator;
  return evaluator(e, env, rng);
}

double eval_expr(const Expr& e, const Bindings& env, RandomStream& rng, const SceneProgram& program) {
  ExpressionEvaluator evaluator(program);
  return evaluator(e, env, rng);
}

}  // namespace juliart::scene
