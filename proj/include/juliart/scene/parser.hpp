#pragma once

#include <span>
#include <string_view>

#include "juliart/scene/ast.hpp"
#include "juliart/scene/lexer.hpp"

namespace juliart::scene {

/// Builds the syntax tree. Throws SceneError(Syntax) with the position of the
/// offending token; performs no name resolution.
SceneProgram parse(std::span<const Token> tokens);

/// tokenize + parse + semantic check (names, arities, startshape).
SceneProgram load_scene(std::string_view source);

/// Canonical text form; load_scene(pretty_print(p)) is structurally equal to p.
std::string pretty_print(const SceneProgram& program);

/// Canonical text of a single expression.
std::string pretty_print(const Expr& expr);

}  // namespace juliart::scene
