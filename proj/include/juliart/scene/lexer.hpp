#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "juliart/diagnostic.hpp"

namespace juliart::scene {

enum class TokenKind {
  Identifier,
  Number,
  // keywords
  Startshape,
  Shape,
  Loop,
  If,
  Else,
  Square,
  Fill,
  // punctuation
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Assign,
  Plus,
  Minus,
  Star,
  Slash,
  Less,
  LessEqual,
  Greater,
  GreaterEqual,
  EqualEqual,
  NotEqual,
  AndAnd,
  OrOr,
  End,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  double number = 0.0;
  SourcePos pos;
  // Whitespace (or a comment, or start of input) immediately before/after.
  // Adjustment lists use this to read "x -CX -CY" as two values.
  bool space_before = false;
  bool space_after = false;
};

/// Splits scene text into tokens. '#' starts a comment running to end of line.
/// The returned sequence does not include the End token.
/// Throws SceneError(Lexical) on characters outside the grammar.
std::vector<Token> tokenize(std::string_view source);

}  // namespace juliart::scene
