#include "juliart/scene/lexer.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace juliart::scene {

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::Startshape: return "'startshape'";
    case TokenKind::Shape: return "'shape'";
    case TokenKind::Loop: return "'loop'";
    case TokenKind::If: return "'if'";
    case TokenKind::Else: return "'else'";
    case TokenKind::Square: return "'SQUARE'";
    case TokenKind::Fill: return "'FILL'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBracket: return "'['";
    case TokenKind::RBracket: return "']'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Assign: return "'='";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Less: return "'<'";
    case TokenKind::LessEqual: return "'<='";
    case TokenKind::Greater: return "'>'";
    case TokenKind::GreaterEqual: return "'>='";
    case TokenKind::EqualEqual: return "'=='";
    case TokenKind::NotEqual: return "'!='";
    case TokenKind::AndAnd: return "'&&'";
    case TokenKind::OrOr: return "'||'";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

namespace {

const std::unordered_map<std::string_view, TokenKind>& keywords() {
  static const std::unordered_map<std::string_view, TokenKind> table = {
      {"startshape", TokenKind::Startshape},
      {"shape", TokenKind::Shape},
      {"loop", TokenKind::Loop},
      {"if", TokenKind::If},
      {"else", TokenKind::Else},
      {"SQUARE", TokenKind::Square},
      {"FILL", TokenKind::Fill},
  };
  return table;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    bool space = true;
    while (true) {
      space = skip_blank() || space;
      if (at_end()) break;
      Token t = next_token();
      t.space_before = space;
      out.push_back(std::move(t));
      space = false;
      if (!at_end()) {
        const char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#') out.back().space_after = true;
      } else {
        out.back().space_after = true;
      }
    }
    return out;
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  SourcePos here() const { return {line_, column_}; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++i_;
  }

  bool skip_blank() {
    bool skipped = false;
    while (!at_end()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
        skipped = true;
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
        skipped = true;
      } else {
        break;
      }
    }
    return skipped;
  }

  Token simple(TokenKind kind, std::size_t length, SourcePos pos) {
    Token t;
    t.kind = kind;
    t.text = std::string(src_.substr(i_, length));
    t.pos = pos;
    for (std::size_t k = 0; k < length; ++k) advance();
    return t;
  }

  Token next_token() {
    const SourcePos pos = here();
    const char c = peek();

    if (ident_start(c)) {
      std::size_t n = 0;
      while (ident_char(peek(n))) ++n;
      Token t = simple(TokenKind::Identifier, n, pos);
      if (auto it = keywords().find(t.text); it != keywords().end()) t.kind = it->second;
      return t;
    }
    if (digit(c) || (c == '.' && digit(peek(1)))) return number(pos);

    switch (c) {
      case '(': return simple(TokenKind::LParen, 1, pos);
      case ')': return simple(TokenKind::RParen, 1, pos);
      case '[': return simple(TokenKind::LBracket, 1, pos);
      case ']': return simple(TokenKind::RBracket, 1, pos);
      case '{': return simple(TokenKind::LBrace, 1, pos);
      case '}': return simple(TokenKind::RBrace, 1, pos);
      case ',': return simple(TokenKind::Comma, 1, pos);
      case '+': return simple(TokenKind::Plus, 1, pos);
      case '-': return simple(TokenKind::Minus, 1, pos);
      case '*': return simple(TokenKind::Star, 1, pos);
      case '/': return simple(TokenKind::Slash, 1, pos);
      case '<':
        return peek(1) == '=' ? simple(TokenKind::LessEqual, 2, pos) : simple(TokenKind::Less, 1, pos);
      case '>':
        return peek(1) == '=' ? simple(TokenKind::GreaterEqual, 2, pos)
                              : simple(TokenKind::Greater, 1, pos);
      case '=':
        return peek(1) == '=' ? simple(TokenKind::EqualEqual, 2, pos) : simple(TokenKind::Assign, 1, pos);
      case '!':
        if (peek(1) == '=') return simple(TokenKind::NotEqual, 2, pos);
        break;
      case '&':
        if (peek(1) == '&') return simple(TokenKind::AndAnd, 2, pos);
        break;
      case '|':
        if (peek(1) == '|') return simple(TokenKind::OrOr, 2, pos);
        break;
      default:
        break;
    }

    std::string shown;
    const auto uc = static_cast<unsigned char>(c);
    if (uc < 0x20 || uc >= 0x7f) {
      static const char* hex = "0123456789abcdef";
      shown = std::string("\\x") + hex[uc >> 4] + hex[uc & 0xf];
    } else {
      shown = std::string(1, c);
    }
    throw SceneError(ErrorKind::Lexical, "unexpected character '" + shown + "'", pos);
  }

  Token number(SourcePos pos) {
    std::size_t n = 0;
    while (digit(peek(n))) ++n;
    if (peek(n) == '.') {
      ++n;
      while (digit(peek(n))) ++n;
    }
    if (peek(n) == 'e' || peek(n) == 'E') {
      std::size_t m = n + 1;
      if (peek(m) == '+' || peek(m) == '-') ++m;
      if (digit(peek(m))) {
        while (digit(peek(m))) ++m;
        n = m;
      }
    }
    Token t = simple(TokenKind::Number, n, pos);
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, t.number);
    if (ec != std::errc() || ptr != last) {
      throw SceneError(ErrorKind::Lexical, "malformed number '" + t.text + "'", pos);
    }
    return t;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace juliart::scene
