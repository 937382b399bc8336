#include "juliart/diagnostic.hpp"

namespace juliart {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Lexical: return "lexical";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Semantic: return "semantic";
    case ErrorKind::Evaluation: return "evaluation";
    case ErrorKind::Limit: return "limit";
    case ErrorKind::Render: return "render";
    case ErrorKind::Io: return "io";
    case ErrorKind::Request: return "request";
  }
  return "unknown";
}

namespace {

std::string format_what(ErrorKind kind, const std::string& message, SourcePos pos) {
  std::string out;
  if (pos.known()) {
    out += std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": ";
  }
  out += to_string(kind);
  out += " error: ";
  out += message;
  return out;
}

}  // namespace

SceneError::SceneError(ErrorKind kind, std::string message, SourcePos pos)
    : std::runtime_error(format_what(kind, message, pos)),
      kind_(kind),
      message_(std::move(message)),
      pos_(pos) {}

std::string SceneError::describe() const {
  std::string out = what();
  for (const auto& frame : trace_) {
    out += "\n  ";
    out += frame;
  }
  return out;
}

}  // namespace juliart
