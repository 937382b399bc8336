#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace juliart {

/// 1-based line/column in a scene file. line == 0 means "no position".
struct SourcePos {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class ErrorKind {
  Lexical,
  Syntax,
  Semantic,
  Evaluation,
  Limit,
  Render,
  Io,
  Request,
};

std::string_view to_string(ErrorKind kind);

/// Every failure of the pipeline surfaces as one of these: a kind, a message,
/// an optional source position and, for evaluation errors, the shape-call
/// stack that led there.
class SceneError : public std::runtime_error {
 public:
  SceneError(ErrorKind kind, std::string message, SourcePos pos = {});

  ErrorKind kind() const noexcept { return kind_; }
  const SourcePos& pos() const noexcept { return pos_; }
  const std::string& message() const noexcept { return message_; }
  const std::vector<std::string>& trace() const noexcept { return trace_; }

  void push_trace(std::string frame) { trace_.push_back(std::move(frame)); }

  /// what() plus one indented line per trace frame.
  std::string describe() const;

 private:
  ErrorKind kind_;
  std::string message_;
  SourcePos pos_;
  std::vector<std::string> trace_;
};

}  // namespace juliart
