#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "scenegen/errors.hpp"
#include "scenegen/vec.hpp"

namespace scenegen {

/// Bare name in argument position; resolved against bindings and element ids at execution time.
struct Identifier {
  std::string name;
  bool operator==(const Identifier&) const = default;
};

using Value = std::variant<double, std::string, Vec2, Vec3, Identifier>;

struct Call {
  std::string function;
  std::vector<Value> args;
  std::vector<std::pair<std::string, Value>> kwargs;  // source order
  bool operator==(const Call&) const = default;
};

struct Statement {
  std::optional<std::string> binding;
  Call call;
  int line = 0;  // 1-based source line, informational

  bool operator==(const Statement& o) const { return binding == o.binding && call == o.call; }
};

struct ActionProgram {
  std::vector<Statement> statements;
  std::string source_text;

  /// Structural equality: statements only.
  bool operator==(const ActionProgram& o) const { return statements == o.statements; }
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(ErrorKind::kInvalidInput,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// One call per line: `[name =] function(arg, ..., key=value, ...)`. Values are
/// numbers, quoted strings, 2- or 3-tuples of numbers in () or [], or bare
/// identifiers. `#` starts a comment; blank lines are ignored.
ActionProgram parse_program(std::string_view source);

/// Canonical text; parse_program(unparse(p)) == p.
std::string unparse(const ActionProgram& program);
std::string unparse(const Value& value);

bool is_identifier(std::string_view text);

}  // namespace scenegen
