#include "scenegen/action_lang.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>

namespace scenegen {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class LineParser {
 public:
  LineParser(std::string_view text, int line) : text_(text), line_(line) {}

  std::optional<Statement> statement() {
    skip_space();
    if (at_end()) return std::nullopt;
    Statement st;
    st.line = line_;
    std::string first = identifier("function name");
    skip_space();
    if (peek() == '=') {
      ++pos_;
      skip_space();
      st.binding = std::move(first);
      st.call.function = identifier("function name");
      skip_space();
    } else {
      st.call.function = std::move(first);
    }
    if (peek() != '(') fail("expected '(' after " + st.call.function, pos_);
    const std::size_t open = pos_++;
    arguments(st.call, open);
    skip_space();
    if (!at_end()) fail("unexpected text after call", pos_);
    return st;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    throw ParseError(message, line_, static_cast<int>(at) + 1);
  }

  bool at_end() const { return pos_ >= text_.size() || text_[pos_] == '#'; }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }

  std::string identifier(const char* what) {
    if (!ident_start(peek())) fail(std::string("expected ") + what, pos_);
    const std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void arguments(Call& call, std::size_t open) {
    std::set<std::string> seen;
    skip_space();
    if (peek() == ')') {
      ++pos_;
      return;
    }
    while (true) {
      skip_space();
      if (pos_ >= text_.size() || peek() == '#') fail("unbalanced parentheses", open);
      const std::size_t arg_start = pos_;
      // Keyword argument: identifier followed by '=' (but not '==').
      std::optional<std::string> key;
      if (ident_start(peek())) {
        std::size_t look = pos_;
        while (look < text_.size() && ident_char(text_[look])) ++look;
        std::size_t after = look;
        while (after < text_.size() && (text_[after] == ' ' || text_[after] == '\t')) ++after;
        if (after < text_.size() && text_[after] == '=') {
          key = std::string(text_.substr(pos_, look - pos_));
          pos_ = after + 1;
          skip_space();
        }
      }
      Value v = value();
      if (key) {
        if (!seen.insert(*key).second) fail("duplicate keyword argument " + *key, arg_start);
        call.kwargs.emplace_back(std::move(*key), std::move(v));
      } else {
        if (!call.kwargs.empty()) fail("positional argument after keyword argument", arg_start);
        call.args.push_back(std::move(v));
      }
      skip_space();
      if (peek() == ',') {
        ++pos_;
        skip_space();
        if (peek() == ')') {
          ++pos_;
          return;
        }
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return;
      }
      if (pos_ >= text_.size() || peek() == '#') fail("unbalanced parentheses", open);
      fail("expected ',' or ')'", pos_);
    }
  }

  Value value() {
    const char c = peek();
    if (c == '"' || c == '\'') return string_literal();
    if (c == '(' || c == '[') return tuple();
    if (c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) return number();
    if (ident_start(c)) return Identifier{identifier("value")};
    if (pos_ >= text_.size() || c == '#') fail("missing value", pos_);
    fail(std::string("unexpected character '") + c + "'", pos_);
  }

  double number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    if (end < text_.size() && (text_[end] == '-' || text_[end] == '+')) ++end;
    while (end < text_.size() && (ident_char(text_[end]) || text_[end] == '.' ||
                                  ((text_[end] == '-' || text_[end] == '+') &&
                                   (text_[end - 1] == 'e' || text_[end - 1] == 'E')))) {
      ++end;
    }
    std::string_view lit = text_.substr(start, end - start);
    std::string_view digits = lit;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    const bool bad_first = digits.empty() || !(std::isdigit(static_cast<unsigned char>(digits.front())) ||
                                               digits.front() == '.' || digits.front() == '-');
    if (bad_first || res.ec != std::errc() || res.ptr != digits.data() + digits.size() || !std::isfinite(v)) {
      fail("malformed number '" + std::string(lit) + "'", start);
    }
    pos_ = end;
    return v;
  }

  std::string string_literal() {
    const char quote = text_[pos_];
    const std::size_t start = pos_++;
    std::string out;
    while (true) {
      if (pos_ >= text_.size()) fail("unterminated string", start);
      const char c = text_[pos_++];
      if (c == quote) return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) fail("unterminated string", start);
      const char e = text_[pos_++];
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '\\': out += '\\'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        default: fail(std::string("unknown escape \\") + e, pos_ - 2);
      }
    }
  }

  Value tuple() {
    const char close = text_[pos_] == '(' ? ')' : ']';
    const std::size_t open = pos_++;
    std::vector<double> items;
    while (true) {
      skip_space();
      if (pos_ >= text_.size() || peek() == '#') fail("unbalanced parentheses", open);
      if (peek() == close && !items.empty()) {
        ++pos_;
        break;
      }
      const char c = peek();
      if (!(c == '-' || c == '+' || c == '.' || std::isdigit(static_cast<unsigned char>(c)))) {
        fail("tuple elements must be numbers", pos_);
      }
      items.push_back(number());
      skip_space();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() == close) {
        ++pos_;
        break;
      }
      if (pos_ >= text_.size() || peek() == '#') fail("unbalanced parentheses", open);
      fail("expected ',' or closing bracket in tuple", pos_);
    }
    if (items.size() == 2) return Vec2{items[0], items[1]};
    if (items.size() == 3) return Vec3{items[0], items[1], items[2]};
    fail("tuples must have 2 or 3 elements", open);
  }

  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

std::string format_number(double v) {
  char buf[32];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

}  // namespace

bool is_identifier(std::string_view text) {
  if (text.empty() || !ident_start(text.front())) return false;
  for (char c : text) {
    if (!ident_char(c)) return false;
  }
  return true;
}

ActionProgram parse_program(std::string_view source) {
  ActionProgram program;
  program.source_text = std::string(source);
  int line_no = 0;
  std::size_t start = 0;
  while (start <= source.size()) {
    const auto nl = source.find('\n', start);
    const auto end = nl == std::string_view::npos ? source.size() : nl;
    ++line_no;
    LineParser parser(source.substr(start, end - start), line_no);
    if (auto st = parser.statement()) program.statements.push_back(std::move(*st));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return program;
}

std::string unparse(const Value& value) {
  struct Visitor {
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& s) const { return quote(s); }
    std::string operator()(const Vec2& v) const { return "(" + format_number(v.x) + ", " + format_number(v.y) + ")"; }
    std::string operator()(const Vec3& v) const {
      return "(" + format_number(v.x) + ", " + format_number(v.y) + ", " + format_number(v.z) + ")";
    }
    std::string operator()(const Identifier& id) const { return id.name; }
  };
  return std::visit(Visitor{}, value);
}

std::string unparse(const ActionProgram& program) {
  std::string out;
  for (const auto& st : program.statements) {
    if (st.binding) out += *st.binding + " = ";
    out += st.call.function + "(";
    bool first = true;
    for (const auto& a : st.call.args) {
      if (!first) out += ", ";
      out += unparse(a);
      first = false;
    }
    for (const auto& [k, v] : st.call.kwargs) {
      if (!first) out += ", ";
      out += k + "=" + unparse(v);
      first = false;
    }
    out += ")\n";
  }
  return out;
}

}  // namespace scenegen
