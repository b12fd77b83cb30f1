#include "duality/pulse.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

namespace duality {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column) {}

// ---------------------------------------------------------------------------
// Expr

struct Expr::Node {
  Op op = Op::Number;
  double value = 0.0;
  std::string name;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

double fold(Expr::Op op, double a, double b) {
  switch (op) {
  case Expr::Op::Add: return a + b;
  case Expr::Op::Subtract: return a - b;
  case Expr::Op::Multiply: return a * b;
  case Expr::Op::Divide: return a / b;
  default: throw std::logic_error("not a binary operator");
  }
}

char symbol(Expr::Op op) {
  switch (op) {
  case Expr::Op::Add: return '+';
  case Expr::Op::Subtract: return '-';
  case Expr::Op::Multiply: return '*';
  case Expr::Op::Divide: return '/';
  default: throw std::logic_error("not a binary operator");
  }
}

std::string format_number(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

} // namespace

Expr Expr::number(double value) {
  auto node = std::make_shared<Node>();
  node->value = value;
  return Expr(std::move(node));
}

Expr Expr::param(std::string name) {
  auto node = std::make_shared<Node>();
  node->op = Op::Param;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::negate(Expr operand) {
  if (operand.is_constant()) {
    return number(-operand.value());
  }
  auto node = std::make_shared<Node>();
  node->op = Op::Negate;
  node->lhs = operand.node_;
  return Expr(std::move(node));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (lhs.is_constant() && rhs.is_constant()) {
    return number(fold(op, lhs.value(), rhs.value()));
  }
  auto node = std::make_shared<Node>();
  node->op = op;
  node->lhs = lhs.node_;
  node->rhs = rhs.node_;
  return Expr(std::move(node));
}

Expr::Op Expr::op() const { return node_->op; }

double Expr::value() const {
  if (!is_constant()) {
    throw std::logic_error("expression is not a constant");
  }
  return node_->value;
}

double Expr::evaluate(const Bindings& bindings) const {
  double result = 0.0;
  switch (node_->op) {
  case Op::Number:
    result = node_->value;
    break;
  case Op::Param: {
    const auto it = bindings.find(node_->name);
    if (it == bindings.end()) {
      throw CompileError("unbound parameter '" + node_->name + "'");
    }
    result = it->second;
    break;
  }
  case Op::Negate:
    result = -Expr(node_->lhs).evaluate(bindings);
    break;
  default:
    result = fold(node_->op, Expr(node_->lhs).evaluate(bindings), Expr(node_->rhs).evaluate(bindings));
  }
  if (!std::isfinite(result)) {
    throw CompileError("angle expression '" + render() + "' is not finite");
  }
  return result;
}

std::set<std::string> Expr::parameters() const {
  std::set<std::string> names;
  if (node_->op == Op::Param) {
    names.insert(node_->name);
  }
  for (const auto& child : {node_->lhs, node_->rhs}) {
    if (child) {
      names.merge(Expr(child).parameters());
    }
  }
  return names;
}

std::string Expr::render() const {
  switch (node_->op) {
  case Op::Number: return format_number(node_->value);
  case Op::Param: return node_->name;
  case Op::Negate: return "(-" + Expr(node_->lhs).render() + ")";
  default:
    return "(" + Expr(node_->lhs).render() + " " + symbol(node_->op) + " " + Expr(node_->rhs).render() +
           ")";
  }
}

bool operator==(const Expr& lhs, const Expr& rhs) {
  const auto& a = *lhs.node_;
  const auto& b = *rhs.node_;
  if (a.op != b.op) {
    return false;
  }
  switch (a.op) {
  case Expr::Op::Number: return a.value == b.value;
  case Expr::Op::Param: return a.name == b.name;
  case Expr::Op::Negate: return Expr(a.lhs) == Expr(b.lhs);
  default: return Expr(a.lhs) == Expr(b.lhs) && Expr(a.rhs) == Expr(b.rhs);
  }
}

// ---------------------------------------------------------------------------
// Pulse / PulseSequence

Pulse Pulse::rotation(Axis axis, Subsystem target, Expr angle) {
  return Pulse{PulseKind::Rotation, target, axis, std::move(angle)};
}

Pulse Pulse::coupling(Expr phase) { return Pulse{PulseKind::Coupling, Subsystem::A, Axis::Z, std::move(phase)}; }

bool operator==(const Pulse& lhs, const Pulse& rhs) {
  if (lhs.kind != rhs.kind || !(lhs.angle == rhs.angle)) {
    return false;
  }
  return lhs.kind == PulseKind::Coupling || (lhs.target == rhs.target && lhs.axis == rhs.axis);
}

PulseSequence PulseSequence::with(std::string_view name, double value) const {
  PulseSequence copy = *this;
  copy.params.insert_or_assign(std::string(name), value);
  return copy;
}

std::set<std::string> PulseSequence::unbound() const {
  std::set<std::string> missing;
  for (const auto& pulse : pulses) {
    for (const auto& name : pulse.angle.parameters()) {
      if (!params.contains(name)) {
        missing.insert(name);
      }
    }
  }
  return missing;
}

// ---------------------------------------------------------------------------
// Lexer and recursive-descent parser

namespace {

enum class Tok { Ident, Number, LParen, RParen, Plus, Minus, Star, Slash, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        advance(1);
      }
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = column;

    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) {
        ++j;
      }
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t j = i;
      while (j < text.size() && (digit(text[j]) || text[j] == '.')) {
        ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-')) {
          ++k;
        }
        if (k < text.size() && digit(text[k])) {
          j = k;
          while (j < text.size() && digit(text[j])) {
            ++j;
          }
        }
      }
      const std::string_view lexeme = text.substr(i, j - i);
      auto [end, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), tok.number);
      if (ec != std::errc() || end != lexeme.data() + lexeme.size()) {
        throw ParseError("malformed number '" + std::string(lexeme) + "'", line, column);
      }
      tok.kind = Tok::Number;
      tok.text = std::string(lexeme);
      advance(j - i);
    } else {
      switch (c) {
      case '(': tok.kind = Tok::LParen; break;
      case ')': tok.kind = Tok::RParen; break;
      case '+': tok.kind = Tok::Plus; break;
      case '-': tok.kind = Tok::Minus; break;
      case '*': tok.kind = Tok::Star; break;
      case '/': tok.kind = Tok::Slash; break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", line, column);
      }
      tok.text = std::string(1, c);
      advance(1);
    }
    tokens.push_back(std::move(tok));
  }

  Token end;
  end.line = line;
  end.column = column;
  tokens.push_back(end);
  return tokens;
}

std::string describe(const Token& tok) { return tok.kind == Tok::End ? "end of input" : "'" + tok.text + "'"; }

class Parser {
public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  PulseSequence program() {
    PulseSequence seq;
    while (peek().kind != Tok::End) {
      seq.pulses.push_back(pulse());
    }
    return seq;
  }

  Expr closed_expression() {
    Expr e = expression();
    if (peek().kind != Tok::End) {
      fail("unexpected " + describe(peek()) + " after expression", peek());
    }
    return e;
  }

private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] static void fail(const std::string& message, const Token& at) {
    throw ParseError(message, at.line, at.column);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + what + ", found " + describe(peek()), peek());
    }
    return next();
  }

  Pulse pulse() {
    const Token& head = peek();
    if (head.kind != Tok::Ident) {
      fail("expected a pulse, found " + describe(head), head);
    }
    next();

    std::optional<Pulse> shape;
    if (head.text == "JAB") {
      shape = Pulse::coupling(Expr::number(0.0));
    } else if (head.text.size() == 2) {
      std::optional<Axis> axis;
      switch (head.text[0]) {
      case 'X': axis = Axis::X; break;
      case 'Y': axis = Axis::Y; break;
      case 'Z': axis = Axis::Z; break;
      default: break;
      }
      std::optional<Subsystem> target;
      switch (head.text[1]) {
      case 'A': target = Subsystem::A; break;
      case 'B': target = Subsystem::B; break;
      default: break;
      }
      if (!axis) {
        fail("unknown axis in pulse '" + head.text + "'", head);
      }
      if (!target) {
        fail("unknown target in pulse '" + head.text + "'", head);
      }
      shape = Pulse::rotation(*axis, *target, Expr::number(0.0));
    }
    if (!shape) {
      fail("unknown pulse '" + head.text + "' (expected XA..ZB or JAB)", head);
    }

    expect(Tok::LParen, "'('");
    const Token& start = peek();
    Expr angle = expression();
    if (angle.is_constant() && !std::isfinite(angle.value())) {
      fail("angle expression is not finite", start);
    }
    expect(Tok::RParen, "')'");
    shape->angle = std::move(angle);
    return *shape;
  }

  Expr expression() {
    Expr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const Expr::Op op = next().kind == Tok::Plus ? Expr::Op::Add : Expr::Op::Subtract;
      lhs = Expr::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Expr::Op op = next().kind == Tok::Star ? Expr::Op::Multiply : Expr::Op::Divide;
      lhs = Expr::binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    if (peek().kind == Tok::Minus) {
      next();
      return Expr::negate(unary());
    }
    if (peek().kind == Tok::Plus) {
      next();
      return unary();
    }
    return primary();
  }

  Expr primary() {
    const Token& tok = peek();
    switch (tok.kind) {
    case Tok::Number:
      next();
      return Expr::number(tok.number);
    case Tok::Ident:
      next();
      if (tok.text == "pi") {
        return Expr::number(std::numbers::pi);
      }
      return Expr::param(tok.text);
    case Tok::LParen: {
      next();
      Expr inner = expression();
      expect(Tok::RParen, "')'");
      return inner;
    }
    default:
      fail("malformed expression: unexpected " + describe(tok), tok);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

const char* axis_name(Axis axis) {
  switch (axis) {
  case Axis::X: return "X";
  case Axis::Y: return "Y";
  case Axis::Z: return "Z";
  }
  return "?";
}

} // namespace

PulseSequence parse_program(std::string_view text) { return Parser(text).program(); }

Expr parse_expression(std::string_view text) { return Parser(text).closed_expression(); }

double evaluate_angle(std::string_view text, const Bindings& bindings) {
  return parse_expression(text).evaluate(bindings);
}

std::string render(const PulseSequence& seq) {
  std::string out;
  for (const auto& pulse : seq.pulses) {
    if (!out.empty()) {
      out += ' ';
    }
    if (pulse.kind == PulseKind::Coupling) {
      out += "JAB";
    } else {
      out += axis_name(pulse.axis);
      out += pulse.target == Subsystem::A ? 'A' : 'B';
    }
    out += '(' + pulse.angle.render() + ')';
  }
  return out;
}

} // namespace duality
