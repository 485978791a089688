#include "driftflow/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace driftflow {

ExpressionError::ExpressionError(std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}

// Recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?          (right-associative)
//   primary:= number | 'x' | ('exp'|'log') '(' expr ')' | '(' expr ')'
// emitting a postfix program.
class ExpressionParser {
public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  std::vector<Expression::Instr> run() {
    parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ExpressionError(pos_, "unexpected trailing input");
    return std::move(program_);
  }

private:
  using Op = Expression::Op;

  void emit(Op op, double value = 0.0) { program_.push_back({op, value}); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void parse_expr() {
    if (++depth_ > 200) throw ExpressionError(pos_, "expression nested too deeply");
    parse_term();
    while (true) {
      if (consume('+')) {
        parse_term();
        emit(Op::Add);
      } else if (consume('-')) {
        parse_term();
        emit(Op::Sub);
      } else {
        --depth_;
        return;
      }
    }
  }

  void parse_term() {
    parse_unary();
    while (true) {
      if (consume('*')) {
        parse_unary();
        emit(Op::Mul);
      } else if (consume('/')) {
        parse_unary();
        emit(Op::Div);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (consume('-')) {
      parse_unary();
      emit(Op::Neg);
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_primary();
    if (consume('^')) {
      parse_unary();  // right-associative, and 2^-3 parses
      emit(Op::Pow);
    }
  }

  void parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) throw ExpressionError(pos_, "expected operand");
    const char c = text_[pos_];

    if (c == '(') {
      ++pos_;
      parse_expr();
      if (!consume(')')) throw ExpressionError(pos_, "expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      parse_number();
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
      const std::string_view word = text_.substr(start, pos_ - start);
      if (word == "x") {
        emit(Op::PushX);
        return;
      }
      if (word == "exp" || word == "log") {
        if (!consume('(')) throw ExpressionError(pos_, "expected '(' after function name");
        parse_expr();
        if (!consume(')')) throw ExpressionError(pos_, "expected ')'");
        emit(word == "exp" ? Op::Exp : Op::Log);
        return;
      }
      throw ExpressionError(start, "unknown identifier '" + std::string(word) + "'");
    }
    throw ExpressionError(pos_, "expected operand");
  }

  void parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr == begin) {
      throw ExpressionError(pos_, "malformed number");
    }
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    emit(Op::PushConst, value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<Expression::Instr> program_;
};

Expression::Expression(std::string text, std::vector<Instr> program)
    : text_(std::move(text)), program_(std::move(program)) {
  // Postfix stack need: +1 per push, -1 per binary op. The parser's nesting
  // cap keeps this under the fixed eval stack, but verify anyway.
  int depth = 0, peak = 0;
  for (const Instr& ins : program_) {
    switch (ins.op) {
      case Op::PushX:
      case Op::PushConst:
        peak = std::max(peak, ++depth);
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow:
        --depth;
        break;
      default:
        break;
    }
  }
  if (peak > 64) throw ExpressionError(0, "expression requires too much evaluation stack");
}

Expression Expression::parse(std::string_view text) {
  ExpressionParser parser(text);
  return Expression(std::string(text), parser.run());
}

double Expression::eval(double x) const {
  double stack[64];
  std::size_t top = 0;
  for (const Instr& ins : program_) {
    switch (ins.op) {
      case Op::PushX:
        stack[top++] = x;
        break;
      case Op::PushConst:
        stack[top++] = ins.value;
        break;
      case Op::Add:
        --top;
        stack[top - 1] += stack[top];
        break;
      case Op::Sub:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case Op::Mul:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case Op::Div:
        --top;
        stack[top - 1] /= stack[top];
        break;
      case Op::Pow:
        --top;
        stack[top - 1] = std::pow(stack[top - 1], stack[top]);
        break;
      case Op::Neg:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::Exp:
        stack[top - 1] = std::exp(stack[top - 1]);
        break;
      case Op::Log:
        stack[top - 1] = std::log(stack[top - 1]);
        break;
    }
  }
  return stack[0];
}

}  // namespace driftflow
