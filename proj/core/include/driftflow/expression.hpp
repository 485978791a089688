#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace driftflow {

class ExpressionError : public std::runtime_error {
public:
  ExpressionError(std::size_t offset, const std::string& what);
  // 0-based character offset into the source text where parsing stopped.
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

// A scalar expression over the variable x: +, -, *, /, ^ (right-assoc),
// unary minus, exp(...), log(...), parentheses, numeric literals. Parsed by
// recursive descent into a flat postfix program.
class Expression {
public:
  // Throws ExpressionError (with offset) on malformed input.
  static Expression parse(std::string_view text);

  double eval(double x) const;
  const std::string& text() const noexcept { return text_; }

private:
  enum class Op : unsigned char { PushX, PushConst, Add, Sub, Mul, Div, Pow, Neg, Exp, Log };
  struct Instr {
    Op op;
    double value = 0.0;  // PushConst only
  };

  Expression(std::string text, std::vector<Instr> program);

  std::string text_;
  std::vector<Instr> program_;

  friend class ExpressionParser;
};

}  // namespace driftflow
