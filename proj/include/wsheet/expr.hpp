#pragma once

// Expression trees for coordinate functions of a world sheet.
//
// Grammar (whitespace ignored):
//
//   expr    := term { ("+" | "-") term }
//   term    := unary { ("*" | "/") unary }
//   unary   := "-" unary | power
//   power   := primary { "^" exponent }
//   exponent:= ["-"] integer | "(" ["-"] integer ")"
//   primary := number | name | func "(" expr ")" | "(" expr ")"
//   func    := "sin" | "cos" | "exp" | "log" | "sqrt"
//
// `name` is one of the declared chart variables or the constant `pi`.
// Precedence is therefore ^ > unary minus > * / > + -, so -u1^2 = -(u1^2).

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsheet {

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Log, Sqrt };

struct ExprNode {
  ExprKind kind = ExprKind::Constant;
  double constant = 0.0;  // Constant
  int variable = -1;      // Variable: index into the chart
  int exponent = 0;       // Pow: integer literal
  std::vector<ExprNode> args;

  friend bool operator==(const ExprNode&, const ExprNode&) = default;
};

ExprNode make_constant(double c);
ExprNode make_variable(int index);
ExprNode make_unary(ExprKind kind, ExprNode arg);
ExprNode make_binary(ExprKind kind, ExprNode lhs, ExprNode rhs);
ExprNode make_pow(ExprNode base, int exponent);

/// Parses `text` against the chart variable names (e.g. {"u1", "t"}).
/// Throws ParseError with the byte offset of the first problem.
ExprNode parse_expr(std::string_view text, std::span<const std::string> chart);

/// Text that parses back to an equal tree under the same chart.
std::string unparse(const ExprNode& e, std::span<const std::string> chart);

/// Text with variables shown as x0, x1, ... (for error messages without a chart).
std::string unparse(const ExprNode& e);

/// Plain double evaluation. Throws EvalError on domain violations.
double eval_value(const ExprNode& e, std::span<const double> point);

}  // namespace wsheet
