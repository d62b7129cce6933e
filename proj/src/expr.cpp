#include "wsheet/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "wsheet/errors.hpp"

namespace wsheet {

ExprNode make_constant(double c) {
  ExprNode n;
  n.kind = ExprKind::Constant;
  n.constant = c;
  return n;
}

ExprNode make_variable(int index) {
  ExprNode n;
  n.kind = ExprKind::Variable;
  n.variable = index;
  return n;
}

ExprNode make_unary(ExprKind kind, ExprNode arg) {
  ExprNode n;
  n.kind = kind;
  n.args.push_back(std::move(arg));
  return n;
}

ExprNode make_binary(ExprKind kind, ExprNode lhs, ExprNode rhs) {
  ExprNode n;
  n.kind = kind;
  n.args.push_back(std::move(lhs));
  n.args.push_back(std::move(rhs));
  return n;
}

ExprNode make_pow(ExprNode base, int exponent) {
  ExprNode n = make_unary(ExprKind::Pow, std::move(base));
  n.exponent = exponent;
  return n;
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> chart) : s_(text), chart_(chart) {}

  ExprNode parse() {
    ExprNode e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  ExprNode expr() {
    ExprNode lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(ExprKind::Add, std::move(lhs), term());
      else if (accept('-'))
        lhs = make_binary(ExprKind::Sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  ExprNode term() {
    ExprNode lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(ExprKind::Mul, std::move(lhs), unary());
      else if (accept('/'))
        lhs = make_binary(ExprKind::Div, std::move(lhs), unary());
      else
        return lhs;
    }
  }

  ExprNode unary() {
    if (accept('-')) return make_unary(ExprKind::Neg, unary());
    return power();
  }

  ExprNode power() {
    ExprNode base = primary();
    while (accept('^')) base = make_pow(std::move(base), exponent());
    return base;
  }

  int exponent() {
    const bool paren = accept('(');
    const bool neg = accept('-');
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == start || (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')))
      fail_at("exponent must be an integer literal", start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc()) fail_at("exponent out of range", start);
    if (paren) expect(')');
    return neg ? -value : value;
  }

  ExprNode primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      ExprNode e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprNode number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (pos_ == exp_start) pos_ = save;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (ec != std::errc() || ptr != s_.data() + pos_) fail_at("malformed number", start);
    return make_constant(v);
  }

  ExprNode identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);

    static constexpr std::pair<std::string_view, ExprKind> kFunctions[] = {
        {"sin", ExprKind::Sin}, {"cos", ExprKind::Cos},   {"exp", ExprKind::Exp},
        {"log", ExprKind::Log}, {"sqrt", ExprKind::Sqrt},
    };
    for (const auto& [fname, kind] : kFunctions) {
      if (name == fname) {
        expect('(');
        ExprNode arg = expr();
        expect(')');
        return make_unary(kind, std::move(arg));
      }
    }
    for (std::size_t i = 0; i < chart_.size(); ++i)
      if (name == chart_[i]) return make_variable(static_cast<int>(i));
    if (name == "pi") return make_constant(std::numbers::pi);
    fail_at("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view s_;
  std::span<const std::string> chart_;
  std::size_t pos_ = 0;
};

std::string format_constant(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class NameFn>
std::string unparse_impl(const ExprNode& e, const NameFn& name) {
  auto sub = [&](int i) { return unparse_impl(e.args[i], name); };
  switch (e.kind) {
    case ExprKind::Constant: return format_constant(e.constant);
    case ExprKind::Variable: return name(e.variable);
    case ExprKind::Add: return "(" + sub(0) + " + " + sub(1) + ")";
    case ExprKind::Sub: return "(" + sub(0) + " - " + sub(1) + ")";
    case ExprKind::Mul: return "(" + sub(0) + " * " + sub(1) + ")";
    case ExprKind::Div: return "(" + sub(0) + " / " + sub(1) + ")";
    case ExprKind::Neg: return "(-" + sub(0) + ")";
    case ExprKind::Pow: return "(" + sub(0) + "^" + std::to_string(e.exponent) + ")";
    case ExprKind::Sin: return "sin(" + sub(0) + ")";
    case ExprKind::Cos: return "cos(" + sub(0) + ")";
    case ExprKind::Exp: return "exp(" + sub(0) + ")";
    case ExprKind::Log: return "log(" + sub(0) + ")";
    case ExprKind::Sqrt: return "sqrt(" + sub(0) + ")";
  }
  return "?";
}

double check_finite(double v, const ExprNode& e) {
  if (!std::isfinite(v)) throw EvalError("non-finite result", unparse(e));
  return v;
}

}  // namespace

ExprNode parse_expr(std::string_view text, std::span<const std::string> chart) {
  return Parser(text, chart).parse();
}

std::string unparse(const ExprNode& e, std::span<const std::string> chart) {
  return unparse_impl(e, [&](int i) {
    return (i >= 0 && i < static_cast<int>(chart.size())) ? chart[i] : "x" + std::to_string(i);
  });
}

std::string unparse(const ExprNode& e) {
  return unparse_impl(e, [](int i) { return "x" + std::to_string(i); });
}

double eval_value(const ExprNode& e, std::span<const double> point) {
  auto arg = [&](int i) { return eval_value(e.args[i], point); };
  switch (e.kind) {
    case ExprKind::Constant: return e.constant;
    case ExprKind::Variable:
      if (e.variable < 0 || e.variable >= static_cast<int>(point.size()))
        throw EvalError("variable index out of range", unparse(e));
      return point[e.variable];
    case ExprKind::Add: return check_finite(arg(0) + arg(1), e);
    case ExprKind::Sub: return check_finite(arg(0) - arg(1), e);
    case ExprKind::Mul: return check_finite(arg(0) * arg(1), e);
    case ExprKind::Div: {
      const double d = arg(1);
      if (d == 0.0) throw EvalError("division by zero", unparse(e));
      return check_finite(arg(0) / d, e);
    }
    case ExprKind::Neg: return -arg(0);
    case ExprKind::Pow: {
      const double b = arg(0);
      if (b == 0.0 && e.exponent < 0) throw EvalError("zero raised to a negative power", unparse(e));
      return check_finite(std::pow(b, e.exponent), e);
    }
    case ExprKind::Sin: return std::sin(arg(0));
    case ExprKind::Cos: return std::cos(arg(0));
    case ExprKind::Exp: return check_finite(std::exp(arg(0)), e);
    case ExprKind::Log: {
      const double a = arg(0);
      if (!(a > 0.0)) throw EvalError("log of nonpositive value", unparse(e));
      return std::log(a);
    }
    case ExprKind::Sqrt: {
      const double a = arg(0);
      if (a < 0.0) throw EvalError("sqrt of negative value", unparse(e));
      return std::sqrt(a);
    }
  }
  throw EvalError("unknown node kind", unparse(e));
}

}  // namespace wsheet
