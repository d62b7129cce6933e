#include "wsheet/jet.hpp"

#include <cmath>

#include "wsheet/errors.hpp"

namespace wsheet {

Jet2 Jet2::constant(double c, int nvars) {
  return Jet2{c, Eigen::VectorXd::Zero(nvars), Eigen::MatrixXd::Zero(nvars, nvars)};
}

Jet2 Jet2::variable(double value, int index, int nvars) {
  Jet2 j = constant(value, nvars);
  j.grad[index] = 1.0;
  return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.value + b.value, a.grad + b.grad, a.hess + b.hess}; }

Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.value - b.value, a.grad - b.grad, a.hess - b.hess}; }

Jet2 operator-(const Jet2& a) { return {-a.value, -a.grad, -a.hess}; }

Jet2 operator*(double s, const Jet2& a) { return {s * a.value, s * a.grad, s * a.hess}; }

Jet2 operator+(double s, const Jet2& a) { return {s + a.value, a.grad, a.hess}; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  const Eigen::MatrixXd cross = a.grad * b.grad.transpose();
  return {a.value * b.value, a.value * b.grad + b.value * a.grad,
          a.value * b.hess + b.value * a.hess + cross + cross.transpose()};
}

Jet2 compose(const Jet2& a, double f, double df, double d2f) {
  return {f, df * a.grad, df * a.hess + d2f * (a.grad * a.grad.transpose())};
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double v = b.value;
  return a * compose(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet2 powi(const Jet2& a, int n) {
  if (n == 0) return Jet2::constant(1.0, a.nvars());
  const double x = a.value;
  const double f = std::pow(x, n);
  const double df = n * std::pow(x, n - 1);
  const double d2f = (n == 1) ? 0.0 : n * (n - 1) * std::pow(x, n - 2);
  return compose(a, f, df, d2f);
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return compose(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return compose(a, c, -s, -c);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return compose(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  const double x = a.value;
  return compose(a, std::log(x), 1.0 / x, -1.0 / (x * x));
}

Jet2 sqrt(const Jet2& a) {
  const double r = std::sqrt(a.value);
  return compose(a, r, 0.5 / r, -0.25 / (r * a.value));
}

namespace {

const Jet2& check(const Jet2& j, const ExprNode& e) {
  if (!std::isfinite(j.value) || !j.grad.allFinite() || !j.hess.allFinite())
    throw EvalError("non-finite jet", unparse(e));
  return j;
}

Jet2 eval_rec(const ExprNode& e, std::span<const double> point) {
  const int m = static_cast<int>(point.size());
  auto arg = [&](int i) { return eval_rec(e.args[i], point); };
  switch (e.kind) {
    case ExprKind::Constant: return Jet2::constant(e.constant, m);
    case ExprKind::Variable:
      if (e.variable < 0 || e.variable >= m) throw EvalError("variable index out of range", unparse(e));
      return Jet2::variable(point[e.variable], e.variable, m);
    case ExprKind::Add: return arg(0) + arg(1);
    case ExprKind::Sub: return arg(0) - arg(1);
    case ExprKind::Mul: return check(arg(0) * arg(1), e);
    case ExprKind::Div: {
      Jet2 d = arg(1);
      if (d.value == 0.0) throw EvalError("division by zero", unparse(e));
      return check(arg(0) / d, e);
    }
    case ExprKind::Neg: return -arg(0);
    case ExprKind::Pow: {
      Jet2 b = arg(0);
      if (b.value == 0.0 && e.exponent < 0) throw EvalError("zero raised to a negative power", unparse(e));
      return check(powi(b, e.exponent), e);
    }
    case ExprKind::Sin: return sin(arg(0));
    case ExprKind::Cos: return cos(arg(0));
    case ExprKind::Exp: return check(exp(arg(0)), e);
    case ExprKind::Log: {
      Jet2 a = arg(0);
      if (!(a.value > 0.0)) throw EvalError("log of nonpositive value", unparse(e));
      return log(a);
    }
    case ExprKind::Sqrt: {
      Jet2 a = arg(0);
      // The derivative blows up at 0, so the jet needs a strictly positive argument.
      if (!(a.value > 0.0)) throw EvalError("sqrt of nonpositive value", unparse(e));
      return sqrt(a);
    }
  }
  throw EvalError("unknown node kind", unparse(e));
}

}  // namespace

Jet2 eval_jet2(const ExprNode& e, std::span<const double> point) {
  Jet2 j = eval_rec(e, point);
  // Symmetric by construction; make it bitwise exact.
  j.hess = 0.5 * (j.hess + j.hess.transpose()).eval();
  return j;
}

}  // namespace wsheet
