#pragma once

// Second-order forward jets: value, gradient and Hessian of a scalar with
// respect to the chart variables (u1, ..., us, t), propagated exactly through
// an expression tree by truncated Taylor arithmetic.

#include <span>

#include <Eigen/Dense>

#include "wsheet/expr.hpp"

namespace wsheet {

struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  static Jet2 constant(double c, int nvars);
  /// The jet of coordinate function x_index.
  static Jet2 variable(double value, int index, int nvars);

  int nvars() const { return static_cast<int>(grad.size()); }
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(double s, const Jet2& a);
Jet2 operator+(double s, const Jet2& a);

/// Composition f(a) given f(a0), f'(a0), f''(a0).
Jet2 compose(const Jet2& a, double f, double df, double d2f);

Jet2 powi(const Jet2& a, int n);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);

/// Value, gradient and Hessian of `e` at `point`. Throws EvalError on domain violations.
Jet2 eval_jet2(const ExprNode& e, std::span<const double> point);

}  // namespace wsheet
