#include "wsheet/height.hpp"

#include <cmath>

#include "wsheet/curvature.hpp"
#include "wsheet/errors.hpp"
#include "wsheet/jet.hpp"

namespace wsheet {

namespace {

HeightEval height_unchecked(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v,
                            const HeightOptions& opts) {
  const int s = spec.s;
  std::vector<double> p(u.begin(), u.end());
  p.push_back(t);
  Jet2 acc = Jet2::constant(0.0, s + 1);
  for (int a = 0; a < spec.ambient_dim; ++a) {
    const double w = (a == 0 ? -1.0 : 1.0) * v[a];
    if (w != 0.0) acc = acc + w * eval_jet2(spec.coords[a], p);
  }
  HeightEval he;
  he.value = acc.value;
  he.grad_u = acc.grad.head(s);
  he.hess_u = acc.hess.topLeftCorner(s, s);
  he.det_hess = determinant(he.hess_u);
  he.rank_hess = numerical_rank(he.hess_u, opts.rank_rel_tol, opts.rank_abs_floor);
  return he;
}

// First-order dual number over the lightcone chart.
struct Dual {
  double v = 0.0;
  Eigen::VectorXd d;
};

Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
Dual operator*(double c, const Dual& a) { return {c * a.v, c * a.d}; }
Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + b.v * a.d}; }
Dual operator/(const Dual& a, const Dual& b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
Dual dsqrt(const Dual& a) {
  const double r = std::sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}

}  // namespace

HeightEval height(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v,
                  const HeightOptions& opts) {
  if (v.dim() != spec.ambient_dim) throw InputError("height: v has the wrong dimension");
  if (std::abs(v[0] - 1.0) > 1e-12 || causal_class(v) != CausalClass::Lightlike)
    throw DomainError("height: v is not on the lightcone unit sphere: " + v.str());
  return height_unchecked(spec, u, t, v, opts);
}

HeightEval extended_height(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v,
                           const HeightOptions& opts) {
  if (v.dim() != spec.ambient_dim) throw InputError("extended_height: v has the wrong dimension");
  const MinkVector vt = project_to_lightcone_sphere(v);
  HeightEval he = height_unchecked(spec, u, t, vt, opts);
  he.value -= v[0];
  return he;
}

MinkVector critical_lightcone_direction(const NormalFrame& frame, const SphereAngles& angles) {
  return lightcone_gauss(frame, xi_from_angles(frame, angles)).LG_normalized;
}

HessianIdentity hessian_identity_check(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                       const SphereAngles& angles) {
  const PointEval pe = evaluate(spec, u, t);
  const NormalFrame frame = normal_frame(pe);
  const LightconeGauss gauss = lightcone_gauss(frame, xi_from_angles(frame, angles));
  const Eigen::MatrixXd h = second_fundamental(pe, gauss.LG);
  const HeightEval he = height(spec, u, t, gauss.LG_normalized);
  const Eigen::MatrixXd scaled = h / gauss.ell0;
  return {(he.hess_u - scaled).cwiseAbs().maxCoeff(), (he.hess_u + scaled).cwiseAbs().maxCoeff()};
}

Eigen::MatrixXd morse_b_matrix(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v) {
  const int n = spec.n();
  const int s = spec.s;
  if (v.dim() != spec.ambient_dim) throw InputError("morse_b_matrix: v has the wrong dimension");
  if (v[0] == 0.0) throw DomainError("morse_b_matrix: v0 = 0");
  const PointEval pe = evaluate(spec, u, t, DomainCheck::Skip);

  std::vector<Dual> chart(n);
  Dual norm2{0.0, Eigen::VectorXd::Zero(n)};
  for (int j = 0; j < n; ++j) {
    chart[j] = {v[j + 1], Eigen::VectorXd::Unit(n, j)};
    norm2 = norm2 + chart[j] * chart[j];
  }
  // Branch of the cone containing v.
  const Dual v0 = (v[0] > 0 ? 1.0 : -1.0) * dsqrt(norm2);

  auto pair_with_tilde = [&](const MinkVector& x) {
    Dual acc{-x[0], Eigen::VectorXd::Zero(n)};
    for (int j = 0; j < n; ++j) acc = acc + x[j + 1] * (chart[j] / v0);
    return acc;
  };

  Eigen::MatrixXd B(s + 1, n);
  B.row(0) = (pair_with_tilde(pe.position) + (-1.0) * v0).d.transpose();
  for (int i = 0; i < s; ++i) B.row(i + 1) = pair_with_tilde(pe.Xu[i]).d.transpose();
  return B;
}

int morse_family_rank(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v,
                      const MorseOptions& opts) {
  const HeightEval he = extended_height(spec, u, t, v);
  const PointEval pe = evaluate(spec, u, t, DomainCheck::Skip);
  const double scale = std::max({1.0, pe.position.coords().norm(), std::abs(v[0])});
  const double off = std::max(std::abs(he.value), he.grad_u.size() ? he.grad_u.cwiseAbs().maxCoeff() : 0.0);
  if (off > opts.sigma_tol * scale)
    throw PreconditionError("morse_family_rank: point is not on Sigma_* (residual " + std::to_string(off) + ")");
  return numerical_rank(morse_b_matrix(spec, u, t, v), opts.rank_rel_tol);
}

}  // namespace wsheet
