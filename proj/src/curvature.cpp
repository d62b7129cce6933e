#include "wsheet/curvature.hpp"

#include <cmath>

#include "wsheet/errors.hpp"

namespace wsheet {

LightconeGauss lightcone_gauss(const NormalFrame& frame, const MinkVector& xi) {
  LightconeGauss out;
  out.LG = frame.nT + xi;
  out.ell0 = out.LG[0];
  out.LG_normalized = out.LG / out.ell0;
  out.LG_normalized[0] = 1.0;
  return out;
}

Eigen::MatrixXd second_fundamental(const PointEval& pe, const MinkVector& LG) {
  const int s = static_cast<int>(pe.Xu.size());
  Eigen::MatrixXd h(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) h(i, j) = pseudo_product(LG, pe.Xuu[i][j]);
  return h;
}

CurvatureData shape_and_curvatures(const PointEval& pe, const Eigen::MatrixXd& h, const LightconeGauss& gauss) {
  const int s = static_cast<int>(h.rows());
  CurvatureData cd;
  cd.LG = gauss.LG;
  cd.LG_normalized = gauss.LG_normalized;
  cd.ell0 = gauss.ell0;
  cd.h = h;
  cd.shape = h * pe.g_inv;

  Eigen::LLT<Eigen::MatrixXd> llt(pe.g);
  if (llt.info() != Eigen::Success) throw DegeneracyError("shape_and_curvatures: metric is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd tmp = L.triangularView<Eigen::Lower>().solve(h);
  Eigen::MatrixXd sym = L.triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("shape_and_curvatures: eigenvalue iteration failed");
  cd.kappas = es.eigenvalues();

  cd.K_ell = determinant(h) / pe.det_g;
  cd.kappas_normalized = cd.kappas / cd.ell0;
  cd.K_ell_normalized = cd.K_ell / std::pow(cd.ell0, s);
  return cd;
}

CurvatureData curvature_at(const PointEval& pe, const NormalFrame& frame, const SphereAngles& angles) {
  const LightconeGauss gauss = lightcone_gauss(frame, xi_from_angles(frame, angles));
  return shape_and_curvatures(pe, second_fundamental(pe, gauss.LG), gauss);
}

Eigen::VectorXd big_shape_spectrum(const CurvatureData& cd, int k) {
  if (k < 2) throw InputError("big_shape_spectrum: k must be at least 2");
  const Eigen::Index s = cd.kappas.size();
  Eigen::VectorXd out(s + k - 2);
  out.head(s) = cd.kappas;
  out.tail(k - 2).setConstant(-1.0);
  return out;
}

PointClassification classify_point(const CurvatureData& cd, const ClassifyOptions& opts) {
  const double tol = opts.rel_tol * (1.0 + cd.h.norm());
  const Eigen::Index s = cd.shape.rows();
  const double mean = cd.shape.trace() / static_cast<double>(s);
  PointClassification pc;
  pc.flat_umbilical = cd.h.norm() <= tol;
  pc.parabolic = pc.flat_umbilical || std::abs(cd.K_ell) <= tol;
  pc.umbilical =
      pc.flat_umbilical || (cd.shape - mean * Eigen::MatrixXd::Identity(s, s)).norm() <= tol;
  return pc;
}

MinkVector tangential_part(const PointEval& pe, const MinkVector& y) {
  const int s = static_cast<int>(pe.Xu.size());
  Eigen::VectorXd p(s);
  for (int j = 0; j < s; ++j) p[j] = pseudo_product(y, pe.Xu[j]);
  const Eigen::VectorXd c = pe.g_inv * p;
  MinkVector out = MinkVector::zero(y.dim());
  for (int j = 0; j < s; ++j) out += c[j] * pe.Xu[j];
  return out;
}

namespace {

double unit_angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 2.0 * std::asin(std::min(1.0, 0.5 * (a - b).norm()));
}

}  // namespace

ConstancyReport gauss_map_constancy(const WorldSheetSpec& spec, double t0, const SphereAngles& angles,
                                    std::span<const GridAxis> u_axes, double angle_tol) {
  if (static_cast<int>(u_axes.size()) != spec.s) throw InputError("gauss_map_constancy: one axis per u coordinate");
  std::vector<GridAxis> axes(u_axes.begin(), u_axes.end());
  axes.push_back({t0, t0, 1, false});
  std::vector<PointEval> evals;
  const auto frames = aligned_frames(spec, axes, evals);

  ConstancyReport rep;
  rep.samples = frames.size();
  std::vector<MinkVector> dirs;
  dirs.reserve(frames.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(spec.n());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const CurvatureData cd = curvature_at(evals[i], frames[i], angles);
    rep.max_abs_K = std::max(rep.max_abs_K, std::abs(cd.K_ell));
    dirs.push_back(cd.LG_normalized);
    mean += cd.LG_normalized.spatial();
  }
  if (dirs.empty()) return rep;
  const Eigen::VectorXd ref = dirs.front().spatial();
  for (const auto& d : dirs) rep.max_angle = std::max(rep.max_angle, unit_angle(d.spatial(), ref));
  rep.constant = rep.max_angle <= angle_tol;
  if (!rep.constant) return rep;

  Eigen::VectorXd v(spec.ambient_dim);
  v[0] = 1.0;
  v.tail(spec.n()) = mean.normalized();
  const MinkVector normal(v);
  double c = 0.0;
  for (const auto& pe : evals) c += pseudo_product(pe.position, normal);
  c /= static_cast<double>(evals.size());
  rep.plane.emplace(normal, c);
  for (const auto& pe : evals)
    rep.max_plane_residual = std::max(rep.max_plane_residual, std::abs(hyperplane_residual(*rep.plane, pe.position)));
  return rep;
}

WeingartenResidual weingarten_residual(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                       const SphereAngles& angles, double step) {
  const int s = spec.s;
  const PointEval pe = evaluate(spec, u, t, DomainCheck::Skip);
  const NormalFrame frame = normal_frame(pe);
  const CurvatureData cd = curvature_at(pe, frame, angles);
  const Eigen::MatrixXd shape = cd.shape;  // h_i^j

  auto shifted_gauss = [&](int i, double delta) {
    std::vector<double> v(u.begin(), u.end());
    v[i] += delta;
    const PointEval q = evaluate(spec, v, t, DomainCheck::Skip);
    NormalFrame f = normal_frame(q);
    align_frame(f, frame);
    return lightcone_gauss(f, xi_from_angles(f, angles));
  };

  WeingartenResidual res;
  for (int i = 0; i < s; ++i) {
    const LightconeGauss plus = shifted_gauss(i, step);
    const LightconeGauss minus = shifted_gauss(i, -step);
    const MinkVector dLG = (plus.LG - minus.LG) / (2.0 * step);
    const MinkVector dLGn = (plus.LG_normalized - minus.LG_normalized) / (2.0 * step);

    MinkVector expected = MinkVector::zero(spec.ambient_dim);
    for (int j = 0; j < s; ++j) expected -= shape(i, j) * pe.Xu[j];
    res.plain = std::max(res.plain, (tangential_part(pe, dLG) - expected).coords().norm());
    res.normalized =
        std::max(res.normalized, (tangential_part(pe, dLGn) - expected / cd.ell0).coords().norm());
    for (int j = 0; j < s; ++j)
      res.h_formulas = std::max(res.h_formulas, std::abs(-pseudo_product(dLG, pe.Xu[j]) - cd.h(i, j)));
  }
  return res;
}

}  // namespace wsheet
