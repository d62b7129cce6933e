#include "wsheet/frame.hpp"

#include <cmath>

#include "wsheet/errors.hpp"
#include "wsheet/parallel.hpp"

namespace wsheet {

MinkVector timelike_normal(const PointEval& pe) {
  const int s = static_cast<int>(pe.Xu.size());
  Eigen::VectorXd c(s);
  for (int i = 0; i < s; ++i) c[i] = pseudo_product(pe.Xt, pe.Xu[i]);
  const Eigen::VectorXd coef = pe.g_inv * c;
  MinkVector v = pe.Xt;
  for (int j = 0; j < s; ++j) v -= coef[j] * pe.Xu[j];
  const double q = pseudo_product(v, v);
  if (!(q < -kLightlikeEps * std::max(1.0, v.coords().squaredNorm())))
    throw DegeneracyError("normal part of Xt is not timelike (<v,v> = " + std::to_string(q) + ")");
  v /= std::sqrt(-q);
  // Future directed: <v, e0> = -v0 < 0.
  if (v[0] < 0) v = -v;
  return v;
}

NormalFrame spacelike_frame(const PointEval& pe, const MinkVector& nT, const FrameOptions& opts) {
  const int dim = nT.dim();
  const int s = static_cast<int>(pe.Xu.size());
  const int want = dim - s - 1;

  // Orthogonal projector onto span{Xu, nT}^perp, w.r.t. <,>.
  std::vector<MinkVector> span = pe.Xu;
  span.push_back(nT);
  const int m = static_cast<int>(span.size());
  Eigen::MatrixXd gram(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) gram(a, b) = pseudo_product(span[a], span[b]);
  const Eigen::MatrixXd gram_inv = gram.inverse();
  auto project = [&](const MinkVector& x) {
    Eigen::VectorXd p(m);
    for (int a = 0; a < m; ++a) p[a] = pseudo_product(x, span[a]);
    const Eigen::VectorXd coef = gram_inv * p;
    MinkVector out = x;
    for (int b = 0; b < m; ++b) out -= coef[b] * span[b];
    return out;
  };

  NormalFrame frame{nT, {}};
  for (int seed = 1; seed <= dim && static_cast<int>(frame.nS.size()) < want; ++seed) {
    MinkVector y = project(MinkVector::basis(dim, seed % dim));
    for (const auto& e : frame.nS) y -= pseudo_product(y, e) * e;
    // Re-orthogonalize once against the span to scrub rounding.
    y = project(y);
    for (const auto& e : frame.nS) y -= pseudo_product(y, e) * e;
    const double q = pseudo_product(y, y);
    if (q > opts.pivot) frame.nS.push_back(y / std::sqrt(q));
  }
  if (static_cast<int>(frame.nS.size()) != want)
    throw DegeneracyError("spacelike_frame: found " + std::to_string(frame.nS.size()) + " of " +
                          std::to_string(want) + " normal vectors");
  return frame;
}

NormalFrame normal_frame(const PointEval& pe, const FrameOptions& opts) {
  return spacelike_frame(pe, timelike_normal(pe), opts);
}

MinkVector xi_from_angles(const NormalFrame& frame, const SphereAngles& a) {
  const int m = static_cast<int>(frame.nS.size());
  if (m == 1) return a.sign >= 0 ? frame.nS[0] : -frame.nS[0];
  if (static_cast<int>(a.angles.size()) != m - 1)
    throw InputError("xi_from_angles: expected " + std::to_string(m - 1) + " angles, got " +
                     std::to_string(a.angles.size()));
  MinkVector xi = MinkVector::zero(frame.nT.dim());
  double prod = 1.0;
  for (int i = 0; i < m - 1; ++i) {
    xi += (prod * std::cos(a.angles[i])) * frame.nS[i];
    prod *= std::sin(a.angles[i]);
  }
  xi += prod * frame.nS[m - 1];
  return xi;
}

void align_frame(NormalFrame& frame, const NormalFrame& reference) {
  for (std::size_t a = 0; a < frame.nS.size() && a < reference.nS.size(); ++a)
    if (pseudo_product(frame.nS[a], reference.nS[a]) < 0) frame.nS[a] = -frame.nS[a];
}

bool sweep_parent(const GridShape& shape, std::size_t flat, std::size_t& parent) {
  auto idx = shape.unflatten(flat);
  for (int a = shape.rank() - 1; a >= 0; --a) {
    if (idx[a] > 0) {
      --idx[a];
      parent = shape.flatten(idx);
      return true;
    }
  }
  return false;
}

std::vector<NormalFrame> aligned_frames(const WorldSheetSpec& spec, std::span<const GridAxis> axes,
                                        std::vector<PointEval>& evals, const FrameOptions& opts) {
  std::vector<int> counts;
  for (const auto& ax : axes) counts.push_back(ax.count);
  const GridShape shape(counts);
  evals.assign(shape.size(), {});
  std::vector<NormalFrame> frames(shape.size());
  parallel_for(shape.size(), [&](std::size_t flat) {
    const auto idx = shape.unflatten(flat);
    std::vector<double> u(spec.s);
    for (int i = 0; i < spec.s; ++i) u[i] = axes[i].value(idx[i]);
    evals[flat] = evaluate(spec, u, axes[spec.s].value(idx[spec.s]));
    frames[flat] = normal_frame(evals[flat], opts);
  });
  // Parents precede children in flat order, so one forward pass suffices.
  for (std::size_t flat = 0; flat < shape.size(); ++flat) {
    std::size_t parent = 0;
    if (sweep_parent(shape, flat, parent)) align_frame(frames[flat], frames[parent]);
  }
  return frames;
}

}  // namespace wsheet
