#pragma once

// Lightcone Gauss maps and the curvatures they induce on a momentary space S_t.

#include <optional>
#include <span>

#include <Eigen/Dense>

#include "wsheet/frame.hpp"
#include "wsheet/minkowski.hpp"
#include "wsheet/worldsheet.hpp"

namespace wsheet {

struct LightconeGauss {
  MinkVector LG;             // nT + xi, lightlike
  MinkVector LG_normalized;  // LG / ell0, first coordinate 1
  double ell0 = 0.0;         // time component of LG
};

LightconeGauss lightcone_gauss(const NormalFrame& frame, const MinkVector& xi);

/// h_ij = <LG, X_{u_i u_j}>.
Eigen::MatrixXd second_fundamental(const PointEval& pe, const MinkVector& LG);

struct CurvatureData {
  MinkVector LG;
  MinkVector LG_normalized;
  double ell0 = 0.0;
  Eigen::MatrixXd h;
  Eigen::MatrixXd shape;  // h g^{-1}
  Eigen::VectorXd kappas;  // ascending
  double K_ell = 0.0;
  Eigen::VectorXd kappas_normalized;
  double K_ell_normalized = 0.0;
};

/// Completes the record: shape operator, principal curvatures (eigenvalues of
/// C^{-1} h C^{-T} with g = C C^T, ascending), K = det(h)/det(g) and the
/// normalized variants scaled by 1/ell0 and 1/ell0^s.
CurvatureData shape_and_curvatures(const PointEval& pe, const Eigen::MatrixXd& h, const LightconeGauss& gauss);

/// Convenience: frame -> xi -> Gauss map -> h -> curvatures.
CurvatureData curvature_at(const PointEval& pe, const NormalFrame& frame, const SphereAngles& angles);

/// Spectrum of the lightcone shape operator on N_1[S_t]: the s principal
/// curvatures followed by k - 2 copies of -1.
Eigen::VectorXd big_shape_spectrum(const CurvatureData& cd, int k);

struct PointClassification {
  bool parabolic = false;
  bool umbilical = false;
  bool flat_umbilical = false;
};

struct ClassifyOptions {
  double rel_tol = 1e-8;  // tolerance = rel_tol * (1 + |h|)
};

PointClassification classify_point(const CurvatureData& cd, const ClassifyOptions& opts = {});

struct ConstancyReport {
  bool constant = false;
  std::size_t samples = 0;
  double max_angle = 0.0;  // largest angle between normalized Gauss directions and the first sample
  std::optional<LightlikeHyperplane> plane;
  double max_plane_residual = 0.0;
  double max_abs_K = 0.0;
};

/// Sweeps the u grid of S_{t0} with sign-aligned frames and tests whether the
/// normalized Gauss map is constant; if so fits the hyperplane HP(v, c)
/// containing the slice.
ConstancyReport gauss_map_constancy(const WorldSheetSpec& spec, double t0, const SphereAngles& angles,
                                    std::span<const GridAxis> u_axes, double angle_tol = 1e-7);

struct WeingartenResidual {
  double plain = 0.0;       // |pi^t d_i LG + sum_j h_i^j Xu_j|, max over i
  double normalized = 0.0;  // same for the normalized map with the 1/ell0 factor
  double h_formulas = 0.0;  // |<-d_i LG, Xu_j> - h_ij|, max over i, j
};

/// Central differences of the Gauss map along each u_i (step `step`), with
/// frames at the shifted points sign-aligned to the centre frame.
WeingartenResidual weingarten_residual(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                       const SphereAngles& angles, double step = 1e-4);

/// Slice-tangential projection: sum_j c_j Xu_j with g c = (<y, Xu_j>)_j.
MinkVector tangential_part(const PointEval& pe, const MinkVector& y);

}  // namespace wsheet
