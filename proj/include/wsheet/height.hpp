#pragma once

// Lightcone height functions H((u,t), v) = <X(u,t), v> for v on the lightcone
// unit sphere, and the extended family H~((u,t), v) = <X, v/v0> - v0 for v in LC*.

#include <span>

#include <Eigen/Dense>

#include "wsheet/frame.hpp"
#include "wsheet/minkowski.hpp"
#include "wsheet/worldsheet.hpp"

namespace wsheet {

struct HeightEval {
  double value = 0.0;
  Eigen::VectorXd grad_u;
  Eigen::MatrixXd hess_u;
  double det_hess = 0.0;
  int rank_hess = 0;
};

struct HeightOptions {
  double rank_rel_tol = 1e-8;
  double rank_abs_floor = 1e-10;
};

/// v must satisfy v0 = 1 and <v,v> = 0; throws DomainError otherwise.
HeightEval height(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v,
                  const HeightOptions& opts = {});

/// v must be lightlike with v0 != 0; the u-derivatives equal those of height at pi^L_S(v).
HeightEval extended_height(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v,
                           const HeightOptions& opts = {});

/// The normalized Gauss direction of xi: the v at which grad_u H vanishes.
MinkVector critical_lightcone_direction(const NormalFrame& frame, const SphereAngles& angles);

struct HessianIdentity {
  double deviation = 0.0;          // max |Hess H - (1/ell0) h|
  double deviation_negated = 0.0;  // max |Hess H + (1/ell0) h|, the opposite-sign convention
};

/// Compares Hess_u H at v = normalized Gauss direction with (1/ell0) h_ij.
HessianIdentity hessian_identity_check(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                       const SphereAngles& angles);

/// Columns: derivatives of (H~, H~_{u_1..u_s}) in the lightcone chart (v1, ..., vn),
/// v0 = sign(v0) sqrt(v1^2 + ... + vn^2), propagated with first-order jets. Shape (s+1) x n.
Eigen::MatrixXd morse_b_matrix(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v);

struct MorseOptions {
  double rank_rel_tol = 1e-8;
  double sigma_tol = 1e-8;  // on-Sigma_* tolerance, relative to max(1, |X|, |v0|)
};

/// Numerical rank of the B matrix at a point of Sigma_*(H~) (H~ = grad_u H~ = 0).
/// Throws PreconditionError off Sigma_*.
int morse_family_rank(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v,
                      const MorseOptions& opts = {});

}  // namespace wsheet
