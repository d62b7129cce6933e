#pragma once

// Lightcone pedal maps, sampled big wave fronts and their singular sets.

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "wsheet/frame.hpp"
#include "wsheet/minkowski.hpp"
#include "wsheet/worldsheet.hpp"

namespace wsheet {

struct PedalOptions {
  double degenerate_tol = 1e-9;  // |<X, LG~>| <= tol * max(1, |X|) leaves LC*
};

struct PedalPoint {
  MinkVector pedal;      // <X, LG~> LG~
  MinkVector direction;  // LG~
  double scalar = 0.0;   // <X, LG~>, also the time coordinate of the pedal
  bool degenerate = false;
};

PedalPoint pedal_point(const PointEval& pe, const NormalFrame& frame, const SphereAngles& angles,
                       const PedalOptions& opts = {});

/// Pointwise version; uses the frame built at (u, t) without alignment.
PedalPoint pedal_point(const WorldSheetSpec& spec, std::span<const double> u, double t, const SphereAngles& angles,
                       const PedalOptions& opts = {});

/// (LP(S_t)((u,t), xi), t).
std::pair<MinkVector, double> unfolded_pedal(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                             const SphereAngles& angles);

/// Morse rank at the pedal point of xi (see morse_family_rank).
int morse_family_rank(const WorldSheetSpec& spec, std::span<const double> u, double t, const SphereAngles& angles);

struct TangentHyperplane {
  LightlikeHyperplane plane;    // HP(LG~, <X, LG~>)
  bool degenerate = false;      // pedal left LC*; plane passes through the origin
  double position_residual = 0.0;
  double max_tangent_residual = 0.0;  // max_i |<Xu_i, LG~>|
};

TangentHyperplane tangent_lightlike_hyperplane(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                               const SphereAngles& angles, const PedalOptions& opts = {});

/// Sampling of N_1(W): u axes, k - 2 sphere-angle axes (k >= 3) or sign
/// branches (k = 2), and the t axis.
struct FrontGrid {
  std::vector<GridAxis> u_axes;
  std::vector<GridAxis> angle_axes;
  std::vector<int> branches{1};
  GridAxis t_axis;

  /// Defaults over the sheet's domain: `count` points per axis, angles
  /// a1..a_{k-3} at cell midpoints of (0, pi) and the last angle periodic on [0, 2 pi).
  static FrontGrid over_domain(const WorldSheetSpec& spec, int count = 33);
};

struct FrontFlags {
  bool legendrian_singular = false;
  bool space_singular = false;
  bool time_singular = false;
  bool degenerate_zero = false;
};

struct FrontSample {
  std::vector<double> u;
  SphereAngles xi;
  double t = 0.0;
  MinkVector pedal;
  double scalar = 0.0;
  Eigen::MatrixXd jacobian;  // rows: pedal x1..xn, then t; columns: the n parameters
  int jac_rank = 0;
  int space_rank = 0;
  FrontFlags flags;
};

struct FrontMeshOptions {
  PedalOptions pedal;
  double rank_rel_tol = 1e-6;
};

struct FrontMesh {
  int n = 0;
  FrontGrid grid;
  GridShape shape;  // parameter axes u1..us, a1..a_{k-2}, t
  std::vector<int> branches;
  std::vector<FrontSample> samples;  // branch-major, then flat over `shape`
  std::vector<std::array<std::size_t, 3>> triangles;
  std::vector<std::vector<std::size_t>> slice_polylines;  // n = 2: one polyline per (branch, t)
  std::vector<bool> axis_periodic;

  std::size_t index(std::size_t branch, std::size_t flat) const { return branch * shape.size() + flat; }
  const GridAxis& axis(int a) const;
};

/// Evaluates the unfolded pedal map on the grid and its grid finite-difference
/// Jacobians. Requires at least 3 points on every axis (ConfigError otherwise).
FrontMesh front_mesh(const WorldSheetSpec& spec, const FrontGrid& grid, const FrontMeshOptions& opts = {});

/// Fills the rank-based flags from the Jacobians.
void singular_scan(FrontMesh& mesh, double rank_rel_tol = 1e-6);

struct DiscriminantPoint {
  std::size_t sample = 0;
  MinkVector pedal;
  double t = 0.0;
};

struct DiscriminantOptions {
  double match_rel = 1e-6;  // delta_match relative to the bounding-box diagonal
  int sep_cells = 10;       // minimum parameter separation, in grid cells
  std::size_t max_pairs = 100000;
};

struct DiscriminantReport {
  std::vector<DiscriminantPoint> caustic_points;
  std::vector<std::pair<std::size_t, std::size_t>> maxwell_pairs;
  std::vector<DiscriminantPoint> delta_points;
  double delta_match = 0.0;
  bool maxwell_truncated = false;
};

DiscriminantReport discriminant_extract(const FrontMesh& mesh, const DiscriminantOptions& opts = {});

/// Grid-index distance between two samples of the same branch (Chebyshev,
/// wrapping periodic axes). Different branches are infinitely far apart.
int parameter_separation(const FrontMesh& mesh, std::size_t a, std::size_t b);

}  // namespace wsheet
