#pragma once

// Pseudo-orthonormal normal frames {nT, nS_1, ..., nS_{k-1}} of the momentary
// space S_t at a point, and the unit normal sphere N_1[S_t]_p they span.

#include <vector>

#include "wsheet/minkowski.hpp"
#include "wsheet/worldsheet.hpp"

namespace wsheet {

struct NormalFrame {
  MinkVector nT;               // future-directed unit timelike, tangent to W
  std::vector<MinkVector> nS;  // k - 1 pseudo-orthonormal spacelike normals
};

/// A point of the (k-2)-sphere spanned by nS. For k = 2 the sphere is {+nS_1, -nS_1}
/// and only `sign` is used; otherwise `angles` holds k - 2 spherical coordinates:
///   xi = cos a1 nS1 + sin a1 cos a2 nS2 + ... + sin a1 ... sin a_{k-2} nS_{k-1}.
struct SphereAngles {
  std::vector<double> angles;
  int sign = 1;

  static SphereAngles branch(int sign) { return {{}, sign}; }
  static SphereAngles spherical(std::vector<double> angles) { return {std::move(angles), 1}; }
};

/// Future-directed unit timelike normal: Xt with its slice-tangential part removed.
/// Throws DegeneracyError when the remainder is not timelike.
MinkVector timelike_normal(const PointEval& pe);

struct FrameOptions {
  double pivot = 1e-8;  // minimum squared norm of a Gram-Schmidt candidate
};

/// Gram-Schmidt under <,> on e1, ..., en, e0 projected onto {Xu, nT}^perp.
/// Deterministic: lowest basis index wins. Throws DegeneracyError on rank loss.
NormalFrame spacelike_frame(const PointEval& pe, const MinkVector& nT, const FrameOptions& opts = {});

/// timelike_normal followed by spacelike_frame.
NormalFrame normal_frame(const PointEval& pe, const FrameOptions& opts = {});

MinkVector xi_from_angles(const NormalFrame& frame, const SphereAngles& a);

/// Flips each nS_a whose pairing with reference.nS_a is negative.
void align_frame(NormalFrame& frame, const NormalFrame& reference);

/// Index of the neighbour a grid sweep aligns against: the last nonzero
/// multi-index entry decremented. Returns false for the origin.
bool sweep_parent(const GridShape& shape, std::size_t flat, std::size_t& parent);

/// Frames at every grid point (axes u1..us, t), sign-aligned along the sweep
/// so that consecutive frames do not flip. Fills `evals` with the point data.
std::vector<NormalFrame> aligned_frames(const WorldSheetSpec& spec, std::span<const GridAxis> axes,
                                        std::vector<PointEval>& evals, const FrameOptions& opts = {});

}  // namespace wsheet
