#include "wsheet/pedal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "wsheet/curvature.hpp"
#include "wsheet/errors.hpp"
#include "wsheet/height.hpp"
#include "wsheet/parallel.hpp"

namespace wsheet {

PedalPoint pedal_point(const PointEval& pe, const NormalFrame& frame, const SphereAngles& angles,
                       const PedalOptions& opts) {
  PedalPoint p;
  p.direction = lightcone_gauss(frame, xi_from_angles(frame, angles)).LG_normalized;
  p.scalar = pseudo_product(pe.position, p.direction);
  p.pedal = p.scalar * p.direction;
  p.degenerate = std::abs(p.scalar) <= opts.degenerate_tol * std::max(1.0, pe.position.coords().norm());
  return p;
}

PedalPoint pedal_point(const WorldSheetSpec& spec, std::span<const double> u, double t, const SphereAngles& angles,
                       const PedalOptions& opts) {
  const PointEval pe = evaluate(spec, u, t);
  return pedal_point(pe, normal_frame(pe), angles, opts);
}

std::pair<MinkVector, double> unfolded_pedal(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                             const SphereAngles& angles) {
  return {pedal_point(spec, u, t, angles).pedal, t};
}

int morse_family_rank(const WorldSheetSpec& spec, std::span<const double> u, double t, const SphereAngles& angles) {
  const PedalPoint p = pedal_point(spec, u, t, angles);
  if (p.degenerate) throw PreconditionError("morse_family_rank: pedal point is not in LC*");
  return morse_family_rank(spec, u, t, p.pedal);
}

TangentHyperplane tangent_lightlike_hyperplane(const WorldSheetSpec& spec, std::span<const double> u, double t,
                                               const SphereAngles& angles, const PedalOptions& opts) {
  const PointEval pe = evaluate(spec, u, t);
  const PedalPoint p = pedal_point(pe, normal_frame(pe), angles, opts);
  TangentHyperplane tp{LightlikeHyperplane(p.direction, p.scalar), p.degenerate, 0.0, 0.0};
  tp.position_residual = hyperplane_residual(tp.plane, pe.position);
  for (const auto& xu : pe.Xu)
    tp.max_tangent_residual = std::max(tp.max_tangent_residual, std::abs(pseudo_product(xu, p.direction)));
  return tp;
}

FrontGrid FrontGrid::over_domain(const WorldSheetSpec& spec, int count) {
  FrontGrid g;
  for (int i = 0; i < spec.s; ++i)
    g.u_axes.push_back({spec.u_domain[i].lo, spec.u_domain[i].hi, count, static_cast<bool>(spec.u_periodic[i])});
  const int m = spec.k - 2;
  for (int i = 0; i < m; ++i) {
    if (i + 1 == m) {
      g.angle_axes.push_back({0.0, 2.0 * std::numbers::pi, count, true});
    } else {
      const double half = std::numbers::pi / (2.0 * count);
      g.angle_axes.push_back({half, std::numbers::pi - half, count, false});
    }
  }
  g.t_axis = {spec.t_domain.lo, spec.t_domain.hi, count, false};
  return g;
}

const GridAxis& FrontMesh::axis(int a) const {
  const int s = static_cast<int>(grid.u_axes.size());
  const int m = static_cast<int>(grid.angle_axes.size());
  if (a < s) return grid.u_axes[a];
  if (a < s + m) return grid.angle_axes[a - s];
  return grid.t_axis;
}

namespace {

void require_axis(const GridAxis& ax, const std::string& name) {
  if (ax.count < 3)
    throw ConfigError("front grid axis " + name + " has " + std::to_string(ax.count) +
                      " points; Jacobians need at least 3");
  if (!(ax.hi > ax.lo)) throw ConfigError("front grid axis " + name + " has an empty range");
}

void add_quads(FrontMesh& mesh, std::size_t branch, int ax_a, int ax_b, std::vector<int> base) {
  const auto& counts = mesh.shape.counts();
  const int na = counts[ax_a], nb = counts[ax_b];
  const bool wrap_a = mesh.axis_periodic[ax_a], wrap_b = mesh.axis_periodic[ax_b];
  const int qa = wrap_a ? na : na - 1;
  const int qb = wrap_b ? nb : nb - 1;
  auto id = [&](int i, int j) {
    base[ax_a] = i % na;
    base[ax_b] = j % nb;
    return mesh.index(branch, mesh.shape.flatten(base));
  };
  for (int i = 0; i < qa; ++i) {
    for (int j = 0; j < qb; ++j) {
      const std::size_t v00 = id(i, j), v10 = id(i + 1, j), v11 = id(i + 1, j + 1), v01 = id(i, j + 1);
      mesh.triangles.push_back({v00, v10, v11});
      mesh.triangles.push_back({v00, v11, v01});
    }
  }
}

void build_connectivity(FrontMesh& mesh) {
  const int rank = mesh.shape.rank();
  const int t_axis = rank - 1;
  for (std::size_t b = 0; b < mesh.branches.size(); ++b) {
    if (mesh.n == 2) {
      // (param, t) surface in (x1, x2, t) and one polyline per t slice.
      add_quads(mesh, b, 0, t_axis, std::vector<int>(rank, 0));
      const int np = mesh.shape.counts()[0];
      for (int it = 0; it < mesh.shape.counts()[t_axis]; ++it) {
        std::vector<std::size_t> line;
        std::vector<int> idx(rank, 0);
        idx[t_axis] = it;
        for (int i = 0; i < np; ++i) {
          idx[0] = i;
          line.push_back(mesh.index(b, mesh.shape.flatten(idx)));
        }
        if (mesh.axis_periodic[0]) line.push_back(line.front());
        mesh.slice_polylines.push_back(std::move(line));
      }
    } else if (mesh.n == 3) {
      for (int it = 0; it < mesh.shape.counts()[t_axis]; ++it) {
        std::vector<int> base(rank, 0);
        base[t_axis] = it;
        add_quads(mesh, b, 0, 1, base);
      }
    }
  }
}

}  // namespace

FrontMesh front_mesh(const WorldSheetSpec& spec, const FrontGrid& grid, const FrontMeshOptions& opts) {
  const int s = spec.s;
  const int n = spec.n();
  const int m = spec.k - 2;
  if (static_cast<int>(grid.u_axes.size()) != s) throw ConfigError("front grid needs one axis per u coordinate");
  if (static_cast<int>(grid.angle_axes.size()) != m)
    throw ConfigError("front grid needs " + std::to_string(m) + " sphere-angle axes");
  for (int i = 0; i < s; ++i) require_axis(grid.u_axes[i], "u" + std::to_string(i + 1));
  for (int i = 0; i < m; ++i) require_axis(grid.angle_axes[i], "angle" + std::to_string(i + 1));
  require_axis(grid.t_axis, "t");

  FrontMesh mesh;
  mesh.n = n;
  mesh.grid = grid;
  mesh.branches = (m == 0) ? grid.branches : std::vector<int>{1};
  if (mesh.branches.empty()) throw ConfigError("front grid has no sign branches");

  std::vector<int> counts;
  for (const auto& ax : grid.u_axes) {
    counts.push_back(ax.count);
    mesh.axis_periodic.push_back(ax.periodic);
  }
  for (const auto& ax : grid.angle_axes) {
    counts.push_back(ax.count);
    mesh.axis_periodic.push_back(ax.periodic);
  }
  counts.push_back(grid.t_axis.count);
  mesh.axis_periodic.push_back(false);
  mesh.shape = GridShape(counts);

  // Frames live on the (u, t) grid; sphere angles reuse them.
  std::vector<GridAxis> ut_axes = grid.u_axes;
  ut_axes.push_back(grid.t_axis);
  std::vector<int> ut_counts;
  for (const auto& ax : ut_axes) ut_counts.push_back(ax.count);
  const GridShape ut_shape(ut_counts);
  std::vector<PointEval> evals;
  const auto frames = aligned_frames(spec, ut_axes, evals);

  const std::size_t per_branch = mesh.shape.size();
  mesh.samples.resize(per_branch * mesh.branches.size());
  parallel_for(mesh.samples.size(), [&](std::size_t i) {
    const std::size_t b = i / per_branch;
    const auto idx = mesh.shape.unflatten(i % per_branch);
    std::vector<int> ut_idx(idx.begin(), idx.begin() + s);
    ut_idx.push_back(idx.back());
    const std::size_t ut = ut_shape.flatten(ut_idx);

    FrontSample& fs = mesh.samples[i];
    fs.u = evals[ut].u;
    fs.t = evals[ut].t;
    if (m == 0) {
      fs.xi = SphereAngles::branch(mesh.branches[b]);
    } else {
      std::vector<double> a(m);
      for (int j = 0; j < m; ++j) a[j] = grid.angle_axes[j].value(idx[s + j]);
      fs.xi = SphereAngles::spherical(std::move(a));
    }
    const PedalPoint p = pedal_point(evals[ut], frames[ut], fs.xi, opts.pedal);
    fs.pedal = p.pedal;
    fs.scalar = p.scalar;
    fs.flags.degenerate_zero = p.degenerate;
  });

  // Grid finite differences of (x1..xn, t) with step = grid spacing.
  const int rank = mesh.shape.rank();
  parallel_for(mesh.samples.size(), [&](std::size_t i) {
    const std::size_t b = i / per_branch;
    const auto idx = mesh.shape.unflatten(i % per_branch);
    FrontSample& fs = mesh.samples[i];
    fs.jacobian.resize(n + 1, n);
    auto value = [&](const std::vector<int>& at) {
      const FrontSample& q = mesh.samples[mesh.index(b, mesh.shape.flatten(at))];
      Eigen::VectorXd v(n + 1);
      v.head(n) = q.pedal.spatial();
      v[n] = q.t;
      return v;
    };
    for (int a = 0; a < rank; ++a) {
      const GridAxis& ax = mesh.axis(a);
      const int cnt = counts[a];
      const double h = ax.step();
      std::vector<int> lo = idx, hi = idx;
      double span = 2.0 * h;
      if (ax.periodic) {
        lo[a] = (idx[a] - 1 + cnt) % cnt;
        hi[a] = (idx[a] + 1) % cnt;
      } else if (idx[a] == 0) {
        hi[a] = 1;
        span = h;
      } else if (idx[a] == cnt - 1) {
        lo[a] = cnt - 2;
        span = h;
      } else {
        lo[a] = idx[a] - 1;
        hi[a] = idx[a] + 1;
      }
      fs.jacobian.col(a) = (value(hi) - value(lo)) / span;
    }
  });

  singular_scan(mesh, opts.rank_rel_tol);
  build_connectivity(mesh);
  return mesh;
}

void singular_scan(FrontMesh& mesh, double rank_rel_tol) {
  const int n = mesh.n;
  for (auto& fs : mesh.samples) {
    fs.jac_rank = numerical_rank(fs.jacobian, rank_rel_tol);
    fs.space_rank = numerical_rank(fs.jacobian.topRows(n), rank_rel_tol);
    fs.flags.time_singular = fs.jacobian.row(n).isZero(0.0);
    // Vertex samples are kept but carry no singularity classification.
    fs.flags.legendrian_singular = !fs.flags.degenerate_zero && fs.jac_rank < n;
    fs.flags.space_singular = !fs.flags.degenerate_zero && fs.space_rank < n;
  }
}

int parameter_separation(const FrontMesh& mesh, std::size_t a, std::size_t b) {
  const std::size_t per = mesh.shape.size();
  if (a / per != b / per) return std::numeric_limits<int>::max();
  const auto ia = mesh.shape.unflatten(a % per);
  const auto ib = mesh.shape.unflatten(b % per);
  int sep = 0;
  for (int ax = 0; ax < mesh.shape.rank(); ++ax) {
    int d = std::abs(ia[ax] - ib[ax]);
    if (mesh.axis_periodic[ax]) d = std::min(d, mesh.shape.counts()[ax] - d);
    sep = std::max(sep, d);
  }
  return sep;
}

namespace {

struct CellKey {
  std::vector<long long> c;
  friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (long long v : k.c) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

DiscriminantReport discriminant_extract(const FrontMesh& mesh, const DiscriminantOptions& opts) {
  DiscriminantReport rep;
  const int dim = mesh.n + 1;
  std::vector<std::size_t> regular;
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(dim + 1, std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (std::size_t i = 0; i < mesh.samples.size(); ++i) {
    const FrontSample& fs = mesh.samples[i];
    if (fs.flags.degenerate_zero) continue;
    if (fs.flags.legendrian_singular) {
      rep.caustic_points.push_back({i, fs.pedal, fs.t});
      continue;
    }
    if (fs.flags.space_singular) rep.delta_points.push_back({i, fs.pedal, fs.t});
    regular.push_back(i);
    Eigen::VectorXd key(dim + 1);
    key.head(dim) = fs.pedal.coords();
    key[dim] = fs.t;
    lo = lo.cwiseMin(key);
    hi = hi.cwiseMax(key);
  }
  if (regular.empty()) return rep;
  rep.delta_match = opts.match_rel * (hi - lo).norm();
  if (rep.delta_match <= 0.0) return rep;

  // Hash the regular samples by (pedal, t) in cells of side 2 delta; t is a
  // grid value, so samples are only compared within the same slice.
  const double cell = 2.0 * rep.delta_match;
  std::unordered_map<CellKey, std::vector<std::size_t>, CellHash> table;
  auto key_of = [&](const FrontSample& fs) {
    CellKey k;
    for (int a = 0; a < dim; ++a) k.c.push_back(static_cast<long long>(std::floor(fs.pedal[a] / cell)));
    k.c.push_back(static_cast<long long>(std::llround(fs.t / cell)));
    return k;
  };
  for (std::size_t i : regular) table[key_of(mesh.samples[i])].push_back(i);

  std::vector<int> offset(dim, -1);
  for (std::size_t i : regular) {
    const FrontSample& fi = mesh.samples[i];
    const CellKey base = key_of(fi);
    std::fill(offset.begin(), offset.end(), -1);
    for (;;) {
      CellKey probe = base;
      for (int a = 0; a < dim; ++a) probe.c[a] += offset[a];
      if (auto it = table.find(probe); it != table.end()) {
        for (std::size_t j : it->second) {
          if (j <= i) continue;
          const FrontSample& fj = mesh.samples[j];
          if (fj.t != fi.t) continue;
          if ((fj.pedal - fi.pedal).coords().norm() > rep.delta_match) continue;
          if (parameter_separation(mesh, i, j) < opts.sep_cells) continue;
          if (rep.maxwell_pairs.size() >= opts.max_pairs) {
            rep.maxwell_truncated = true;
            break;
          }
          rep.maxwell_pairs.emplace_back(i, j);
        }
      }
      int a = 0;
      while (a < dim && offset[a] == 1) offset[a++] = -1;
      if (a == dim) break;
      ++offset[a];
    }
  }
  std::sort(rep.maxwell_pairs.begin(), rep.maxwell_pairs.end());
  return rep;
}

}  // namespace wsheet
