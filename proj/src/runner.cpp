#include "wsheet/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "wsheet/curvature.hpp"
#include "wsheet/errors.hpp"
#include "wsheet/height.hpp"
#include "wsheet/parallel.hpp"

namespace wsheet {

using nlohmann::json;

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

bool report_failed(const json& report) {
  auto it = report.find("failures");
  return it != report.end() && it->is_array() && !it->empty();
}

namespace {

std::string point_label(std::span<const double> u, double t) {
  std::string s = "(u=[";
  for (std::size_t i = 0; i < u.size(); ++i) s += (i ? ", " : "") + format_real(u[i]);
  return s + "], t=" + format_real(t) + ")";
}

template <class F>
auto at_point(const std::string& cmd, std::span<const double> u, double t, F&& f) {
  try {
    return f();
  } catch (const RunError&) {
    throw;
  } catch (const std::exception& e) {
    throw RunError(cmd + " at " + point_label(u, t) + ": " + e.what());
  }
}

json spec_json(const RunConfig& cfg) {
  return {{"ambient_dim", cfg.spec.ambient_dim},
          {"s", cfg.spec.s},
          {"k", cfg.spec.k},
          {"X", cfg.spec.coord_text}};
}

json header(const RunConfig& cfg) {
  return {{"command", to_string(cfg.command)}, {"source", cfg.source}, {"worldsheet", spec_json(cfg)}};
}

json to_json(const MinkVector& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

std::string xi_label(const SphereAngles& xi) {
  if (xi.angles.empty()) return xi.sign > 0 ? "+1" : "-1";
  std::string s;
  for (std::size_t i = 0; i < xi.angles.size(); ++i) s += (i ? ";" : "") + format_real(xi.angles[i]);
  return s;
}

json xi_json(const SphereAngles& xi) {
  if (xi.angles.empty()) return xi.sign;
  return xi.angles;
}

std::vector<GridAxis> ut_axes(const RunConfig& cfg) {
  std::vector<int> counts;
  for (int i = 1; i <= cfg.spec.s; ++i) counts.push_back(cfg.grid_count("u" + std::to_string(i)));
  counts.push_back(cfg.grid_count("t"));
  return domain_axes(cfg.spec, counts);
}

/// All xi values of the grid: sign branches for k = 2, the angle lattice otherwise.
std::vector<SphereAngles> xi_lattice(const FrontGrid& grid) {
  if (grid.angle_axes.empty()) {
    std::vector<SphereAngles> out;
    for (int b : grid.branches) out.push_back(SphereAngles::branch(b));
    return out;
  }
  std::vector<int> counts;
  for (const auto& ax : grid.angle_axes) counts.push_back(ax.count);
  const GridShape shape(counts);
  std::vector<SphereAngles> out;
  for (std::size_t f = 0; f < shape.size(); ++f) {
    const auto idx = shape.unflatten(f);
    std::vector<double> a;
    for (std::size_t j = 0; j < idx.size(); ++j) a.push_back(grid.angle_axes[j].value(idx[j]));
    out.push_back(SphereAngles::spherical(std::move(a)));
  }
  return out;
}

/// Portable uniform draws from mt19937_64 (whose output sequence is fixed by the standard).
class Sampler {
 public:
  explicit Sampler(unsigned long long seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double in(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 rng_;
};

struct RandomPoint {
  std::vector<double> u;
  double t = 0.0;
  SphereAngles xi;
};

SphereAngles random_xi(Sampler& rng, int k, const std::vector<int>& branches) {
  if (k == 2) return SphereAngles::branch(branches[static_cast<std::size_t>(rng.unit() * branches.size())]);
  std::vector<double> a(k - 2);
  for (int j = 0; j < k - 2; ++j)
    a[j] = (j + 1 == k - 2) ? rng.in(0.0, 2.0 * std::numbers::pi) : rng.in(0.05, std::numbers::pi - 0.05);
  return SphereAngles::spherical(std::move(a));
}

std::vector<RandomPoint> random_points(const RunConfig& cfg, int count) {
  Sampler rng(cfg.seed);
  std::vector<RandomPoint> pts(count);
  for (auto& p : pts) {
    for (int i = 0; i < cfg.spec.s; ++i) p.u.push_back(rng.in(cfg.spec.u_domain[i].lo, cfg.spec.u_domain[i].hi));
    p.t = rng.in(cfg.spec.t_domain.lo, cfg.spec.t_domain.hi);
    p.xi = random_xi(rng, cfg.spec.k, cfg.branches);
  }
  return pts;
}

/// Running maximum; NaN counts as infinitely bad.
struct MaxStat {
  double value = 0.0;
  void add(double x) { value = std::max(value, std::isnan(x) ? std::numeric_limits<double>::infinity() : x); }
};

json suite(bool passed, std::size_t samples, double tolerance) {
  return {{"passed", passed}, {"samples", samples}, {"tolerance", tolerance}};
}

}  // namespace

FrontGrid front_grid(const RunConfig& cfg) {
  FrontGrid g = FrontGrid::over_domain(cfg.spec, 3);
  const auto axes = ut_axes(cfg);
  g.u_axes.assign(axes.begin(), axes.end() - 1);
  g.t_axis = axes.back();
  for (std::size_t j = 0; j < g.angle_axes.size(); ++j) {
    const int n = cfg.grid_count("a" + std::to_string(j + 1));
    auto& ax = g.angle_axes[j];
    ax.count = n;
    if (!ax.periodic) {
      ax.lo = std::numbers::pi / (2.0 * n);
      ax.hi = std::numbers::pi - ax.lo;
    }
  }
  g.branches = cfg.branches;
  return g;
}

// ---------------------------------------------------------------- validate

json validate_report(const RunConfig& cfg) {
  ValidationOptions opts;
  opts.signature_tol = cfg.tol("signature");
  opts.rank_tol = cfg.tol("rank");
  const auto axes = ut_axes(cfg);
  const ValidationReport rep = validate(cfg.spec, axes, opts);

  json out = header(cfg);
  out["points"] = rep.points;
  out["ok"] = rep.ok();
  json vios = json::array();
  std::set<std::string> failed;
  for (const auto& v : rep.violations) {
    vios.push_back({{"u", v.u}, {"t", v.t}, {"check", v.check}, {"detail", v.detail}});
    failed.insert(v.check);
  }
  out["violations"] = std::move(vios);
  out["failures"] = failed;
  return out;
}

// ---------------------------------------------------------------- curvature

std::string curvature_csv(const RunConfig& cfg) {
  const auto& spec = cfg.spec;
  const auto axes = ut_axes(cfg);
  const auto xis = xi_lattice(front_grid(cfg));
  FrameOptions fo;
  fo.pivot = cfg.tol("frame_pivot");
  std::vector<PointEval> evals;
  std::vector<NormalFrame> frames;
  try {
    frames = aligned_frames(spec, axes, evals, fo);
  } catch (const RunError&) {
    throw;
  } catch (const std::exception& e) {
    throw RunError(std::string("curvature: frame sweep failed: ") + e.what());
  }

  ClassifyOptions co;
  co.rel_tol = cfg.tol("classify");
  const std::size_t rows = evals.size() * xis.size();
  std::vector<std::string> lines(rows);
  parallel_for(rows, [&](std::size_t r) {
    const std::size_t p = r / xis.size();
    const SphereAngles& xi = xis[r % xis.size()];
    const PointEval& pe = evals[p];
    at_point("curvature", pe.u, pe.t, [&] {
      const CurvatureData cd = curvature_at(pe, frames[p], xi);
      const PointClassification pc = classify_point(cd, co);
      std::string line;
      for (double x : pe.u) line += format_real(x) + ",";
      line += format_real(pe.t) + "," + xi_label(xi);
      for (int i = 0; i < cd.kappas.size(); ++i) line += "," + format_real(cd.kappas[i]);
      line += "," + format_real(cd.K_ell) + "," + format_real(cd.K_ell_normalized) + ",";
      std::string flags;
      if (pc.parabolic) flags += "parabolic";
      if (pc.umbilical) flags += std::string(flags.empty() ? "" : "|") + "umbilical";
      if (pc.flat_umbilical) flags += std::string(flags.empty() ? "" : "|") + "flat_umbilical";
      lines[r] = line + flags + "\n";
      return 0;
    });
  });

  std::string csv;
  for (int i = 1; i <= spec.s; ++i) csv += "u" + std::to_string(i) + ",";
  csv += "t,xi";
  for (int i = 1; i <= spec.s; ++i) csv += ",kappa" + std::to_string(i);
  csv += ",K_ell,K_ell_normalized,flags\n";
  for (const auto& l : lines) csv += l;
  return csv;
}

// ---------------------------------------------------------------- front / singular

namespace {

FrontMesh build_mesh(const RunConfig& cfg, const std::string& cmd) {
  FrontMeshOptions opts;
  opts.pedal.degenerate_tol = cfg.tol("pedal_degenerate");
  opts.rank_rel_tol = cfg.tol("front_rank");
  try {
    return front_mesh(cfg.spec, front_grid(cfg), opts);
  } catch (const std::exception& e) {
    throw RunError(cmd + ": " + e.what());
  }
}

std::string obj_vertex(double a, double b, double c) {
  return "v " + format_real(a) + " " + format_real(b) + " " + format_real(c) + "\n";
}

}  // namespace

std::map<std::string, std::string> front_files(const RunConfig& cfg) {
  const FrontMesh mesh = build_mesh(cfg, "front");
  const int n = mesh.n;
  const int s = cfg.spec.s;
  std::map<std::string, std::string> files;

  std::string csv = "branch";
  for (int i = 1; i <= s; ++i) csv += ",u" + std::to_string(i);
  csv += ",xi,t";
  for (int i = 0; i <= n; ++i) csv += ",x" + std::to_string(i);
  csv += ",scalar,jac_rank,space_rank,legendrian_singular,space_singular,time_singular,degenerate_zero\n";
  const std::size_t per = mesh.shape.size();
  for (std::size_t i = 0; i < mesh.samples.size(); ++i) {
    const FrontSample& fs = mesh.samples[i];
    csv += std::to_string(mesh.branches[i / per]);
    for (double x : fs.u) csv += "," + format_real(x);
    csv += "," + xi_label(fs.xi) + "," + format_real(fs.t);
    for (int a = 0; a <= n; ++a) csv += "," + format_real(fs.pedal[a]);
    csv += "," + format_real(fs.scalar) + "," + std::to_string(fs.jac_rank) + "," + std::to_string(fs.space_rank);
    for (bool f : {fs.flags.legendrian_singular, fs.flags.space_singular, fs.flags.time_singular,
                   fs.flags.degenerate_zero})
      csv += f ? ",1" : ",0";
    csv += "\n";
  }
  files["front.csv"] = std::move(csv);

  if (n == 2) {
    // Momentary fronts stacked along t: vertices (x1, x2, t).
    std::string obj = "# big wave front, vertices (x1, x2, t)\n";
    for (const auto& fs : mesh.samples) obj += obj_vertex(fs.pedal[1], fs.pedal[2], fs.t);
    for (const auto& tri : mesh.triangles)
      obj += "f " + std::to_string(tri[0] + 1) + " " + std::to_string(tri[1] + 1) + " " +
             std::to_string(tri[2] + 1) + "\n";
    for (const auto& line : mesh.slice_polylines) {
      obj += "l";
      for (std::size_t v : line) obj += " " + std::to_string(v + 1);
      obj += "\n";
    }
    files["front.obj"] = std::move(obj);
  } else if (n == 3) {
    const int t_axis = mesh.shape.rank() - 1;
    const int nt = mesh.shape.counts()[t_axis];
    std::vector<std::vector<std::size_t>> slice_vertices(nt);
    std::vector<std::size_t> local(mesh.samples.size());
    for (std::size_t i = 0; i < mesh.samples.size(); ++i) {
      const int it = mesh.shape.unflatten(i % per)[t_axis];
      local[i] = slice_vertices[it].size();
      slice_vertices[it].push_back(i);
    }
    std::vector<std::string> faces(nt);
    for (const auto& tri : mesh.triangles) {
      const int it = mesh.shape.unflatten(tri[0] % per)[t_axis];
      faces[it] += "f " + std::to_string(local[tri[0]] + 1) + " " + std::to_string(local[tri[1]] + 1) + " " +
                   std::to_string(local[tri[2]] + 1) + "\n";
    }
    for (int it = 0; it < nt; ++it) {
      char name[32];
      std::snprintf(name, sizeof name, "front_t%03d.obj", it);
      std::string obj = "# momentary front at t = " + format_real(mesh.grid.t_axis.value(it)) + ", vertices (x1, x2, x3)\n";
      for (std::size_t i : slice_vertices[it]) {
        const auto& p = mesh.samples[i].pedal;
        obj += obj_vertex(p[1], p[2], p[3]);
      }
      files[name] = obj + faces[it];
    }
  }
  return files;
}

json singular_report(const RunConfig& cfg) {
  const FrontMesh mesh = build_mesh(cfg, "singular");
  DiscriminantOptions opts;
  opts.match_rel = cfg.tol("maxwell_match");
  opts.sep_cells = static_cast<int>(cfg.tol("maxwell_sep"));
  const DiscriminantReport rep = discriminant_extract(mesh, opts);

  auto point_json = [&](const DiscriminantPoint& p) {
    const FrontSample& fs = mesh.samples[p.sample];
    return json{{"sample", p.sample}, {"u", fs.u}, {"xi", xi_json(fs.xi)}, {"t", p.t}, {"pedal", to_json(p.pedal)}};
  };
  json out = header(cfg);
  json caustic = json::array(), delta = json::array(), pairs = json::array();
  for (const auto& p : rep.caustic_points) caustic.push_back(point_json(p));
  for (const auto& p : rep.delta_points) delta.push_back(point_json(p));
  for (const auto& [a, b] : rep.maxwell_pairs)
    pairs.push_back({{"a", a}, {"b", b}, {"separation", parameter_separation(mesh, a, b)}});

  std::size_t degenerate = 0, legendrian = 0, space = 0;
  for (const auto& fs : mesh.samples) {
    degenerate += fs.flags.degenerate_zero;
    legendrian += fs.flags.legendrian_singular;
    space += fs.flags.space_singular;
  }
  out["caustic_points"] = std::move(caustic);
  out["delta_points"] = std::move(delta);
  out["maxwell_pairs"] = std::move(pairs);
  out["delta_match"] = rep.delta_match;
  out["maxwell_truncated"] = rep.maxwell_truncated;
  out["counts"] = {{"samples", mesh.samples.size()},
                   {"degenerate_zero", degenerate},
                   {"legendrian_singular", legendrian},
                   {"space_singular", space},
                   {"caustic", rep.caustic_points.size()},
                   {"maxwell_pairs", rep.maxwell_pairs.size()},
                   {"delta", rep.delta_points.size()}};
  out["failures"] = rep.maxwell_truncated ? json::array({"maxwell_truncated"}) : json::array();
  return out;
}

// ---------------------------------------------------------------- verify

namespace {

/// Deterministic xi per grid point for k >= 3 (one draw per point from the seed).
std::vector<SphereAngles> grid_xis(const RunConfig& cfg, std::size_t points) {
  std::vector<SphereAngles> xis;
  if (cfg.spec.k == 2) {
    for (int b : cfg.branches) xis.push_back(SphereAngles::branch(b));
    return xis;
  }
  Sampler rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  for (std::size_t i = 0; i < points; ++i) xis.push_back(random_xi(rng, cfg.spec.k, cfg.branches));
  return xis;
}

void weingarten_suites(const RunConfig& cfg, json& suites) {
  const auto& spec = cfg.spec;
  const auto axes = ut_axes(cfg);
  std::vector<int> counts;
  for (const auto& ax : axes) counts.push_back(ax.count);
  const GridShape shape(counts);
  const auto xis = grid_xis(cfg, shape.size());
  const bool per_point = spec.k > 2;
  const std::size_t jobs = per_point ? shape.size() : shape.size() * xis.size();

  struct Row {
    WeingartenResidual w;
    double spectrum_dev = 0.0;
    double eigen_dev = 0.0;
  };
  std::vector<Row> rows(jobs);
  const double step = cfg.tol("weingarten_step");
  parallel_for(jobs, [&](std::size_t j) {
    const std::size_t flat = per_point ? j : j / xis.size();
    const SphereAngles& xi = per_point ? xis[j] : xis[j % xis.size()];
    const auto idx = shape.unflatten(flat);
    std::vector<double> u(spec.s);
    for (int i = 0; i < spec.s; ++i) u[i] = axes[i].value(idx[i]);
    const double t = axes[spec.s].value(idx[spec.s]);
    at_point("verify", u, t, [&] {
      Row& row = rows[j];
      row.w = weingarten_residual(spec, u, t, xi, step);
      const PointEval pe = evaluate(spec, u, t, DomainCheck::Skip);
      const CurvatureData cd = curvature_at(pe, normal_frame(pe), xi);
      const Eigen::VectorXd spec_vals = big_shape_spectrum(cd, spec.k);
      for (int i = 0; i < spec.s; ++i) row.spectrum_dev = std::max(row.spectrum_dev, std::abs(spec_vals[i] - cd.kappas[i]));
      for (int i = spec.s; i < spec_vals.size(); ++i)
        row.spectrum_dev = std::max(row.spectrum_dev, std::abs(spec_vals[i] + 1.0));
      // Independent path: general eigensolver on h g^{-1}.
      Eigen::VectorXd ev = Eigen::EigenSolver<Eigen::MatrixXd>(cd.shape).eigenvalues().real();
      std::sort(ev.data(), ev.data() + ev.size());
      row.eigen_dev = (ev - cd.kappas).cwiseAbs().maxCoeff() / std::max(1.0, cd.kappas.cwiseAbs().maxCoeff());
      return 0;
    });
  });

  MaxStat plain, normalized, hform, sdev, edev;
  for (const auto& r : rows) {
    plain.add(r.w.plain);
    normalized.add(r.w.normalized);
    hform.add(r.w.h_formulas);
    sdev.add(r.spectrum_dev);
    edev.add(r.eigen_dev);
  }
  const double wt = cfg.tol("weingarten");
  json w = suite(plain.value <= wt && normalized.value <= wt && hform.value <= wt, jobs, wt);
  w["max_residual"] = plain.value;
  w["max_residual_normalized"] = normalized.value;
  w["max_h_formula_deviation"] = hform.value;
  w["step"] = step;
  suites["weingarten"] = std::move(w);

  const double st = cfg.tol("spectrum");
  json sp = suite(sdev.value <= st && edev.value <= 1e-9, jobs, st);
  sp["max_extra_eigenvalue_deviation"] = sdev.value;
  sp["max_shape_eigen_deviation"] = edev.value;
  sp["extra_eigenvalues"] = spec.k - 2;
  suites["big_shape_spectrum"] = std::move(sp);
}

void flatness_suite(const RunConfig& cfg, json& suites) {
  const auto& spec = cfg.spec;
  const auto axes = ut_axes(cfg);
  const std::vector<GridAxis> u_axes(axes.begin(), axes.end() - 1);
  const GridAxis& t_axis = axes.back();
  const auto xis = spec.k == 2 ? grid_xis(cfg, 0) : grid_xis(cfg, 1);
  const double angle_tol = cfg.tol("constancy_angle");

  const std::size_t jobs = static_cast<std::size_t>(t_axis.count) * xis.size();
  std::vector<ConstancyReport> reps(jobs);
  parallel_for(jobs, [&](std::size_t j) {
    const double t0 = t_axis.value(static_cast<int>(j / xis.size()));
    reps[j] = at_point("verify", std::vector<double>{}, t0,
                       [&] { return gauss_map_constancy(spec, t0, xis[j % xis.size()], u_axes, angle_tol); });
  });

  std::size_t constant = 0;
  MaxStat residual, K, spread;
  double min_spread = std::numeric_limits<double>::infinity();
  for (const auto& r : reps) {
    spread.add(r.max_angle);
    if (r.constant) {
      ++constant;
      residual.add(r.max_plane_residual);
      K.add(r.max_abs_K);
    } else {
      min_spread = std::min(min_spread, r.max_angle);
    }
  }
  const double pt = cfg.tol("plane_residual"), kt = cfg.tol("flat_K");
  json f = suite(residual.value <= pt && K.value <= kt, jobs, pt);
  f["flat_K_tolerance"] = kt;
  f["constant_slices"] = constant;
  f["max_plane_residual"] = residual.value;
  f["max_abs_K_on_constant_slices"] = K.value;
  f["max_angular_spread"] = spread.value;
  f["min_angular_spread_nonconstant"] = constant == jobs ? json(nullptr) : json(min_spread);
  suites["hyperplane_flatness"] = std::move(f);
}

void height_suites(const RunConfig& cfg, json& suites) {
  const auto& spec = cfg.spec;
  const auto pts = random_points(cfg, cfg.verify_samples);
  struct Row {
    double grad = 0.0, hess = 0.0, hess_neg = 0.0, parabolic = 0.0;
    bool on_front = false;
    double ext_value = 0.0, ext_grad = 0.0, tangency = 0.0;
    int morse = 0;
  };
  std::vector<Row> rows(pts.size());
  PedalOptions po;
  po.degenerate_tol = cfg.tol("pedal_degenerate");
  MorseOptions mo;
  mo.rank_rel_tol = cfg.tol("morse_rank");
  parallel_for(pts.size(), [&](std::size_t i) {
    const RandomPoint& p = pts[i];
    at_point("verify", p.u, p.t, [&] {
      Row& r = rows[i];
      const PointEval pe = evaluate(spec, p.u, p.t);
      const NormalFrame frame = normal_frame(pe);
      const MinkVector v = critical_lightcone_direction(frame, p.xi);
      const HeightEval he = height(spec, p.u, p.t, v);
      r.grad = he.grad_u.cwiseAbs().maxCoeff();
      const HessianIdentity hi = hessian_identity_check(spec, p.u, p.t, p.xi);
      r.hess = hi.deviation;
      r.hess_neg = hi.deviation_negated;
      const CurvatureData cd = curvature_at(pe, frame, p.xi);
      const double expect = cd.h.determinant() / std::pow(cd.ell0, spec.s);
      r.parabolic = std::abs(he.det_hess - expect) / std::max(1.0, std::abs(expect));

      const PedalPoint pp = pedal_point(pe, frame, p.xi, po);
      r.on_front = !pp.degenerate;
      if (!r.on_front) return 0;
      const HeightEval ext = extended_height(spec, p.u, p.t, pp.pedal);
      const double scale = std::max({1.0, pe.position.coords().norm(), std::abs(pp.pedal[0])});
      r.ext_value = std::abs(ext.value) / scale;
      r.ext_grad = ext.grad_u.cwiseAbs().maxCoeff() / scale;
      r.morse = morse_family_rank(spec, p.u, p.t, pp.pedal, mo);
      const TangentHyperplane tp = tangent_lightlike_hyperplane(spec, p.u, p.t, p.xi, po);
      r.tangency = std::max(std::abs(tp.position_residual) / scale, tp.max_tangent_residual);
      return 0;
    });
  });

  MaxStat grad, hess, hess_neg, parabolic, ext_value, ext_grad, tangency;
  std::size_t on_front = 0, morse_ok = 0;
  int morse_min = std::numeric_limits<int>::max(), morse_max = 0;
  for (const auto& r : rows) {
    grad.add(r.grad);
    hess.add(r.hess);
    hess_neg.add(r.hess_neg);
    parabolic.add(r.parabolic);
    if (!r.on_front) continue;
    ++on_front;
    ext_value.add(r.ext_value);
    ext_grad.add(r.ext_grad);
    tangency.add(r.tangency);
    morse_ok += r.morse == spec.s + 1;
    morse_min = std::min(morse_min, r.morse);
    morse_max = std::max(morse_max, r.morse);
  }
  const std::size_t n = pts.size();

  const double gt = cfg.tol("height_gradient");
  json g = suite(grad.value <= gt, n, gt);
  g["max_gradient"] = grad.value;
  suites["height_critical_direction"] = std::move(g);

  const double ht = cfg.tol("height_hessian");
  json h = suite(hess.value <= ht && parabolic.value <= ht, n, ht);
  h["max_deviation"] = hess.value;
  h["max_deviation_opposite_sign"] = hess_neg.value;
  h["max_parabolic_determinant_deviation"] = parabolic.value;
  suites["height_hessian_identity"] = std::move(h);

  const double et = cfg.tol("extended_height");
  json e = suite(ext_value.value <= et && ext_grad.value <= et, on_front, et);
  e["max_value"] = ext_value.value;
  e["max_gradient"] = ext_grad.value;
  e["skipped_degenerate"] = n - on_front;
  suites["extended_height_pedal"] = std::move(e);

  json m = suite(morse_ok == on_front, on_front, cfg.tol("morse_rank"));
  m["expected_rank"] = spec.s + 1;
  m["min_rank"] = on_front ? json(morse_min) : json(nullptr);
  m["max_rank"] = on_front ? json(morse_max) : json(nullptr);
  m["skipped_degenerate"] = n - on_front;
  suites["morse_family_rank"] = std::move(m);

  const double tt = cfg.tol("tangency");
  json t = suite(tangency.value <= tt, on_front, tt);
  t["max_residual"] = tangency.value;
  suites["tangent_hyperplane"] = std::move(t);
}

}  // namespace

json verify_report(const RunConfig& cfg) {
  json suites = json::object();
  weingarten_suites(cfg, suites);
  flatness_suite(cfg, suites);
  height_suites(cfg, suites);

  json out = header(cfg);
  json failures = json::array();
  for (const auto& [name, s] : suites.items())
    if (!s["passed"].get<bool>()) failures.push_back(name);
  out["grid"] = cfg.grid;
  out["samples"] = cfg.verify_samples;
  out["seed"] = cfg.seed;
  out["suites"] = std::move(suites);
  out["failures"] = std::move(failures);
  return out;
}

// ---------------------------------------------------------------- run

RunResult run(const RunConfig& cfg) {
  RunResult res;
  bool failed = false;
  const std::string cmd = to_string(cfg.command);
  switch (cfg.command) {
    case Command::Validate: {
      const json rep = validate_report(cfg);
      failed = report_failed(rep);
      res.files["validate.json"] = dump_report(rep);
      res.summary = "validate: " + std::to_string(rep["points"].get<std::size_t>()) + " points, " +
                    std::to_string(rep["violations"].size()) + " violations";
      break;
    }
    case Command::Curvature: {
      res.files["curvature.csv"] = curvature_csv(cfg);
      res.summary = "curvature: " +
                    std::to_string(std::count(res.files["curvature.csv"].begin(), res.files["curvature.csv"].end(), '\n') - 1) +
                    " rows";
      break;
    }
    case Command::Front: {
      res.files = front_files(cfg);
      res.summary = "front: " + std::to_string(res.files.size()) + " files";
      break;
    }
    case Command::Singular: {
      const json rep = singular_report(cfg);
      failed = report_failed(rep);
      res.files["singular.json"] = dump_report(rep);
      const auto& c = rep["counts"];
      res.summary = "singular: " + std::to_string(c["caustic"].get<std::size_t>()) + " caustic, " +
                    std::to_string(c["maxwell_pairs"].get<std::size_t>()) + " maxwell pairs, " +
                    std::to_string(c["delta"].get<std::size_t>()) + " delta points";
      break;
    }
    case Command::Verify: {
      const json rep = verify_report(cfg);
      failed = report_failed(rep);
      res.files["verify.json"] = dump_report(rep);
      res.summary = "verify: " + std::to_string(rep["suites"].size()) + " suites, " +
                    std::to_string(rep["failures"].size()) + " failed";
      for (const auto& f : rep["failures"]) res.summary += "\n  failed: " + f.get<std::string>();
      break;
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw RunError(cmd + ": cannot create output directory '" + cfg.out_dir + "': " + ec.message());
  for (const auto& [name, body] : res.files) {
    const auto path = std::filesystem::path(cfg.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw RunError(cmd + ": cannot write '" + path.string() + "'");
  }
  res.exit_code = failed ? 1 : 0;
  return res;
}

}  // namespace wsheet
