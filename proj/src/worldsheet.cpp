#include "wsheet/worldsheet.hpp"

#include <cmath>
#include <sstream>

#include "wsheet/errors.hpp"
#include "wsheet/jet.hpp"
#include "wsheet/parallel.hpp"

namespace wsheet {

double GridAxis::step() const {
  if (periodic) return (hi - lo) / count;
  return count > 1 ? (hi - lo) / (count - 1) : 0.0;
}

double GridAxis::value(int i) const { return lo + i * step(); }

GridShape::GridShape(std::vector<int> counts) : counts_(std::move(counts)), size_(1) {
  for (int c : counts_) size_ *= static_cast<std::size_t>(std::max(c, 0));
}

std::vector<int> GridShape::unflatten(std::size_t flat) const {
  std::vector<int> idx(counts_.size());
  for (int a = rank() - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % counts_[a]);
    flat /= counts_[a];
  }
  return idx;
}

std::size_t GridShape::flatten(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < rank(); ++a) flat = flat * counts_[a] + idx[a];
  return flat;
}

WorldSheetSpec WorldSheetSpec::from_strings(int ambient_dim, int s, int k, std::vector<std::string> coord_text,
                                            std::vector<Interval> u_domain, Interval t_domain,
                                            std::vector<bool> u_periodic) {
  if (ambient_dim < 3) throw InputError("ambient dimension must be at least 3");
  if (s < 1 || k < 2 || s + k != ambient_dim)
    throw InputError("dimensions must satisfy s >= 1, k >= 2, s + k = n + 1 (got s=" + std::to_string(s) +
                     ", k=" + std::to_string(k) + ", n+1=" + std::to_string(ambient_dim) + ")");
  if (static_cast<int>(coord_text.size()) != ambient_dim)
    throw InputError("expected " + std::to_string(ambient_dim) + " coordinate expressions, got " +
                     std::to_string(coord_text.size()));
  if (static_cast<int>(u_domain.size()) != s)
    throw InputError("expected " + std::to_string(s) + " u intervals, got " + std::to_string(u_domain.size()));
  if (u_periodic.empty()) u_periodic.assign(s, false);
  if (static_cast<int>(u_periodic.size()) != s) throw InputError("periodic flags must have one entry per u axis");

  WorldSheetSpec spec;
  spec.ambient_dim = ambient_dim;
  spec.s = s;
  spec.k = k;
  spec.u_domain = std::move(u_domain);
  spec.u_periodic = std::move(u_periodic);
  spec.t_domain = t_domain;
  const auto chart = spec.chart();
  for (const auto& text : coord_text) spec.coords.push_back(parse_expr(text, chart));
  spec.coord_text = std::move(coord_text);
  return spec;
}

std::vector<std::string> WorldSheetSpec::chart() const {
  std::vector<std::string> names;
  for (int i = 1; i <= s; ++i) names.push_back("u" + std::to_string(i));
  names.emplace_back("t");
  return names;
}

bool WorldSheetSpec::contains(std::span<const double> u, double t, double slack) const {
  if (static_cast<int>(u.size()) != s) return false;
  auto in = [slack](const Interval& iv, double x) {
    const double pad = slack * std::max(1.0, std::abs(iv.hi - iv.lo));
    return x >= iv.lo - pad && x <= iv.hi + pad;
  };
  for (int i = 0; i < s; ++i)
    if (!u_periodic[i] && !in(u_domain[i], u[i])) return false;
  return in(t_domain, t);
}

namespace {

PointEval evaluate_raw(const WorldSheetSpec& spec, std::span<const double> u, double t) {
  const int dim = spec.ambient_dim;
  const int s = spec.s;
  std::vector<double> p(u.begin(), u.end());
  p.push_back(t);

  PointEval pe;
  pe.u.assign(u.begin(), u.end());
  pe.t = t;
  pe.position = MinkVector::zero(dim);
  pe.Xt = MinkVector::zero(dim);
  pe.Xu.assign(s, MinkVector::zero(dim));
  pe.Xuu.assign(s, std::vector<MinkVector>(s, MinkVector::zero(dim)));
  for (int a = 0; a < dim; ++a) {
    Jet2 j;
    try {
      j = eval_jet2(spec.coords[a], p);
    } catch (const EvalError& e) {
      std::string what = e.what();
      what = what.substr(0, what.rfind(" in '"));
      throw EvalError("X" + std::to_string(a) + " = '" + spec.coord_text[a] + "': " + what, e.subexpression());
    }
    pe.position[a] = j.value;
    pe.Xt[a] = j.grad[s];
    for (int i = 0; i < s; ++i) {
      pe.Xu[i][a] = j.grad[i];
      for (int k = 0; k < s; ++k) pe.Xuu[i][k][a] = j.hess(i, k);
    }
  }
  pe.g.resize(s, s);
  for (int i = 0; i < s; ++i)
    for (int k = 0; k < s; ++k) pe.g(i, k) = pseudo_product(pe.Xu[i], pe.Xu[k]);
  pe.det_g = determinant(pe.g);
  return pe;
}

std::string point_str(std::span<const double> u, double t) {
  std::ostringstream os;
  os.precision(17);
  os << "(u=";
  for (std::size_t i = 0; i < u.size(); ++i) os << (i ? "," : "") << u[i];
  os << ", t=" << t << ")";
  return os.str();
}

}  // namespace

PointEval evaluate(const WorldSheetSpec& spec, std::span<const double> u, double t, DomainCheck check) {
  if (static_cast<int>(u.size()) != spec.s)
    throw InputError("evaluate: expected " + std::to_string(spec.s) + " u coordinates");
  if (check == DomainCheck::Enforce && !spec.contains(u, t))
    throw DomainError("evaluate: point outside the domain " + point_str(u, t));
  PointEval pe = evaluate_raw(spec, u, t);
  const double scale = std::pow(std::max(1.0, pe.g.norm()), spec.s);
  if (!(pe.det_g > 1e-14 * scale))
    throw DegeneracyError("singular slice metric (det g = " + std::to_string(pe.det_g) + ") at " + point_str(u, t));
  pe.g_inv = pe.g.inverse();
  return pe;
}

int numerical_rank(const Eigen::MatrixXd& m, double rel_tol, double abs_floor) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv[0] : 0.0;
  const double thr = std::max(rel_tol * smax, abs_floor);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > thr) ++r;
  return r;
}

std::vector<GridAxis> domain_axes(const WorldSheetSpec& spec, std::span<const int> counts) {
  if (static_cast<int>(counts.size()) != spec.s + 1)
    throw InputError("domain_axes: expected " + std::to_string(spec.s + 1) + " counts");
  std::vector<GridAxis> axes;
  for (int i = 0; i < spec.s; ++i)
    axes.push_back({spec.u_domain[i].lo, spec.u_domain[i].hi, counts[i], static_cast<bool>(spec.u_periodic[i])});
  axes.push_back({spec.t_domain.lo, spec.t_domain.hi, counts[spec.s], false});
  return axes;
}

ValidationReport validate(const WorldSheetSpec& spec, std::span<const GridAxis> axes, const ValidationOptions& opts) {
  const int s = spec.s;
  if (static_cast<int>(axes.size()) != s + 1) throw InputError("validate: expected one axis per chart variable");
  std::vector<int> counts;
  for (const auto& ax : axes) counts.push_back(ax.count);
  const GridShape shape(counts);
  const Eigen::MatrixXd eta = lorentz_metric(spec.ambient_dim);

  std::vector<std::vector<Violation>> per_point(shape.size());
  parallel_for(shape.size(), [&](std::size_t flat) {
    const auto idx = shape.unflatten(flat);
    std::vector<double> u(s);
    for (int i = 0; i < s; ++i) u[i] = axes[i].value(idx[i]);
    const double t = axes[s].value(idx[s]);
    auto& out = per_point[flat];
    auto report = [&](const char* check, std::string detail) { out.push_back({u, t, check, std::move(detail)}); };

    PointEval pe;
    try {
      pe = evaluate_raw(spec, u, t);
    } catch (const std::exception& ex) {
      report("evaluation", ex.what());
      return;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gs(pe.g, Eigen::EigenvaluesOnly);
    const double gmin = gs.eigenvalues().minCoeff();
    if (!(gmin > opts.signature_tol * std::max(1.0, pe.g.norm())))
      report("spacelike_slice", "smallest eigenvalue of g is " + std::to_string(gmin));

    Eigen::MatrixXd tangent(s + 1, spec.ambient_dim);
    tangent.row(0) = pe.Xt.coords().transpose();
    for (int i = 0; i < s; ++i) tangent.row(i + 1) = pe.Xu[i].coords().transpose();
    const Eigen::MatrixXd gram = tangent * eta * tangent.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    const double thr = opts.signature_tol * gram.norm();
    int neg = 0, pos = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()[i] < -thr) ++neg;
      if (es.eigenvalues()[i] > thr) ++pos;
    }
    if (neg != 1 || pos != s)
      report("timelike_sheet", "Gram(Xt, Xu) has " + std::to_string(neg) + " negative and " + std::to_string(pos) +
                                   " positive eigenvalues");

    const int rank = numerical_rank(tangent, opts.rank_tol);
    if (rank != s + 1)
      report("immersion", "rank of (Xt, Xu) is " + std::to_string(rank) + ", expected " + std::to_string(s + 1));
  });

  ValidationReport rep;
  rep.points = shape.size();
  for (auto& v : per_point)
    for (auto& x : v) rep.violations.push_back(std::move(x));
  return rep;
}

}  // namespace wsheet
