#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "wsheet/curvature.hpp"
#include "wsheet/errors.hpp"
#include "wsheet/fixtures.hpp"
#include "wsheet/height.hpp"
#include "wsheet/pedal.hpp"

using namespace wsheet;

namespace {

std::vector<double> U(std::initializer_list<double> v) { return v; }

double vdist(const MinkVector& a, const MinkVector& b) { return (a - b).coords().norm(); }

/// (H~, H~_u) at (u, t) for v in the lightcone chart (v1..vn), v0 = sign * |v_spatial|.
Eigen::VectorXd sigma_map(const WorldSheetSpec& spec, std::span<const double> u, double t,
                          const Eigen::VectorXd& spatial, double sign) {
  MinkVector v = MinkVector::zero(spec.ambient_dim);
  for (int j = 0; j < spatial.size(); ++j) v[j + 1] = spatial[j];
  v[0] = sign * spatial.norm();
  const HeightEval e = extended_height(spec, u, t, v);
  Eigen::VectorXd out(spec.s + 1);
  out[0] = e.value;
  out.tail(spec.s) = e.grad_u;
  return out;
}

Eigen::MatrixXd fd_b_matrix(const WorldSheetSpec& spec, std::span<const double> u, double t, const MinkVector& v) {
  const int n = spec.n();
  Eigen::VectorXd sp = v.spatial();
  const double sign = v[0] > 0 ? 1.0 : -1.0;
  Eigen::MatrixXd b(spec.s + 1, n);
  const double h = 1e-6;
  for (int j = 0; j < n; ++j) {
    Eigen::VectorXd p = sp, m = sp;
    p[j] += h;
    m[j] -= h;
    b.col(j) = (sigma_map(spec, u, t, p, sign) - sigma_map(spec, u, t, m, sign)) / (2 * h);
  }
  return b;
}

}  // namespace

TEST_CASE("height examples") {
  const auto cyl = fixtures::cylinder();
  const HeightEval h = height(cyl, U({0.0}), 0.0, {1, 1, 0});
  CHECK(h.value == doctest::Approx(2));
  CHECK(std::abs(h.grad_u[0]) < 1e-15);
  CHECK(h.hess_u(0, 0) == doctest::Approx(-2));
  const HeightEval off = height(cyl, U({std::numbers::pi / 2}), 0.0, {1, 1, 0});
  CHECK(off.grad_u[0] == doctest::Approx(-2));

  const auto flat = fixtures::flat(0.5);
  for (double u : {-0.8, 0.0, 0.6})
    for (double t : {-0.5, 0.7}) {
      const HeightEval f = height(flat, U({u}), t, {1, 1, 0});
      CHECK(f.grad_u[0] == 0.0);
      CHECK(f.hess_u(0, 0) == 0.0);
      CHECK(f.rank_hess == 0);
    }
  CHECK_THROWS_AS(height(cyl, U({0.0}), 0.0, {2, 2, 0}), DomainError);
  CHECK_THROWS_AS(height(cyl, U({0.0}), 0.0, {1, 0.5, 0}), DomainError);
}

TEST_CASE("extended height examples") {
  const auto cyl = fixtures::cylinder();
  const HeightEval e = extended_height(cyl, U({0.0}), 0.0, {2, 2, 0});
  CHECK(std::abs(e.value) < 1e-15);
  CHECK(std::abs(e.grad_u[0]) < 1e-15);
  CHECK(extended_height(cyl, U({0.0}), 0.0, {1, 1, 0}).value == doctest::Approx(1));
  CHECK_THROWS_AS(extended_height(cyl, U({0.0}), 0.0, {0, 0, 0}), DomainError);

  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    const double a = oracle::uniform(rng, 0, 6.28), scale = oracle::uniform(rng, -3, 3);
    const MinkVector v{scale, scale * std::cos(a), scale * std::sin(a)};
    if (std::abs(scale) < 1e-3) continue;
    const std::vector<double> u{oracle::uniform(rng, 0, 6.28)};
    const double t = oracle::uniform(rng, -1, 3);
    const HeightEval ext = extended_height(cyl, u, t, v);
    const HeightEval base = height(cyl, u, t, project_to_lightcone_sphere(v));
    CHECK((ext.grad_u - base.grad_u).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((ext.hess_u - base.hess_u).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("critical lightcone directions") {
  const PointEval pe = evaluate(fixtures::cylinder(), U({0.0}), 0.0);
  const NormalFrame f = normal_frame(pe);
  CHECK(vdist(critical_lightcone_direction(f, SphereAngles::branch(1)), {1, 1, 0}) < 1e-15);
  CHECK(vdist(critical_lightcone_direction(f, SphereAngles::branch(-1)), {1, -1, 0}) < 1e-15);
  CHECK(std::abs(height(fixtures::cylinder(), U({0.0}), 0.0, {1, 1, 0}).grad_u[0]) <= 1e-12);
}

TEST_CASE("Hessian identity, with the opposite sign reported") {
  const auto cyl = fixtures::cylinder();
  const HessianIdentity c = hessian_identity_check(cyl, U({0.0}), 0.0, SphereAngles::branch(1));
  CHECK(c.deviation < 1e-15);
  CHECK(c.deviation_negated == doctest::Approx(4));
  const HessianIdentity f = hessian_identity_check(fixtures::flat(0.5), U({0.1}), 0.2, SphereAngles::branch(1));
  CHECK(f.deviation == 0.0);
  CHECK(f.deviation_negated == 0.0);

  // Sphere: Hessian of H by central differences of positions against h / ell0.
  const auto sph = fixtures::sphere();
  const std::vector<double> u{1.2, 0.7};
  const double t = 0.3;
  const PointEval pe = evaluate(sph, u, t);
  const NormalFrame fr = normal_frame(pe);
  const CurvatureData cd = curvature_at(pe, fr, SphereAngles::branch(1));
  const MinkVector v = critical_lightcone_direction(fr, SphereAngles::branch(1));
  const double h = 1e-4;
  auto H = [&](double du1, double du2) {
    const std::vector<double> w{u[0] + du1, u[1] + du2};
    return pseudo_product(oracle::position(sph, w, t), v);
  };
  Eigen::Matrix2d fd;
  fd(0, 0) = (H(h, 0) - 2 * H(0, 0) + H(-h, 0)) / (h * h);
  fd(1, 1) = (H(0, h) - 2 * H(0, 0) + H(0, -h)) / (h * h);
  fd(0, 1) = fd(1, 0) = (H(h, h) - H(h, -h) - H(-h, h) + H(-h, -h)) / (4 * h * h);
  CHECK((fd - cd.h / cd.ell0).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(hessian_identity_check(sph, u, t, SphereAngles::branch(1)).deviation <= 1e-9);
}

TEST_CASE("det Hess vanishes exactly at parabolic points") {
  std::mt19937_64 rng(62);
  const ClassifyOptions co;
  for (const auto& name : fixtures::names()) {
    const auto spec = fixtures::by_name(name);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> u(spec.s);
      for (int i = 0; i < spec.s; ++i) u[i] = oracle::uniform(rng, spec.u_domain[i].lo, spec.u_domain[i].hi);
      const double t = oracle::uniform(rng, spec.t_domain.lo, spec.t_domain.hi);
      const SphereAngles xi = spec.k == 2 ? SphereAngles::branch(trial % 2 ? 1 : -1)
                                          : SphereAngles::spherical({oracle::uniform(rng, 0, 6.28)});
      const PointEval pe = evaluate(spec, u, t);
      const NormalFrame f = normal_frame(pe);
      const CurvatureData cd = curvature_at(pe, f, xi);
      const HeightEval he = height(spec, u, t, critical_lightcone_direction(f, xi));
      const bool parabolic = classify_point(cd, co).parabolic;
      CHECK(parabolic == (std::abs(he.det_hess) <= 1e-8 * (1 + he.hess_u.norm())));
      CHECK(classify_point(cd, co).flat_umbilical == (he.rank_hess == 0));
    }
  }
}

TEST_CASE("rank Hess = 0 exactly at flat umbilical points, flat and perturbed flat") {
  const auto bent = WorldSheetSpec::from_strings(3, 1, 2, {"t", "t/2 + u1^3/10", "u1"}, {{-1, 1}}, {-1, 1});
  for (double u : {-0.6, -0.1, 0.0, 0.3, 0.8}) {
    const std::vector<double> uu{u};
    const PointEval pe = evaluate(bent, uu, 0.2);
    const NormalFrame f = normal_frame(pe);
    const CurvatureData cd = curvature_at(pe, f, SphereAngles::branch(1));
    const HeightEval he = height(bent, uu, 0.2, critical_lightcone_direction(f, SphereAngles::branch(1)));
    CHECK(classify_point(cd).flat_umbilical == (u == 0.0));
    CHECK((he.rank_hess == 0) == (u == 0.0));
  }
}

TEST_CASE("the pedal point is the unique zero of (H~, grad H~) nearby") {
  for (const char* name : {"cyl", "flt"}) {
    const auto spec = fixtures::by_name(name);
    const std::vector<double> u{0.4};
    const double t = 0.5;
    const PedalPoint pp = pedal_point(spec, u, t, SphereAngles::branch(1));
    const HeightEval at = extended_height(spec, u, t, pp.pedal);
    CHECK(std::abs(at.value) <= 1e-9);
    CHECK(at.grad_u.cwiseAbs().maxCoeff() <= 1e-9);
    // Newton in the chart (v1, v2) from a perturbed start.
    Eigen::VectorXd x = pp.pedal.spatial() + Eigen::Vector2d(0.05, -0.03);
    const double sign = pp.pedal[0] > 0 ? 1 : -1;
    for (int it = 0; it < 30; ++it) {
      MinkVector v = MinkVector::zero(3);
      v[0] = sign * x.norm();
      v[1] = x[0];
      v[2] = x[1];
      const Eigen::VectorXd F = sigma_map(spec, u, t, x, sign);
      if (F.norm() < 1e-14) break;
      x -= morse_b_matrix(spec, u, t, v).fullPivLu().solve(F);
    }
    CHECK((x - pp.pedal.spatial()).norm() < 1e-10);
  }
}

TEST_CASE("Morse B matrix matches finite differences and has rank s + 1") {
  std::mt19937_64 rng(63);
  for (const auto& name : fixtures::names()) {
    const auto spec = fixtures::by_name(name);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> u(spec.s);
      for (int i = 0; i < spec.s; ++i) u[i] = oracle::uniform(rng, spec.u_domain[i].lo, spec.u_domain[i].hi);
      const double t = oracle::uniform(rng, spec.t_domain.lo, spec.t_domain.hi);
      const SphereAngles xi = spec.k == 2 ? SphereAngles::branch(trial % 2 ? 1 : -1)
                                          : SphereAngles::spherical({oracle::uniform(rng, 0, 6.28)});
      const PedalPoint pp = pedal_point(spec, u, t, xi);
      if (pp.degenerate) continue;
      const Eigen::MatrixXd b = morse_b_matrix(spec, u, t, pp.pedal);
      CHECK((b - fd_b_matrix(spec, u, t, pp.pedal)).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, b.norm()));
      CHECK(morse_family_rank(spec, u, t, xi) == spec.s + 1);
    }
  }
  CHECK(morse_family_rank(fixtures::cylinder(), U({0.0}), 0.0, MinkVector{2, 2, 0}) == 2);
  CHECK_THROWS_AS(morse_family_rank(fixtures::cylinder(), U({0.0}), 0.0, MinkVector{1, 1, 0}), PreconditionError);
}
