#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "wsheet/curvature.hpp"
#include "wsheet/fixtures.hpp"

using namespace wsheet;

namespace {

std::vector<double> U(std::initializer_list<double> v) { return v; }

double vdist(const MinkVector& a, const MinkVector& b) { return (a - b).coords().norm(); }

/// Pointwise frame with nS_1 pointing along `radial` (spatial part) for k = 2.
NormalFrame frame_toward(const PointEval& pe, const MinkVector& radial) {
  NormalFrame f = normal_frame(pe);
  if (pseudo_product(f.nS[0], radial) < 0) f.nS[0] = -f.nS[0];
  return f;
}

}  // namespace

TEST_CASE("lightcone Gauss map examples") {
  const PointEval c = evaluate(fixtures::cylinder(), U({0.0}), 0.0);
  const auto g = lightcone_gauss(normal_frame(c), normal_frame(c).nS[0]);
  CHECK(vdist(g.LG, {1, 1, 0}) < 1e-15);
  CHECK(g.ell0 == 1.0);

  const PointEval f = evaluate(fixtures::flat(0.5), U({0.3}), 0.0);
  const NormalFrame ff = frame_toward(f, {0, 1, 0});
  const auto gf = lightcone_gauss(ff, ff.nS[0]);
  CHECK(vdist(gf.LG_normalized, {1, 1, 0}) < 1e-15);
  CHECK(gf.ell0 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(std::abs(pseudo_product(gf.LG, gf.LG)) < 1e-15);
}

TEST_CASE("cylinder curvatures for both radial signs") {
  for (double r : {0.5, 1.0, 2.0, 5.0}) {
    const auto spec = fixtures::cylinder(r);
    for (double u : {0.0, 1.0, 2.5, 4.0}) {
      const PointEval pe = evaluate(spec, U({u}), 0.4);
      const MinkVector radial{0, std::cos(u), std::sin(u)};
      const NormalFrame f = frame_toward(pe, radial);
      const CurvatureData plus = curvature_at(pe, f, SphereAngles::branch(1));
      const CurvatureData minus = curvature_at(pe, f, SphereAngles::branch(-1));
      CHECK(plus.h(0, 0) == doctest::Approx(-r).epsilon(1e-12));
      CHECK(minus.h(0, 0) == doctest::Approx(r).epsilon(1e-12));
      CHECK(std::abs(plus.kappas[0] + 1 / r) <= 1e-9);
      CHECK(std::abs(minus.kappas[0] - 1 / r) <= 1e-9);
      CHECK(std::abs(plus.K_ell + 1 / r) <= 1e-9);
    }
  }
}

TEST_CASE("sphere, flat and product curvatures") {
  const PointEval s = evaluate(fixtures::sphere(2.0), U({1.1, 0.4}), 0.0);
  const MinkVector radial{0, std::sin(1.1) * std::cos(0.4), std::sin(1.1) * std::sin(0.4), std::cos(1.1)};
  const CurvatureData cs = curvature_at(s, frame_toward(s, radial), SphereAngles::branch(1));
  CHECK(std::abs(cs.kappas[0] + 0.5) < 1e-12);
  CHECK(std::abs(cs.kappas[1] + 0.5) < 1e-12);
  CHECK(std::abs(cs.K_ell - 0.25) < 1e-12);
  const auto cls = classify_point(cs);
  CHECK(cls.umbilical);
  CHECK_FALSE(cls.parabolic);

  const PointEval f = evaluate(fixtures::flat(0.5), U({0.2}), 0.3);
  const CurvatureData cf = curvature_at(f, normal_frame(f), SphereAngles::branch(1));
  CHECK(cf.K_ell == 0.0);
  CHECK(big_shape_spectrum(cf, 2).size() == 1);
  const auto fl = classify_point(cf);
  CHECK((fl.parabolic && fl.umbilical && fl.flat_umbilical));

  const PointEval p = evaluate(fixtures::cylinder_line(2.0), U({0.0, 0.3}), 0.0);
  const CurvatureData cp = curvature_at(p, frame_toward(p, {0, 1, 0, 0}), SphereAngles::branch(1));
  CHECK(std::abs(cp.kappas[0] + 0.5) < 1e-12);
  CHECK(std::abs(cp.kappas[1]) < 1e-12);
  const auto pc = classify_point(cp);
  CHECK(pc.parabolic);
  CHECK_FALSE(pc.umbilical);
}

TEST_CASE("curvature record invariants") {
  std::mt19937_64 rng(51);
  for (const auto& name : fixtures::names()) {
    const auto spec = fixtures::by_name(name);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> u(spec.s);
      for (int i = 0; i < spec.s; ++i) u[i] = oracle::uniform(rng, spec.u_domain[i].lo, spec.u_domain[i].hi);
      const PointEval pe = evaluate(spec, u, oracle::uniform(rng, spec.t_domain.lo, spec.t_domain.hi));
      const SphereAngles xi = spec.k == 2 ? SphereAngles::branch(trial % 2 ? 1 : -1)
                                          : SphereAngles::spherical({oracle::uniform(rng, 0, 6.28)});
      const CurvatureData cd = curvature_at(pe, normal_frame(pe), xi);
      CHECK(causal_class(cd.LG) == CausalClass::Lightlike);
      CHECK(cd.ell0 > 0);
      CHECK(vdist(cd.LG_normalized, project_to_lightcone_sphere(cd.LG)) < 1e-14);
      CHECK((cd.h - cd.h.transpose()).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(std::abs(cd.K_ell - cd.shape.determinant()) <= 1e-9 * (1 + std::abs(cd.K_ell)));
      CHECK(std::abs(cd.K_ell - cd.h.determinant() / pe.g.determinant()) <= 1e-9 * (1 + std::abs(cd.K_ell)));
      CHECK(std::abs(cd.K_ell_normalized - cd.K_ell / std::pow(cd.ell0, spec.s)) <= 1e-12 * (1 + std::abs(cd.K_ell)));
      for (int i = 0; i < spec.s; ++i) CHECK(std::abs(cd.kappas_normalized[i] - cd.kappas[i] / cd.ell0) <= 1e-12);
      for (int i = 1; i < spec.s; ++i) CHECK(cd.kappas[i - 1] <= cd.kappas[i]);
    }
  }
}

TEST_CASE("curvatures depend on xi only, not on the nS basis") {
  const auto spec = fixtures::sphere5();
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<double> u{oracle::uniform(rng, 0.4, 2.7), oracle::uniform(rng, 0, 6.2)};
    const PointEval pe = evaluate(spec, u, oracle::uniform(rng, -1, 1));
    const NormalFrame f = normal_frame(pe);
    const double phi = oracle::uniform(rng, 0, 6.28), theta = oracle::uniform(rng, 0, 6.28);
    NormalFrame rotated = f;
    rotated.nS[0] = std::cos(phi) * f.nS[0] + std::sin(phi) * f.nS[1];
    rotated.nS[1] = -std::sin(phi) * f.nS[0] + std::cos(phi) * f.nS[1];
    const CurvatureData a = curvature_at(pe, f, SphereAngles::spherical({theta}));
    const CurvatureData b = curvature_at(pe, rotated, SphereAngles::spherical({theta - phi}));
    CHECK((a.h - b.h).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((a.kappas - b.kappas).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(a.K_ell - b.K_ell) <= 1e-10);
  }
}

TEST_CASE("big shape spectrum") {
  const PointEval c = evaluate(fixtures::cylinder(), U({0.0}), 0.0);
  const Eigen::VectorXd sc = big_shape_spectrum(curvature_at(c, normal_frame(c), SphereAngles::branch(1)), 2);
  REQUIRE(sc.size() == 1);
  CHECK(sc[0] == doctest::Approx(-0.5));

  const PointEval s = evaluate(fixtures::sphere5(), U({1.0, 2.0}), 0.1);
  const CurvatureData cd = curvature_at(s, normal_frame(s), SphereAngles::spherical({0.7}));
  const Eigen::VectorXd sp = big_shape_spectrum(cd, 3);
  REQUIRE(sp.size() == 3);
  CHECK(sp[0] == cd.kappas[0]);
  CHECK(sp[1] == cd.kappas[1]);
  CHECK(sp[2] == -1.0);
}

TEST_CASE("Gauss map constancy separates flat slices from round ones") {
  const std::vector<GridAxis> u_axes{{-1, 1, 33, false}};
  const auto flat = fixtures::flat(0.5);
  const ConstancyReport fr = gauss_map_constancy(flat, 0.0, SphereAngles::branch(1), u_axes);
  CHECK(fr.constant);
  REQUIRE(fr.plane.has_value());
  const MinkVector v = fr.plane->pseudo_normal();
  CHECK(std::min(vdist(v, {1, 1, 0}), vdist(v, {1, -1, 0})) < 1e-12);
  CHECK(fr.max_plane_residual <= 1e-9);
  CHECK(fr.max_abs_K <= 1e-10);
  for (double t0 : {-0.5, 0.25, 0.9}) {
    const ConstancyReport r = gauss_map_constancy(flat, t0, SphereAngles::branch(-1), u_axes);
    CHECK(r.constant);
    CHECK(r.max_plane_residual <= 1e-9);
  }

  const auto cyl = fixtures::cylinder();
  const std::vector<GridAxis> circle{{0, 2 * std::numbers::pi, 33, true}};
  const ConstancyReport cr = gauss_map_constancy(cyl, 0.0, SphereAngles::branch(1), circle);
  CHECK_FALSE(cr.constant);
  CHECK(cr.max_angle >= 1.0);
}

TEST_CASE("Weingarten residuals vanish on every fixture") {
  std::mt19937_64 rng(53);
  for (const auto& name : fixtures::names()) {
    const auto spec = fixtures::by_name(name);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> u(spec.s);
      for (int i = 0; i < spec.s; ++i) u[i] = oracle::uniform(rng, spec.u_domain[i].lo, spec.u_domain[i].hi);
      const SphereAngles xi = spec.k == 2 ? SphereAngles::branch(1)
                                          : SphereAngles::spherical({oracle::uniform(rng, 0, 6.28)});
      const WeingartenResidual w =
          weingarten_residual(spec, u, oracle::uniform(rng, spec.t_domain.lo, spec.t_domain.hi), xi);
      CHECK(w.plain <= 1e-5);
      CHECK(w.normalized <= 1e-5);
      CHECK(w.h_formulas <= 1e-5);
    }
  }
  // Non-product geometry with a moving nT.
  const auto tilted = WorldSheetSpec::from_strings(4, 2, 2, {"t", "t/3 + u1 + u2^2/4", "u2 + u1*t/5", "u1^2/3 - u2/2"},
                                                   {{-1, 1}, {-1, 1}}, {-1, 1});
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> u{oracle::uniform(rng, -0.9, 0.9), oracle::uniform(rng, -0.9, 0.9)};
    const WeingartenResidual w = weingarten_residual(tilted, u, oracle::uniform(rng, -0.9, 0.9),
                                                     SphereAngles::branch(trial % 2 ? 1 : -1));
    CHECK(w.plain <= 1e-5);
    CHECK(w.normalized <= 1e-5);
    CHECK(w.h_formulas <= 1e-5);
  }
}
