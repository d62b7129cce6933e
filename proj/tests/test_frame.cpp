#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "wsheet/errors.hpp"
#include "wsheet/fixtures.hpp"
#include "wsheet/frame.hpp"

using namespace wsheet;

namespace {

std::vector<double> U(std::initializer_list<double> v) { return v; }

double vdist(const MinkVector& a, const MinkVector& b) { return (a - b).coords().norm(); }

void check_frame_invariants(const PointEval& pe, const NormalFrame& f, int k) {
  const double tol = 1e-9;
  CHECK(std::abs(pseudo_product(f.nT, f.nT) + 1) <= tol);
  CHECK(f.nT[0] > 0);
  REQUIRE(static_cast<int>(f.nS.size()) == k - 1);
  for (std::size_t a = 0; a < f.nS.size(); ++a) {
    CHECK(std::abs(pseudo_product(f.nT, f.nS[a])) <= tol);
    for (std::size_t b = 0; b < f.nS.size(); ++b)
      CHECK(std::abs(pseudo_product(f.nS[a], f.nS[b]) - (a == b ? 1.0 : 0.0)) <= tol);
    for (const auto& xu : pe.Xu) CHECK(std::abs(pseudo_product(f.nS[a], xu)) <= tol);
  }
  for (const auto& xu : pe.Xu) CHECK(std::abs(pseudo_product(f.nT, xu)) <= tol);
  // nT in span(Xt, Xu): least-squares residual in coordinates.
  Eigen::MatrixXd basis(pe.Xt.dim(), pe.Xu.size() + 1);
  basis.col(0) = pe.Xt.coords();
  for (std::size_t i = 0; i < pe.Xu.size(); ++i) basis.col(i + 1) = pe.Xu[i].coords();
  const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(f.nT.coords());
  CHECK((basis * c - f.nT.coords()).norm() <= tol);
}

}  // namespace

TEST_CASE("timelike normal examples") {
  const PointEval c = evaluate(fixtures::cylinder(), U({0.7}), 0.3);
  CHECK(vdist(timelike_normal(c), {1, 0, 0}) < 1e-15);
  const PointEval f = evaluate(fixtures::flat(0.5), U({0.2}), 0.1);
  CHECK(vdist(timelike_normal(f), {2 / std::sqrt(3.0), 1 / std::sqrt(3.0), 0}) < 1e-15);
  // A past-pointing parametrization still yields the future-directed normal.
  const auto past = WorldSheetSpec::from_strings(3, 1, 2, {"-t", "cos(u1)", "sin(u1)"}, {{0, 6}}, {-1, 1});
  CHECK(vdist(timelike_normal(evaluate(past, U({0.4}), 0.0)), {1, 0, 0}) < 1e-15);
}

TEST_CASE("spacelike frame examples") {
  const PointEval c = evaluate(fixtures::cylinder(), U({0.0}), 0.0);
  CHECK(vdist(normal_frame(c).nS[0], {0, 1, 0}) < 1e-15);

  const PointEval s = evaluate(fixtures::sphere(), U({std::numbers::pi / 2, 0.0}), 0.0);
  CHECK(vdist(normal_frame(s).nS[0], {0, 1, 0, 0}) < 1e-15);

  // FLT(1/2): solve <n, Xu> = <n, nT> = 0 directly and compare up to sign.
  const PointEval f = evaluate(fixtures::flat(0.5), U({0.0}), 0.0);
  const NormalFrame ff = normal_frame(f);
  Eigen::MatrixXd constraints(2, 3);
  constraints.row(0) = (lorentz_metric(3) * f.Xu[0].coords()).transpose();
  constraints.row(1) = (lorentz_metric(3) * ff.nT.coords()).transpose();
  Eigen::VectorXd kernel = constraints.fullPivLu().kernel().col(0);
  kernel /= std::sqrt(kernel.transpose() * lorentz_metric(3) * kernel);
  const MinkVector expect{1 / std::sqrt(3.0), 2 / std::sqrt(3.0), 0};
  CHECK((kernel.cwiseAbs() - expect.coords().cwiseAbs()).norm() < 1e-12);
  CHECK(std::min(vdist(ff.nS[0], expect), vdist(ff.nS[0], -expect)) < 1e-12);
}

TEST_CASE("frame invariants hold at random points of every fixture") {
  std::mt19937_64 rng(41);
  for (const auto& name : fixtures::names()) {
    const auto spec = fixtures::by_name(name);
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<double> u(spec.s);
      for (int i = 0; i < spec.s; ++i) u[i] = oracle::uniform(rng, spec.u_domain[i].lo, spec.u_domain[i].hi);
      const double t = oracle::uniform(rng, spec.t_domain.lo, spec.t_domain.hi);
      const PointEval pe = evaluate(spec, u, t);
      check_frame_invariants(pe, normal_frame(pe), spec.k);
    }
  }
  // A tilted sheet with nontrivial nT and k = 3.
  const auto tilted = WorldSheetSpec::from_strings(4, 1, 3, {"t", "t/3 + cos(u1)", "sin(u1)", "u1/2 + t*u1/5"},
                                                   {{0, 3}}, {-1, 1});
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<double> u{oracle::uniform(rng, 0, 3)};
    const PointEval pe = evaluate(tilted, u, oracle::uniform(rng, -1, 1));
    check_frame_invariants(pe, normal_frame(pe), 3);
  }
}

TEST_CASE("xi from angles") {
  const PointEval pe = evaluate(fixtures::sphere5(), U({1.0, 0.5}), 0.2);
  const NormalFrame f = normal_frame(pe);
  for (double th : {0.0, 0.3, 2.0, 5.5}) {
    const MinkVector xi = xi_from_angles(f, SphereAngles::spherical({th}));
    CHECK(vdist(xi, std::cos(th) * f.nS[0] + std::sin(th) * f.nS[1]) < 1e-15);
    CHECK(std::abs(pseudo_product(xi, xi) - 1) < 1e-12);
    CHECK(std::abs(pseudo_product(xi, f.nT)) < 1e-12);
  }
  const NormalFrame c = normal_frame(evaluate(fixtures::cylinder(), U({0.0}), 0.0));
  CHECK(xi_from_angles(c, SphereAngles::branch(1)) == c.nS[0]);
  CHECK(xi_from_angles(c, SphereAngles::branch(-1)) == -c.nS[0]);
}

TEST_CASE("aligned sweeps have no sign flips") {
  for (const char* name : {"cyl", "sph", "sph5"}) {
    const auto spec = fixtures::by_name(name);
    std::vector<int> counts(spec.s + 1, 65);
    const auto axes = domain_axes(spec, counts);
    std::vector<PointEval> evals;
    const auto frames = aligned_frames(spec, axes, evals);
    std::vector<int> cnt;
    for (const auto& ax : axes) cnt.push_back(ax.count);
    const GridShape shape(cnt);
    double worst = 0.0;
    for (std::size_t f = 0; f < shape.size(); ++f) {
      std::size_t parent;
      if (!sweep_parent(shape, f, parent)) continue;
      for (std::size_t a = 0; a < frames[f].nS.size(); ++a)
        worst = std::max(worst, vdist(frames[f].nS[a], frames[parent].nS[a]));
    }
    // Grid spacing is about 0.1 here; a flip would give a distance near 2.
    CHECK_MESSAGE(worst < 0.5, name);
  }
}

TEST_CASE("align_frame flips negative partners") {
  const NormalFrame ref = normal_frame(evaluate(fixtures::cylinder(), U({0.0}), 0.0));
  NormalFrame f = ref;
  f.nS[0] = -f.nS[0];
  align_frame(f, ref);
  CHECK(f.nS[0] == ref.nS[0]);
}
