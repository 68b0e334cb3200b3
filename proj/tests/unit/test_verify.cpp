#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wulff/verify.hpp"

using namespace wulff;
using doctest::Approx;
using std::numbers::pi;

namespace {

ProblemParams at_fraction(int N, double p, double q, double f) {
  const ProblemParams probe{N, p, q, 0.0, 1.0};
  return ProblemParams::make(N, p, q, f * probe.lambda_max());
}

GridFunction singular_grid(const AnisoNorm& n, double lambda, double g) {
  return wulff_polar_grid(n, 1.0, 128, 128, [&](const Point& x) {
    return lambda / std::pow(polar_eval(n, vec2(x.x(), x.y())), g);
  });
}

}  // namespace

TEST_CASE("polar grid measures") {
  const AnisoNorm n = AnisoNorm::rnorm(3.0);
  const GridFunction g = wulff_polar_grid(n, 1.3, 40, 24, [](const Point&) { return 1.0; });
  CHECK(g.size() == 40 * 24);
  CHECK(g.total_measure() == Approx(wulff_kappa(n) * 1.69).epsilon(1e-8));
}

TEST_CASE("smallness") {
  const ProblemParams pp = at_fraction(2, 1.5, 1.5, 0.5);
  const AnisoNorm n = AnisoNorm::ellipse(2.0, 1.0);
  const CheckReport half = smallness_check(singular_grid(n, pp.lambda, pp.gamma()), pp, n);
  CHECK(half.pass);
  CHECK(half.margin == Approx(0.5).epsilon(1e-9));
  CHECK(half.details["implied_lambda"].get<double>() == Approx(pp.lambda).epsilon(1e-9));

  const CheckReport edge = smallness_check(singular_grid(n, pp.lambda_max(), pp.gamma()), pp, n);
  CHECK_FALSE(edge.pass);

  const CheckReport zero = smallness_check(singular_grid(n, 0.0, pp.gamma()), pp, n);
  CHECK(zero.pass);
  CHECK(zero.margin == Approx(1.0));
  CHECK(zero.to_json()["check"] == "smallness");
}

TEST_CASE("compare rearrangements") {
  const ProblemParams pp = at_fraction(2, 1.5, 1.5, 0.5);
  const RearrangementProfile v = v_star(RadialSolution::solve(pp), pi);
  const CheckReport self = compare_rearrangements(v, v, 0.0);
  CHECK(self.pass);
  CHECK(self.margin == 0.0);

  std::vector<double> scaled = v.values();
  for (double& x : scaled) x *= 1.5;
  const RearrangementProfile u = RearrangementProfile::tabulated(v.breakpoints(), scaled, v.total_measure(),
                                                                 RearrangementProfile::Tail{
                                                                     1.5 * v.tail()->a, v.tail()->m, 1.5 * v.tail()->b});
  const CheckReport bad = compare_rearrangements(u, v, 0.01);
  CHECK_FALSE(bad.pass);
  CHECK(bad.margin < 0.0);
  CHECK(bad.details["violating_measure"].get<double>() > 0.0);
  CHECK(compare_rearrangements(v, u, 0.01).pass);

  // Antisymmetry: both directions pass only for profiles equal within the slack.
  const double sigma = 0.01;
  std::vector<double> nudged = v.values();
  for (double& x : nudged) x += 0.5 * sigma;
  const RearrangementProfile w = RearrangementProfile::tabulated(v.breakpoints(), nudged, v.total_measure());
  CHECK(compare_rearrangements(w, v, sigma).pass);
  CHECK(compare_rearrangements(v, w, sigma).pass);
  const bool both = compare_rearrangements(u, v, sigma).pass && compare_rearrangements(v, u, sigma).pass;
  CHECK_FALSE(both);

  // A pass at slack sigma stays a pass at any larger slack.
  for (double s : {0.5 * sigma, sigma, 2 * sigma, 1.0}) {
    if (compare_rearrangements(w, v, s).pass) CHECK(compare_rearrangements(w, v, 2 * s).pass);
  }

  const RearrangementProfile other = RearrangementProfile::step({2.0}, {1.0}, 2.0);
  CHECK_THROWS_AS(compare_rearrangements(other, v, 0.0), Error);
}

TEST_CASE("ode inequality") {
  for (const ProblemParams& pp : {at_fraction(3, 2.0, 2.0, 0.75), at_fraction(2, 1.8, 1.7, 0.5)}) {
    const double kappa = pp.N == 3 ? 4 * pi / 3 : pi;
    OdeCheckOptions eq;
    eq.expect_equality = true;
    CHECK(ode_inequality_check(v_star(RadialSolution::solve(pp), kappa), pp, kappa, eq).pass);
  }
  const ProblemParams pp = at_fraction(2, 1.5, 1.5, 0.5);
  const RearrangementProfile zero = RearrangementProfile::step({pi}, {0.0}, pi);
  CHECK(ode_inequality_check(zero, pp, pi).pass);
}

TEST_CASE("ode inequality on a discrete solution") {
  ComparisonSetup setup;
  setup.params = at_fraction(2, 1.5, 1.5, 0.5);
  setup.h = 1.0 / 32;
  setup.epsilons = {0.1};
  setup.solver.tol = 1e-9;
  const ComparisonResult res = run_comparison(setup);
  REQUIRE(res.solves[0].converged);
  CHECK(res.pass());
  const CheckReport rep = ode_inequality_check(res.u_profiles[0], setup.params, pi);
  CHECK(rep.pass);
}

TEST_CASE("hardy quotients") {
  // N = 3, gamma = 2, u = 1 - r on the unit ball: both integrals are 4 pi / 3.
  const double Q = hardy_quotient_radial([](double r) { return 1 - r; }, [](double) { return -1.0; }, 3, 2.0, 1.0);
  CHECK(Q == Approx(1.0).epsilon(1e-10));
  CHECK(Q >= 0.25);

  const AnisoNorm n = AnisoNorm::ellipse(1.5, 1.0);
  const Mesh m = build_mesh(DomainSpec::wulff_disc(n, 1.0, 2.0), 1.0 / 32);
  std::vector<double> u(m.vertex_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1 - polar_eval(n, vec2(m.vertices[i].x(), m.vertices[i].y()));
  const double excl = 2 * local_mesh_size(m, Point(0, 0));
  const double q1 = hardy_quotient(m, u, n, 1.5, excl);
  std::vector<double> u3 = u;
  for (double& x : u3) x *= -3;
  CHECK(hardy_quotient(m, u3, n, 1.5, excl) == Approx(q1).epsilon(1e-12));
  CHECK(q1 >= std::pow(0.5 / 1.5, 1.5));
  // The radial oracle for the same profile, N = 2.
  const double qr = hardy_quotient_radial([](double r) { return 1 - r; }, [](double) { return -1.0; }, 2, 1.5, 1.0);
  CHECK(q1 == Approx(qr).epsilon(2e-2));
  CHECK_THROWS_AS(hardy_quotient(m, std::vector<double>(m.vertex_count(), 0.0), n, 1.5, excl), Error);
}

TEST_CASE("norm estimate ladder") {
  const ProblemParams pp = at_fraction(2, 1.8, 1.7, 0.5);
  const RearrangementProfile v = v_star(RadialSolution::solve(pp), pi);
  const CheckReport eq = norm_estimate_check(v, v, pp, {1.0, 2.0, 16.2}, 0.0);
  CHECK(eq.pass);
  for (const auto& rung : eq.details["rungs"]) CHECK(rung["u_norm"].get<double>() == rung["v_norm"].get<double>());
}

TEST_CASE("radial norm growth") {
  // Bounded below N e/(p-q) = 18, unbounded above.
  const RadialSolution sol = RadialSolution::solve(at_fraction(2, 1.8, 1.7, 0.5));
  const std::vector<double> below = radial_norm_growth(sol, pi, 9.0, 40);
  const std::vector<double> above = radial_norm_growth(sol, pi, 36.0, 40);
  CHECK(below.back() - below[30] < 1e-3 * below.back());
  CHECK(above.back() > 10 * above[30]);
}

TEST_CASE("isoperimetric check") {
  const Polygon sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const CheckReport r = isoperimetric_check({sq}, AnisoNorm::euclidean());
  CHECK(r.pass);
  CHECK(r.details["min_ratio"].get<double>() == Approx(2 / std::sqrt(pi)));
  const CheckReport w = isoperimetric_check({wulff_polygon(AnisoNorm::rnorm(4.0), 1.0, 1024)}, AnisoNorm::rnorm(4.0));
  CHECK(w.details["min_ratio"].get<double>() == Approx(1.0).epsilon(1e-3));
}
