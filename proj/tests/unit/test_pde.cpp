#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wulff/pde.hpp"
#include "wulff/parallel.hpp"

using namespace wulff;
using doctest::Approx;
using std::numbers::pi;

namespace {

double max_error(const Mesh& m, const std::vector<double>& u, const std::function<double(const Point&)>& exact) {
  double e = 0.0;
  for (std::size_t i = 0; i < m.vertex_count(); ++i) e = std::max(e, std::abs(u[i] - exact(m.vertices[i])));
  return e;
}

double sine(const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); }

}  // namespace

TEST_CASE("structured rectangle") {
  const Mesh m = build_mesh(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 32);
  CHECK(m.triangle_count() == 2 * 32 * 32);
  CHECK(m.vertex_count() == 33 * 33);
  CHECK(m.total_area() == Approx(1.0).epsilon(1e-14));
  CHECK_NOTHROW(m.validate());
  int boundary = 0;
  for (char b : m.boundary) boundary += b;
  CHECK(boundary == 4 * 32);
}

TEST_CASE("wulff disc mesh") {
  const Mesh m = build_mesh(DomainSpec::wulff_disc(AnisoNorm::euclidean(), 1.0), 1.0 / 64);
  CHECK(std::abs(m.total_area() - pi) < 1e-2);
  CHECK_NOTHROW(m.validate());
  for (std::size_t t = 0; t < m.triangle_count(); ++t) CHECK(m.triangle_area(t) > 0.0);

  const AnisoNorm e = AnisoNorm::ellipse(2.0, 1.0);
  const Mesh g = build_mesh(DomainSpec::wulff_disc(e, 1.0, 2.0), 1.0 / 32);
  CHECK(std::abs(g.total_area() - 2 * pi) < 2e-2);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    if (g.boundary[i]) CHECK(polar_eval(e, vec2(g.vertices[i].x(), g.vertices[i].y())) == Approx(1.0));
  }
  CHECK(local_mesh_size(g, Point(0, 0)) < 1.0 / 32);
}

TEST_CASE("masked mesh flags the inner boundary") {
  const Mesh m = build_mesh(
      DomainSpec::mask([](const Point& x) { return x.norm() > 0.3; }, -1, -1, 1, 1), 1.0 / 20);
  CHECK_NOTHROW(m.validate());
  bool inner_flagged = false;
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    const double r = m.vertices[i].norm();
    if (r < 0.4 && m.boundary[i]) inner_flagged = true;
    if (r < 0.3 - 0.1) FAIL("vertex inside the hole");
  }
  CHECK(inner_flagged);
  CHECK(m.total_area() < 4.0 - pi * 0.09 + 0.2);
}

TEST_CASE("truncation") {
  CHECK(truncate(5.0, 2.0) == 2.0);
  CHECK(truncate(-5.0, 2.0) == -2.0);
  CHECK(truncate(1.5, 2.0) == 1.5);
  const Mesh m = build_mesh(DomainSpec::wulff_disc(AnisoNorm::euclidean(), 1.0), 1.0 / 16);
  const std::vector<double> f = source_at_vertices(Source::singular(0.2, 1.5), AnisoNorm::euclidean(), m);
  const std::vector<double> tf = truncate_source(f, 0.1);
  double mx = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mx = std::max(mx, tf[i]);
    if (f[i] <= 10.0) CHECK(tf[i] == f[i]);
  }
  CHECK(mx == 10.0);
  CHECK_THROWS_AS(truncate_source(f, 0.0), Error);
}

TEST_CASE("zero data gives the zero solution in one iteration") {
  const Mesh m = build_mesh(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 16);
  ProblemSpec spec;
  spec.b_scale = 0.0;
  const SolveReport r = solve_dirichlet(spec, m);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  for (double v : r.u) CHECK(v == 0.0);
  const EnergyReport e = energy_and_gradients(r, spec, m);
  CHECK(e.energy_p == 0.0);
  CHECK(e.energy_q == 0.0);
}

TEST_CASE("p = 2 without gradient term matches the linear solve") {
  const Mesh m = build_mesh(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 24);
  ProblemSpec spec;
  spec.b_scale = 0.0;
  spec.f = Source::function([](const Point& x) { return 1.0 + x.x(); });
  SolverConfig cfg;
  cfg.damping = 1.0;
  const SolveReport r = solve_dirichlet(spec, m, cfg);
  const std::vector<double> mass = lumped_mass(m);
  std::vector<double> load(m.vertex_count());
  for (std::size_t i = 0; i < load.size(); ++i) load[i] = mass[i] * (1.0 + m.vertices[i].x());
  const std::vector<double> ref =
      solve_linear_dirichlet(m, std::vector<Eigen::Matrix2d>(m.triangle_count(), Eigen::Matrix2d::Identity()), load);
  CHECK(r.converged);
  double d = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) d = std::max(d, std::abs(ref[i] - r.u[i]));
  CHECK(d < 1e-9);
}

TEST_CASE("manufactured solution, anisotropic quadratic case") {
  // H(xi)^2 = a^2 xi_1^2 + b^2 xi_2^2, p = q = 2:
  // -div(M Du) - H(Du)^2 = f with u = sin(pi x) sin(pi y).
  const double a = 1.5, b = 0.8;
  const AnisoNorm n = AnisoNorm::ellipse(a, b);
  auto f = [&](const Point& x) {
    const double ux = pi * std::cos(pi * x.x()) * std::sin(pi * x.y());
    const double uy = pi * std::sin(pi * x.x()) * std::cos(pi * x.y());
    return pi * pi * (a * a + b * b) * sine(x) - (a * a * ux * ux + b * b * uy * uy);
  };
  std::vector<double> errors;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    const Mesh m = build_mesh(DomainSpec::rectangle(0, 0, 1, 1), h);
    ProblemSpec spec;
    spec.norm = n;
    spec.f = Source::function(f);
    spec.epsilon = 1e-12;
    const SolveReport r = solve_dirichlet(spec, m);
    CHECK(r.converged);
    CHECK(weak_residual(spec, m, r.u, r.eps_reg) <= 1e-10);
    errors.push_back(max_error(m, r.u, sine));
  }
  CHECK(errors[0] < 0.05);
  CHECK(errors[0] / errors[1] > 1.8);
}

TEST_CASE("manufactured solution, p = 2.5") {
  // Flux |Du|^(p-2) Du of u = sin(pi x) sin(pi y) differentiated numerically.
  const double p = 2.5, q = 2.0;
  auto flux = [&](double x, double y) {
    const Eigen::Vector2d g(pi * std::cos(pi * x) * std::sin(pi * y), pi * std::sin(pi * x) * std::cos(pi * y));
    return Eigen::Vector2d(std::pow(g.norm(), p - 2) * g);
  };
  auto f = [&](const Point& x) {
    const double d = 1e-5;
    const double div = (flux(x.x() + d, x.y())[0] - flux(x.x() - d, x.y())[0]) / (2 * d) +
                       (flux(x.x(), x.y() + d)[1] - flux(x.x(), x.y() - d)[1]) / (2 * d);
    const Eigen::Vector2d g(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()),
                            pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
    return -div - std::pow(g.norm(), q);
  };
  std::vector<double> errors;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    const Mesh m = build_mesh(DomainSpec::rectangle(0, 0, 1, 1), h);
    ProblemSpec spec;
    spec.p = p;
    spec.q = q;
    spec.f = Source::function(f);
    spec.epsilon = 1e-12;
    SolverConfig cfg;
    cfg.tol = 1e-9;
    const SolveReport r = solve_dirichlet(spec, m, cfg);
    CHECK(r.converged);
    errors.push_back(max_error(m, r.u, sine));
  }
  CHECK(errors[0] < 0.1);
  CHECK(errors[0] / errors[1] > 1.5);
}

TEST_CASE("Hopf-Cole on a coarse grid") {
  // u = log(1 + w) with -Lap w = f (1 + w); solved here by Picard on w.
  const Mesh m = build_mesh(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 16);
  auto f = [](const Point& x) { return 2.0 + x.y(); };
  ProblemSpec spec;
  spec.f = Source::function(f);
  spec.epsilon = 1e-12;
  const SolveReport r = solve_dirichlet(spec, m);
  const std::vector<double> mass = lumped_mass(m);
  const std::vector<Eigen::Matrix2d> id(m.triangle_count(), Eigen::Matrix2d::Identity());
  std::vector<double> w(m.vertex_count(), 0.0), load(m.vertex_count());
  for (int it = 0; it < 200; ++it) {
    for (std::size_t i = 0; i < w.size(); ++i) load[i] = mass[i] * f(m.vertices[i]) * (1 + w[i]);
    w = solve_linear_dirichlet(m, id, load);
  }
  double e = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) e = std::max(e, std::abs(r.u[i] - std::log1p(w[i])));
  CHECK(e < 5 * (1.0 / 256 + 1e-10));
}

TEST_CASE("energies") {
  const Mesh m = build_mesh(DomainSpec::wulff_disc(AnisoNorm::euclidean(), 1.0), 1.0 / 64);
  std::vector<double> u(m.vertex_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 1.0 - m.vertices[i].norm();
  const EnergyReport e = energy_and_gradients(m, u, AnisoNorm::euclidean(), 2.0, 1.5);
  CHECK(e.energy_p == Approx(m.total_area()).epsilon(2e-2));
  CHECK(e.gradients.size() == m.triangle_count());
  std::vector<double> u2 = u;
  for (double& v : u2) v *= 2;
  const EnergyReport e2 = energy_and_gradients(m, u2, AnisoNorm::euclidean(), 2.0, 1.5);
  CHECK(e2.energy_p == Approx(4 * e.energy_p).epsilon(1e-13));
  CHECK(e2.energy_q == Approx(std::pow(2.0, 1.5) * e.energy_q).epsilon(1e-13));
}

TEST_CASE("flux monotonicity") {
  for (double p : {1.5, 2.0, 3.0}) {
    CHECK(flux_monotonicity(AnisoNorm::rnorm(4.0), p, 1e-3, 2000) > 0.0);
    CHECK(flux_monotonicity(AnisoNorm::ellipse(2.0, 1.0), p, 1e-3, 2000) > 0.0);
  }
}

TEST_CASE("non-smooth norms are refused") {
  const double angles[] = {0.0, pi / 2};
  const double values[] = {1.0, 1.0};
  ProblemSpec spec;
  spec.norm = AnisoNorm::sampled_gauge(angles, values);
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.norm = AnisoNorm::euclidean();
  spec.epsilon = 0.0;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("schedule with warm starts and determinism") {
  const AnisoNorm n = AnisoNorm::ellipse(2.0, 1.0);
  const Mesh m = build_mesh(DomainSpec::wulff_disc(n, 1.0, 2.0), 1.0 / 16);
  ProblemSpec spec;
  spec.norm = n;
  spec.p = 1.5;
  spec.q = 1.5;
  spec.f = Source::singular(0.1, 1.5);
  SolverConfig cfg;
  cfg.tol = 1e-9;
  const auto a = solve_schedule(spec, m, {0.1, 0.05}, cfg);
  const auto b = solve_schedule(spec, m, {0.1, 0.05}, cfg);
  REQUIRE(a.size() == 2);
  CHECK(a[0].converged);
  CHECK(a[1].converged);
  CHECK(a[1].iterations <= a[0].iterations);
  CHECK(a[1].u == b[1].u);
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    if (m.boundary[i]) CHECK(a[1].u[i] == 0.0);
  }
}

TEST_CASE("non-convergence returns the best iterate") {
  const Mesh m = build_mesh(DomainSpec::rectangle(0, 0, 1, 1), 1.0 / 16);
  ProblemSpec spec;
  spec.f = Source::constant(1.0);
  SolverConfig cfg;
  cfg.max_iter = 2;
  const SolveReport r = solve_dirichlet(spec, m, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.residual == *std::min_element(r.residual_history.begin(), r.residual_history.end()));
}

TEST_CASE("parallel_for covers the range") {
  std::vector<int> hit(5000, 0);
  parallel_for(hit.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) ++hit[i];
  });
  for (int h : hit) CHECK(h == 1);
  CHECK(thread_count() >= 1);
}
