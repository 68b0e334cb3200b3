#include "wulff/verify.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace wulff {

nlohmann::ordered_json CheckReport::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["pass"] = pass;
  j["margin"] = margin;
  j["params"] = params;
  j["details"] = details;
  j["artifacts"] = artifacts;
  return j;
}

GridFunction wulff_polar_grid(const AnisoNorm& norm, double R, int rings, int sectors,
                              const std::function<double(const Point&)>& f) {
  if (norm.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "polar grids are 2-D");
  if (rings < 1 || sectors < 3 || !(R > 0.0)) throw Error(ErrorCode::InvalidArgument, "bad polar grid size");
  using boost::math::quadrature::gauss;
  auto point = [&](double rho, double theta) {
    const Vec w = wulff_boundary_point(norm, theta);
    return Point(rho * w[0], rho * w[1]);
  };
  std::vector<double> angular(static_cast<std::size_t>(sectors));
  for (int j = 0; j < sectors; ++j) {
    const double t0 = 2.0 * std::numbers::pi * j / sectors;
    const double t1 = 2.0 * std::numbers::pi * (j + 1) / sectors;
    angular[j] = gauss<double, 20>::integrate(
        [&](double th) {
          const double ho = polar_eval(norm, vec2(std::cos(th), std::sin(th)));
          return 1.0 / (ho * ho);
        },
        t0, t1);
  }
  GridFunction g;
  const std::size_t n = static_cast<std::size_t>(rings) * sectors;
  g.centers.reserve(n);
  g.measures.reserve(n);
  g.values.reserve(n);
  for (int k = 0; k < rings; ++k) {
    const double ra = R * std::sqrt(static_cast<double>(k) / rings);
    const double rb = R * std::sqrt(static_cast<double>(k + 1) / rings);
    const double rm = std::sqrt(0.5 * (ra * ra + rb * rb));
    for (int j = 0; j < sectors; ++j) {
      const double tm = 2.0 * std::numbers::pi * (j + 0.5) / sectors;
      g.centers.push_back(point(rm, tm));
      g.measures.push_back(0.5 * (rb * rb - ra * ra) * angular[j]);
      g.values.push_back(f(point(rb, tm)));
    }
  }
  return g;
}

CheckReport smallness_check(const GridFunction& f, const ProblemParams& params, const AnisoNorm& norm) {
  const double kappa = wulff_kappa(norm);
  const double g = params.gamma();
  const int N = params.N;
  const double mnorm = marcinkiewicz_norm(f, static_cast<double>(N) / g);
  const double threshold = std::pow(kappa, g / N) * params.c_gamma() * params.Lambda_gamma();
  CheckReport rep;
  rep.check = "smallness";
  rep.pass = mnorm < threshold * (1.0 - 1e-9);
  rep.margin = 1.0 - mnorm / threshold;
  rep.params = {{"N", N}, {"p", params.p}, {"q", params.q}, {"gamma", g}};
  rep.details = {{"marcinkiewicz_norm", mnorm},
                 {"threshold", threshold},
                 {"implied_lambda", mnorm * std::pow(kappa, -g / N)},
                 {"lambda_max", params.lambda_max()},
                 {"kappa", kappa}};
  return rep;
}

CheckReport compare_rearrangements(const RearrangementProfile& u, const RearrangementProfile& v, double slack,
                                   int grid_count) {
  const double mu = u.total_measure();
  const double mv = v.total_measure();
  if (std::abs(mu - mv) > 0.01 * std::max(mu, mv)) {
    throw Error(ErrorCode::DomainMismatch, "profile domains differ: " + std::to_string(mu) + " vs " + std::to_string(mv));
  }
  const int count = std::clamp(grid_count, 64, 1024);
  const double total = std::min(mu, mv);
  const std::vector<double> s = log_grid(total, count, 1e-6);
  double margin = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  double worst_s = 0.0;
  double violating = 0.0;
  int violations = 0;
  double max_diff = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.size(); ++k) {
    max_diff = std::max(max_diff, u(s[k]) - v(s[k]));
    const double gap = v(s[k]) + slack - u(s[k]);
    margin = std::min(margin, gap);
    if (gap < 0.0) {
      ++violations;
      violating += s[k] - (k == 0 ? 0.0 : s[k - 1]);
      if (-gap > worst) {
        worst = -gap;
        worst_s = s[k];
      }
    }
  }
  CheckReport rep;
  rep.check = "compare_rearrangements";
  rep.pass = violations == 0;
  rep.margin = margin;
  rep.params = {{"slack", slack}, {"grid_count", count}};
  rep.details = {{"max_violation", worst},
                 {"max_violation_at", worst_s},
                 {"violating_points", violations},
                 {"violating_measure", violating},
                 {"max_u_minus_v", max_diff},
                 {"total_measure", total}};
  return rep;
}

namespace {

// Monotone cubic (Fritsch-Carlson, harmonic mean) slopes of y(x).
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
  std::vector<double> m(n);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] <= 0.0) {
      m[k] = 0.0;
    } else {
      const double h0 = x[k] - x[k - 1];
      const double h1 = x[k + 1] - x[k];
      const double w1 = 2.0 * h1 + h0;
      const double w2 = h1 + 2.0 * h0;
      m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
  }
  return m;
}

}  // namespace

CheckReport ode_inequality_check(const RearrangementProfile& u, const ProblemParams& params, double kappa,
                                 const OdeCheckOptions& opts) {
  const int N = params.N;
  const double p = params.p;
  const double q = params.q;
  const double e = params.excess();
  const double g = params.gamma();
  const double lambda = params.lambda;
  const double total = u.total_measure();
  const std::vector<double> s = log_grid(total, opts.grid_count, opts.lo_fraction);
  const std::size_t n = s.size();
  std::vector<double> x(n);
  std::vector<double> y(n);
  for (std::size_t k = 0; k < n; ++k) {
    x[k] = std::log(s[k]);
    y[k] = u(s[k]);
  }
  if (s.back() >= total) y.back() = u(std::nextafter(total, 0.0));
  const std::vector<double> m = pchip_slopes(x, y);
  std::vector<double> du(n);
  for (std::size_t k = 0; k < n; ++k) du[k] = std::max(0.0, -m[k] / s[k]);

  const double iso = N * std::pow(kappa, 1.0 / N);
  // Inner integrand g(tau) tau and cumulative G in log s.
  std::vector<double> G(n, 0.0);
  auto gs = [&](std::size_t k) {
    return std::pow(du[k], e) / (std::pow(iso, p - q) * std::pow(s[k], (1.0 - 1.0 / N) * (p - q))) * s[k];
  };
  for (std::size_t k = 1; k < n; ++k) G[k] = G[k - 1] + 0.5 * (gs(k) + gs(k - 1)) * (x[k] - x[k - 1]);
  // Outer integrand h(rho) = lambda (kappa/rho)^(gamma/N) exp(-G(rho)).
  std::vector<double> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = lambda * std::pow(kappa / s[k], g / N) * std::exp(-G[k]);
  std::vector<double> H(n, 0.0);
  double tail = 0.0;
  if (lambda > 0.0) {
    const double c = -std::log(h[1] / h[0]) / (x[1] - x[0]);
    tail = c < 1.0 ? h[0] * s[0] / (1.0 - c) : std::numeric_limits<double>::infinity();
  }
  for (std::size_t k = 1; k < n; ++k) H[k] = H[k - 1] + 0.5 * (h[k] * s[k] + h[k - 1] * s[k - 1]) * (x[k] - x[k - 1]);

  std::vector<double> lhs(n);
  std::vector<double> rhs(n);
  double max_gap = 0.0;
  double max_excess = -std::numeric_limits<double>::infinity();
  const std::size_t lo = static_cast<std::size_t>(std::max(0, opts.trim));
  const std::size_t hi = n - std::min(n, lo + 1);
  for (std::size_t k = lo; k <= hi && k < n; ++k) {
    lhs[k] = std::pow(du[k], p - 1.0) * std::pow(iso * std::pow(s[k], 1.0 - 1.0 / N), p);
    rhs[k] = std::exp(G[k]) * (tail + H[k]);
    double rel;
    if (rhs[k] > 0.0) {
      rel = (lhs[k] - rhs[k]) / rhs[k];
    } else {
      rel = lhs[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    max_gap = std::max(max_gap, std::abs(rel));
    max_excess = std::max(max_excess, rel);
  }
  CheckReport rep;
  rep.check = opts.expect_equality ? "ode_equality" : "ode_inequality";
  if (opts.expect_equality) {
    rep.pass = max_gap < opts.tol;
    rep.margin = opts.tol - max_gap;
  } else {
    rep.pass = max_excess <= opts.tol;
    rep.margin = opts.tol - max_excess;
  }
  rep.params = {{"N", N}, {"p", p}, {"q", q}, {"lambda", lambda}, {"tol", opts.tol}, {"grid_count", opts.grid_count}};
  rep.details = {{"max_relative_gap", max_gap}, {"max_relative_excess", max_excess}, {"tail", tail}};
  return rep;
}

namespace {

// Degree-4 symmetric rule on the reference triangle (barycentric, weights sum to 1).
struct TriRule {
  double l[6][3];
  double w[6];
};

const TriRule& dunavant4() {
  static const TriRule rule = [] {
    TriRule r{};
    const double a = 0.445948490915965, wa = 0.223381589678011;
    const double b = 0.091576213509771, wb = 0.109951743655322;
    const double pa[3][3] = {{a, a, 1 - 2 * a}, {a, 1 - 2 * a, a}, {1 - 2 * a, a, a}};
    const double pb[3][3] = {{b, b, 1 - 2 * b}, {b, 1 - 2 * b, b}, {1 - 2 * b, b, b}};
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        r.l[i][k] = pa[i][k];
        r.l[i + 3][k] = pb[i][k];
      }
      r.w[i] = wa;
      r.w[i + 3] = wb;
    }
    return r;
  }();
  return rule;
}

}  // namespace

double hardy_quotient(const Mesh& mesh, const std::vector<double>& u, const AnisoNorm& norm, double gamma,
                      double exclusion_radius) {
  if (u.size() != mesh.vertex_count()) throw Error(ErrorCode::InvalidArgument, "nodal field size mismatch");
  const EnergyReport er = energy_and_gradients(mesh, u, norm, gamma, gamma);
  const TriRule& rule = dunavant4();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const Point c = mesh.centroid(t);
    if (polar_eval(norm, vec2(c.x(), c.y())) < exclusion_radius) continue;
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    num += area * std::pow(h_eval(norm, vec2(er.gradients[t].x(), er.gradients[t].y())), gamma);
    for (int k = 0; k < 6; ++k) {
      const Point xq = rule.l[k][0] * mesh.vertices[tri[0]] + rule.l[k][1] * mesh.vertices[tri[1]] +
                       rule.l[k][2] * mesh.vertices[tri[2]];
      const double uq = rule.l[k][0] * u[tri[0]] + rule.l[k][1] * u[tri[1]] + rule.l[k][2] * u[tri[2]];
      const double ho = polar_eval(norm, vec2(xq.x(), xq.y()));
      den += area * rule.w[k] * std::pow(std::abs(uq), gamma) / std::pow(ho, gamma);
    }
  }
  if (den == 0.0) throw Error(ErrorCode::DivisionByZero, "Hardy denominator vanishes");
  return num / den;
}

double hardy_quotient_radial(const std::function<double(double)>& g, const std::function<double(double)>& dg, int N,
                             double gamma, double R, std::vector<double> breakpoints) {
  boost::math::quadrature::tanh_sinh<double> ts;
  std::vector<double> cuts = {0.0};
  for (double b : breakpoints) {
    if (b > 0.0 && b < R) cuts.push_back(b);
  }
  cuts.push_back(R);
  std::sort(cuts.begin(), cuts.end());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    num += ts.integrate([&](double r) { return std::pow(std::abs(dg(r)), gamma) * std::pow(r, N - 1.0); }, cuts[k],
                        cuts[k + 1]);
    den += ts.integrate([&](double r) { return std::pow(std::abs(g(r)), gamma) * std::pow(r, N - 1.0 - gamma); },
                        cuts[k], cuts[k + 1]);
  }
  if (den == 0.0) throw Error(ErrorCode::DivisionByZero, "Hardy denominator vanishes");
  return num / den;
}

CheckReport norm_estimate_check(const RearrangementProfile& u, const RearrangementProfile& v,
                                const ProblemParams& params, const std::vector<double>& exponents, double slack) {
  CheckReport rep;
  rep.check = "norm_estimate";
  rep.pass = true;
  rep.margin = std::numeric_limits<double>::infinity();
  nlohmann::ordered_json rungs = nlohmann::ordered_json::array();
  for (double s : exponents) {
    const double nu = u.lp_norm(s);
    const double nv = v.lp_norm(s);
    const bool ok = nu <= nv * (1.0 + slack);
    rep.pass = rep.pass && ok;
    const double m = nv > 0.0 ? 1.0 + slack - nu / nv : (nu == 0.0 ? slack : -std::numeric_limits<double>::infinity());
    rep.margin = std::min(rep.margin, m);
    rungs.push_back({{"s", s}, {"u_norm", nu}, {"v_norm", nv}, {"pass", ok}});
  }
  const double e = params.excess();
  rep.params = {{"N", params.N}, {"p", params.p}, {"q", params.q}, {"slack", slack}};
  rep.details["rungs"] = rungs;
  rep.details["s_tilde"] = params.s_tilde();
  rep.details["lebesgue_threshold"] =
      params.q < params.p ? params.N * e / (params.p - params.q) : std::numeric_limits<double>::infinity();
  return rep;
}

std::vector<double> radial_norm_growth(const RadialSolution& sol, double kappa, double exponent, int levels) {
  const ProblemParams& pp = sol.params();
  std::vector<double> out;
  double acc = 0.0;
  for (int k = 0; k <= levels; ++k) {
    const double hi = pp.R * std::ldexp(1.0, -k + 1);
    const double lo = pp.R * std::ldexp(1.0, -k);
    if (k > 0) {
      acc += boost::math::quadrature::gauss<double, 30>::integrate(
          [&](double xr) {
            const double r = std::exp(xr);
            return std::pow(std::abs(sol.v(r)), exponent) * pp.N * kappa * std::pow(r, pp.N);
          },
          std::log(lo), std::log(std::min(hi, pp.R)));
    }
    out.push_back(acc);
  }
  return out;
}

CheckReport isoperimetric_check(const std::vector<Polygon>& sets, const AnisoNorm& norm) {
  const double kappa = wulff_kappa(norm);
  CheckReport rep;
  rep.check = "isoperimetric";
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  nlohmann::ordered_json ratios = nlohmann::ordered_json::array();
  for (const Polygon& poly : sets) {
    const double ratio = anisotropic_perimeter(poly, norm) / (2.0 * std::sqrt(kappa * polygon_area(poly)));
    ratios.push_back(ratio);
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
  }
  rep.pass = min_ratio >= 1.0 - 1e-6;
  rep.margin = min_ratio - (1.0 - 1e-6);
  rep.params = {{"sets", sets.size()}, {"kappa", kappa}};
  rep.details = {{"min_ratio", min_ratio}, {"max_ratio", max_ratio}, {"ratios", ratios}};
  return rep;
}

bool ComparisonResult::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass; });
}

ComparisonResult run_comparison(const ComparisonSetup& setup) {
  const ProblemParams& pp = setup.params;
  if (pp.N != 2) throw Error(ErrorCode::UnsupportedDimension, "the comparison pipeline runs in 2-D");
  const RadialSolution sol = RadialSolution::solve(pp);
  ComparisonResult res;
  res.mesh = build_mesh(DomainSpec::wulff_disc(setup.norm, pp.R), setup.h);
  ProblemSpec spec;
  spec.norm = setup.norm;
  spec.p = pp.p;
  spec.q = pp.q;
  spec.f = Source::singular(pp.lambda, pp.gamma());
  res.solves = solve_schedule(spec, res.mesh, setup.epsilons, setup.solver);
  const double kappa = wulff_kappa(setup.norm);
  res.v_profile = v_star(sol, kappa);
  res.slack = setup.slack_constant * std::sqrt(setup.h);
  for (std::size_t k = 0; k < res.solves.size(); ++k) {
    const SolveReport& sr = res.solves[k];
    res.u_profiles.push_back(decreasing_rearrangement(to_grid_function(res.mesh, sr.u, setup.subdivisions)));
    CheckReport c = compare_rearrangements(res.u_profiles.back(), res.v_profile, res.slack, setup.grid_count);
    c.params["epsilon"] = setup.epsilons[k];
    c.params["h"] = setup.h;
    c.params["slack_constant"] = setup.slack_constant;
    c.details["iterations"] = sr.iterations;
    c.details["residual"] = sr.residual;
    c.details["converged"] = sr.converged;
    c.details["u_sup"] = res.u_profiles.back().sup();
    if (!sr.converged) c.pass = false;
    res.checks.push_back(std::move(c));
  }
  return res;
}

}  // namespace wulff
