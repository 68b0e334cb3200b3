#pragma once

// Checks of the comparison estimates and the inequalities behind them. Every
// check returns a CheckReport with a signed margin (positive means slack left).

#include <json.hpp>

#include <string>
#include <vector>

#include "wulff/pde.hpp"
#include "wulff/radial.hpp"

namespace wulff {

struct CheckReport {
  std::string check;
  bool pass = false;
  double margin = 0.0;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::vector<std::string> artifacts;

  nlohmann::ordered_json to_json() const;
};

/// Slack constant C of the discretisation slack C h^(1/2), frozen.
inline constexpr double kSlackConstant = 1.0;

/// Grid of W_R by equal-measure rings and equal-angle sectors. Cell measures
/// are exact; values are f at the outer edge of each cell on the mid-angle ray
/// (so a radially decreasing f is sampled by its infimum over the cell);
/// centres sit at the measure-midpoint radius.
GridFunction wulff_polar_grid(const AnisoNorm& norm, double R, int rings, int sectors,
                              const std::function<double(const Point&)>& f);

/// ||f||_{M^{N/gamma}} against kappa^(gamma/N) c_gamma Lambda_gamma; PASS iff
/// strictly below (relative guard 1e-9).
CheckReport smallness_check(const GridFunction& f, const ProblemParams& params, const AnisoNorm& norm);

/// u*(s) <= v*(s) + slack on a shared log-spaced grid. Throws DomainMismatch
/// when the total measures differ by more than 1%.
CheckReport compare_rearrangements(const RearrangementProfile& u, const RearrangementProfile& v, double slack,
                                   int grid_count = 256);

struct OdeCheckOptions {
  bool expect_equality = false;
  double tol = 1e-3;
  int grid_count = 512;
  double lo_fraction = 1e-8;
  int trim = 8;  // grid points dropped at each end
};

/// Evaluates both sides of
///   (-u*'(s))^(p-1) (N kappa^(1/N) s^(1-1/N))^p
///     <= int_0^s lambda (kappa/rho)^(gamma/N) exp(int_rho^s g(tau) dtau) drho,
///   g = (-u*')^(q-p+1) / ((N kappa^(1/N))^(p-q) tau^((1-1/N)(p-q))),
/// with derivatives from a monotone cubic fit in log s.
CheckReport ode_inequality_check(const RearrangementProfile& u, const ProblemParams& params, double kappa,
                                 const OdeCheckOptions& opts = {});

/// int H(Du)^gamma / int |u|^gamma / H°(x)^gamma over triangles whose centroid
/// has H° >= exclusion_radius. Throws DivisionByZero when the denominator vanishes.
double hardy_quotient(const Mesh& mesh, const std::vector<double>& u, const AnisoNorm& norm, double gamma,
                      double exclusion_radius);

/// Radial version: int |g'|^gamma r^(N-1) dr / int |g|^gamma r^(N-1-gamma) dr on (0, R).
double hardy_quotient_radial(const std::function<double(double)>& g, const std::function<double(double)>& dg, int N,
                             double gamma, double R, std::vector<double> breakpoints = {});

/// ||u||_s <= ||v||_s (1 + slack) for every exponent of the ladder.
CheckReport norm_estimate_check(const RearrangementProfile& u, const RearrangementProfile& v,
                                const ProblemParams& params, const std::vector<double>& exponents, double slack);

/// int_{kappa rho_k^N}^{|W_R|} v*(s)^s ds for rho_k = R 2^-k, k = 0..levels.
std::vector<double> radial_norm_growth(const RadialSolution& sol, double kappa, double exponent, int levels);

/// P_H(E) / (N kappa^(1/N) |E|^(1-1/N)) >= 1 - 1e-6 for every polygon.
CheckReport isoperimetric_check(const std::vector<Polygon>& sets, const AnisoNorm& norm);

/// End-to-end comparison on Omega = W_R: solve the approximating problems
/// with f = lambda / H°^gamma and compare u_eps* with v*.
struct ComparisonSetup {
  AnisoNorm norm = AnisoNorm::euclidean(2);
  ProblemParams params;
  double h = 1.0 / 32.0;
  std::vector<double> epsilons = {0.1, 0.05, 0.025};
  SolverConfig solver;
  double slack_constant = kSlackConstant;
  int grid_count = 256;
  int subdivisions = 2;
};

struct ComparisonResult {
  Mesh mesh;
  std::vector<SolveReport> solves;
  std::vector<RearrangementProfile> u_profiles;
  RearrangementProfile v_profile = RearrangementProfile::step({1.0}, {0.0}, 1.0);
  double slack = 0.0;
  std::vector<CheckReport> checks;  // one comparison per epsilon
  bool pass() const;
};

ComparisonResult run_comparison(const ComparisonSetup& setup);

}  // namespace wulff
