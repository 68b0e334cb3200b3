#pragma once

// Explicit radial solutions of the model problem
//   -Q_p v = H(Dv)^q + lambda / H°(x)^gamma  in W_R,  v = 0 on the boundary,
// and the branch equation that parametrises them.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wulff/rearrange.hpp"

namespace wulff {

struct ProblemParams {
  int N = 2;
  double p = 2.0;
  double q = 2.0;
  double lambda = 0.0;
  double R = 1.0;

  /// Validates 1 < p < N, p - 1 < q <= p, q > N(p-1)/(N-1), lambda >= 0, R > 0.
  static ProblemParams make(int N, double p, double q, double lambda, double R = 1.0);
  /// Empty string when admissible, otherwise the first violated condition.
  static std::string admissibility(int N, double p, double q, double lambda, double R);

  double excess() const { return q - (p - 1.0); }  // q - (p - 1)
  double gamma() const { return q / excess(); }
  double c_gamma() const { return std::pow(gamma() - 1.0, gamma() - 1.0); }
  double Lambda_gamma() const { return std::pow((N - gamma()) / gamma(), gamma()); }
  /// Upper bound c_gamma Lambda_gamma for lambda.
  double lambda_max() const { return c_gamma() * Lambda_gamma(); }
  double s_tilde() const { return N * excess(); }
  /// Conjugate exponent of s_tilde / (p - 1).
  double delta_tilde() const {
    const double x = s_tilde() / (p - 1.0);
    return x / (x - 1.0);
  }
};

/// F(beta) = -(gamma-1) beta^gamma + (N-gamma) beta^(gamma-1).
double branch_function(double gamma, int N, double beta);

/// Unique root of F(beta) = lambda / c_gamma in [0, (N-gamma)/gamma), by
/// bisection. Throws LambdaTooLarge when lambda >= c_gamma Lambda_gamma.
double solve_beta(const ProblemParams& params);

enum class RadialCase { QLessP, QEqualP, LambdaZero };
std::string_view to_string(RadialCase c);

class RadialSolution {
 public:
  /// Admissible solution for the given parameters.
  static RadialSolution solve(const ProblemParams& params);
  /// Solution built on an arbitrary root beta of the branch equation with
  /// lambda = c_gamma F(beta); used for the rejected branch.
  static RadialSolution from_root(const ProblemParams& params, double beta);
  /// The second radial solution at lambda = 0, beta = (N-gamma)/(gamma-1).
  static RadialSolution second_solution(const ProblemParams& params);

  const ProblemParams& params() const { return params_; }
  double beta() const { return beta_; }
  /// Coefficient of the power law when q < p, otherwise 0.
  double theta() const { return theta_; }
  RadialCase case_tag() const { return case_; }
  /// lambda reconstructed from beta; equals params().lambda for `solve`.
  double lambda() const { return lambda_; }

  /// Phi(r) = (R/r)^beta - 1.
  double phi(double r) const;
  double dphi(double r) const;
  double d2phi(double r) const;
  double v(double r) const;
  /// v'(r).
  double dv(double r) const;
  /// V(r) = exp[(1/(gamma-1)) int_r^R (-v')^(q-p+1)] - 1, integral in closed form.
  double V(double r) const;

 private:
  void check_radius(double r) const;

  ProblemParams params_;
  double beta_ = 0.0;
  double theta_ = 0.0;
  double lambda_ = 0.0;
  RadialCase case_ = RadialCase::LambdaZero;
};

/// Radial profile with derivatives, for residual evaluation.
struct RadialProfile {
  std::function<double(double)> value;
  std::function<double(double)> d1;  // may be empty: finite differences
  std::function<double(double)> d2;
};

RadialProfile phi_profile(const RadialSolution& sol, bool analytic = true);

/// max over the grid of
///   | -|V'|^(gamma-2) ((gamma-1) V'' + (N-1)/r V') - (lambda/c_gamma)(V+1)^(gamma-1) / r^gamma |.
/// Missing derivatives are taken by central differences with step `fd_step`.
double residual_1d(const RadialProfile& profile, const ProblemParams& params, double lambda,
                   const std::vector<double>& radii, double fd_step = 1e-4);
double residual_1d(const RadialSolution& sol, const std::vector<double>& radii);

struct MembershipReport {
  bool pass = false;
  /// Critical exponent N / (beta (gamma-1) + 1) for (V+1)^(gamma-1) in W^{1,delta}.
  double delta_critical = 0.0;
  double delta_tilde = 0.0;
  /// Smallest grid value delta > delta_tilde with a bounded annulus sum, or 0.
  double delta_found = 0.0;
  /// Estimated decay exponents log2(A_k / A_{k+1}) of the annulus integrals.
  std::vector<double> delta_grid;
  std::vector<double> delta_exponents;
  /// Same estimate for |DV|^gamma (V in W^{1,gamma}).
  double gamma_exponent = 0.0;
  bool v_in_w1gamma = false;
  std::string reason;
};

/// Asymptotic estimate of the integrability of D[(V+1)^(gamma-1)] and DV near
/// the origin from annulus integrals on rho_k = R 2^-k.
MembershipReport branch_membership_check(const RadialSolution& sol, int grid_points = 200, double grid_step = 1e-3);

/// v*(s) = v((s/kappa)^(1/N)) on a log-spaced s grid with the exact tail.
RearrangementProfile v_star(const RadialSolution& sol, double kappa, int count = 512, double lo_fraction = 1e-8);

}  // namespace wulff
