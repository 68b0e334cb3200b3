#include "wulff/radial.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wulff {

std::string ProblemParams::admissibility(int N, double p, double q, double lambda, double R) {
  std::ostringstream why;
  if (N < 2) {
    why << "N = " << N << " must be >= 2";
  } else if (!(p > 1.0 && p < N)) {
    why << "p = " << p << " must satisfy 1 < p < N = " << N;
  } else if (!(q > p - 1.0 && q <= p)) {
    why << "q = " << q << " must satisfy p - 1 < q <= p";
  } else if (!(q > N * (p - 1.0) / (N - 1.0))) {
    why << "q = " << q << " must exceed N(p-1)/(N-1) = " << N * (p - 1.0) / (N - 1.0);
  } else if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    why << "lambda = " << lambda << " must be finite and >= 0";
  } else if (!(R > 0.0) || !std::isfinite(R)) {
    why << "R = " << R << " must be positive";
  }
  return why.str();
}

ProblemParams ProblemParams::make(int N, double p, double q, double lambda, double R) {
  const std::string why = admissibility(N, p, q, lambda, R);
  if (!why.empty()) throw Error(ErrorCode::InvalidArgument, why);
  return ProblemParams{N, p, q, lambda, R};
}

double branch_function(double gamma, int N, double beta) {
  if (beta <= 0.0) return 0.0;
  return -(gamma - 1.0) * std::pow(beta, gamma) + (N - gamma) * std::pow(beta, gamma - 1.0);
}

double solve_beta(const ProblemParams& params) {
  if (params.lambda == 0.0) return 0.0;
  if (params.lambda >= params.lambda_max()) {
    throw Error(ErrorCode::LambdaTooLarge, "lambda = " + std::to_string(params.lambda) +
                                               " >= c_gamma Lambda_gamma = " + std::to_string(params.lambda_max()));
  }
  const double g = params.gamma();
  const double target = params.lambda / params.c_gamma();
  double lo = 0.0;
  double hi = (params.N - g) / g;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (branch_function(g, params.N, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 2.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

std::string_view to_string(RadialCase c) {
  switch (c) {
    case RadialCase::QLessP: return "q_less_p";
    case RadialCase::QEqualP: return "q_equal_p";
    case RadialCase::LambdaZero: return "lambda_zero";
  }
  return "unknown";
}

RadialSolution RadialSolution::from_root(const ProblemParams& params, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be >= 0");
  RadialSolution sol;
  sol.params_ = params;
  sol.beta_ = beta;
  const double g = params.gamma();
  sol.lambda_ = params.c_gamma() * branch_function(g, params.N, beta);
  if (beta == 0.0) {
    sol.case_ = RadialCase::LambdaZero;
  } else if (params.q < params.p) {
    sol.case_ = RadialCase::QLessP;
    const double e = params.excess();
    sol.theta_ = std::pow((g - 1.0) * beta, 1.0 / e) * e / (params.p - params.q);
  } else {
    sol.case_ = RadialCase::QEqualP;
  }
  return sol;
}

RadialSolution RadialSolution::solve(const ProblemParams& params) {
  RadialSolution sol = from_root(params, solve_beta(params));
  sol.lambda_ = params.lambda;
  return sol;
}

RadialSolution RadialSolution::second_solution(const ProblemParams& params) {
  const double g = params.gamma();
  RadialSolution sol = from_root(params, (params.N - g) / (g - 1.0));
  sol.lambda_ = 0.0;
  return sol;
}

void RadialSolution::check_radius(double r) const {
  if (!(r > 0.0) || r > params_.R) {
    throw Error(ErrorCode::OutOfDomain, "radius " + std::to_string(r) + " outside (0, R]");
  }
}

double RadialSolution::phi(double r) const {
  check_radius(r);
  return std::expm1(beta_ * std::log(params_.R / r));
}

double RadialSolution::dphi(double r) const {
  check_radius(r);
  return -beta_ * std::pow(params_.R / r, beta_) / r;
}

double RadialSolution::d2phi(double r) const {
  check_radius(r);
  return beta_ * (beta_ + 1.0) * std::pow(params_.R / r, beta_) / (r * r);
}

double RadialSolution::v(double r) const {
  check_radius(r);
  switch (case_) {
    case RadialCase::LambdaZero: return 0.0;
    case RadialCase::QEqualP: return (params_.p - 1.0) * beta_ * std::log(params_.R / r);
    case RadialCase::QLessP: {
      const double a = (params_.p - params_.q) / params_.excess();
      return theta_ * (std::pow(r, -a) - std::pow(params_.R, -a));
    }
  }
  return 0.0;
}

double RadialSolution::dv(double r) const {
  check_radius(r);
  switch (case_) {
    case RadialCase::LambdaZero: return 0.0;
    case RadialCase::QEqualP: return -(params_.p - 1.0) * beta_ / r;
    case RadialCase::QLessP: {
      const double a = (params_.p - params_.q) / params_.excess();
      return -theta_ * a * std::pow(r, -a - 1.0);
    }
  }
  return 0.0;
}

double RadialSolution::V(double r) const {
  check_radius(r);
  if (case_ == RadialCase::LambdaZero) return 0.0;
  // (-v'(tau))^(q-p+1) tau is constant in tau, so the integral over [r, R]
  // is that constant times log(R/r).
  const double c = std::pow(-dv(r), params_.excess()) * r;
  return std::expm1(c * std::log(params_.R / r) / (params_.gamma() - 1.0));
}

RadialProfile phi_profile(const RadialSolution& sol, bool analytic) {
  const double beta = sol.beta();
  const double R = sol.params().R;
  RadialProfile prof;
  prof.value = [beta, R](double r) { return std::expm1(beta * std::log(R / r)); };
  if (analytic) {
    prof.d1 = [beta, R](double r) { return -beta * std::pow(R / r, beta) / r; };
    prof.d2 = [beta, R](double r) { return beta * (beta + 1.0) * std::pow(R / r, beta) / (r * r); };
  }
  return prof;
}

double residual_1d(const RadialProfile& profile, const ProblemParams& params, double lambda,
                   const std::vector<double>& radii, double fd_step) {
  const double g = params.gamma();
  const double coef = lambda / params.c_gamma();
  double worst = 0.0;
  for (double r : radii) {
    const double u = profile.value(r);
    double d1;
    double d2;
    if (profile.d1) {
      d1 = profile.d1(r);
    } else {
      d1 = (profile.value(r + fd_step) - profile.value(r - fd_step)) / (2.0 * fd_step);
    }
    if (profile.d2) {
      d2 = profile.d2(r);
    } else {
      d2 = (profile.value(r + fd_step) - 2.0 * u + profile.value(r - fd_step)) / (fd_step * fd_step);
    }
    const double lhs =
        d1 == 0.0 ? 0.0 : -std::pow(std::abs(d1), g - 2.0) * ((g - 1.0) * d2 + (params.N - 1.0) / r * d1);
    const double rhs = coef * std::pow(u + 1.0, g - 1.0) / std::pow(r, g);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double residual_1d(const RadialSolution& sol, const std::vector<double>& radii) {
  return residual_1d(phi_profile(sol, true), sol.params(), sol.lambda(), radii);
}

namespace {

// log2(A_k / A_{k+1}) for A_k = int_{rho_{k+1}}^{rho_k} f(r) r^(N-1) dr.
double annulus_exponent(const std::function<double(double)>& f, int N, double R, int k) {
  auto annulus = [&](int j) {
    const double lo = R * std::ldexp(1.0, -(j + 1));
    const double hi = R * std::ldexp(1.0, -j);
    auto integrand = [&](double x) {
      const double r = std::exp(x);
      return f(r) * std::pow(r, N);
    };
    return boost::math::quadrature::gauss<double, 20>::integrate(integrand, std::log(lo), std::log(hi));
  };
  const double a0 = annulus(k);
  const double a1 = annulus(k + 1);
  if (a0 == 0.0 && a1 == 0.0) return std::numeric_limits<double>::infinity();
  return std::log2(a0 / a1);
}

}  // namespace

MembershipReport branch_membership_check(const RadialSolution& sol, int grid_points, double grid_step) {
  const ProblemParams& pp = sol.params();
  const double g = pp.gamma();
  const double beta = sol.beta();
  const double R = pp.R;
  constexpr int kLevel = 30;
  constexpr double kTol = 1e-9;

  MembershipReport rep;
  rep.delta_tilde = pp.delta_tilde();
  rep.delta_critical = pp.N / (beta * (g - 1.0) + 1.0);
  if (beta == 0.0) {
    rep.pass = true;
    rep.v_in_w1gamma = true;
    rep.delta_found = rep.delta_tilde * (1.0 + grid_step);
    rep.gamma_exponent = std::numeric_limits<double>::infinity();
    rep.reason = "V is identically zero";
    return rep;
  }
  // |d/dr (V+1)^(gamma-1)| = beta (gamma-1) R^(beta(gamma-1)) r^(-beta(gamma-1)-1).
  const double m = beta * (g - 1.0);
  for (int j = 1; j <= grid_points; ++j) {
    const double delta = rep.delta_tilde * (1.0 + j * grid_step);
    auto f = [&](double r) { return std::pow(m * std::pow(R / r, m) / r, delta); };
    const double expo = annulus_exponent(f, pp.N, R, kLevel);
    rep.delta_grid.push_back(delta);
    rep.delta_exponents.push_back(expo);
    if (rep.delta_found == 0.0 && expo > kTol) rep.delta_found = delta;
  }
  auto fv = [&](double r) { return std::pow(std::abs(sol.dphi(r)), g); };
  rep.gamma_exponent = annulus_exponent(fv, pp.N, R, kLevel);
  rep.v_in_w1gamma = rep.gamma_exponent > kTol;
  const bool delta_ok = rep.delta_found > 0.0;
  rep.pass = delta_ok && rep.v_in_w1gamma;
  if (!delta_ok) {
    rep.reason = "no delta > delta_tilde with D[(V+1)^(gamma-1)] in L^delta near the origin";
  } else if (!rep.v_in_w1gamma) {
    rep.reason = "V is not in W^{1,gamma} near the origin";
  } else {
    rep.reason = "admissible";
  }
  return rep;
}

RearrangementProfile v_star(const RadialSolution& sol, double kappa, int count, double lo_fraction) {
  const ProblemParams& pp = sol.params();
  const int N = pp.N;
  const double total = kappa * std::pow(pp.R, N);
  std::vector<double> s = log_grid(total, count, lo_fraction);
  std::vector<double> vals(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = std::min(pp.R, std::pow(s[i] / kappa, 1.0 / N));
    vals[i] = sol.v(r);
  }
  vals.back() = 0.0;
  RearrangementProfile::Tail tail;
  switch (sol.case_tag()) {
    case RadialCase::LambdaZero: break;
    case RadialCase::QEqualP:
      tail.a = (pp.p - 1.0) * sol.beta() / N;
      tail.m = 0.0;
      tail.b = (pp.p - 1.0) * sol.beta() * (std::log(pp.R) + std::log(kappa) / N);
      break;
    case RadialCase::QLessP: {
      const double a = (pp.p - pp.q) / pp.excess();
      tail.a = sol.theta() * std::pow(kappa, a / N);
      tail.m = a / N;
      tail.b = -sol.theta() * std::pow(pp.R, -a);
      break;
    }
  }
  return RearrangementProfile::tabulated(std::move(s), std::move(vals), total, tail);
}

}  // namespace wulff
