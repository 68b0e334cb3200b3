#pragma once

// P1 finite elements for the approximating Dirichlet problems
//   -div a(Du) = b_eps(Du) + T_{1/eps} f  in Omega,  u = 0 on the boundary,
// with a(xi) = H(xi)^(p-1) H_xi(xi), b = sign * scale * H(xi)^q and
// b_eps = b / (1 + eps |b|).

#include <Eigen/Sparse>

#include <cstdint>
#include <functional>
#include <vector>

#include "wulff/mesh.hpp"

namespace wulff {

/// T_t(s) = max(-t, min(t, s)).
double truncate(double s, double t);

struct Source {
  enum class Kind { Zero, Constant, Singular, Function, Nodal };
  Kind kind = Kind::Zero;
  double value = 0.0;  // constant value, or lambda for the singular source
  double gamma = 1.0;  // exponent of the singular source lambda / H°(x)^gamma
  std::function<double(const Point&)> fn;
  std::vector<double> nodal;

  static Source zero() { return {}; }
  static Source constant(double c);
  static Source singular(double lambda, double gamma);
  static Source function(std::function<double(const Point&)> fn);
  static Source from_nodal(std::vector<double> values);
};

/// f at the mesh vertices; the singular source is +inf at the origin.
std::vector<double> source_at_vertices(const Source& f, const AnisoNorm& norm, const Mesh& mesh);

/// T_{1/eps} applied pointwise.
std::vector<double> truncate_source(const std::vector<double>& f, double epsilon);
GridFunction truncate_source(const GridFunction& f, double epsilon);

struct ProblemSpec {
  AnisoNorm norm = AnisoNorm::euclidean(2);
  double p = 2.0;
  double q = 2.0;
  double b_sign = 1.0;
  double b_scale = 1.0;  // |b| <= H(Du)^q requires 0 <= b_scale <= 1
  Source f;
  double epsilon = 0.1;

  /// Throws NonSmoothNorm or InvalidArgument.
  void validate() const;
};

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 500;
  double damping = 0.7;
  double eps_reg = -1.0;  // negative: 1e-8 times the data scale
};

struct SolveReport {
  std::vector<double> u;  // vertex values, zero on the boundary
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double energy = 0.0;  // int H(Du)^p
  double eps_reg = 0.0;
  std::vector<double> residual_history;
};

/// Damped Picard iteration: coefficients and b_eps frozen at the current
/// iterate, a symmetric linear solve, then u <- (1-w) u + w u_new.
/// Non-convergence returns the best iterate with converged = false.
SolveReport solve_dirichlet(const ProblemSpec& spec, const Mesh& mesh, const SolverConfig& cfg = {},
                            const std::vector<double>* initial = nullptr);

/// Runs the epsilon schedule with warm starts.
std::vector<SolveReport> solve_schedule(ProblemSpec spec, const Mesh& mesh, const std::vector<double>& epsilons,
                                        const SolverConfig& cfg = {});

/// Nodal residual of the discrete weak form, max over interior vertices.
double weak_residual(const ProblemSpec& spec, const Mesh& mesh, const std::vector<double>& u, double eps_reg);

struct EnergyReport {
  double energy_p = 0.0;
  double energy_q = 0.0;
  std::vector<Point> gradients;  // one per triangle
};

EnergyReport energy_and_gradients(const Mesh& mesh, const std::vector<double>& u, const AnisoNorm& norm, double p,
                                  double q);
EnergyReport energy_and_gradients(const SolveReport& report, const ProblemSpec& spec, const Mesh& mesh);

/// Solves sum_T |T| K_T Du . Dphi_i = load_i for interior vertices with zero
/// boundary values; K_T is a symmetric positive definite 2x2 matrix.
std::vector<double> solve_linear_dirichlet(const Mesh& mesh, const std::vector<Eigen::Matrix2d>& coefficients,
                                           const std::vector<double>& load);

/// Lumped vertex masses sum_{T ni i} |T| / 3.
std::vector<double> lumped_mass(const Mesh& mesh);

/// Smallest (a(xi) - a(xi')).(xi - xi') / |xi - xi'|^2 over random pairs.
double flux_monotonicity(const AnisoNorm& norm, double p, double eps_reg, int samples, std::uint64_t seed = 1);

}  // namespace wulff
