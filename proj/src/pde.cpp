#include "wulff/pde.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wulff/parallel.hpp"

namespace wulff {

double truncate(double s, double t) { return std::max(-t, std::min(t, s)); }

Source Source::constant(double c) {
  Source s;
  s.kind = Kind::Constant;
  s.value = c;
  return s;
}

Source Source::singular(double lambda, double gamma) {
  Source s;
  s.kind = Kind::Singular;
  s.value = lambda;
  s.gamma = gamma;
  return s;
}

Source Source::function(std::function<double(const Point&)> fn) {
  Source s;
  s.kind = Kind::Function;
  s.fn = std::move(fn);
  return s;
}

Source Source::from_nodal(std::vector<double> values) {
  Source s;
  s.kind = Kind::Nodal;
  s.nodal = std::move(values);
  return s;
}

std::vector<double> source_at_vertices(const Source& f, const AnisoNorm& norm, const Mesh& mesh) {
  const std::size_t n = mesh.vertex_count();
  std::vector<double> out(n, 0.0);
  switch (f.kind) {
    case Source::Kind::Zero: break;
    case Source::Kind::Constant: std::fill(out.begin(), out.end(), f.value); break;
    case Source::Kind::Singular:
      for (std::size_t i = 0; i < n; ++i) {
        const double ho = polar_eval(norm, vec2(mesh.vertices[i].x(), mesh.vertices[i].y()));
        out[i] = ho == 0.0 ? std::numeric_limits<double>::infinity() : f.value / std::pow(ho, f.gamma);
      }
      break;
    case Source::Kind::Function:
      for (std::size_t i = 0; i < n; ++i) out[i] = f.fn(mesh.vertices[i]);
      break;
    case Source::Kind::Nodal:
      if (f.nodal.size() != n) throw Error(ErrorCode::InvalidArgument, "nodal source size mismatch");
      out = f.nodal;
      break;
  }
  return out;
}

std::vector<double> truncate_source(const std::vector<double>& f, double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = truncate(f[i], 1.0 / epsilon);
  return out;
}

GridFunction truncate_source(const GridFunction& f, double epsilon) {
  GridFunction out = f;
  out.values = truncate_source(f.values, epsilon);
  return out;
}

void ProblemSpec::validate() const {
  if (!norm.smooth()) throw Error(ErrorCode::NonSmoothNorm, "the PDE flux needs a C^1 strictly convex gauge");
  if (norm.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "the solver is 2-D");
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  if (!(q > 0.0)) throw Error(ErrorCode::InvalidArgument, "q must be positive");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (!(b_scale >= 0.0 && b_scale <= 1.0)) throw Error(ErrorCode::InvalidArgument, "b_scale must lie in [0, 1]");
  if (b_sign != 1.0 && b_sign != -1.0) throw Error(ErrorCode::InvalidArgument, "b_sign must be +1 or -1");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Static data of a P1 discretisation with homogeneous Dirichlet conditions.
class Assembler {
 public:
  explicit Assembler(const Mesh& mesh) : mesh_(mesh) {
    mesh.validate();
    dof_.assign(mesh.vertex_count(), -1);
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
      if (!mesh.boundary[i]) dof_[i] = ndof_++;
    }
    const std::size_t nt = mesh.triangle_count();
    area_.resize(nt);
    grads_.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) {
      const auto& tri = mesh.triangles[t];
      const Point p0 = mesh.vertices[tri[0]];
      Eigen::Matrix2d B;
      B.col(0) = mesh.vertices[tri[1]] - p0;
      B.col(1) = mesh.vertices[tri[2]] - p0;
      const Eigen::Matrix2d BinvT = B.inverse().transpose();
      grads_[t][1] = BinvT.col(0);
      grads_[t][2] = BinvT.col(1);
      grads_[t][0] = -grads_[t][1] - grads_[t][2];
      area_[t] = mesh.triangle_area(t);
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nt * 9);
    for (std::size_t t = 0; t < nt; ++t) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const int ia = dof_[mesh.triangles[t][a]];
          const int ib = dof_[mesh.triangles[t][b]];
          if (ia >= 0 && ib >= 0) trip.emplace_back(ia, ib, 1.0);
        }
      }
    }
    matrix_.resize(ndof_, ndof_);
    matrix_.setFromTriplets(trip.begin(), trip.end());
    matrix_.makeCompressed();
    slot_.assign(nt * 9, -1);
    for (std::size_t t = 0; t < nt; ++t) {
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          const int ia = dof_[mesh.triangles[t][a]];
          const int ib = dof_[mesh.triangles[t][b]];
          if (ia < 0 || ib < 0) continue;
          const int* begin = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[ib];
          const int* end = matrix_.innerIndexPtr() + matrix_.outerIndexPtr()[ib + 1];
          const int* it = std::lower_bound(begin, end, ia);
          slot_[t * 9 + a * 3 + b] = static_cast<int>(it - matrix_.innerIndexPtr());
        }
      }
    }
  }

  int ndof() const { return ndof_; }
  int dof(std::size_t vertex) const { return dof_[vertex]; }
  double area(std::size_t t) const { return area_[t]; }
  const Point& grad(std::size_t t, int a) const { return grads_[t][a]; }

  Point gradient(std::size_t t, const std::vector<double>& u) const {
    const auto& tri = mesh_.triangles[t];
    return u[tri[0]] * grads_[t][0] + u[tri[1]] * grads_[t][1] + u[tri[2]] * grads_[t][2];
  }

  std::vector<Point> gradients(const std::vector<double>& u) const {
    std::vector<Point> g(mesh_.triangle_count());
    parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t t = b; t < e; ++t) g[t] = gradient(t, u);
    });
    return g;
  }

  const SpMat& assemble(const std::vector<Eigen::Matrix2d>& coef) {
    const std::size_t nt = mesh_.triangle_count();
    std::vector<double> local(nt * 9);
    parallel_for(nt, [&](std::size_t b, std::size_t e) {
      for (std::size_t t = b; t < e; ++t) {
        for (int i = 0; i < 3; ++i) {
          const Point kg = coef[t] * grads_[t][i];
          for (int j = 0; j < 3; ++j) local[t * 9 + i * 3 + j] = area_[t] * kg.dot(grads_[t][j]);
        }
      }
    });
    double* values = matrix_.valuePtr();
    std::fill(values, values + matrix_.nonZeros(), 0.0);
    for (std::size_t k = 0; k < local.size(); ++k) {
      if (slot_[k] >= 0) values[slot_[k]] += local[k];
    }
    return matrix_;
  }

  const SpMat& matrix() const { return matrix_; }

  Eigen::VectorXd restrict(const std::vector<double>& nodal) const {
    Eigen::VectorXd r(ndof_);
    for (std::size_t i = 0; i < dof_.size(); ++i) {
      if (dof_[i] >= 0) r[dof_[i]] = nodal[i];
    }
    return r;
  }

  std::vector<double> extend(const Eigen::VectorXd& x) const {
    std::vector<double> u(dof_.size(), 0.0);
    for (std::size_t i = 0; i < dof_.size(); ++i) {
      if (dof_[i] >= 0) u[i] = x[dof_[i]];
    }
    return u;
  }

 private:
  const Mesh& mesh_;
  std::vector<int> dof_;
  int ndof_ = 0;
  std::vector<double> area_;
  std::vector<std::array<Point, 3>> grads_;
  SpMat matrix_;
  std::vector<int> slot_;
};

class LinearSolver {
 public:
  explicit LinearSolver(const SpMat& pattern) { ldlt_.analyzePattern(pattern); }
  Eigen::VectorXd solve(const SpMat& a, const Eigen::VectorXd& rhs) {
    ldlt_.factorize(a);
    if (ldlt_.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "linear factorisation failed");
    return ldlt_.solve(rhs);
  }

 private:
  Eigen::SimplicialLDLT<SpMat> ldlt_;
};

struct Discrete {
  const ProblemSpec& spec;
  const Mesh& mesh;
  Assembler& asm_;
  std::vector<double> source_load;  // lumped T_{1/eps} f
  double eps_reg;

  double b_eps(const Point& xi) const {
    if (spec.b_scale == 0.0) return 0.0;
    const double b = spec.b_sign * spec.b_scale * std::pow(h_eval(spec.norm, vec2(xi.x(), xi.y())), spec.q);
    return b / (1.0 + spec.epsilon * std::abs(b));
  }

  std::vector<double> load(const std::vector<Point>& grads) const {
    std::vector<double> out = source_load;
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
      const double contrib = asm_.area(t) / 3.0 * b_eps(grads[t]);
      if (contrib == 0.0) continue;
      for (int k : mesh.triangles[t]) out[k] += contrib;
    }
    return out;
  }

  double residual(const std::vector<double>& u) const {
    const auto grads = asm_.gradients(u);
    std::vector<double> r = load(grads);
    for (double& x : r) x = -x;
    std::vector<Point> flux(mesh.triangle_count());
    parallel_for(flux.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t t = b; t < e; ++t) {
        const Vec a = model_flux(spec.norm, vec2(grads[t].x(), grads[t].y()), spec.p, eps_reg);
        flux[t] = Point(a[0], a[1]);
      }
    });
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
      for (int k = 0; k < 3; ++k) r[mesh.triangles[t][k]] += asm_.area(t) * flux[t].dot(asm_.grad(t, k));
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (asm_.dof(i) >= 0) worst = std::max(worst, std::abs(r[i]));
    }
    return worst;
  }
};

std::vector<double> make_source_load(const ProblemSpec& spec, const Mesh& mesh) {
  const std::vector<double> f = truncate_source(source_at_vertices(spec.f, spec.norm, mesh), spec.epsilon);
  const std::vector<double> m = lumped_mass(mesh);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = m[i] * f[i];
  return out;
}

Eigen::Matrix2d to2(const Mat& m) {
  Eigen::Matrix2d r;
  r << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
  return r;
}

}  // namespace

std::vector<double> lumped_mass(const Mesh& mesh) {
  std::vector<double> m(mesh.vertex_count(), 0.0);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const double a = mesh.triangle_area(t) / 3.0;
    for (int k : mesh.triangles[t]) m[k] += a;
  }
  return m;
}

double weak_residual(const ProblemSpec& spec, const Mesh& mesh, const std::vector<double>& u, double eps_reg) {
  spec.validate();
  Assembler as(mesh);
  Discrete d{spec, mesh, as, make_source_load(spec, mesh), eps_reg};
  return d.residual(u);
}

SolveReport solve_dirichlet(const ProblemSpec& spec, const Mesh& mesh, const SolverConfig& cfg,
                            const std::vector<double>* initial) {
  spec.validate();
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw Error(ErrorCode::InvalidArgument, "damping must lie in (0, 1]");
  if (cfg.max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be positive");
  Assembler as(mesh);
  SolveReport rep;
  rep.eps_reg = cfg.eps_reg < 0.0 ? 1e-8 : cfg.eps_reg;
  Discrete d{spec, mesh, as, make_source_load(spec, mesh), rep.eps_reg};

  std::vector<double> u(mesh.vertex_count(), 0.0);
  if (initial) {
    if (initial->size() != u.size()) throw Error(ErrorCode::InvalidArgument, "initial guess size mismatch");
    u = *initial;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (mesh.boundary[i]) u[i] = 0.0;
    }
  }
  LinearSolver solver(as.matrix());
  const double c1 = spec.norm.c1();
  const double e2 = rep.eps_reg * c1 * rep.eps_reg * c1;
  const bool pseudo = spec.norm.family() == NormFamily::RNorm;
  std::vector<double> best = u;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Matrix2d> coef(mesh.triangle_count());

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const auto grads = as.gradients(u);
    const bool zero = std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; });
    parallel_for(coef.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t t = b; t < e; ++t) {
        const Vec xi = vec2(grads[t].x(), grads[t].y());
        const Eigen::Matrix2d hess = to2(half_square_hessian(spec.norm, xi));
        if (zero) {
          coef[t] = hess;
          continue;
        }
        const double h = h_eval(spec.norm, xi);
        const double scale = std::pow(h * h + e2, 0.5 * (spec.p - 2.0));
        coef[t] = scale * hess;
        if (pseudo) coef[t] += 1e-9 * scale * Eigen::Matrix2d::Identity();
      }
    });
    const std::vector<double> load = d.load(grads);
    const Eigen::VectorXd x = solver.solve(as.assemble(coef), as.restrict(load));
    const std::vector<double> next = as.extend(x);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = (1.0 - cfg.damping) * u[i] + cfg.damping * next[i];

    const double res = d.residual(u);
    rep.residual_history.push_back(res);
    rep.iterations = it;
    if (res < best_res) {
      best_res = res;
      best = u;
    }
    if (!std::isfinite(res)) break;
    if (res <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }
  rep.u = rep.converged ? u : best;
  rep.residual = rep.converged ? rep.residual_history.back() : best_res;
  rep.energy = energy_and_gradients(mesh, rep.u, spec.norm, spec.p, spec.q).energy_p;
  return rep;
}

std::vector<SolveReport> solve_schedule(ProblemSpec spec, const Mesh& mesh, const std::vector<double>& epsilons,
                                        const SolverConfig& cfg) {
  std::vector<SolveReport> out;
  for (double eps : epsilons) {
    spec.epsilon = eps;
    out.push_back(solve_dirichlet(spec, mesh, cfg, out.empty() ? nullptr : &out.back().u));
  }
  return out;
}

EnergyReport energy_and_gradients(const Mesh& mesh, const std::vector<double>& u, const AnisoNorm& norm, double p,
                                  double q) {
  if (u.size() != mesh.vertex_count()) throw Error(ErrorCode::InvalidArgument, "nodal field size mismatch");
  EnergyReport rep;
  rep.gradients.resize(mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point p0 = mesh.vertices[tri[0]];
    Eigen::Matrix2d B;
    B.col(0) = mesh.vertices[tri[1]] - p0;
    B.col(1) = mesh.vertices[tri[2]] - p0;
    const Eigen::Vector2d du(u[tri[1]] - u[tri[0]], u[tri[2]] - u[tri[0]]);
    const Point g = B.transpose().inverse() * du;
    rep.gradients[t] = g;
    const double h = h_eval(norm, vec2(g.x(), g.y()));
    const double a = mesh.triangle_area(t);
    rep.energy_p += a * std::pow(h, p);
    rep.energy_q += a * std::pow(h, q);
  }
  return rep;
}

EnergyReport energy_and_gradients(const SolveReport& report, const ProblemSpec& spec, const Mesh& mesh) {
  return energy_and_gradients(mesh, report.u, spec.norm, spec.p, spec.q);
}

std::vector<double> solve_linear_dirichlet(const Mesh& mesh, const std::vector<Eigen::Matrix2d>& coefficients,
                                           const std::vector<double>& load) {
  if (coefficients.size() != mesh.triangle_count() || load.size() != mesh.vertex_count()) {
    throw Error(ErrorCode::InvalidArgument, "coefficient or load size mismatch");
  }
  Assembler as(mesh);
  LinearSolver solver(as.matrix());
  return as.extend(solver.solve(as.assemble(coefficients), as.restrict(load)));
}

double flux_monotonicity(const AnisoNorm& norm, double p, double eps_reg, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Vec a(norm.dim());
    Vec b(norm.dim());
    for (int i = 0; i < norm.dim(); ++i) {
      a[i] = gauss(rng);
      b[i] = gauss(rng);
    }
    const double d2 = (a - b).squaredNorm();
    if (d2 == 0.0) continue;
    const double m = (model_flux(norm, a, p, eps_reg) - model_flux(norm, b, p, eps_reg)).dot(a - b) / d2;
    worst = std::min(worst, m);
  }
  return worst;
}

}  // namespace wulff
