#include "wulff/anisotropy.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace wulff {
namespace {

constexpr double kPi = std::numbers::pi;

void require_dim(int dim) {
  if (dim < 2 || dim > 3) {
    throw Error(ErrorCode::UnsupportedDimension, "dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

double unit_ball_volume(int dim) { return dim == 2 ? kPi : 4.0 * kPi / 3.0; }

// (sum |x_i|^r)^(1/r) scaled to avoid overflow.
double lr_norm(const Vec& x, double r) {
  const double m = x.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / m, r);
  return m * std::pow(s, 1.0 / r);
}

Vec lr_grad(const Vec& x, double r) {
  const double n = lr_norm(x, r);
  Vec g = Vec::Zero(x.size());
  if (n == 0.0) return g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    g[i] = std::copysign(std::pow(std::abs(x[i]) / n, r - 1.0), x[i]);
  }
  return g;
}

double conjugate(double r) { return r / (r - 1.0); }

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

}  // namespace

AnisoNorm AnisoNorm::euclidean(int dim) {
  require_dim(dim);
  AnisoNorm n;
  n.family_ = NormFamily::Euclidean;
  n.dim_ = dim;
  n.m_ = Mat::Identity(dim, dim);
  n.m_inv_ = n.m_;
  n.compute_bounds();
  return n;
}

AnisoNorm AnisoNorm::rnorm(double r, int dim) {
  require_dim(dim);
  if (!(r > 1.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, "r-norm exponent must satisfy 1 < r < inf");
  }
  AnisoNorm n;
  n.family_ = NormFamily::RNorm;
  n.dim_ = dim;
  n.r_ = r;
  n.compute_bounds();
  return n;
}

AnisoNorm AnisoNorm::ellipse(std::span<const double> semi_axes) {
  const int dim = static_cast<int>(semi_axes.size());
  require_dim(dim);
  Mat m = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    if (!(semi_axes[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "semi-axes must be positive");
    m(i, i) = semi_axes[i] * semi_axes[i];
  }
  AnisoNorm n = quadratic(m);
  n.family_ = NormFamily::Ellipse;
  return n;
}

AnisoNorm AnisoNorm::ellipse(double a, double b) {
  const double axes[2] = {a, b};
  return ellipse(std::span<const double>(axes, 2));
}

AnisoNorm AnisoNorm::quadratic(const Mat& m) {
  require_dim(static_cast<int>(m.rows()));
  if (m.rows() != m.cols() || !m.isApprox(m.transpose(), 1e-14)) {
    throw Error(ErrorCode::InvalidArgument, "matrix must be square and symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "matrix must be positive definite");
  }
  AnisoNorm n;
  n.family_ = NormFamily::Ellipse;
  n.dim_ = static_cast<int>(m.rows());
  n.m_ = m;
  n.m_inv_ = m.inverse();
  n.compute_bounds();
  return n;
}

AnisoNorm AnisoNorm::sampled_gauge(std::span<const double> angles, std::span<const double> values) {
  if (angles.size() != values.size() || angles.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "gauge table needs matching angle/value arrays of size >= 2");
  }
  struct Node {
    double angle;
    Vec point;
  };
  std::vector<Node> nodes;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    if (!(angles[k] >= 0.0 && angles[k] < kPi) || !(values[k] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "gauge table angles must lie in [0, pi) with positive values");
    }
    const Vec p = vec2(std::cos(angles[k]), std::sin(angles[k])) / values[k];
    nodes.push_back({angles[k], p});
    nodes.push_back({angles[k] + kPi, -p});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.angle < b.angle; });
  const std::size_t count = nodes.size();
  for (std::size_t k = 0; k < count; ++k) {
    const Vec& a = nodes[k].point;
    const Vec& b = nodes[(k + 1) % count].point;
    const Vec& c = nodes[(k + 2) % count].point;
    if (nodes[(k + 1) % count].angle == nodes[k].angle) {
      throw Error(ErrorCode::InvalidArgument, "duplicate gauge direction");
    }
    if (cross2(b - a, c - b) <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "gauge table does not describe a strictly convex polygon");
    }
  }
  AnisoNorm n;
  n.family_ = NormFamily::SampledGauge;
  n.dim_ = 2;
  for (const Node& node : nodes) {
    n.vertices_.push_back(node.point);
    n.vertex_angles_.push_back(node.angle);
  }
  n.compute_bounds();
  return n;
}

void AnisoNorm::compute_bounds() {
  switch (family_) {
    case NormFamily::Euclidean:
      c1_ = c2_ = 1.0;
      break;
    case NormFamily::RNorm: {
      const double f = std::pow(static_cast<double>(dim_), 1.0 / r_ - 0.5);
      c1_ = std::min(1.0, f);
      c2_ = std::max(1.0, f);
      break;
    }
    case NormFamily::Ellipse: {
      Eigen::SelfAdjointEigenSolver<Mat> es(m_);
      c1_ = std::sqrt(es.eigenvalues().minCoeff());
      c2_ = std::sqrt(es.eigenvalues().maxCoeff());
      break;
    }
    case NormFamily::SampledGauge: {
      double r_max = 0.0;
      double d_min = std::numeric_limits<double>::infinity();
      const std::size_t count = vertices_.size();
      for (std::size_t k = 0; k < count; ++k) {
        const Vec& a = vertices_[k];
        const Vec& b = vertices_[(k + 1) % count];
        r_max = std::max(r_max, a.norm());
        d_min = std::min(d_min, std::abs(cross2(a, b)) / (b - a).norm());
      }
      c1_ = 1.0 / r_max;
      c2_ = 1.0 / d_min;
      break;
    }
  }
}

double AnisoNorm::operator()(const Vec& xi) const { return h_eval(*this, xi); }

double h_eval(const AnisoNorm& norm, const Vec& xi) {
  switch (norm.family_) {
    case NormFamily::Euclidean: return xi.norm();
    case NormFamily::RNorm: return lr_norm(xi, norm.r_);
    case NormFamily::Ellipse: return std::sqrt(std::max(0.0, xi.dot(norm.m_ * xi)));
    case NormFamily::SampledGauge: {
      // Gauge of a convex polygon: max over facets of (n.xi)/(n.v).
      double best = 0.0;
      const auto& v = norm.vertices_;
      const std::size_t count = v.size();
      for (std::size_t k = 0; k < count; ++k) {
        const Vec& a = v[k];
        const Vec& b = v[(k + 1) % count];
        const Vec normal = vec2(b[1] - a[1], a[0] - b[0]);
        best = std::max(best, normal.dot(xi) / normal.dot(a));
      }
      return best;
    }
  }
  return 0.0;
}

Vec h_grad(const AnisoNorm& norm, const Vec& xi, double eps_reg) {
  if (!norm.smooth() && eps_reg <= 0.0) {
    throw Error(ErrorCode::NonSmoothNorm, "polygonal gauge has no gradient without regularisation");
  }
  Vec g = Vec::Zero(xi.size());
  const double h = h_eval(norm, xi);
  if (h == 0.0) return g;
  switch (norm.family_) {
    case NormFamily::Euclidean: g = xi / h; break;
    case NormFamily::RNorm: g = lr_grad(xi, norm.r_); break;
    case NormFamily::Ellipse: g = norm.m_ * xi / h; break;
    case NormFamily::SampledGauge: {
      const auto& v = norm.vertices_;
      const std::size_t count = v.size();
      double best = -1.0;
      for (std::size_t k = 0; k < count; ++k) {
        const Vec& a = v[k];
        const Vec& b = v[(k + 1) % count];
        const Vec normal = vec2(b[1] - a[1], a[0] - b[0]);
        const double value = normal.dot(xi) / normal.dot(a);
        if (value > best) {
          best = value;
          g = normal / normal.dot(a);
        }
      }
      break;
    }
  }
  if (eps_reg > 0.0) {
    const double e = eps_reg * norm.c1();
    g *= h / std::sqrt(h * h + e * e);
  }
  return g;
}

double polar_eval(const AnisoNorm& norm, const Vec& x) {
  switch (norm.family_) {
    case NormFamily::Euclidean: return x.norm();
    case NormFamily::RNorm: return lr_norm(x, conjugate(norm.r_));
    case NormFamily::Ellipse: return std::sqrt(std::max(0.0, x.dot(norm.m_inv_ * x)));
    case NormFamily::SampledGauge: return polar_eval_sampled(norm, x);
  }
  return 0.0;
}

Vec polar_grad(const AnisoNorm& norm, const Vec& x) {
  Vec g = Vec::Zero(x.size());
  const double h = polar_eval(norm, x);
  if (h == 0.0) return g;
  switch (norm.family_) {
    case NormFamily::Euclidean: return x / h;
    case NormFamily::RNorm: return lr_grad(x, conjugate(norm.r_));
    case NormFamily::Ellipse: return norm.m_inv_ * x / h;
    case NormFamily::SampledGauge: {
      // Subgradient: the vertex of the unit ball attaining the support value.
      double best = -std::numeric_limits<double>::infinity();
      for (const Vec& v : norm.vertices_) {
        if (v.dot(x) > best) {
          best = v.dot(x);
          g = v;
        }
      }
      return g;
    }
  }
  return g;
}

double polar_eval_sampled(const AnisoNorm& norm, const Vec& x, int table_size) {
  if (norm.dim() != 2) {
    throw Error(ErrorCode::UnsupportedDimension, "sampled polar evaluation is 2-D only");
  }
  if (x.norm() == 0.0) return 0.0;
  auto ratio = [&](double phi) {
    const Vec xi = vec2(std::cos(phi), std::sin(phi));
    return xi.dot(x) / h_eval(norm, xi);
  };
  std::vector<double> table;
  table.reserve(static_cast<std::size_t>(table_size) + norm.vertex_angles_.size());
  for (int k = 0; k < table_size; ++k) table.push_back(2.0 * kPi * k / table_size);
  for (double a : norm.vertex_angles_) table.push_back(a);
  std::sort(table.begin(), table.end());

  std::size_t best_k = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < table.size(); ++k) {
    const double value = ratio(table[k]);
    if (value > best) {
      best = value;
      best_k = k;
    }
  }
  // Golden-section refinement on the bracket around the best table entry.
  const std::size_t n = table.size();
  double lo = best_k == 0 ? table[n - 1] - 2.0 * kPi : table[best_k - 1];
  double hi = best_k + 1 == n ? table[0] + 2.0 * kPi : table[best_k + 1];
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - invphi * (hi - lo);
  double d = lo + invphi * (hi - lo);
  double fc = ratio(c);
  double fd = ratio(d);
  while (hi - lo > 1e-8) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = ratio(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = ratio(d);
    }
  }
  return std::max({best, fc, fd});
}

Mat half_square_hessian(const AnisoNorm& norm, const Vec& xi) {
  const int n = norm.dim();
  switch (norm.family_) {
    case NormFamily::Euclidean: return Mat::Identity(n, n);
    case NormFamily::Ellipse: return norm.m_;
    case NormFamily::RNorm: {
      const double h = lr_norm(xi, norm.r_);
      if (h == 0.0) return Mat::Identity(n, n) * norm.c1() * norm.c1();
      const double r = norm.r_;
      // 0-homogeneous, so evaluate on the unit sphere of H.
      Vec y = xi / h;
      Vec w(n);
      Vec d(n);
      for (int i = 0; i < n; ++i) {
        const double a = std::max(std::abs(y[i]), 1e-12);
        d[i] = (r - 1.0) * std::pow(a, r - 2.0);
        w[i] = std::copysign(std::pow(std::abs(y[i]), r - 1.0), y[i]);
      }
      Mat hess = (2.0 - r) * w * w.transpose();
      hess.diagonal() += d;
      return hess;
    }
    case NormFamily::SampledGauge:
      throw Error(ErrorCode::NonSmoothNorm, "polygonal gauge has no Hessian");
  }
  return Mat::Identity(n, n);
}

Vec model_flux(const AnisoNorm& norm, const Vec& xi, double p, double eps_reg) {
  const double h = h_eval(norm, xi);
  if (h == 0.0) return Vec::Zero(xi.size());
  const Vec g = h_grad(norm, xi, norm.smooth() ? 0.0 : eps_reg);
  const double e = eps_reg * norm.c1();
  const double he = std::sqrt(h * h + e * e);
  return std::pow(he, p - 2.0) * h * g;
}

double IdentityReport::max_violation() const { return std::max({euler, unit_gradient, inversion}); }

IdentityReport check_identities(const AnisoNorm& norm, int sample_count, std::uint64_t seed) {
  if (!norm.smooth()) {
    throw Error(ErrorCode::NonSmoothNorm, "identities require a C^1 gauge");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  IdentityReport report;
  report.samples = sample_count;
  for (int s = 0; s < sample_count; ++s) {
    Vec x(norm.dim());
    for (int i = 0; i < norm.dim(); ++i) x[i] = gauss(rng);
    if (x.norm() < 1e-8) continue;
    const double h = h_eval(norm, x);
    const double ho = polar_eval(norm, x);
    const Vec dh = h_grad(norm, x);
    const Vec dho = polar_grad(norm, x);
    report.euler = std::max({report.euler, std::abs(dh.dot(x) - h) / h, std::abs(dho.dot(x) - ho) / ho});
    report.unit_gradient =
        std::max({report.unit_gradient, std::abs(h_eval(norm, dho) - 1.0), std::abs(polar_eval(norm, dh) - 1.0)});
    const Vec inv1 = ho * h_grad(norm, dho);
    const Vec inv2 = h * polar_grad(norm, dh);
    report.inversion =
        std::max({report.inversion, (inv1 - x).norm() / x.norm(), (inv2 - x).norm() / x.norm()});
  }
  return report;
}

double wulff_kappa(const AnisoNorm& norm) {
  const int n = norm.dim();
  switch (norm.family()) {
    case NormFamily::Euclidean: return unit_ball_volume(n);
    case NormFamily::RNorm: {
      const double rp = conjugate(norm.exponent());
      return std::pow(2.0 * std::tgamma(1.0 + 1.0 / rp), n) / std::tgamma(1.0 + n / rp);
    }
    case NormFamily::Ellipse: return unit_ball_volume(n) * std::sqrt(norm.matrix().determinant());
    case NormFamily::SampledGauge: {
      // kappa = 1/2 int_0^{2pi} H°(w)^-2 dphi, split at the kinks of H°, which
      // sit at the facet normals of the unit ball of H.
      const auto& v = norm.gauge_vertices();
      std::vector<double> cuts;
      for (std::size_t k = 0; k < v.size(); ++k) {
        const Vec& a = v[k];
        const Vec& b = v[(k + 1) % v.size()];
        double phi = std::atan2(a[0] - b[0], b[1] - a[1]);
        if (phi < 0.0) phi += 2.0 * kPi;
        cuts.push_back(phi);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.push_back(cuts.front() + 2.0 * kPi);
      auto integrand = [&](double phi) {
        const double ho = polar_eval(norm, vec2(std::cos(phi), std::sin(phi)));
        return 0.5 / (ho * ho);
      };
      double total = 0.0;
      for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        total += boost::math::quadrature::gauss<double, 20>::integrate(integrand, cuts[k], cuts[k + 1]);
      }
      return total;
    }
  }
  return 0.0;
}

Vec wulff_boundary_point(const AnisoNorm& norm, double theta) {
  if (norm.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "boundary parametrisation is 2-D only");
  const Vec w = vec2(std::cos(theta), std::sin(theta));
  return w / polar_eval(norm, w);
}

WulffGeometry::WulffGeometry(AnisoNorm norm) : norm_(std::move(norm)), kappa_(wulff_kappa(norm_)) {}

double WulffGeometry::measure(double r) const { return kappa_ * std::pow(r, norm_.dim()); }

double WulffGeometry::radius_for_measure(double m) const { return std::pow(m / kappa_, 1.0 / norm_.dim()); }

}  // namespace wulff
