#pragma once

// Anisotropic gauges H, their polars H°, and the Wulff geometry they induce.
//
// A norm value is immutable after construction. Every family stores the
// sandwich constants c1 |x| <= H(x) <= c2 |x| computed exactly at build time.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "wulff/error.hpp"

namespace wulff {

/// Small vectors (dimension 2 or 3) without heap allocation.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

inline Vec vec2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

enum class NormFamily { Euclidean, RNorm, Ellipse, SampledGauge };

class AnisoNorm {
 public:
  static AnisoNorm euclidean(int dim = 2);
  /// H(x) = (sum |x_i|^r)^(1/r), 1 < r < inf.
  static AnisoNorm rnorm(double r, int dim = 2);
  /// Wulff shape {H° < 1} is the ellipse/ellipsoid with the given semi-axes,
  /// i.e. H(x) = sqrt(sum a_i^2 x_i^2).
  static AnisoNorm ellipse(std::span<const double> semi_axes);
  static AnisoNorm ellipse(double a, double b);
  /// H(x) = sqrt(x^T M x) for a symmetric positive definite M.
  static AnisoNorm quadratic(const Mat& m);
  /// Polygonal gauge in 2-D. `angles` lie in [0, pi) and `values` are H at the
  /// unit direction of each angle; the table is mirrored through the origin.
  /// The unit ball is the convex hull of the resulting points.
  static AnisoNorm sampled_gauge(std::span<const double> angles, std::span<const double> values);

  NormFamily family() const { return family_; }
  int dim() const { return dim_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  bool smooth() const { return family_ != NormFamily::SampledGauge; }
  double exponent() const { return r_; }
  const Mat& matrix() const { return m_; }
  /// Vertices of the unit ball {H <= 1} (SampledGauge only), counter-clockwise.
  const std::vector<Vec>& gauge_vertices() const { return vertices_; }

  double operator()(const Vec& xi) const;

 private:
  AnisoNorm() = default;
  void compute_bounds();

  NormFamily family_ = NormFamily::Euclidean;
  int dim_ = 2;
  double r_ = 2.0;
  double c1_ = 1.0;
  double c2_ = 1.0;
  Mat m_;
  Mat m_inv_;
  std::vector<Vec> vertices_;
  std::vector<double> vertex_angles_;

  friend double h_eval(const AnisoNorm&, const Vec&);
  friend Vec h_grad(const AnisoNorm&, const Vec&, double);
  friend double polar_eval(const AnisoNorm&, const Vec&);
  friend Vec polar_grad(const AnisoNorm&, const Vec&);
  friend Mat half_square_hessian(const AnisoNorm&, const Vec&);
  friend double polar_eval_sampled(const AnisoNorm&, const Vec&, int);
};

double h_eval(const AnisoNorm& norm, const Vec& xi);

/// Gradient H_xi. With eps_reg > 0 the regularised gauge
/// H_e = sqrt(H^2 + eps^2 c1^2) is differentiated instead, which is defined at 0
/// and for non-smooth gauges. Throws NonSmoothNorm for a polygonal gauge with
/// eps_reg == 0.
Vec h_grad(const AnisoNorm& norm, const Vec& xi, double eps_reg = 0.0);

double polar_eval(const AnisoNorm& norm, const Vec& x);
Vec polar_grad(const AnisoNorm& norm, const Vec& x);

/// H° by maximising xi.x / H(xi) over a direction table refined with
/// golden-section search. 2-D only; used for polygonal gauges and as a
/// cross-check of the closed forms.
double polar_eval_sampled(const AnisoNorm& norm, const Vec& x, int table_size = 720);

/// Hessian of H^2/2. It maps xi to H(xi) H_xi(xi), so the model flux
/// H^(p-1) H_xi equals H^(p-2) times this matrix applied to xi.
Mat half_square_hessian(const AnisoNorm& norm, const Vec& xi);

/// Regularised model flux H_e^(p-2) H H_xi with H_e = sqrt(H^2 + eps^2 c1^2).
Vec model_flux(const AnisoNorm& norm, const Vec& xi, double p, double eps_reg);

struct IdentityReport {
  int samples = 0;
  double euler = 0.0;          // |H_xi(x).x - H(x)| / H(x), same for H°
  double unit_gradient = 0.0;  // |H(D H°(x)) - 1|, |H°(D H(x)) - 1|
  double inversion = 0.0;      // |H°(x) DH(DH°(x)) - x| / |x| and the dual form
  double max_violation() const;
};

/// Samples random directions and reports the largest violation of the
/// duality identities between H and H°.
IdentityReport check_identities(const AnisoNorm& norm, int sample_count, std::uint64_t seed = 1);

/// Lebesgue measure of the Wulff shape {H° < 1}.
double wulff_kappa(const AnisoNorm& norm);

/// Point of the boundary of {H° < 1} in the direction of angle theta (2-D).
Vec wulff_boundary_point(const AnisoNorm& norm, double theta);

/// Wulff shapes W_r = r W for a fixed norm.
class WulffGeometry {
 public:
  explicit WulffGeometry(AnisoNorm norm);

  const AnisoNorm& norm() const { return norm_; }
  double kappa() const { return kappa_; }
  int dim() const { return norm_.dim(); }
  /// |W_r| = kappa r^N.
  double measure(double r) const;
  /// Radius R with |W_R| = m.
  double radius_for_measure(double m) const;
  bool contains(const Vec& x, double r) const { return polar_eval(norm_, x) < r; }

 private:
  AnisoNorm norm_;
  double kappa_;
};

}  // namespace wulff
