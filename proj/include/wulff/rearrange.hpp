#pragma once

// Distribution functions, decreasing rearrangements, convex symmetrization,
// Marcinkiewicz norms and anisotropic perimeters of discrete fields.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "wulff/anisotropy.hpp"

namespace wulff {

using Point = Eigen::Vector2d;

/// Piecewise-constant field: one value per cell, with the cell measure and a
/// representative point used for pointwise evaluation.
struct GridFunction {
  std::vector<Point> centers;
  std::vector<double> measures;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double total_measure() const;
  /// Throws InvalidArgument on size mismatch or a non-positive measure.
  void validate() const;
};

/// Decreasing rearrangement u* as a function of the measure variable s.
///
/// Step profiles hold values t_1 > t_2 > ... on [s_{i-1}, s_i) with s_0 = 0.
/// Tabulated profiles interpolate linearly in log s between nodes and use an
/// explicit tail model a s^(-m) + b (m > 0) or b - a log s (m = 0) below the
/// first node. Both evaluate to 0 for s >= |Omega|.
class RearrangementProfile {
 public:
  enum class Kind { Step, Tabulated };
  struct Tail {
    double a = 0.0;
    double m = 0.0;
    double b = 0.0;
    double operator()(double s) const;
  };

  static RearrangementProfile step(std::vector<double> breakpoints, std::vector<double> values, double total);
  static RearrangementProfile tabulated(std::vector<double> s, std::vector<double> values, double total,
                                        std::optional<Tail> tail = std::nullopt);

  Kind kind() const { return kind_; }
  double total_measure() const { return total_; }
  const std::vector<double>& breakpoints() const { return s_; }
  const std::vector<double>& values() const { return t_; }
  const std::optional<Tail>& tail() const { return tail_; }

  double operator()(double s) const;
  /// u*(0+).
  double sup() const;
  /// (int_0^|Omega| u*(s)^r ds)^(1/r), r > 0.
  double lp_norm(double r) const;
  /// Profile values on the given s points.
  std::vector<double> sample(const std::vector<double>& s) const;

 private:
  Kind kind_ = Kind::Step;
  double total_ = 0.0;
  std::vector<double> s_;
  std::vector<double> t_;
  std::optional<Tail> tail_;
};

/// mu_u(t) = |{|u| > t}|.
double distribution_function(const GridFunction& u, double t);

/// Stable sort by descending |value|; equal values merge into one step.
RearrangementProfile decreasing_rearrangement(const GridFunction& u);

/// u*(kappa_N H°(x)^N) evaluated at the given points.
std::vector<double> symmetrize_at(const RearrangementProfile& profile, const AnisoNorm& norm,
                                  const std::vector<Point>& points);

/// Convex symmetrization of u sampled at the cell centres of `target`, which
/// must discretise W_R with |W_R| = |Omega|. Throws MeasureMismatch if the
/// target measure differs from |Omega| by more than 1%.
GridFunction convex_symmetrization(const GridFunction& u, const AnisoNorm& norm, const GridFunction& target);

/// sup_s u*(s) s^(1/r), evaluated at the left limits of the step profile.
double marcinkiewicz_norm(const GridFunction& u, double r);
double marcinkiewicz_norm(const RearrangementProfile& profile, double r);

/// Log-spaced grid of `count` points on [total * lo_fraction, total].
std::vector<double> log_grid(double total, int count, double lo_fraction = 1e-8);

using Polygon = std::vector<Point>;

double polygon_area(const Polygon& poly);
bool is_simple(const Polygon& poly);
/// sum over edges of H(nu_e) |e|. Throws SelfIntersecting for non-simple input.
double anisotropic_perimeter(const Polygon& poly, const AnisoNorm& norm);
double euclidean_perimeter(const Polygon& poly);

/// Polygon with `k` vertices inscribed in the Wulff shape W_r.
Polygon wulff_polygon(const AnisoNorm& norm, double r, int k);

/// Nodal field on a uniform Cartesian grid, node (i, j) at (x0 + i h, y0 + j h).
struct CartesianField {
  double x0 = 0.0;
  double y0 = 0.0;
  double h = 1.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, index j * nx + i

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * nx + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * nx + i]; }
  Point node(int i, int j) const { return {x0 + i * h, y0 + j * h}; }
};

/// Closed polylines of {u = t} by marching squares; segments that leave the
/// grid are closed along the grid boundary so each polygon bounds part of {u > t}.
std::vector<Polygon> level_set_polygons(const CartesianField& field, double t);

/// Cells of the field (two P1 triangles per square) as a GridFunction of
/// triangle-average values.
GridFunction cell_function(const CartesianField& field);

/// int_{u > t} H(Du)^power over the P1 triangulation of the field.
double gradient_integral(const CartesianField& field, const AnisoNorm& norm, double power, double t = -1e300);

}  // namespace wulff
