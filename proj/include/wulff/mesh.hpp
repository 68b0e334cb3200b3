#pragma once

// Conforming triangulations of rectangles, Wulff discs and masked grids.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "wulff/rearrange.hpp"

namespace wulff {

struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<char> boundary;                 // 1 for Dirichlet vertices
  double h = 0.0;

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t triangle_count() const { return triangles.size(); }
  double triangle_area(std::size_t t) const;
  Point centroid(std::size_t t) const;
  double total_area() const;
  /// Throws DegenerateDomain for empty meshes or non-positive triangle areas.
  void validate() const;
};

struct DomainSpec {
  enum class Kind { Rectangle, WulffDisc, Mask };
  Kind kind = Kind::Rectangle;
  // Rectangle and mask bounding box.
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  // Wulff disc W_R; grading > 1 clusters rings toward the centre.
  std::optional<AnisoNorm> norm;
  double R = 1.0;
  double grading = 1.0;
  // Mask: a grid cell belongs to the domain iff its centre satisfies this.
  std::function<bool(const Point&)> inside;

  static DomainSpec rectangle(double x0, double y0, double x1, double y1);
  static DomainSpec wulff_disc(const AnisoNorm& norm, double R, double grading = 1.0);
  static DomainSpec mask(std::function<bool(const Point&)> inside, double x0, double y0, double x1, double y1);
};

Mesh build_mesh(const DomainSpec& domain, double h);

/// P1 field sampled on k^2 congruent sub-triangles of every triangle; each
/// sub-cell carries the field value at its centroid.
GridFunction to_grid_function(const Mesh& mesh, const std::vector<double>& nodal, int subdivisions = 1);

/// Piecewise-constant field with one cell per triangle.
GridFunction triangle_function(const Mesh& mesh, const std::vector<double>& per_triangle);

/// Longest edge among the triangles incident to the vertex nearest to x.
double local_mesh_size(const Mesh& mesh, const Point& x);

}  // namespace wulff
