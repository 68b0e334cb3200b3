#include "wulff/mesh.hpp"

#include <cmath>
#include <numbers>

namespace wulff {

double Mesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Point a = vertices[tri[0]];
  const Point b = vertices[tri[1]];
  const Point c = vertices[tri[2]];
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

Point Mesh::centroid(std::size_t t) const {
  const auto& tri = triangles[t];
  return (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
}

double Mesh::total_area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle_area(t);
  return a;
}

void Mesh::validate() const {
  if (triangles.empty()) throw Error(ErrorCode::DegenerateDomain, "mesh has no triangles");
  if (boundary.size() != vertices.size()) throw Error(ErrorCode::DegenerateDomain, "boundary flags do not match vertices");
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int k : triangles[t]) {
      if (k < 0 || static_cast<std::size_t>(k) >= vertices.size()) {
        throw Error(ErrorCode::DegenerateDomain, "triangle references a missing vertex");
      }
    }
    if (!(triangle_area(t) > 0.0)) throw Error(ErrorCode::DegenerateDomain, "non-positive triangle area");
  }
}

DomainSpec DomainSpec::rectangle(double x0, double y0, double x1, double y1) {
  DomainSpec d;
  d.kind = Kind::Rectangle;
  d.x0 = x0;
  d.y0 = y0;
  d.x1 = x1;
  d.y1 = y1;
  return d;
}

DomainSpec DomainSpec::wulff_disc(const AnisoNorm& norm, double R, double grading) {
  DomainSpec d;
  d.kind = Kind::WulffDisc;
  d.norm = norm;
  d.R = R;
  d.grading = grading;
  return d;
}

DomainSpec DomainSpec::mask(std::function<bool(const Point&)> inside, double x0, double y0, double x1, double y1) {
  DomainSpec d = rectangle(x0, y0, x1, y1);
  d.kind = Kind::Mask;
  d.inside = std::move(inside);
  return d;
}

namespace {

Mesh grid_mesh(const DomainSpec& d, double h, const std::function<bool(const Point&)>& inside) {
  const int nx = static_cast<int>(std::lround((d.x1 - d.x0) / h));
  const int ny = static_cast<int>(std::lround((d.y1 - d.y0) / h));
  if (nx < 1 || ny < 1) throw Error(ErrorCode::DegenerateDomain, "domain smaller than one cell");
  const double hx = (d.x1 - d.x0) / nx;
  const double hy = (d.y1 - d.y0) / ny;
  auto cell_in = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return false;
    return !inside || inside(Point(d.x0 + (i + 0.5) * hx, d.y0 + (j + 0.5) * hy));
  };
  std::vector<int> index(static_cast<std::size_t>((nx + 1) * (ny + 1)), -1);
  Mesh mesh;
  mesh.h = std::max(hx, hy);
  auto vertex = [&](int i, int j) {
    int& id = index[static_cast<std::size_t>(j * (nx + 1) + i)];
    if (id < 0) {
      id = static_cast<int>(mesh.vertices.size());
      mesh.vertices.emplace_back(d.x0 + i * hx, d.y0 + j * hy);
      // A node is on the boundary unless all four surrounding cells are inside.
      const bool interior = cell_in(i - 1, j - 1) && cell_in(i, j - 1) && cell_in(i - 1, j) && cell_in(i, j);
      mesh.boundary.push_back(interior ? 0 : 1);
    }
    return id;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!cell_in(i, j)) continue;
      const int a = vertex(i, j), b = vertex(i + 1, j), c = vertex(i + 1, j + 1), e = vertex(i, j + 1);
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, e});
    }
  }
  mesh.validate();
  return mesh;
}

Mesh disc_mesh(const AnisoNorm& norm, double R, double h, double grading) {
  if (norm.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "meshes are 2-D");
  if (!(R > 0.0) || !(grading >= 1.0)) throw Error(ErrorCode::DegenerateDomain, "need R > 0 and grading >= 1");
  const int rings = std::max(2, static_cast<int>(std::ceil(grading * norm.c2() * R / h)));
  Mesh mesh;
  mesh.h = h;
  mesh.vertices.emplace_back(0.0, 0.0);
  mesh.boundary.push_back(0);
  std::vector<int> first(static_cast<std::size_t>(rings) + 1, 0);
  std::vector<int> count(static_cast<std::size_t>(rings) + 1, 1);
  for (int j = 1; j <= rings; ++j) {
    const double rho = R * std::pow(static_cast<double>(j) / rings, grading);
    const int n = 6 * j;
    first[j] = static_cast<int>(mesh.vertices.size());
    count[j] = n;
    for (int k = 0; k < n; ++k) {
      const Vec w = wulff_boundary_point(norm, 2.0 * std::numbers::pi * k / n);
      mesh.vertices.emplace_back(rho * w[0], rho * w[1]);
      mesh.boundary.push_back(j == rings ? 1 : 0);
    }
  }
  auto add = [&](int a, int b, int c) {
    const Point& pa = mesh.vertices[a];
    const Point& pb = mesh.vertices[b];
    const Point& pc = mesh.vertices[c];
    const double orient = (pb.x() - pa.x()) * (pc.y() - pa.y()) - (pb.y() - pa.y()) * (pc.x() - pa.x());
    if (orient > 0.0) {
      mesh.triangles.push_back({a, b, c});
    } else {
      mesh.triangles.push_back({a, c, b});
    }
  };
  for (int k = 0; k < count[1]; ++k) add(0, first[1] + k, first[1] + (k + 1) % count[1]);
  for (int j = 2; j <= rings; ++j) {
    const long ni = count[j - 1];
    const long no = count[j];
    long a = 0;
    long b = 0;
    // Merge the two rings by angular position k/n.
    while (a < ni || b < no) {
      const int ia = first[j - 1] + static_cast<int>(a % ni);
      const int ib = first[j] + static_cast<int>(b % no);
      const bool step_inner = b == no || (a < ni && (a + 1) * no < (b + 1) * ni);
      if (step_inner) {
        add(ia, ib, first[j - 1] + static_cast<int>((a + 1) % ni));
        ++a;
      } else {
        add(ia, ib, first[j] + static_cast<int>((b + 1) % no));
        ++b;
      }
    }
  }
  mesh.validate();
  return mesh;
}

}  // namespace

Mesh build_mesh(const DomainSpec& domain, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::DegenerateDomain, "mesh size must be positive");
  switch (domain.kind) {
    case DomainSpec::Kind::Rectangle:
      if (!(domain.x1 > domain.x0 && domain.y1 > domain.y0)) throw Error(ErrorCode::DegenerateDomain, "empty rectangle");
      return grid_mesh(domain, h, nullptr);
    case DomainSpec::Kind::Mask:
      if (!domain.inside) throw Error(ErrorCode::DegenerateDomain, "mask predicate missing");
      return grid_mesh(domain, h, domain.inside);
    case DomainSpec::Kind::WulffDisc:
      if (!domain.norm) throw Error(ErrorCode::DegenerateDomain, "Wulff disc needs a norm");
      return disc_mesh(*domain.norm, domain.R, h, domain.grading);
  }
  throw Error(ErrorCode::DegenerateDomain, "unknown domain kind");
}

GridFunction to_grid_function(const Mesh& mesh, const std::vector<double>& nodal, int subdivisions) {
  if (nodal.size() != mesh.vertex_count()) throw Error(ErrorCode::InvalidArgument, "nodal field size mismatch");
  const int k = std::max(1, subdivisions);
  GridFunction g;
  const std::size_t per = static_cast<std::size_t>(k) * k;
  g.centers.reserve(mesh.triangle_count() * per);
  g.measures.reserve(mesh.triangle_count() * per);
  g.values.reserve(mesh.triangle_count() * per);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point p0 = mesh.vertices[tri[0]], p1 = mesh.vertices[tri[1]], p2 = mesh.vertices[tri[2]];
    const double u0 = nodal[tri[0]], u1 = nodal[tri[1]], u2 = nodal[tri[2]];
    const double area = mesh.triangle_area(t) / static_cast<double>(per);
    // Sub-triangle centroids in barycentric coordinates (l1, l2) scaled by 3k.
    auto emit = [&](double l1, double l2) {
      const double b1 = l1 / (3.0 * k), b2 = l2 / (3.0 * k), b0 = 1.0 - b1 - b2;
      g.centers.push_back(b0 * p0 + b1 * p1 + b2 * p2);
      g.measures.push_back(area);
      g.values.push_back(b0 * u0 + b1 * u1 + b2 * u2);
    };
    for (int i = 0; i < k; ++i) {
      for (int j = 0; i + j < k; ++j) {
        emit(3.0 * i + 1.0, 3.0 * j + 1.0);
        if (i + j + 1 < k) emit(3.0 * i + 2.0, 3.0 * j + 2.0);
      }
    }
  }
  return g;
}

GridFunction triangle_function(const Mesh& mesh, const std::vector<double>& per_triangle) {
  if (per_triangle.size() != mesh.triangle_count()) throw Error(ErrorCode::InvalidArgument, "per-triangle size mismatch");
  GridFunction g;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    g.centers.push_back(mesh.centroid(t));
    g.measures.push_back(mesh.triangle_area(t));
    g.values.push_back(per_triangle[t]);
  }
  return g;
}

double local_mesh_size(const Mesh& mesh, const Point& x) {
  if (mesh.vertex_count() == 0) throw Error(ErrorCode::InvalidArgument, "empty mesh");
  int nearest = 0;
  for (int i = 1; i < static_cast<int>(mesh.vertex_count()); ++i) {
    if ((mesh.vertices[i] - x).squaredNorm() < (mesh.vertices[nearest] - x).squaredNorm()) nearest = i;
  }
  double size = 0.0;
  for (const auto& tri : mesh.triangles) {
    if (tri[0] != nearest && tri[1] != nearest && tri[2] != nearest) continue;
    for (int a = 0; a < 3; ++a) {
      size = std::max(size, (mesh.vertices[tri[a]] - mesh.vertices[tri[(a + 1) % 3]]).norm());
    }
  }
  return size;
}

}  // namespace wulff
