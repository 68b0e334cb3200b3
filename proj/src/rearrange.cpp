#include "wulff/rearrange.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace wulff {

double GridFunction::total_measure() const {
  return std::accumulate(measures.begin(), measures.end(), 0.0);
}

void GridFunction::validate() const {
  if (measures.size() != values.size() || (!centers.empty() && centers.size() != values.size())) {
    throw Error(ErrorCode::InvalidArgument, "grid function arrays differ in length");
  }
  for (double m : measures) {
    if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell measures must be positive");
  }
}

double RearrangementProfile::Tail::operator()(double s) const {
  return m > 0.0 ? a * std::pow(s, -m) + b : b - a * std::log(s);
}

RearrangementProfile RearrangementProfile::step(std::vector<double> breakpoints, std::vector<double> values,
                                                double total) {
  if (breakpoints.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "profile arrays differ in length");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const double prev_s = i == 0 ? 0.0 : breakpoints[i - 1];
    if (!(breakpoints[i] > prev_s) || (i > 0 && values[i] > values[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "step profile must have increasing breakpoints and non-increasing values");
    }
  }
  RearrangementProfile p;
  p.kind_ = Kind::Step;
  p.total_ = total;
  p.s_ = std::move(breakpoints);
  p.t_ = std::move(values);
  return p;
}

RearrangementProfile RearrangementProfile::tabulated(std::vector<double> s, std::vector<double> values, double total,
                                                     std::optional<Tail> tail) {
  if (s.size() != values.size() || s.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "tabulated profile needs at least two nodes");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0.0) || (i > 0 && !(s[i] > s[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument, "tabulated nodes must be positive and increasing");
    }
  }
  RearrangementProfile p;
  p.kind_ = Kind::Tabulated;
  p.total_ = total;
  p.s_ = std::move(s);
  p.t_ = std::move(values);
  p.tail_ = tail;
  return p;
}

double RearrangementProfile::operator()(double s) const {
  if (s >= total_) return 0.0;
  if (kind_ == Kind::Step) {
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    if (it == s_.end()) return 0.0;
    return t_[static_cast<std::size_t>(it - s_.begin())];
  }
  if (s < s_.front()) {
    if (tail_ && s > 0.0) return (*tail_)(s);
    return t_.front();
  }
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  if (it == s_.end()) return t_.back();
  const std::size_t k = static_cast<std::size_t>(it - s_.begin()) - 1;
  const double w = (std::log(s) - std::log(s_[k])) / (std::log(s_[k + 1]) - std::log(s_[k]));
  return t_[k] + w * (t_[k + 1] - t_[k]);
}

double RearrangementProfile::sup() const {
  if (t_.empty()) return 0.0;
  if (kind_ == Kind::Tabulated && tail_) return std::numeric_limits<double>::infinity();
  return t_.front();
}

double RearrangementProfile::lp_norm(double r) const {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "norm exponent must be positive");
  double sum = 0.0;
  if (kind_ == Kind::Step) {
    double prev = 0.0;
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const double hi = std::min(s_[i], total_);
      if (hi > prev) sum += std::pow(std::abs(t_[i]), r) * (hi - prev);
      prev = std::max(prev, hi);
    }
    return std::pow(sum, 1.0 / r);
  }
  const double s0 = s_.front();
  if (tail_) {
    boost::math::quadrature::tanh_sinh<double> ts;
    const Tail tail = *tail_;
    sum += ts.integrate([&](double s) { return s > 0.0 ? std::pow(std::abs(tail(s)), r) : 0.0; }, 0.0, s0);
  } else {
    sum += std::pow(std::abs(t_.front()), r) * s0;
  }
  for (std::size_t k = 0; k + 1 < s_.size(); ++k) {
    const double x0 = std::log(s_[k]);
    const double x1 = std::log(s_[k + 1]);
    const double u0 = t_[k];
    const double u1 = t_[k + 1];
    auto f = [&](double x) {
      const double u = u0 + (u1 - u0) * (x - x0) / (x1 - x0);
      return std::pow(std::abs(u), r) * std::exp(x);
    };
    sum += boost::math::quadrature::gauss<double, 10>::integrate(f, x0, x1);
  }
  if (total_ > s_.back()) sum += std::pow(std::abs(t_.back()), r) * (total_ - s_.back());
  return std::pow(sum, 1.0 / r);
}

std::vector<double> RearrangementProfile::sample(const std::vector<double>& s) const {
  std::vector<double> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [this](double x) { return (*this)(x); });
  return out;
}

namespace {

// Cell indices by descending |value|, ties in mesh order. Measures are always
// accumulated in this order so that mu_u and u* agree bit for bit.
std::vector<std::size_t> magnitude_order(const GridFunction& u) {
  std::vector<std::size_t> order(u.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(u.values[a]) > std::abs(u.values[b]); });
  return order;
}

}  // namespace

double distribution_function(const GridFunction& u, double t) {
  double mu = 0.0;
  for (std::size_t idx : magnitude_order(u)) {
    if (!(std::abs(u.values[idx]) > t)) break;
    mu += u.measures[idx];
  }
  return mu;
}

RearrangementProfile decreasing_rearrangement(const GridFunction& u) {
  u.validate();
  if (u.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty grid function");
  const std::vector<std::size_t> order = magnitude_order(u);
  std::vector<double> s;
  std::vector<double> t;
  double acc = 0.0;
  for (std::size_t idx : order) {
    const double v = std::abs(u.values[idx]);
    acc += u.measures[idx];
    if (!t.empty() && t.back() == v) {
      s.back() = acc;
    } else {
      s.push_back(acc);
      t.push_back(v);
    }
  }
  return RearrangementProfile::step(std::move(s), std::move(t), acc);
}

std::vector<double> symmetrize_at(const RearrangementProfile& profile, const AnisoNorm& norm,
                                  const std::vector<Point>& points) {
  const double kappa = wulff_kappa(norm);
  std::vector<double> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double ho = polar_eval(norm, vec2(points[i].x(), points[i].y()));
    out[i] = profile(kappa * ho * ho);
  }
  return out;
}

GridFunction convex_symmetrization(const GridFunction& u, const AnisoNorm& norm, const GridFunction& target) {
  if (norm.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "symmetrization is implemented in 2-D");
  const double mu = u.total_measure();
  const double mt = target.total_measure();
  if (std::abs(mt - mu) > 0.01 * mu) {
    throw Error(ErrorCode::MeasureMismatch, "target measure " + std::to_string(mt) + " vs |Omega| " + std::to_string(mu));
  }
  GridFunction out = target;
  out.values = symmetrize_at(decreasing_rearrangement(u), norm, target.centers);
  return out;
}

double marcinkiewicz_norm(const RearrangementProfile& profile, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "Marcinkiewicz exponent must be positive");
  double best = 0.0;
  const auto& s = profile.breakpoints();
  const auto& t = profile.values();
  for (std::size_t i = 0; i < s.size(); ++i) {
    best = std::max(best, std::abs(t[i]) * std::pow(std::min(s[i], profile.total_measure()), 1.0 / r));
  }
  return best;
}

double marcinkiewicz_norm(const GridFunction& u, double r) {
  return marcinkiewicz_norm(decreasing_rearrangement(u), r);
}

std::vector<double> log_grid(double total, int count, double lo_fraction) {
  if (count < 2 || !(total > 0.0) || !(lo_fraction > 0.0 && lo_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "log grid needs count >= 2, total > 0 and 0 < lo_fraction < 1");
  }
  std::vector<double> s(static_cast<std::size_t>(count));
  const double l0 = std::log(lo_fraction);
  for (int k = 0; k < count; ++k) {
    s[static_cast<std::size_t>(k)] = total * std::exp(l0 * (1.0 - static_cast<double>(k) / (count - 1)));
  }
  s.back() = total;
  return s;
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

bool segments_meet(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double o1 = orient(a, b, c);
  const double o2 = orient(a, b, d);
  const double o3 = orient(c, d, a);
  const double o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

}  // namespace

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        if (poly[i] == poly[(i + 1) % n] || poly[j] == poly[(j + 1) % n]) return false;
        continue;
      }
      if (segments_meet(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

double anisotropic_perimeter(const Polygon& poly, const AnisoNorm& norm) {
  if (!is_simple(poly)) throw Error(ErrorCode::SelfIntersecting, "polygon is not simple");
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point e = poly[(i + 1) % poly.size()] - poly[i];
    total += h_eval(norm, vec2(e.y(), -e.x()));
  }
  return total;
}

double euclidean_perimeter(const Polygon& poly) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) total += (poly[(i + 1) % poly.size()] - poly[i]).norm();
  return total;
}

Polygon wulff_polygon(const AnisoNorm& norm, double r, int k) {
  Polygon poly;
  poly.reserve(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) {
    const Vec w = wulff_boundary_point(norm, 2.0 * std::numbers::pi * j / k);
    poly.emplace_back(r * w[0], r * w[1]);
  }
  return poly;
}

std::vector<Polygon> level_set_polygons(const CartesianField& field, double t) {
  // Pad with a ring of nodes below t so every contour closes.
  const int nx = field.nx + 2;
  const int ny = field.ny + 2;
  auto value = [&](int i, int j) {
    if (i < 1 || j < 1 || i > field.nx || j > field.ny) return t - 1.0;
    return field.at(i - 1, j - 1);
  };
  auto node = [&](int i, int j) { return Point(field.x0 + (i - 1) * field.h, field.y0 + (j - 1) * field.h); };
  auto hedge = [&](int i, int j) { return 2L * (static_cast<long>(j) * nx + i); };
  auto vedge = [&](int i, int j) { return 2L * (static_cast<long>(j) * nx + i) + 1; };

  std::unordered_map<long, Point> points;
  std::unordered_map<long, long> next;
  auto padded = [&](int i, int j) { return i < 1 || j < 1 || i > field.nx || j > field.ny; };
  auto crossing = [&](long id, int ia, int ja, int ib, int jb) {
    if (points.count(id)) return id;
    if (padded(ia, ja)) {
      points[id] = node(ib, jb);
    } else if (padded(ib, jb)) {
      points[id] = node(ia, ja);
    } else {
      const double ua = value(ia, ja);
      const double ub = value(ib, jb);
      const double w = (t - ua) / (ub - ua);
      points[id] = node(ia, ja) + w * (node(ib, jb) - node(ia, ja));
    }
    return id;
  };

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      const long eid[4] = {hedge(i, j), vedge(i + 1, j), hedge(i, j + 1), vedge(i, j)};
      bool in[4];
      for (int k = 0; k < 4; ++k) in[k] = value(ci[k], cj[k]) > t;
      // Crossings in counter-clockwise order around the cell.
      std::vector<std::pair<long, bool>> xs;  // (edge id, true if in -> out)
      for (int k = 0; k < 4; ++k) {
        const int k1 = (k + 1) % 4;
        if (in[k] != in[k1]) {
          xs.emplace_back(crossing(eid[k], ci[k], cj[k], ci[k1], cj[k1]), in[k]);
        }
      }
      if (xs.empty()) continue;
      const double center = 0.25 * (value(ci[0], cj[0]) + value(ci[1], cj[1]) + value(ci[2], cj[2]) + value(ci[3], cj[3]));
      const bool center_in = center > t;
      const std::size_t m = xs.size();
      for (std::size_t k = 0; k < m; ++k) {
        if (!xs[k].second) continue;
        // An in->out crossing joins the neighbouring out->in crossing; which
        // neighbour depends on the saddle resolution.
        const std::size_t partner = center_in || m == 2 ? (k + 1) % m : (k + m - 1) % m;
        next[xs[k].first] = xs[partner].first;
      }
    }
  }

  std::vector<Polygon> loops;
  std::unordered_map<long, bool> used;
  std::vector<long> starts;
  starts.reserve(next.size());
  for (const auto& kv : next) starts.push_back(kv.first);
  std::sort(starts.begin(), starts.end());
  for (long start : starts) {
    if (used[start]) continue;
    Polygon poly;
    long cur = start;
    while (!used[cur]) {
      used[cur] = true;
      // Crossings snapped onto the grid boundary can repeat a node.
      const Point& pt = points.at(cur);
      if (poly.empty() || pt != poly.back()) poly.push_back(pt);
      const auto it = next.find(cur);
      if (it == next.end()) break;
      cur = it->second;
    }
    while (poly.size() > 1 && poly.front() == poly.back()) poly.pop_back();
    if (poly.size() >= 3) loops.push_back(std::move(poly));
  }
  return loops;
}

GridFunction cell_function(const CartesianField& field) {
  GridFunction g;
  const double area = 0.5 * field.h * field.h;
  for (int j = 0; j + 1 < field.ny; ++j) {
    for (int i = 0; i + 1 < field.nx; ++i) {
      const Point a = field.node(i, j), b = field.node(i + 1, j), c = field.node(i + 1, j + 1), d = field.node(i, j + 1);
      const double ua = field.at(i, j), ub = field.at(i + 1, j), uc = field.at(i + 1, j + 1), ud = field.at(i, j + 1);
      g.centers.push_back((a + b + c) / 3.0);
      g.measures.push_back(area);
      g.values.push_back((ua + ub + uc) / 3.0);
      g.centers.push_back((a + c + d) / 3.0);
      g.measures.push_back(area);
      g.values.push_back((ua + uc + ud) / 3.0);
    }
  }
  return g;
}

double gradient_integral(const CartesianField& field, const AnisoNorm& norm, double power, double t) {
  const double h = field.h;
  const double area = 0.5 * h * h;
  double total = 0.0;
  for (int j = 0; j + 1 < field.ny; ++j) {
    for (int i = 0; i + 1 < field.nx; ++i) {
      const double ua = field.at(i, j), ub = field.at(i + 1, j), uc = field.at(i + 1, j + 1), ud = field.at(i, j + 1);
      // Lower triangle (a, b, c) and upper triangle (a, c, d).
      if ((ua + ub + uc) / 3.0 > t) total += std::pow(h_eval(norm, vec2((ub - ua) / h, (uc - ub) / h)), power) * area;
      if ((ua + uc + ud) / 3.0 > t) total += std::pow(h_eval(norm, vec2((uc - ud) / h, (ud - ua) / h)), power) * area;
    }
  }
  return total;
}

}  // namespace wulff
