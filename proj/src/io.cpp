#include "wulff/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace wulff {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::ConfigError, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string profile_csv(const RearrangementProfile& profile, const std::vector<double>* s) {
  std::string out = "s,u_star\n";
  const std::vector<double>& pts = s ? *s : profile.breakpoints();
  for (double x : pts) out += format_double(x) + "," + format_double(profile(x)) + "\n";
  return out;
}

std::string solution_csv(const Mesh& mesh, const std::vector<double>& u) {
  std::string out = "x,y,u\n";
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    out += format_double(mesh.vertices[i].x()) + "," + format_double(mesh.vertices[i].y()) + "," + format_double(u[i]) +
           "\n";
  }
  return out;
}

std::string grid_csv(const GridFunction& g) {
  std::string out = "x,y,u\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    out += format_double(g.centers[i].x()) + "," + format_double(g.centers[i].y()) + "," + format_double(g.values[i]) +
           "\n";
  }
  return out;
}

std::string radial_csv(const RadialSolution& sol, const std::vector<double>& radii) {
  std::string out = "r,phi,v,V\n";
  for (double r : radii) {
    out += format_double(r) + "," + format_double(sol.phi(r)) + "," + format_double(sol.v(r)) + "," +
           format_double(sol.V(r)) + "\n";
  }
  return out;
}

std::string overlay_svg(const std::vector<double>& x, const std::vector<SvgSeries>& series, const std::string& title,
                        bool log_x, const std::string& comment) {
  constexpr double W = 640.0, H = 420.0, L = 60.0, Rm = 20.0, T = 40.0, B = 50.0;
  auto fx = [&](double v) { return log_x ? std::log10(v) : v; };
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (log_x && !(x[i] > 0.0)) continue;
    xmin = std::min(xmin, fx(x[i]));
    xmax = std::max(xmax, fx(x[i]));
    for (const auto& s : series) {
      if (i < s.y.size() && std::isfinite(s.y[i])) {
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  auto px = [&](double v) { return L + (fx(v) - xmin) / (xmax - xmin) * (W - L - Rm); };
  auto py = [&](double v) { return H - B - (v - ymin) / (ymax - ymin) * (H - T - B); };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\" viewBox=\"0 0 640 420\">\n";
  if (!comment.empty()) out += "<!-- " + comment + " -->\n";
  out += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" + title +
         "</text>\n";
  out += "<line x1=\"" + num(L) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(W - Rm) + "\" y2=\"" + num(H - B) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(L) + "\" y1=\"" + num(T) + "\" x2=\"" + num(L) + "\" y2=\"" + num(H - B) +
         "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4.0;
    const double yv = ymin + (ymax - ymin) * k / 4.0;
    const double xp = L + (W - L - Rm) * k / 4.0;
    const double yp = H - B - (H - T - B) * k / 4.0;
    out += "<text x=\"" + num(xp) + "\" y=\"" + num(H - B + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
           (log_x ? "1e" + num(xv) : num(xv)) + "</text>\n";
    out += "<text x=\"" + num(L - 6) + "\" y=\"" + num(yp + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(yv) + "</text>\n";
  }
  out += "<text x=\"" + num((L + W - Rm) / 2) + "\" y=\"" + num(H - 12) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">s</text>\n";
  int row = 0;
  for (const auto& s : series) {
    std::string pts;
    for (std::size_t i = 0; i < x.size() && i < s.y.size(); ++i) {
      if ((log_x && !(x[i] > 0.0)) || !std::isfinite(s.y[i])) continue;
      pts += num(px(x[i])) + "," + num(py(s.y[i])) + " ";
    }
    out += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    out += "<text x=\"" + num(W - Rm - 120) + "\" y=\"" + num(T + 16 + 16 * row) + "\" fill=\"" + s.color +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
    ++row;
  }
  out += "</svg>\n";
  return out;
}

AnisoNorm norm_from_json(const nlohmann::json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    const int dim = j.value("dim", 2);
    if (family == "euclidean") return AnisoNorm::euclidean(dim);
    if (family == "rnorm") return AnisoNorm::rnorm(j.at("r").get<double>(), dim);
    if (family == "ellipse") {
      const auto axes = j.at("axes").get<std::vector<double>>();
      return AnisoNorm::ellipse(std::span<const double>(axes));
    }
    if (family == "sampled") {
      const auto angles = j.at("angles").get<std::vector<double>>();
      const auto values = j.at("values").get<std::vector<double>>();
      return AnisoNorm::sampled_gauge(angles, values);
    }
    throw Error(ErrorCode::ConfigError, "unknown norm family '" + family + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("norm spec: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    throw Error(ErrorCode::ConfigError, std::string("norm spec: ") + e.what());
  }
}

nlohmann::ordered_json norm_to_json(const AnisoNorm& norm) {
  nlohmann::ordered_json j;
  switch (norm.family()) {
    case NormFamily::Euclidean: j["family"] = "euclidean"; break;
    case NormFamily::RNorm:
      j["family"] = "rnorm";
      j["r"] = norm.exponent();
      break;
    case NormFamily::Ellipse: {
      j["family"] = "ellipse";
      std::vector<double> axes;
      for (int i = 0; i < norm.dim(); ++i) axes.push_back(std::sqrt(norm.matrix()(i, i)));
      j["axes"] = axes;
      break;
    }
    case NormFamily::SampledGauge: j["family"] = "sampled"; break;
  }
  j["dim"] = norm.dim();
  j["c1"] = norm.c1();
  j["c2"] = norm.c2();
  return j;
}

}  // namespace wulff
