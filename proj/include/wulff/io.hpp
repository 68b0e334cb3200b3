#pragma once

// Text artifacts: CSV tables, JSON configs and SVG overlay plots.

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "wulff/mesh.hpp"
#include "wulff/radial.hpp"

namespace wulff {

/// Round-trip decimal form of a double ("%.17g").
std::string format_double(double x);

/// Throws ConfigError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

/// Header `s,u_star`, one row per sample point (default: the profile breakpoints).
std::string profile_csv(const RearrangementProfile& profile, const std::vector<double>* s = nullptr);
/// Header `x,y,u`, one row per vertex.
std::string solution_csv(const Mesh& mesh, const std::vector<double>& u);
/// Header `x,y,u`, one row per cell centre.
std::string grid_csv(const GridFunction& g);
/// Header `r,phi,v,V`.
std::string radial_csv(const RadialSolution& sol, const std::vector<double>& radii);

struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<double> y;
};

/// Line plot of several series over a shared abscissa.
std::string overlay_svg(const std::vector<double>& x, const std::vector<SvgSeries>& series, const std::string& title,
                        bool log_x, const std::string& comment = {});

/// Norm sub-schema: {"family":"euclidean"} | {"family":"rnorm","r":4}
/// | {"family":"ellipse","axes":[2,1]} | {"family":"sampled","angles":[...],"values":[...]}.
AnisoNorm norm_from_json(const nlohmann::json& j);
nlohmann::ordered_json norm_to_json(const AnisoNorm& norm);

}  // namespace wulff
