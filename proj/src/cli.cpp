#include "wulff/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <numbers>

#include "wulff/io.hpp"
#include "wulff/verify.hpp"

namespace wulff::cli {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <typename T>
T get(const json& cfg, const char* key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("key '") + key + "': " + e.what());
  }
}

template <typename T>
T get_or(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  return get<T>(cfg, key);
}

ProblemParams params_from(const json& cfg) {
  const int N = get_or<int>(cfg, "N", 2);
  const double p = get<double>(cfg, "p");
  const double q = get<double>(cfg, "q");
  const double R = get_or<double>(cfg, "R", 1.0);
  double lambda = 0.0;
  if (cfg.contains("lambda") && cfg.contains("lambda_fraction")) {
    throw Error(ErrorCode::ConfigError, "give either 'lambda' or 'lambda_fraction'");
  }
  if (cfg.contains("lambda_fraction")) {
    const ProblemParams probe{N, p, q, 0.0, R};
    lambda = get<double>(cfg, "lambda_fraction") * probe.lambda_max();
  } else {
    lambda = get_or<double>(cfg, "lambda", 0.0);
  }
  const std::string why = ProblemParams::admissibility(N, p, q, lambda, R);
  if (!why.empty()) throw Error(ErrorCode::ConfigError, why);
  return ProblemParams{N, p, q, lambda, R};
}

AnisoNorm norm_from(const json& cfg) {
  if (!cfg.contains("norm")) return AnisoNorm::euclidean(get_or<int>(cfg, "N", 2));
  return norm_from_json(cfg.at("norm"));
}

SolverConfig solver_from(const json& cfg) {
  SolverConfig sc;
  if (!cfg.contains("solver")) return sc;
  const json& s = cfg.at("solver");
  sc.tol = get_or<double>(s, "tol", sc.tol);
  sc.max_iter = get_or<int>(s, "max_iter", sc.max_iter);
  sc.damping = get_or<double>(s, "damping", sc.damping);
  sc.eps_reg = get_or<double>(s, "eps_reg", sc.eps_reg);
  return sc;
}

ojson params_json(const ProblemParams& pp) {
  return {{"N", pp.N}, {"p", pp.p}, {"q", pp.q}, {"lambda", pp.lambda}, {"R", pp.R}};
}

ojson beta_json(const RadialSolution& sol) {
  const ProblemParams& pp = sol.params();
  ojson j;
  j["beta"] = sol.beta();
  j["theta"] = sol.theta();
  j["gamma"] = pp.gamma();
  j["c_gamma"] = pp.c_gamma();
  j["Lambda_gamma"] = pp.Lambda_gamma();
  j["lambda_max"] = pp.lambda_max();
  j["s_tilde"] = pp.s_tilde();
  j["delta_tilde"] = pp.delta_tilde();
  j["case"] = std::string(to_string(sol.case_tag()));
  return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

void prepare_out(const Options& opts) {
  std::error_code ec;
  std::filesystem::create_directories(opts.out, ec);
  if (ec) throw Error(ErrorCode::ConfigError, "cannot create output directory " + opts.out.string());
}

std::string stamp(const Options& opts) {
  if (opts.deterministic) return {};
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof buf, "generated %Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

std::function<double(const Point&)> field_from(const json& field, double x0, double y0, double x1, double y1) {
  const std::string kind = get_or<std::string>(field, "kind", "sine_bump");
  if (kind == "sine_bump") {
    return [=](const Point& x) {
      return std::sin(std::numbers::pi * (x.x() - x0) / (x1 - x0)) * std::sin(std::numbers::pi * (x.y() - y0) / (y1 - y0));
    };
  }
  if (kind == "gaussian") {
    const auto c = get_or<std::vector<double>>(field, "center", {0.5 * (x0 + x1), 0.5 * (y0 + y1)});
    const double w = get_or<double>(field, "width", 0.25 * (x1 - x0));
    if (c.size() != 2 || !(w > 0.0)) throw Error(ErrorCode::ConfigError, "gaussian needs a 2-D centre and width > 0");
    return [=](const Point& x) {
      const double dx = x.x() - c[0], dy = x.y() - c[1];
      return std::exp(-(dx * dx + dy * dy) / (w * w));
    };
  }
  throw Error(ErrorCode::ConfigError, "unknown field kind '" + kind + "'");
}

}  // namespace

int cmd_beta(const json& cfg, const Options& opts) {
  prepare_out(opts);
  const RadialSolution sol = RadialSolution::solve(params_from(cfg));
  ojson j = beta_json(sol);
  j["params"] = params_json(sol.params());
  write_text(opts.out / "beta.json", dump(j));
  std::cout << j.dump() << "\n";
  return kPass;
}

int cmd_radial(const json& cfg, const Options& opts) {
  prepare_out(opts);
  const ProblemParams pp = params_from(cfg);
  const AnisoNorm norm = norm_from(cfg);
  const RadialSolution sol = RadialSolution::solve(pp);
  const int samples = get_or<int>(cfg, "samples", 200);
  if (samples < 2) throw Error(ErrorCode::ConfigError, "samples must be >= 2");
  std::vector<double> radii;
  for (int k = 1; k <= samples; ++k) radii.push_back(pp.R * k / samples);
  const double kappa = wulff_kappa(norm);
  const RearrangementProfile vs = v_star(sol, kappa, get_or<int>(cfg, "profile_points", 512));
  write_text(opts.out / "radial.csv", radial_csv(sol, radii));
  write_text(opts.out / "v_star.csv", profile_csv(vs));
  const MembershipReport mr = branch_membership_check(sol);
  ojson j = beta_json(sol);
  j["params"] = params_json(pp);
  j["norm"] = norm_to_json(norm);
  j["kappa"] = kappa;
  j["membership"] = {{"pass", mr.pass},
                     {"delta_tilde", mr.delta_tilde},
                     {"delta_critical", mr.delta_critical},
                     {"delta_found", mr.delta_found},
                     {"v_in_w1gamma", mr.v_in_w1gamma},
                     {"reason", mr.reason}};
  j["artifacts"] = {"radial.csv", "v_star.csv"};
  write_text(opts.out / "radial.json", dump(j));
  return kPass;
}

int cmd_symmetrize(const json& cfg, const Options& opts) {
  prepare_out(opts);
  const AnisoNorm norm = norm_from(cfg);
  const double h = get_or<double>(cfg, "h", 1.0 / 64.0);
  std::vector<double> b = {0.0, 0.0, 1.0, 1.0};
  if (cfg.contains("domain")) b = get<std::vector<double>>(cfg.at("domain"), "bounds");
  if (b.size() != 4) throw Error(ErrorCode::ConfigError, "domain bounds need 4 numbers");
  const Mesh mesh = build_mesh(DomainSpec::rectangle(b[0], b[1], b[2], b[3]), h);
  const auto fn = field_from(cfg.contains("field") ? cfg.at("field") : json::object(), b[0], b[1], b[2], b[3]);
  std::vector<double> nodal(mesh.vertex_count());
  for (std::size_t i = 0; i < nodal.size(); ++i) nodal[i] = fn(mesh.vertices[i]);
  const GridFunction u = to_grid_function(mesh, nodal, get_or<int>(cfg, "subdivisions", 2));
  const double kappa = wulff_kappa(norm);
  const double R = std::sqrt(u.total_measure() / kappa);
  const int rings = get_or<int>(cfg, "rings", 128);
  const int sectors = get_or<int>(cfg, "sectors", 128);
  const GridFunction target = wulff_polar_grid(norm, R, rings, sectors, [](const Point&) { return 0.0; });
  const GridFunction star = convex_symmetrization(u, norm, target);
  const RearrangementProfile prof = decreasing_rearrangement(u);
  write_text(opts.out / "symmetrized.csv", grid_csv(star));
  write_text(opts.out / "profile.csv", profile_csv(prof));
  auto l2 = [](const GridFunction& g) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) s += g.measures[i] * g.values[i] * g.values[i];
    return std::sqrt(s);
  };
  ojson j;
  j["norm"] = norm_to_json(norm);
  j["measure"] = u.total_measure();
  j["wulff_radius"] = R;
  j["l2_source"] = l2(u);
  j["l2_symmetrized"] = l2(star);
  j["sup"] = prof.sup();
  j["artifacts"] = {"symmetrized.csv", "profile.csv"};
  write_text(opts.out / "symmetrize.json", dump(j));
  return kPass;
}

int cmd_solve(const json& cfg, const Options& opts) {
  prepare_out(opts);
  const ProblemParams pp = params_from(cfg);
  const AnisoNorm norm = norm_from(cfg);
  if (pp.N != 2) throw Error(ErrorCode::ConfigError, "solve runs in 2-D");
  const double h = get_or<double>(cfg, "h", 1.0 / 32.0);
  const auto eps = get_or<std::vector<double>>(cfg, "epsilons", {0.1, 0.05, 0.025});
  const Mesh mesh = build_mesh(DomainSpec::wulff_disc(norm, pp.R), h);
  ProblemSpec spec;
  spec.norm = norm;
  spec.p = pp.p;
  spec.q = pp.q;
  spec.f = Source::singular(pp.lambda, pp.gamma());
  const auto reports = solve_schedule(spec, mesh, eps, solver_from(cfg));
  ojson runs = ojson::array();
  ojson artifacts = ojson::array();
  bool converged = true;
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const SolveReport& r = reports[k];
    converged = converged && r.converged;
    const std::string sol_name = "solution_eps" + std::to_string(k) + ".csv";
    const std::string prof_name = "profile_eps" + std::to_string(k) + ".csv";
    write_text(opts.out / sol_name, solution_csv(mesh, r.u));
    const RearrangementProfile prof = decreasing_rearrangement(to_grid_function(mesh, r.u, 2));
    const std::vector<double> grid = log_grid(prof.total_measure(), 256, 1e-6);
    write_text(opts.out / prof_name, profile_csv(prof, &grid));
    artifacts.push_back(sol_name);
    artifacts.push_back(prof_name);
    runs.push_back({{"epsilon", eps[k]},
                    {"iterations", r.iterations},
                    {"residual", r.residual},
                    {"converged", r.converged},
                    {"energy", r.energy}});
  }
  ojson j;
  j["params"] = params_json(pp);
  j["norm"] = norm_to_json(norm);
  j["h"] = h;
  j["vertices"] = mesh.vertex_count();
  j["triangles"] = mesh.triangle_count();
  j["runs"] = runs;
  j["artifacts"] = artifacts;
  write_text(opts.out / "solve.json", dump(j));
  return converged ? kPass : kNonConvergence;
}

int cmd_verify(const json& cfg, const Options& opts) {
  prepare_out(opts);
  ComparisonSetup setup;
  setup.params = params_from(cfg);
  setup.norm = norm_from(cfg);
  setup.h = get_or<double>(cfg, "h", 1.0 / 32.0);
  setup.epsilons = get_or<std::vector<double>>(cfg, "epsilons", {0.1, 0.05, 0.025});
  setup.solver = solver_from(cfg);
  setup.slack_constant = get_or<double>(cfg, "slack_constant", kSlackConstant);
  setup.grid_count = get_or<int>(cfg, "grid_count", 256);
  const bool log_x = get_or<bool>(cfg, "log_x", true);
  const ProblemParams& pp = setup.params;

  const ComparisonResult res = run_comparison(setup);
  const double kappa = wulff_kappa(setup.norm);
  std::vector<CheckReport> checks = res.checks;

  OdeCheckOptions ode;
  ode.expect_equality = true;
  checks.push_back(ode_inequality_check(res.v_profile, pp, kappa, ode));

  const double g = pp.gamma();
  const double lambda = pp.lambda;
  const GridFunction f = wulff_polar_grid(setup.norm, pp.R, 256, 256, [&](const Point& x) {
    return lambda / std::pow(polar_eval(setup.norm, vec2(x.x(), x.y())), g);
  });
  checks.push_back(smallness_check(f, pp, setup.norm));

  std::vector<double> ladder = {1.0, 2.0};
  if (pp.q < pp.p) ladder.push_back(0.9 * pp.N * pp.excess() / (pp.p - pp.q));
  if (!res.u_profiles.empty()) checks.push_back(norm_estimate_check(res.u_profiles.back(), res.v_profile, pp, ladder, 0.05));

  const std::vector<double> s = log_grid(res.v_profile.total_measure(), setup.grid_count, 1e-6);
  std::vector<SvgSeries> series;
  series.push_back({"v*", "#c0392b", res.v_profile.sample(s)});
  const char* colors[] = {"#2471a3", "#27ae60", "#8e44ad", "#d68910"};
  for (std::size_t k = 0; k < res.u_profiles.size(); ++k) {
    char label[48];
    std::snprintf(label, sizeof label, "u* eps=%g", setup.epsilons[k]);
    series.push_back({label, colors[k % 4], res.u_profiles[k].sample(s)});
  }
  write_text(opts.out / "overlay.svg", overlay_svg(s, series, "decreasing rearrangements", log_x, stamp(opts)));
  write_text(opts.out / "v_star.csv", profile_csv(res.v_profile, &s));
  for (std::size_t k = 0; k < res.u_profiles.size(); ++k) {
    write_text(opts.out / ("u_star_eps" + std::to_string(k) + ".csv"), profile_csv(res.u_profiles[k], &s));
  }

  bool pass = true;
  bool converged = true;
  ojson list = ojson::array();
  for (CheckReport& c : checks) {
    c.artifacts = {"overlay.svg", "v_star.csv"};
    pass = pass && c.pass;
    list.push_back(c.to_json());
  }
  for (const auto& sr : res.solves) converged = converged && sr.converged;
  ojson j;
  j["suite"] = "comparison";
  j["pass"] = pass;
  j["seed"] = opts.seed;
  j["params"] = params_json(pp);
  j["norm"] = norm_to_json(setup.norm);
  j["h"] = setup.h;
  j["slack"] = res.slack;
  j["checks"] = list;
  write_text(opts.out / "report.json", dump(j));
  std::cout << (pass ? "PASS" : "FAIL") << " verify (" << checks.size() << " checks)\n";
  if (!converged) return kNonConvergence;
  return pass ? kPass : kCheckFailed;
}

int run(int argc, char** argv) {
  CLI::App app{"wulff: anisotropic rearrangement estimates toolkit"};
  app.require_subcommand(1);
  std::string config;
  Options opts;
  std::string out = ".";
  bool deterministic = true;
  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const json&, const Options&);
  };
  const Entry entries[] = {
      {"beta", "solve the branch equation for beta", cmd_beta},
      {"radial", "tabulate the radial solution and v*", cmd_radial},
      {"symmetrize", "convex symmetrization of a field", cmd_symmetrize},
      {"solve", "solve the approximating Dirichlet problems", cmd_solve},
      {"verify", "run the comparison suite", cmd_verify},
  };
  std::vector<std::pair<CLI::App*, const Entry*>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", config, "JSON config file")->required();
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", opts.seed, "random seed recorded in outputs");
    sub->add_flag("--deterministic,!--no-deterministic", deterministic, "omit timestamps from artifacts");
    subs.emplace_back(sub, &e);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kConfigError;
  }
  opts.out = out;
  opts.deterministic = deterministic;
  for (const auto& [sub, entry] : subs) {
    if (!sub->parsed()) continue;
    try {
      json cfg;
      try {
        cfg = json::parse(read_text(config));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("invalid JSON in ") + config + ": " + e.what());
      }
      return entry->fn(cfg, opts);
    } catch (const Error& e) {
      std::cerr << "wulff " << entry->name << ": " << e.what() << "\n";
      return e.code() == ErrorCode::NoConvergence ? kNonConvergence : kConfigError;
    } catch (const std::exception& e) {
      std::cerr << "wulff " << entry->name << ": " << e.what() << "\n";
      return kConfigError;
    }
  }
  return kConfigError;
}

}  // namespace wulff::cli
