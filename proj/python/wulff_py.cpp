#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wulff/cli.hpp"
#include "wulff/verify.hpp"

namespace py = pybind11;
using namespace wulff;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <class F>
Array map_array(const Array& in, F f) {
  Array out(in.request().shape);
  double* dst = static_cast<double*>(out.request().ptr);
  const double* s = in.data();
  for (py::ssize_t i = 0; i < in.size(); ++i) dst[i] = f(s[i]);
  return out;
}

GridFunction grid_from(const Array& values, const Array& measures) {
  if (values.size() != measures.size()) throw Error(ErrorCode::InvalidArgument, "values and measures differ in size");
  GridFunction g;
  const double* v = values.data();
  const double* m = measures.data();
  for (py::ssize_t i = 0; i < values.size(); ++i) {
    g.centers.emplace_back(0.0, 0.0);
    g.values.push_back(v[i]);
    g.measures.push_back(m[i]);
  }
  return g;
}

Vec to_vec(const std::vector<double>& x) {
  Vec v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
  return v;
}

}  // namespace

PYBIND11_MODULE(_wulff, m) {
  m.doc() = "Anisotropic radial solutions, rearrangements and comparison checks";

  py::register_exception<Error>(m, "WulffError", PyExc_ValueError);

  py::class_<AnisoNorm>(m, "AnisoNorm")
      .def_static("euclidean", &AnisoNorm::euclidean, py::arg("dim") = 2)
      .def_static("rnorm", &AnisoNorm::rnorm, py::arg("r"), py::arg("dim") = 2)
      .def_static("ellipse", py::overload_cast<double, double>(&AnisoNorm::ellipse), py::arg("a"), py::arg("b"))
      .def_static("sampled_gauge",
                  [](const std::vector<double>& angles, const std::vector<double>& values) {
                    return AnisoNorm::sampled_gauge(angles, values);
                  })
      .def_property_readonly("dim", &AnisoNorm::dim)
      .def_property_readonly("c1", &AnisoNorm::c1)
      .def_property_readonly("c2", &AnisoNorm::c2)
      .def("__call__", [](const AnisoNorm& n, const std::vector<double>& x) { return h_eval(n, to_vec(x)); })
      .def("polar", [](const AnisoNorm& n, const std::vector<double>& x) { return polar_eval(n, to_vec(x)); })
      .def("gradient", [](const AnisoNorm& n, const std::vector<double>& x, double eps) {
        const Vec g = h_grad(n, to_vec(x), eps);
        return std::vector<double>(g.data(), g.data() + g.size());
      }, py::arg("x"), py::arg("eps_reg") = 0.0)
      .def("kappa", [](const AnisoNorm& n) { return wulff_kappa(n); })
      .def("identity_violation", [](const AnisoNorm& n, int samples, std::uint64_t seed) {
        return check_identities(n, samples, seed).max_violation();
      }, py::arg("samples") = 1000, py::arg("seed") = 1);

  py::class_<ProblemParams>(m, "ProblemParams")
      .def(py::init([](int N, double p, double q, double lambda, double R) {
             return ProblemParams::make(N, p, q, lambda, R);
           }),
           py::arg("N"), py::arg("p"), py::arg("q"), py::arg("lam"), py::arg("R") = 1.0)
      .def_readonly("N", &ProblemParams::N)
      .def_readonly("p", &ProblemParams::p)
      .def_readonly("q", &ProblemParams::q)
      .def_readonly("lam", &ProblemParams::lambda)
      .def_readonly("R", &ProblemParams::R)
      .def_property_readonly("gamma", &ProblemParams::gamma)
      .def_property_readonly("c_gamma", &ProblemParams::c_gamma)
      .def_property_readonly("Lambda_gamma", &ProblemParams::Lambda_gamma)
      .def_property_readonly("lambda_max", &ProblemParams::lambda_max)
      .def_property_readonly("delta_tilde", &ProblemParams::delta_tilde)
      .def_static("admissibility", &ProblemParams::admissibility);

  m.def("solve_beta", &solve_beta);
  m.def("branch_function", &branch_function, py::arg("gamma"), py::arg("N"), py::arg("beta"));

  py::class_<RearrangementProfile>(m, "RearrangementProfile")
      .def("__call__", [](const RearrangementProfile& p, const Array& s) { return map_array(s, p); })
      .def("__call__", [](const RearrangementProfile& p, double s) { return p(s); })
      .def_property_readonly("total_measure", &RearrangementProfile::total_measure)
      .def_property_readonly("breakpoints", &RearrangementProfile::breakpoints)
      .def_property_readonly("values", &RearrangementProfile::values)
      .def("sup", &RearrangementProfile::sup)
      .def("lp_norm", &RearrangementProfile::lp_norm);

  py::class_<MembershipReport>(m, "MembershipReport")
      .def_readonly("passed", &MembershipReport::pass)
      .def_readonly("delta_critical", &MembershipReport::delta_critical)
      .def_readonly("delta_tilde", &MembershipReport::delta_tilde)
      .def_readonly("delta_found", &MembershipReport::delta_found)
      .def_readonly("v_in_w1gamma", &MembershipReport::v_in_w1gamma)
      .def_readonly("reason", &MembershipReport::reason);

  py::class_<RadialSolution>(m, "RadialSolution")
      .def_static("solve", &RadialSolution::solve)
      .def_static("from_root", &RadialSolution::from_root)
      .def_static("second_solution", &RadialSolution::second_solution)
      .def_property_readonly("beta", &RadialSolution::beta)
      .def_property_readonly("theta", &RadialSolution::theta)
      .def_property_readonly("case", [](const RadialSolution& s) { return std::string(to_string(s.case_tag())); })
      .def("phi", [](const RadialSolution& s, const Array& r) { return map_array(r, [&](double x) { return s.phi(x); }); })
      .def("v", [](const RadialSolution& s, const Array& r) { return map_array(r, [&](double x) { return s.v(x); }); })
      .def("V", [](const RadialSolution& s, const Array& r) { return map_array(r, [&](double x) { return s.V(x); }); })
      .def("residual", [](const RadialSolution& s, const std::vector<double>& r) { return residual_1d(s, r); })
      .def("membership", [](const RadialSolution& s) { return branch_membership_check(s); })
      .def("v_star", [](const RadialSolution& s, double kappa, int count) { return v_star(s, kappa, count); },
           py::arg("kappa"), py::arg("count") = 512);

  m.def("decreasing_rearrangement", [](const Array& values, const Array& measures) {
    return decreasing_rearrangement(grid_from(values, measures));
  });
  m.def("distribution_function", [](const Array& values, const Array& measures, double t) {
    return distribution_function(grid_from(values, measures), t);
  });
  m.def("marcinkiewicz_norm", [](const Array& values, const Array& measures, double r) {
    return marcinkiewicz_norm(grid_from(values, measures), r);
  });
  m.def("hardy_quotient_radial", [](const py::function& g, const py::function& dg, int N, double gamma, double R) {
    return hardy_quotient_radial([&](double r) { return g(r).cast<double>(); },
                                 [&](double r) { return dg(r).cast<double>(); }, N, gamma, R);
  });

  m.def("run_cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "wulff");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    return cli::run(static_cast<int>(argv.size()), argv.data());
  }, "Runs a CLI subcommand in-process and returns its exit code.");
}
