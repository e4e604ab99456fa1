#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dnfl/harness.hpp"
#include "dnfl/recovery.hpp"
#include "dnfl/spectrum.hpp"

namespace py = pybind11;
using namespace dnfl;

namespace {

std::map<Mask, double> as_dict(const SparseSpectrum& s) {
  return {s.entries().begin(), s.entries().end()};
}

}  // namespace

PYBIND11_MODULE(_dnfl, m) {
  m.doc() = "Learning DNF and PTFs from heavy low-degree Fourier coefficients";

  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);

  py::class_<DnfFormula>(m, "Dnf")
      .def_static("parse", &DnfFormula::parse, py::arg("text"))
      .def_static("random", &random_dnf, py::arg("n"), py::arg("s"), py::arg("max_len"),
                  py::arg("monotone") = false, py::arg("seed") = 0)
      .def_property_readonly("n", &DnfFormula::n)
      .def_property_readonly("size", &DnfFormula::size)
      .def_property_readonly("monotone", &DnfFormula::monotone)
      .def("__call__", [](const DnfFormula& f, Mask x) { return f(x); }, py::arg("x"))
      .def("table", [](const DnfFormula& f) { return tabulate(f.as_function()); })
      .def("__str__", &DnfFormula::to_string);

  m.def("fwht", [](std::vector<double> t) { return fwht(std::move(t)).values; }, py::arg("table"));
  m.def("mu_transform",
        [](std::vector<double> t, std::vector<double> mu) {
          return mu_transform_dense(std::move(t), ProductDistribution(std::move(mu)));
        },
        py::arg("table"), py::arg("mu"));
  m.def("transform", &cmd_transform, py::arg("function_text"), py::arg("mu") = py::none(),
        py::arg("degree") = py::none(), "Exact spectrum in the text wire format.");

  m.def("km",
        [](const std::string& dnf, double theta, double delta, std::uint64_t seed,
           const std::string& backend) {
          const auto f = DnfFormula::parse(dnf);
          MembershipOracle mq(f.as_function());
          RecoveryParams p;
          p.theta = theta;
          p.delta = delta;
          p.seed = seed;
          p.backend = parse_backend(backend);
          const auto r = km_uniform(mq, p);
          return py::make_tuple(as_dict(r.spectrum), r.report.queries);
        },
        py::arg("dnf"), py::arg("theta"), py::arg("delta") = 0.05, py::arg("seed") = 0,
        py::arg("backend") = "sampled",
        "Heavy parity coefficients of a DNF through membership queries.");

  m.def("bound_degree", &bound_degree, py::arg("w"), py::arg("eps"), py::arg("c"));
  m.def("derive_params",
        [](int s, double eps, double c, int n) {
          const auto p = derive_params(s, eps, c, n);
          return py::dict(py::arg("eps_prime") = p.eps_prime, py::arg("d_formula") = p.d_formula,
                          py::arg("d") = p.d, py::arg("gamma") = p.gamma);
        },
        py::arg("s"), py::arg("epsilon"), py::arg("c"), py::arg("n"));

  m.def("_learn",
        [](const std::string& spec_json) {
          const auto out = cmd_learn(spec_from_json(nlohmann::json::parse(spec_json)));
          return py::make_tuple(out.manifest.dump(), out.hypotheses, out.successes);
        },
        py::arg("spec_json"));
  m.def("verify_bounds",
        [](int count, int n, int s, double eps, std::vector<double> cs, std::uint64_t seed) {
          BoundSweep sweep{count, n, s, eps, std::move(cs)};
          return bounds_csv(cmd_verify_bounds(sweep, seed));
        },
        py::arg("count") = 100, py::arg("n") = 10, py::arg("s") = 3, py::arg("eps") = 0.1,
        py::arg("cs") = std::vector<double>{1.0, 0.5, 0.25}, py::arg("seed") = 0,
        "Bound verification sweep as CSV text.");
  m.def("evaluate",
        [](const std::string& function_text, const std::string& chain_text,
           std::optional<std::vector<double>> mu, std::optional<std::uint64_t> samples,
           std::uint64_t seed) {
          const auto e = cmd_eval(function_text, chain_text, mu, samples, seed);
          return py::make_tuple(e.error, e.band, e.exact);
        },
        py::arg("function_text"), py::arg("chain_text"), py::arg("mu") = py::none(),
        py::arg("samples") = py::none(), py::arg("seed") = 0,
        "(error, band, exact) of a chain hypothesis.");
}
