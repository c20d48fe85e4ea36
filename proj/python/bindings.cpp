// Python bindings: information measures, closed forms and the experiment runner.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sdkey/bounds.hpp"
#include "sdkey/error.hpp"
#include "sdkey/experiment.hpp"
#include "sdkey/probability.hpp"
#include "sdkey/report.hpp"

namespace py = pybind11;
using namespace sdkey;

namespace {

// Named variables with the given sizes; the table is row-major, last variable fastest.
JointPmf make_pmf(const std::vector<std::string>& names, const std::vector<std::size_t>& sizes,
                  const std::vector<double>& table) {
  if (names.size() != sizes.size()) throw ValidationError("names and sizes differ in length");
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < names.size(); ++i) vars.push_back({names[i], Alphabet::range(names[i], sizes[i])});
  return JointPmf(std::move(vars), table);
}

ExperimentConfig make_config(const std::string& task, const std::map<std::string, std::string>& params) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : params) {
    if (k == "preset") cfg.apply_preset(v);
  }
  for (const auto& [k, v] : params) {
    if (k != "preset") cfg.set(k, v);
  }
  cfg.task = parse_task(task);
  cfg.out.clear();
  return cfg;
}

py::dict closed_form_dict(const ClosedForm& cf) {
  py::dict d;
  d["rate"] = cf.rate;
  d["raw_rate"] = cf.raw_rate;
  d["constraint"] = cf.constraint;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sdkey, m) {
  m.doc() = "Secret-key bounds and protocol simulator for state-dependent multiple access channels";
  m.attr("__version__") = kVersion;

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("binary_entropy", &binary_entropy, py::arg("p"));
  m.def("entropy_bits", [](const std::vector<double>& p) { return entropy_bits(p); }, py::arg("probs"));
  m.def(
      "conditional_mutual_information",
      [](const std::vector<std::string>& names, const std::vector<std::size_t>& sizes,
         const std::vector<double>& table, const VarList& a, const VarList& b, const VarList& c) {
        return conditional_mutual_information(make_pmf(names, sizes, table), a, b, c);
      },
      py::arg("names"), py::arg("sizes"), py::arg("table"), py::arg("a"), py::arg("b"), py::arg("given") = VarList{},
      "I(a; b | given) in bits for a joint table over named variables.");

  m.def("stuck_at_closed_form", [](double p) { return closed_form_dict(stuck_at_lb_closed_form(p)); }, py::arg("p"));
  m.def(
      "modadd_closed_form",
      [](double alpha, double p_s, double p1, double p2, double r_c) {
        return closed_form_dict(modadd_lb_closed_form(alpha, p_s, p1, p2, r_c));
      },
      py::arg("alpha"), py::arg("p_s"), py::arg("p1"), py::arg("p2"), py::arg("r_c") = 1.0);

  m.def(
      "run",
      [](const std::string& task, const std::map<std::string, std::string>& params) {
        const SimulationReport rep = run(make_config(task, params));
        py::dict out;
        for (const Metric& mt : rep.metrics) out[py::str(mt.name)] = mt.value;
        return out;
      },
      py::arg("task"), py::arg("params") = std::map<std::string, std::string>{},
      "Runs one task and returns its metrics by name. `params` uses the config-file keys; "
      "a 'preset' entry is applied first.");
  m.def(
      "run_csv",
      [](const std::string& task, const std::map<std::string, std::string>& params) {
        std::ostringstream os;
        run_to_csv(make_config(task, params), os);
        return os.str();
      },
      py::arg("task"), py::arg("params") = std::map<std::string, std::string>{},
      "Same as run() but returns the CSV the command-line tool writes.");
}
