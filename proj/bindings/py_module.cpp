#include "toposqt/driver.hpp"
#include "toposqt/kochen.hpp"
#include "toposqt/scenario.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

namespace py = pybind11;
using nlohmann::json;
using namespace toposqt;

namespace {

py::object to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case json::value_t::number_float:
      return py::float_(j.get<double>());
    case json::value_t::string:
      return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& e : j) out.append(to_py(e));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
      return out;
    }
    default:
      return py::none();
  }
}

// The python surface drives the same command layer as the CLI, so both
// expose identical, deterministic reports.
py::object run_or_raise(const std::vector<std::string>& args) {
  const CommandResult res = run_command(args);
  if (res.exit_code != 0) throw std::runtime_error(res.err.empty() ? "command failed" : res.err);
  return to_py(json::parse(res.out));
}

class Engine {
 public:
  explicit Engine(std::string scenario_path) : path_(std::move(scenario_path)) {
    // Validate eagerly so construction fails loudly on a bad scenario.
    load_scenario(path_);
  }

  py::object contexts() const { return run_or_raise({"--scenario", path_, "contexts"}); }

  py::object daseinise(const std::string& name, bool inner, const std::string& at) const {
    std::vector<std::string> args{"--scenario", path_, "daseinise", name};
    if (inner) args.push_back("--inner");
    if (!at.empty()) {
      args.push_back("--at");
      args.push_back(at);
    }
    return run_or_raise(args);
  }

  py::object truth_value(const std::string& prop, const std::string& state,
                         const std::string& at, const std::string& r) const {
    std::vector<std::string> args{"--scenario", path_, "truth-value", prop, state};
    if (!at.empty()) {
      args.push_back("--at");
      args.push_back(at);
    }
    if (!r.empty()) {
      args.push_back("--r");
      args.push_back(r);
    }
    return run_or_raise(args);
  }

  py::object pseudo_state(const std::string& state) const {
    return run_or_raise({"--scenario", path_, "pseudo-state", state});
  }

  py::object measure(const std::string& density, const std::string& subobject) const {
    return run_or_raise({"--scenario", path_, "measure", density, subobject});
  }

  py::object prob_truth(const std::string& prop, const std::string& density,
                        const std::string& root) const {
    return run_or_raise({"--scenario", path_, "prob-truth", prop, density, "--root", root});
  }

  py::object global_sections() const {
    return run_or_raise({"--scenario", path_, "global-sections"});
  }

  py::object covariance(const std::string& prop, const std::string& state,
                        const std::string& unitary, const std::string& at) const {
    std::vector<std::string> args{"--scenario", path_, "covariance", prop, state, unitary};
    if (!at.empty()) {
      args.push_back("--at");
      args.push_back(at);
    }
    return run_or_raise(args);
  }

  py::object value_interval(const std::string& op, const std::string& point) const {
    return run_or_raise({"--scenario", path_, "value-interval", op, point});
  }

 private:
  std::string path_;
};

py::object ks_check(const std::string& system) {
  return run_or_raise({"ks-check", system});
}

}  // namespace

PYBIND11_MODULE(_toposqt, m) {
  m.doc() = "finite context-poset engine for topos quantum theory";

  py::class_<Engine>(m, "Engine")
      .def(py::init<std::string>(), py::arg("scenario_path"))
      .def("contexts", &Engine::contexts)
      .def("daseinise", &Engine::daseinise, py::arg("name"), py::arg("inner") = false,
           py::arg("at") = "")
      .def("truth_value", &Engine::truth_value, py::arg("proposition"), py::arg("state"),
           py::arg("at") = "", py::arg("r") = "")
      .def("pseudo_state", &Engine::pseudo_state, py::arg("state"))
      .def("measure", &Engine::measure, py::arg("density"), py::arg("subobject"))
      .def("prob_truth", &Engine::prob_truth, py::arg("proposition"), py::arg("density"),
           py::arg("root"))
      .def("global_sections", &Engine::global_sections)
      .def("covariance", &Engine::covariance, py::arg("proposition"), py::arg("state"),
           py::arg("unitary"), py::arg("at") = "")
      .def("value_interval", &Engine::value_interval, py::arg("operator"), py::arg("point"));

  m.def("ks_check", &ks_check, py::arg("system"),
        "colorability report for 'kernaghan' or a basis file path");
}
