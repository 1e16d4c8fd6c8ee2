// Python bindings for the main operations: game values, the completely mixed
// verdict, classification, irreducibility, fixtures, and the verification
// suites. Instances travel as plain dicts matching the JSON schema.

#include <pybind11/pybind11.h>

#include "conegames/instance.hpp"
#include "conegames/suites.hpp"

namespace py = pybind11;
using namespace conegames;

namespace {

json to_nlohmann(const py::handle& obj) {
  py::module json_mod = py::module::import("json");
  return json::parse(py::cast<std::string>(json_mod.attr("dumps")(obj)));
}

py::object to_python(const json& j) {
  py::module json_mod = py::module::import("json");
  return json_mod.attr("loads")(j.dump());
}

Instance instance_from(const py::dict& d) { return instance_from_json(to_nlohmann(d)); }

}  // namespace

PYBIND11_MODULE(_conegames, m) {
  m.doc() = "zero-sum linear games over symmetric cones";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ComputeError>(m, "ComputeError", PyExc_RuntimeError);

  m.def(
      "algebra_info",
      [](const py::dict& algebra) {
        AlgebraPtr a = algebra_from_json(to_nlohmann(algebra));
        py::dict out;
        out["rank"] = a->rank();
        out["dim"] = a->dim();
        out["describe"] = a->describe();
        return out;
      },
      py::arg("algebra"), "rank, dimension, and a readable name of an algebra descriptor");

  m.def(
      "value",
      [](const py::dict& instance, double tol) {
        Instance inst = instance_from(instance);
        return to_python(to_json(conegames::value(inst.op, tol)));
      },
      py::arg("instance"), py::arg("tol") = tol::game_gap,
      "solve the game value of an instance dict");

  m.def(
      "completely_mixed",
      [](const py::dict& instance, double tol, uint64_t seed) {
        Instance inst = instance_from(instance);
        return to_python(to_json(is_completely_mixed(inst.op, tol, seed)));
      },
      py::arg("instance"), py::arg("tol") = tol::game_gap, py::arg("seed") = 0,
      "decide the completely mixed property");

  m.def(
      "classify",
      [](const py::dict& instance, const std::string& which, int budget, uint64_t seed) {
        Instance inst = instance_from(instance);
        SearchBudget b;
        b.multistarts = budget;
        b.seed = seed;
        json out;
        if (which == "positive" || which == "all") out["positive"] = to_json(is_positive(inst.op, b));
        if (which == "z" || which == "all") out["z"] = to_json(is_z(inst.op, b));
        if (which == "lyapunov_like" || which == "all")
          out["lyapunov_like"] = to_json(is_lyapunov_like(inst.op));
        if (out.empty()) throw InvalidInput("classify: unknown class '" + which + "'");
        return to_python(out);
      },
      py::arg("instance"), py::arg("which") = "all", py::arg("budget") = 64, py::arg("seed") = 0,
      "classify the operator (positive / Z / Lyapunov-like)");

  m.def(
      "irreducible",
      [](const py::dict& instance, const std::string& mode, int budget, uint64_t seed) {
        Instance inst = instance_from(instance);
        SearchBudget b;
        b.multistarts = budget;
        b.seed = seed;
        if (mode == "cone") return to_python(to_json(cone_irreducible(inst.op, b)));
        if (mode == "space") return to_python(to_json(space_irreducible(inst.op, b)));
        throw InvalidInput("irreducible: mode must be cone or space");
      },
      py::arg("instance"), py::arg("mode"), py::arg("budget") = 64, py::arg("seed") = 0,
      "decide cone- or space-irreducibility");

  m.def(
      "verify",
      [](const std::string& suite, uint64_t seed, int trials) {
        return to_python(to_json(run_suite(suite, seed, trials)));
      },
      py::arg("suite"), py::arg("seed") = 0, py::arg("trials") = 20,
      "run one verification suite");

  m.def("suites", [] {
    py::list out;
    for (const std::string& s : suite_names()) out.append(s);
    return out;
  });

  m.def("fixtures", [] {
    py::list out;
    for (const Instance& inst : builtin_fixtures()) out.append(to_python(instance_to_json(inst)));
    return out;
  });
}
