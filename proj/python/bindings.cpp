// pybind11 surface: instances cross as JSON text, points as nested sequences.
#include <algorithm>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dclust/errors.hpp"
#include "dclust/io.hpp"
#include "dclust/oracle.hpp"
#include "dclust/scheme.hpp"

namespace py = pybind11;
using namespace dclust;

namespace {

ClusteringInstance points_instance(const std::vector<std::vector<double>>& points, const std::string& objective,
                                   int k, std::int64_t z, double opening_cost, int doubling_dim) {
  if (points.empty()) throw ParameterError("no points");
  const std::size_t dim = points[0].size();
  std::vector<double> flat;
  flat.reserve(points.size() * dim);
  for (const auto& p : points) {
    if (p.size() != dim || dim == 0) throw ParameterError("points must share one positive dimension");
    flat.insert(flat.end(), p.begin(), p.end());
  }
  auto m = std::make_shared<const MetricSpace>(
      MetricSpace::euclidean(std::move(flat), static_cast<int>(dim), doubling_dim));
  auto inst = ClusteringInstance::all_points(m, objective_from_string(objective), k, opening_cost);
  inst.z = z;
  inst.validate();
  return inst;
}

std::string solve(const std::string& instance_json, double epsilon, std::uint64_t seed, double rho) {
  const ClusteringInstance inst = instance_from_json(nlohmann::json::parse(instance_json));
  SchemeOptions opt;
  opt.epsilon = epsilon;
  opt.seed = seed;
  opt.rho = rho;
  SchemeResult r;
  {
    py::gil_scoped_release release;
    r = run_scheme(inst, opt);
  }
  nlohmann::json j = solution_to_json(r.solution);
  j["guide"] = solution_to_json(r.guide);
  j["declared_cost"] = r.declared_cost;
  j["centers"] = r.centers;
  j["relocated"] = r.relocated;
  j["subinstances"] = r.subinstances;
  j["round_costs"] = r.round_costs;
  return j.dump();
}

std::string exact(const std::string& instance_json, double max_subsets) {
  const ClusteringInstance inst = instance_from_json(nlohmann::json::parse(instance_json));
  OracleCaps caps;
  caps.max_subsets = max_subsets;
  return solution_to_json(exact_solve(inst, caps)).dump();
}

std::string evaluate_set(const std::string& instance_json, const std::vector<int>& facilities) {
  const ClusteringInstance inst = instance_from_json(nlohmann::json::parse(instance_json));
  std::vector<int> f = facilities;
  std::sort(f.begin(), f.end());
  for (int x : f)
    if (x < 0 || x >= static_cast<int>(inst.facilities.size())) throw ParameterError("facility index out of range");
  return solution_to_json(evaluate(inst, f)).dump();
}

std::string decompose(const std::string& instance_json, double rho, std::uint64_t seed) {
  const ClusteringInstance inst = instance_from_json(nlohmann::json::parse(instance_json));
  return decomposition_to_json(Decomposition::build(inst.metric, rho, seed)).dump();
}

}  // namespace

PYBIND11_MODULE(_dclust, m) {
  m.doc() = "Clustering approximation schemes in doubling metrics";
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);

  m.def("points_instance",
        [](const std::vector<std::vector<double>>& points, const std::string& objective, int k, std::int64_t z,
           double opening_cost, int doubling_dim) {
          return export_instance(points_instance(points, objective, k, z, opening_cost, doubling_dim)).dump();
        },
        py::arg("points"), py::arg("objective"), py::arg("k") = 0, py::arg("z") = 0, py::arg("opening_cost") = 1.0,
        py::arg("doubling_dim") = 2);
  m.def("parse_instance",
        [](const std::string& text, const std::string& format, const std::string& objective, int k, std::int64_t z,
           double opening_cost, int doubling_dim) {
          IngestOptions o;
          o.format = input_format_from_string(format);
          o.objective = objective_from_string(objective);
          o.k = k;
          o.z = z;
          o.opening_cost = opening_cost;
          o.doubling_dimension = doubling_dim;
          return export_instance(ingest_text(text, o)).dump();
        },
        py::arg("text"), py::arg("format"), py::arg("objective"), py::arg("k") = 0, py::arg("z") = 0,
        py::arg("opening_cost") = 1.0, py::arg("doubling_dim") = 2);
  m.def("solve", &solve, py::arg("instance"), py::arg("epsilon") = 0.3, py::arg("seed") = 0, py::arg("rho") = 0.0);
  m.def("exact", &exact, py::arg("instance"), py::arg("max_subsets") = 1e6);
  m.def("evaluate", &evaluate_set, py::arg("instance"), py::arg("facilities"));
  m.def("decompose", &decompose, py::arg("instance"), py::arg("rho"), py::arg("seed") = 0);
}
