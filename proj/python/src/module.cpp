// Copyright 2026 The momt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "momt/io.hpp"
#include "momt/verify.hpp"

namespace py = pybind11;
using namespace momt;

namespace {

using Blocks = std::vector<CMatrix>;

DensityMatrix to_density(const CMatrix& a) { return validate_density(HermitianMatrix(a), false); }

Blocks to_blocks(const OperatorStack& s) { return Blocks(s.blocks().begin(), s.blocks().end()); }

double extended(const ExtendedValue& v) {
  return v.is_finite() ? v.value() : std::numeric_limits<double>::infinity();
}

SolverConfig make_config(int K, int max_iter, double grad_tol, double eps_pd, const std::string& method) {
  SolverConfig c;
  c.intervals = K;
  c.max_iter = max_iter;
  c.grad_tol = grad_tol;
  c.eps_pd = eps_pd;
  if (method == "newton") {
    c.method = Method::Newton;
  } else if (method == "lbfgs") {
    c.method = Method::LBFGS;
  } else {
    throw Error("unknown method '" + method + "' (expected 'newton' or 'lbfgs')");
  }
  return c;
}

py::dict result_dict(const GeodesicResult& r) {
  py::dict d;
  d["distance"] = r.distance;
  d["primal_cost"] = r.primal_cost;
  d["action"] = r.action;
  d["dual_value"] = r.dual_value;
  d["gap"] = r.gap;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["grad_norm"] = r.grad_norm;
  d["continuity_residual"] = r.continuity_residual;
  d["hamiltonian"] = r.hamiltonian;
  std::vector<CMatrix> nodes;
  for (const auto& rho : r.path.densities) nodes.push_back(rho.matrix());
  d["nodes"] = nodes;
  std::vector<Blocks> momenta;
  for (const auto& m : r.path.momenta) momenta.push_back(to_blocks(m));
  d["momenta"] = momenta;
  py::list warnings;
  for (const auto& w : r.warnings) warnings.append(py::make_tuple(w.code, w.message));
  d["warnings"] = warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_momt, m) {
  m.doc() = "Transport distances between density matrices under a Lindblad operator set.";

  // Translators run newest first, so the base class is registered first.
  auto& base_error = py::register_exception<Error>(m, "MomtError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base_error.ptr());
  py::register_exception<io::ParseError>(m, "ParseError", base_error.ptr());

  py::class_<LindbladSet>(m, "LindbladSet")
      .def(py::init([](const Blocks& ops) {
             std::vector<HermitianMatrix> h;
             for (const auto& o : ops) h.emplace_back(o);
             return LindbladSet(std::move(h));
           }),
           py::arg("operators"))
      .def_static("pauli", &LindbladSet::pauli)
      .def_property_readonly("dim", &LindbladSet::dim)
      .def_property_readonly("count", &LindbladSet::count)
      .def_property_readonly("kernel_dim", &LindbladSet::kernel_dim)
      .def_property_readonly("operators", [](const LindbladSet& L) { return Blocks(L.operators().begin(), L.operators().end()); })
      .def_property_readonly("kernel_basis",
                             [](const LindbladSet& L) {
                               Blocks out;
                               for (const auto& b : L.kernel_basis()) out.push_back(b.matrix());
                               return out;
                             })
      .def("__repr__", [](const LindbladSet& L) {
        return "<LindbladSet n=" + std::to_string(L.dim()) + " N=" + std::to_string(L.count()) + ">";
      });

  m.def(
      "gradient", [](const LindbladSet& L, const CMatrix& x) { return to_blocks(gradient(L, HermitianMatrix(x))); },
      py::arg("L"), py::arg("x"));
  m.def(
      "divergence",
      [](const LindbladSet& L, const Blocks& y) { return divergence(L, OperatorStack(y, Flavor::Skew)).matrix(); },
      py::arg("L"), py::arg("y"));
  m.def(
      "laplacian", [](const LindbladSet& L, const CMatrix& x) { return laplacian(L, HermitianMatrix(x)).matrix(); },
      py::arg("L"), py::arg("x"));
  m.def(
      "project_kernel",
      [](const LindbladSet& L, const CMatrix& x) { return project_kernel(L, HermitianMatrix(x)).matrix(); },
      py::arg("L"), py::arg("x"));
  m.def(
      "heat_flow",
      [](const LindbladSet& L, const CMatrix& rho0, double T, int steps, std::optional<CMatrix> h) {
        std::optional<HermitianMatrix> ham;
        if (h) ham = HermitianMatrix(*h);
        return heat_flow(L, to_density(rho0), T, steps, ham).matrix();
      },
      py::arg("L"), py::arg("rho0"), py::arg("T"), py::arg("steps"), py::arg("hamiltonian") = py::none());

  m.def(
      "poincare_constant",
      [](const LindbladSet& L, const CMatrix& rho) { return poincare_constant(L, HermitianMatrix(rho)).value; },
      py::arg("L"), py::arg("rho"));
  m.def(
      "solve_potential",
      [](const LindbladSet& L, const CMatrix& rho, const CMatrix& f) {
        return solve_potential(WeightedOperator(L, HermitianMatrix(rho)), HermitianMatrix(f)).matrix();
      },
      py::arg("L"), py::arg("rho"), py::arg("f"));
  m.def(
      "kinetic", [](const CMatrix& rho, const Blocks& m) { return extended(kinetic(HermitianMatrix(rho), OperatorStack(m))); },
      py::arg("rho"), py::arg("m"));
  m.def(
      "feasibility_gap",
      [](const LindbladSet& L, const CMatrix& a, const CMatrix& b) {
        return feasibility_gap(L, HermitianMatrix(a), HermitianMatrix(b));
      },
      py::arg("L"), py::arg("rho0"), py::arg("rho1"));

  m.def(
      "geodesic",
      [](const LindbladSet& L, const CMatrix& rho0, const CMatrix& rho1, int K, int max_iter, double grad_tol,
         double eps_pd, const std::string& method) {
        const SolverConfig c = make_config(K, max_iter, grad_tol, eps_pd, method);
        GeodesicResult r;
        {
          py::gil_scoped_release release;
          r = optimize_geodesic(L, to_density(rho0), to_density(rho1), c);
        }
        return result_dict(r);
      },
      py::arg("L"), py::arg("rho0"), py::arg("rho1"), py::arg("K") = 32, py::arg("max_iter") = 500,
      py::arg("grad_tol") = 1e-7, py::arg("eps_pd") = 1e-8, py::arg("method") = "newton");
  m.def(
      "distance",
      [](const LindbladSet& L, const CMatrix& rho0, const CMatrix& rho1, int K) {
        SolverConfig c;
        c.intervals = K;
        py::gil_scoped_release release;
        return distance(L, to_density(rho0), to_density(rho1), c);
      },
      py::arg("L"), py::arg("rho0"), py::arg("rho1"), py::arg("K") = 32);

  m.def(
      "run_distance",
      [](const std::string& text) {
        const auto spec = io::parse_problem(text);
        GeodesicResult r;
        {
          py::gil_scoped_release release;
          r = optimize_geodesic(spec.lindblad, *spec.rho0, *spec.rho1, io::solver_config(spec.config));
        }
        return io::run_report(spec, r).dump();
      },
      py::arg("text"), "Solves a problem file given as JSON text; returns the run report as JSON text.");
  m.def(
      "operator_info", [](const std::string& text) { return io::operator_info(io::parse_problem(text, false)).dump(); },
      py::arg("text"));
  m.def(
      "verify",
      [](const std::string& text, const std::string& suite, int cases) {
        const auto spec = io::parse_problem(text, false);
        verify::Options o;
        o.seed = spec.config.seed;
        o.cases = cases;
        o.rho0 = spec.rho0;
        o.rho1 = spec.rho1;
        o.solver = io::solver_config(spec.config);
        std::vector<verify::PropertyResult> results;
        {
          py::gil_scoped_release release;
          results = verify::run_suite(spec.lindblad, suite, o);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["suite"] = r.suite;
          d["name"] = r.name;
          d["status"] = verify::status_name(r.status);
          d["worst"] = r.worst;
          d["tolerance"] = r.tolerance;
          d["cases"] = r.cases;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("text"), py::arg("suite") = "all", py::arg("cases") = 200);

  m.attr("__version__") = io::tool_version();
}
