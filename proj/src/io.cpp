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

#include "momt/io.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>
#include <sstream>

#ifndef MOMT_VERSION
#define MOMT_VERSION "0.0.0"
#endif

namespace momt::io {

namespace {

void reject_unknown_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!ok.count(key)) throw ParseError(path + "." + key, "UnknownKey", "unexpected key '" + key + "'");
  }
}

const json& require_key(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw ParseError(path, "TypeError", "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "." + key, "MissingKey", std::string("missing key '") + key + "'");
  return *it;
}

int require_int(const json& j, const std::string& path, int lo) {
  if (!j.is_number_integer()) throw ParseError(path, "TypeError", "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo) throw ParseError(path, "RangeError", "must be at least " + std::to_string(lo));
  return static_cast<int>(v);
}

double require_positive(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "TypeError", "expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ParseError(path, "RangeError", "must be a positive finite number");
  return v;
}

RMatrix parse_real_rows(const json& j, const std::string& path, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    throw ParseError(path, "DimensionMismatch", "expected " + std::to_string(n) + " rows");
  RMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    const std::string rpath = path + "[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw ParseError(rpath, "DimensionMismatch", "expected " + std::to_string(n) + " entries");
    for (int k = 0; k < n; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number())
        throw ParseError(rpath + "[" + std::to_string(k) + "]", "TypeError", "expected a number");
      m(i, k) = v.get<double>();
    }
  }
  return m;
}

json real_rows(const RMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

HermitianMatrix parse_hermitian(const json& j, const std::string& path, int n) {
  const CMatrix m = parse_matrix(j, path);
  if (m.rows() != n)
    throw ParseError(path, "DimensionMismatch",
                     "matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.rows()) +
                         " but the operator set acts on " + std::to_string(n) + "x" + std::to_string(n));
  try {
    return HermitianMatrix(m);
  } catch (const SymmetryError& e) {
    throw ParseError(path, "SymmetryError", e.what());
  }
}

DensityMatrix parse_density(const json& j, const std::string& path, int n) {
  const HermitianMatrix h = parse_hermitian(j, path, n);
  try {
    return validate_density(h, false);
  } catch (const DensityError& e) {
    throw ParseError(path, e.kind_name(), e.what());
  }
}

json warnings_json(const std::vector<Warning>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back({{"code", w.code}, {"message", w.message}});
  return out;
}

}  // namespace

std::string tool_version() { return std::string("momt ") + MOMT_VERSION; }

CMatrix parse_matrix(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "TypeError", "expected a matrix literal object");
  reject_unknown_keys(j, path, {"n", "re", "im"});
  const int n = require_int(require_key(j, path, "n"), path + ".n", 1);
  const RMatrix re = parse_real_rows(require_key(j, path, "re"), path + ".re", n);
  RMatrix im = RMatrix::Zero(n, n);
  if (j.contains("im")) im = parse_real_rows(j.at("im"), path + ".im", n);
  CMatrix m(n, n);
  m.real() = re;
  m.imag() = im;
  return m;
}

json matrix_to_json(const CMatrix& m) {
  return {{"n", m.rows()}, {"re", real_rows(m.real())}, {"im", real_rows(m.imag())}};
}

LindbladSet parse_lindblad(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "TypeError", "expected an operator-set object");
  reject_unknown_keys(j, path, {"n", "operators"});
  const int n = require_int(require_key(j, path, "n"), path + ".n", 1);
  const json& ops = require_key(j, path, "operators");
  if (!ops.is_array() || ops.empty())
    throw ParseError(path + ".operators", "TypeError", "expected a non-empty array of matrix literals");
  std::vector<HermitianMatrix> list;
  for (std::size_t k = 0; k < ops.size(); ++k)
    list.push_back(parse_hermitian(ops[k], path + ".operators[" + std::to_string(k) + "]", n));
  return LindbladSet(std::move(list));
}

json lindblad_to_json(const LindbladSet& L) {
  json ops = json::array();
  for (const auto& l : L.operators()) ops.push_back(matrix_to_json(l));
  return {{"n", L.dim()}, {"operators", std::move(ops)}};
}

ProblemSpec parse_problem(std::string_view text, bool require_endpoints) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", "MalformedJSON", e.what());
  }
  if (!j.is_object()) throw ParseError("$", "TypeError", "problem file must be a JSON object");
  reject_unknown_keys(j, "$", {"lindblad", "rho0", "rho1", "config", "name", "description"});

  ProblemSpec spec{parse_lindblad(require_key(j, "$", "lindblad"), "$.lindblad"), std::nullopt, std::nullopt, {}};
  const int n = spec.lindblad.dim();
  for (const char* key : {"rho0", "rho1"}) {
    if (!j.contains(key)) {
      if (require_endpoints) require_key(j, "$", key);
      continue;
    }
    DensityMatrix rho = parse_density(j.at(key), std::string("$.") + key, n);
    (std::string(key) == "rho0" ? spec.rho0 : spec.rho1) = std::move(rho);
  }

  if (j.contains("config")) {
    const json& c = j.at("config");
    const std::string path = "$.config";
    if (!c.is_object()) throw ParseError(path, "TypeError", "expected an object");
    reject_unknown_keys(c, path, {"K", "max_iter", "grad_tol", "eps_pd", "seed"});
    if (c.contains("K")) spec.config.K = require_int(c.at("K"), path + ".K", 1);
    if (c.contains("max_iter")) spec.config.max_iter = require_int(c.at("max_iter"), path + ".max_iter", 0);
    if (c.contains("grad_tol")) spec.config.grad_tol = require_positive(c.at("grad_tol"), path + ".grad_tol");
    if (c.contains("eps_pd")) spec.config.eps_pd = require_positive(c.at("eps_pd"), path + ".eps_pd");
    if (c.contains("seed")) {
      if (!c.at("seed").is_number_unsigned())
        throw ParseError(path + ".seed", "TypeError", "expected a nonnegative integer");
      spec.config.seed = c.at("seed").get<std::uint64_t>();
    }
  }
  return spec;
}

json config_to_json(const ProblemConfig& c) {
  return {{"K", c.K}, {"max_iter", c.max_iter}, {"grad_tol", c.grad_tol}, {"eps_pd", c.eps_pd}, {"seed", c.seed}};
}

json problem_to_json(const ProblemSpec& spec) {
  json j = {{"lindblad", lindblad_to_json(spec.lindblad)}, {"config", config_to_json(spec.config)}};
  if (spec.rho0) j["rho0"] = matrix_to_json(spec.rho0->matrix());
  if (spec.rho1) j["rho1"] = matrix_to_json(spec.rho1->matrix());
  return j;
}

SolverConfig solver_config(const ProblemConfig& c) {
  SolverConfig s;
  s.intervals = c.K;
  s.max_iter = c.max_iter;
  s.grad_tol = c.grad_tol;
  s.eps_pd = c.eps_pd;
  return s;
}

// --- results -------------------------------------------------------------------

json result_to_json(const GeodesicResult& r) {
  json densities = json::array(), momenta = json::array(), potentials = json::array(), dual = json::array();
  for (const auto& d : r.path.densities) densities.push_back(matrix_to_json(d.matrix()));
  for (const auto& m : r.path.momenta) {
    json blocks = json::array();
    for (const auto& b : m.blocks()) blocks.push_back(matrix_to_json(b));
    momenta.push_back(std::move(blocks));
  }
  for (const auto& x : r.path.potentials) potentials.push_back(matrix_to_json(x.matrix()));
  for (const auto& l : r.dual_path.nodes) dual.push_back(matrix_to_json(l.matrix()));
  return {{"K", r.path.intervals()},
          {"distance", r.distance},
          {"primal_cost", r.primal_cost},
          {"action", r.action},
          {"dual_value", r.dual_value},
          {"gap", r.gap},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"grad_norm", r.grad_norm},
          {"continuity_residual", r.continuity_residual},
          {"hamiltonian", r.hamiltonian},
          {"warnings", warnings_json(r.warnings)},
          {"densities", std::move(densities)},
          {"momenta", std::move(momenta)},
          {"potentials", std::move(potentials)},
          {"dual_nodes", std::move(dual)}};
}

GeodesicResult result_from_json(const json& j) {
  GeodesicResult r;
  r.distance = j.at("distance").get<double>();
  r.primal_cost = j.at("primal_cost").get<double>();
  r.action = j.at("action").get<double>();
  r.dual_value = j.at("dual_value").get<double>();
  r.gap = j.at("gap").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.grad_norm = j.at("grad_norm").get<double>();
  r.continuity_residual = j.at("continuity_residual").get<double>();
  r.hamiltonian = j.at("hamiltonian").get<std::vector<double>>();
  for (const auto& w : j.at("warnings")) r.warnings.push_back({w.at("code"), w.at("message")});
  for (std::size_t k = 0; k < j.at("densities").size(); ++k)
    r.path.densities.push_back(validate_density(
        HermitianMatrix(parse_matrix(j.at("densities")[k], "$.densities[" + std::to_string(k) + "]")), false, 1e-8));
  for (const auto& blocks : j.at("momenta")) {
    std::vector<CMatrix> bs;
    for (const auto& b : blocks) bs.push_back(parse_matrix(b, "$.momenta"));
    r.path.momenta.emplace_back(std::move(bs));
  }
  for (const auto& x : j.at("potentials")) r.path.potentials.emplace_back(parse_matrix(x, "$.potentials"));
  for (const auto& l : j.at("dual_nodes")) r.dual_path.nodes.emplace_back(parse_matrix(l, "$.dual_nodes"));
  return r;
}

json run_report(const ProblemSpec& spec, const GeodesicResult& result) {
  const HamiltonianProfile prof = hamiltonian_profile(result);
  const double rel_gap = result.primal_cost > 0.0 ? result.gap / result.primal_cost : 0.0;
  return {{"schema_version", kSchemaVersion},
          {"tool_version", tool_version()},
          {"config", config_to_json(spec.config)},
          {"kernel_dim", spec.lindblad.kernel_dim()},
          {"distance", result.distance},
          {"action", result.action},
          {"primal_cost", result.primal_cost},
          {"dual_value", result.dual_value},
          {"gap", result.gap},
          {"rel_gap", rel_gap},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"grad_norm", result.grad_norm},
          {"continuity_residual", result.continuity_residual},
          {"hamiltonian",
           {{"values", prof.values}, {"mean", prof.mean}, {"rel_std", prof.rel_std}, {"speed_ok", prof.speed_ok}}},
          {"warnings", warnings_json(result.warnings)},
          {"trace", trace_to_json(make_trace(result))},
          {"result", result_to_json(result)}};
}

// --- traces --------------------------------------------------------------------

GeodesicTrace make_trace(const GeodesicResult& result) {
  GeodesicTrace t;
  t.K = result.path.intervals();
  t.distance = result.distance;
  t.hamiltonian = result.hamiltonian;
  for (int k = 0; k <= t.K; ++k) {
    const auto& rho = result.path.densities[static_cast<std::size_t>(k)];
    t.times.push_back(result.path.time(k));
    const RVector ev = rho.hermitian().eigenvalues();
    t.eigenvalues.emplace_back(ev.data(), ev.data() + ev.size());
    t.densities.push_back(rho.matrix());
  }
  return t;
}

json trace_to_json(const GeodesicTrace& t) {
  json nodes = json::array();
  for (std::size_t k = 0; k < t.densities.size(); ++k)
    nodes.push_back({{"t", t.times[k]}, {"eigenvalues", t.eigenvalues[k]}, {"density", matrix_to_json(t.densities[k])}});
  return {{"schema_version", kSchemaVersion},
          {"K", t.K},
          {"distance", t.distance},
          {"hamiltonian", t.hamiltonian},
          {"nodes", std::move(nodes)}};
}

GeodesicTrace parse_trace(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", "MalformedJSON", e.what());
  }
  reject_unknown_keys(j, "$", {"schema_version", "K", "distance", "hamiltonian", "nodes"});
  if (require_int(require_key(j, "$", "schema_version"), "$.schema_version", 1) != kSchemaVersion)
    throw ParseError("$.schema_version", "UnsupportedVersion", "unsupported trace schema");
  GeodesicTrace t;
  t.K = require_int(require_key(j, "$", "K"), "$.K", 1);
  t.distance = require_key(j, "$", "distance").get<double>();
  t.hamiltonian = require_key(j, "$", "hamiltonian").get<std::vector<double>>();
  const json& nodes = require_key(j, "$", "nodes");
  if (!nodes.is_array() || static_cast<int>(nodes.size()) != t.K + 1)
    throw ParseError("$.nodes", "DimensionMismatch", "expected K + 1 nodes");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const std::string path = "$.nodes[" + std::to_string(k) + "]";
    reject_unknown_keys(nodes[k], path, {"t", "eigenvalues", "density"});
    t.times.push_back(require_key(nodes[k], path, "t").get<double>());
    t.eigenvalues.push_back(require_key(nodes[k], path, "eigenvalues").get<std::vector<double>>());
    t.densities.push_back(parse_matrix(require_key(nodes[k], path, "density"), path + ".density"));
  }
  return t;
}

// --- operator diagnostics --------------------------------------------------------

json operator_info(const ProblemSpec& spec) {
  const LindbladSet& L = spec.lindblad;
  const int n = L.dim();
  json norms = json::array();
  for (const auto& b : L.kernel_basis()) norms.push_back(b.norm());
  const RVector& sv = L.singular_values();

  json warnings = json::array();
  if (L.kernel_dim() > 1)
    warnings.push_back({{"code", "kernel-dim"},
                        {"message", "ker(grad) has dimension " + std::to_string(L.kernel_dim()) +
                                        "; distances are only finite between endpoints whose difference is "
                                        "orthogonal to it"}});

  const PoincareConstant pc = poincare_constant(L, DensityMatrix::maximally_mixed(n).hermitian());
  if (pc.degenerate)
    warnings.push_back({{"code", "degenerate-weight"},
                        {"message", "ker(grad)^perp is trivial or the weight is singular; the Poincare "
                                    "constant degenerates to 0"}});

  json weighted = json::array();
  auto add_weight = [&](const char* which, const DensityMatrix& rho) {
    const WeightedOperator w(L, rho.hermitian());
    weighted.push_back({{"weight", which},
                        {"restricted_min_eig", w.restricted_min_eig()},
                        {"definite", w.definite_weight()}});
  };
  add_weight("maximally_mixed", DensityMatrix::maximally_mixed(n));
  if (spec.rho0) add_weight("rho0", *spec.rho0);
  if (spec.rho1) add_weight("rho1", *spec.rho1);

  json out = {{"schema_version", kSchemaVersion},
              {"tool_version", tool_version()},
              {"n", n},
              {"count", L.count()},
              {"kernel_dim", L.kernel_dim()},
              {"kernel_basis_norms", std::move(norms)},
              {"singular_values", std::vector<double>(sv.data(), sv.data() + sv.size())},
              {"poincare_constant_mixed", {{"value", pc.value}, {"degenerate", pc.degenerate}}},
              {"weighted", std::move(weighted)},
              {"warnings", std::move(warnings)}};
  if (spec.rho0 && spec.rho1) out["feasibility_gap"] = feasibility_gap(L, *spec.rho0, *spec.rho1);
  return out;
}

}  // namespace momt::io
