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

// JSON problem files, run reports and geodesic traces.
//
// Matrix literal:  {"n": 2, "re": [[...], ...], "im": [[...], ...]}  ("im" optional)
// Operator set:    {"n": 2, "operators": [<matrix literal>, ...]}
// Problem file:    {"lindblad": {...}, "rho0": <literal>, "rho1": <literal>,
//                   "config": {"K", "max_iter", "grad_tol", "eps_pd", "seed"}}

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "momt/geodesic.hpp"

namespace momt::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Parse failure; `path()` is the JSON path of the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string path, std::string code, const std::string& detail)
      : Error(code + " at " + path + ": " + detail), path_(std::move(path)), code_(std::move(code)) {}
  const std::string& path() const noexcept { return path_; }
  const std::string& code() const noexcept { return code_; }

 private:
  std::string path_;
  std::string code_;
};

struct ProblemConfig {
  int K = 32;
  int max_iter = 500;
  double grad_tol = 1e-7;
  double eps_pd = 1e-8;
  std::uint64_t seed = 20170101;
};

struct ProblemSpec {
  LindbladSet lindblad;
  std::optional<DensityMatrix> rho0;
  std::optional<DensityMatrix> rho1;
  ProblemConfig config;
};

CMatrix parse_matrix(const json& j, const std::string& path);
json matrix_to_json(const CMatrix& m);
LindbladSet parse_lindblad(const json& j, const std::string& path);
json lindblad_to_json(const LindbladSet& L);

/// Parses and validates a problem file. Endpoints are mandatory unless
/// `require_endpoints` is false.
ProblemSpec parse_problem(std::string_view text, bool require_endpoints = true);
json problem_to_json(const ProblemSpec& spec);

SolverConfig solver_config(const ProblemConfig& config);
json config_to_json(const ProblemConfig& config);

/// Full serialization of a solve: nodes, momenta, potentials, dual nodes.
json result_to_json(const GeodesicResult& result);
GeodesicResult result_from_json(const json& j);

/// Run report (schema_version 1). Deterministic for a given spec.
json run_report(const ProblemSpec& spec, const GeodesicResult& result);

/// Plot-ready trace: nodes with eigenvalues and matrices, per-interval
/// Hamiltonian values.
struct GeodesicTrace {
  int K = 0;
  std::vector<double> times;
  std::vector<std::vector<double>> eigenvalues;
  std::vector<CMatrix> densities;
  std::vector<double> hamiltonian;
  double distance = 0.0;
};

GeodesicTrace make_trace(const GeodesicResult& result);
json trace_to_json(const GeodesicTrace& trace);
GeodesicTrace parse_trace(std::string_view text);

/// Kernel dimension, basis norms, Poincare constant at I/n and the smallest
/// restricted eigenvalue of the weighted operator at each given endpoint.
json operator_info(const ProblemSpec& spec);

std::string tool_version();

}  // namespace momt::io
