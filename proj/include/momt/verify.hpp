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

// Seeded property suites over a user-supplied operator set.
//
//   calculus      inner products, gradient/divergence/laplacian identities,
//                 kernel projection, weighted quadratic form identities
//   duality       weighted elliptic solve, min-max characterization,
//                 kinetic functional and its conjugate, certified gap
//   conservation  properties of solver iterates and of the converged path

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "momt/geodesic.hpp"

namespace momt::verify {

enum class Status { Pass, Fail, Skip };

const char* status_name(Status s) noexcept;

struct PropertyResult {
  std::string suite;
  std::string name;
  Status status = Status::Skip;
  /// Largest observed error or violation (in the units of `tolerance`).
  double worst = 0.0;
  double tolerance = 0.0;
  int cases = 0;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 20170101;
  /// Number of random cases for the sampled identities.
  int cases = 200;
  /// Endpoints for the solver-backed properties; skipped when absent.
  std::optional<DensityMatrix> rho0;
  std::optional<DensityMatrix> rho1;
  SolverConfig solver;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"calculus", "duality", "conservation"};
  return names;
}

std::vector<PropertyResult> run_calculus(const LindbladSet& L, const Options& options);
std::vector<PropertyResult> run_duality(const LindbladSet& L, const Options& options);
std::vector<PropertyResult> run_conservation(const LindbladSet& L, const Options& options);

/// `suite` is one of suite_names() or "all". Throws Error on unknown names.
std::vector<PropertyResult> run_suite(const LindbladSet& L, const std::string& suite, const Options& options);

bool all_passed(const std::vector<PropertyResult>& results);

}  // namespace momt::verify
