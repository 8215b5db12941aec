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

#pragma once

#include <vector>

#include "momt/hermitian.hpp"

namespace momt {

/// Piecewise-linear density path on the uniform grid t_k = k/K with one
/// momentum (and optionally one potential) per interval.
struct DiscretePath {
  std::vector<DensityMatrix> densities;  // K + 1 nodes
  std::vector<OperatorStack> momenta;    // K intervals
  std::vector<HermitianMatrix> potentials;  // K intervals, or empty

  int intervals() const noexcept { return static_cast<int>(momenta.size()); }
  double dt() const noexcept { return 1.0 / intervals(); }
  double time(int k) const noexcept { return static_cast<double>(k) / intervals(); }
  bool has_potentials() const noexcept { return !potentials.empty(); }
  /// (rho_k + rho_{k+1})/2.
  HermitianMatrix midpoint(int k) const;
};

/// Node values of a candidate Hamilton-Jacobi subsolution.
struct DualPath {
  std::vector<HermitianMatrix> nodes;  // K + 1

  int intervals() const noexcept { return static_cast<int>(nodes.size()) - 1; }
  double dt() const noexcept { return 1.0 / intervals(); }
  HermitianMatrix midpoint(int k) const;
};

inline HermitianMatrix DiscretePath::midpoint(int k) const {
  const auto i = static_cast<std::size_t>(k);
  return 0.5 * (densities.at(i).hermitian() + densities.at(i + 1).hermitian());
}

inline HermitianMatrix DualPath::midpoint(int k) const {
  const auto i = static_cast<std::size_t>(k);
  return 0.5 * (nodes.at(i) + nodes.at(i + 1));
}

}  // namespace momt
