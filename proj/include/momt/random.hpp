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

// Seeded samplers for the property suites.

#pragma once

#include <random>

#include "momt/hermitian.hpp"

namespace momt {

using Rng = std::mt19937_64;

/// Entries i.i.d. standard complex Gaussian.
CMatrix random_complex(int n, Rng& rng);
HermitianMatrix random_hermitian(int n, Rng& rng);
/// Haar-distributed unitary (QR of a complex Gaussian matrix, phase fixed).
CMatrix random_unitary(int n, Rng& rng);
/// Unit-trace density with every eigenvalue >= min_eig. Requires n*min_eig < 1.
DensityMatrix random_density(int n, Rng& rng, double min_eig = 0.05);
/// Random stack of the requested flavor.
OperatorStack random_stack(int n, int count, Flavor flavor, Rng& rng);
double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);

}  // namespace momt
