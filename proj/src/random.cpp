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

#include "momt/random.hpp"

#include <cmath>

namespace momt {

CMatrix random_complex(int n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = g(rng);
      const double im = g(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

HermitianMatrix random_hermitian(int n, Rng& rng) {
  return HermitianMatrix::symmetrize(random_complex(n, rng));
}

CMatrix random_unitary(int n, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_complex(n, rng));
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

DensityMatrix random_density(int n, Rng& rng, double min_eig) {
  if (!(min_eig >= 0.0) || n * min_eig >= 1.0) throw Error("random_density: need 0 <= n*min_eig < 1");
  std::exponential_distribution<double> e(1.0);
  RVector w(n);
  for (int i = 0; i < n; ++i) w(i) = e(rng);
  w /= w.sum();
  const RVector p = RVector::Constant(n, min_eig) + (1.0 - n * min_eig) * w;
  const CMatrix u = random_unitary(n, rng);
  CMatrix rho = u * p.cast<Complex>().asDiagonal() * u.adjoint();
  rho /= rho.trace().real();
  return validate_density(HermitianMatrix::symmetrize(rho), false);
}

OperatorStack random_stack(int n, int count, Flavor flavor, Rng& rng) {
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) blocks.push_back(random_complex(n, rng));
  return OperatorStack::project(std::move(blocks), flavor);
}

}  // namespace momt
