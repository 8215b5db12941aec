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

#include "momt/action.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "momt/random.hpp"

namespace momt {

double ExtendedValue::value() const {
  if (!finite_) throw Error("ExtendedValue: value requested from an infinite value");
  return value_;
}

ExtendedValue kinetic(const HermitianMatrix& rho, const OperatorStack& m, double eps_pd) {
  if (rho.dim() != m.dim()) throw DimensionError("kinetic: dimension mismatch");
  const auto [values, vectors] = eigh(rho.matrix());
  if (values(0) < -eps_pd) return ExtendedValue::infinite();

  const Eigen::Index n = values.size();
  RVector inv = RVector::Zero(n);
  RVector null = RVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (values(i) > eps_pd)
      inv(i) = 1.0 / values(i);
    else
      null(i) = 1.0;
  }
  const CMatrix rho_pinv = vectors * inv.cast<Complex>().asDiagonal() * vectors.adjoint();

  if (null.sum() > 0.0) {
    const CMatrix p = vectors * null.cast<Complex>().asDiagonal() * vectors.adjoint();
    double leak = 0.0;
    for (const auto& b : m.blocks()) leak += (b * p).squaredNorm();
    if (std::sqrt(leak) > kCompatibilityTolerance * m.norm()) return ExtendedValue::infinite();
  }

  double s = 0.0;
  for (const auto& b : m.blocks()) s += inner_product(b, CMatrix(b * rho_pinv)).real();
  return ExtendedValue::finite(0.5 * s);
}

HermitianMatrix gram(const OperatorStack& b) {
  CMatrix g = CMatrix::Zero(b.dim(), b.dim());
  for (const auto& blk : b.blocks()) g += blk.adjoint() * blk;
  return HermitianMatrix::symmetrize(g);
}

bool legendre_feasible(const DualPoint& p, double tol) {
  if (p.a.dim() != p.b.dim()) throw DimensionError("legendre_feasible: dimension mismatch");
  return (p.a + 0.5 * gram(p.b)).max_eigenvalue() <= tol;
}

double fenchel_gap(const HermitianMatrix& rho, const OperatorStack& m, const DualPoint& p, double eps_pd) {
  if (!legendre_feasible(p)) throw Error("fenchel_gap: dual point violates a + b*b/2 <= 0");
  const ExtendedValue f = kinetic(rho, m, eps_pd);
  if (!f.is_finite()) throw Error("fenchel_gap: F(rho, m) is infinite");
  return f.value() - inner_product(p.a, rho) - symmetric_dot(p.b, m);
}

DualPoint subdifferential_point(const LindbladSet& L, const HermitianMatrix& x) {
  OperatorStack g = gradient(L, x);
  return {-0.5 * gram(g), std::move(g)};
}

bool trace_lower_bound(const HermitianMatrix& rho, const OperatorStack& m, double eps_pd) {
  const ExtendedValue f = kinetic(rho, m, eps_pd);
  if (!f.is_finite()) return true;
  const double tr = rho.trace();
  if (!(tr > 0.0)) throw Error("trace_lower_bound: weight must be nonzero PSD");
  return f.value() >= m.squared_norm() / (2.0 * tr) - 1e-10;
}

double conjugate_sup_estimate(const HermitianMatrix& rho, const OperatorStack& m, std::mt19937_64& rng,
                              int samples) {
  const double thr = kDefaultPdThreshold;
  const CMatrix pinv = pseudo_inverse(rho, thr);
  const CMatrix p_null = null_projector(rho, thr);
  auto value_at = [&](const OperatorStack& b) {
    // a = -b*b/2 sits exactly on the boundary of the conjugate domain.
    return -0.5 * inner_product(gram(b), rho) + symmetric_dot(b, m);
  };

  const OperatorStack b0 = m.right_multiply(pinv);
  const OperatorStack leak = m.right_multiply(p_null);
  double best = value_at(b0);
  if (leak.norm() > 0.0) {
    for (double t = 1.0; t <= 1e12; t *= 10.0) {
      OperatorStack b = b0;
      b += t * leak;
      best = std::max(best, value_at(b));
    }
  }
  const double scale = std::max(b0.norm(), 1.0);
  for (int s = 0; s < samples; ++s) {
    OperatorStack b = random_stack(m.dim(), m.count(), Flavor::General, rng);
    b *= scale * std::pow(10.0, uniform(rng, -6.0, 0.0)) / b.norm();
    b += b0;
    best = std::max(best, value_at(b));
  }
  return best;
}

ExtendedValue path_cost(const DiscretePath& path, double eps_pd) {
  const int K = path.intervals();
  if (K < 1 || path.densities.size() != static_cast<std::size_t>(K + 1))
    throw DimensionError("path_cost: need K >= 1 intervals and K + 1 densities");
  ExtendedValue total = ExtendedValue::finite(0.0);
  for (int k = 0; k < K; ++k)
    total = total + path.dt() * kinetic(path.midpoint(k), path.momenta[static_cast<std::size_t>(k)], eps_pd);
  return total;
}

}  // namespace momt
