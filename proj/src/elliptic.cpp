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

#include "momt/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "momt/random.hpp"

namespace momt {

namespace {

void require_psd(const HermitianMatrix& rho, double eps_pd, const char* op) {
  const double lo = rho.min_eigenvalue();
  if (lo < -eps_pd) {
    std::ostringstream os;
    os << op << ": weight is not positive semidefinite (smallest eigenvalue " << lo << ")";
    throw WeightError(os.str());
  }
}

}  // namespace

double quadratic_form(const HermitianMatrix& rho, const OperatorStack& v, double eps_pd) {
  if (rho.dim() != v.dim()) throw DimensionError("quadratic_form: dimension mismatch");
  require_psd(rho, eps_pd, "quadratic_form");
  double q = 0.0;
  for (const auto& b : v.blocks()) q += inner_product(CMatrix(b * rho.matrix()), b).real();
  return q;
}

OperatorStack anticommutator_product(const HermitianMatrix& rho, const OperatorStack& v) {
  if (rho.dim() != v.dim()) throw DimensionError("anticommutator_product: dimension mismatch");
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(v.count()));
  const CMatrix& r = rho.matrix();
  for (const auto& b : v.blocks()) out.emplace_back(0.5 * (b * r + r * b));
  // {v, rho} stays skew (resp. Hermitian) when v is.
  return OperatorStack::project(std::move(out), v.flavor());
}

// --- WeightedOperator --------------------------------------------------------

WeightedOperator::WeightedOperator(LindbladSet lindblad, HermitianMatrix rho, double eps_pd)
    : L_(std::move(lindblad)), rho_(std::move(rho)) {
  if (rho_.dim() != L_.dim()) throw DimensionError("assemble_weighted: dimension mismatch");
  require_psd(rho_, eps_pd, "assemble_weighted");
  definite_ = rho_.min_eigenvalue() > eps_pd;

  const int n = L_.dim();
  const int d = n * n;
  rep_.resize(d, d);
  for (int j = 0; j < d; ++j) rep_.col(j) = vectorize(apply(devectorize(RVector::Unit(d, j), n)));

  const RMatrix& c = L_.complement_vectors();
  restricted_ = c.transpose() * (0.5 * (rep_ + rep_.transpose())) * c;
  if (restricted_.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<RMatrix> es(restricted_, Eigen::EigenvaluesOnly);
    min_eig_ = es.eigenvalues()(0);
    factor_.compute(restricted_);
  }
}

HermitianMatrix WeightedOperator::apply(const HermitianMatrix& x) const {
  return divergence(L_, anticommutator_product(rho_, gradient(L_, x)));
}

WeightedOperator assemble_weighted(const LindbladSet& L, const HermitianMatrix& rho, double eps_pd) {
  return WeightedOperator(L, rho, eps_pd);
}

HermitianMatrix solve_potential(const WeightedOperator& w, const HermitianMatrix& f) {
  const LindbladSet& L = w.lindblad();
  if (f.dim() != L.dim()) throw DimensionError("solve_potential: dimension mismatch");
  const double fnorm = f.norm();
  const double knorm = project_kernel(L, f).norm();
  if (knorm > 1e-10 * fnorm + 1e-14) {
    std::ostringstream os;
    os << "solve_potential: right-hand side has a ker(grad) component of norm " << knorm
       << "; only differences orthogonal to the commutant of the operator set are reachable";
    throw InfeasibleError(knorm, os.str());
  }
  if (!w.definite_weight())
    throw WeightError("solve_potential: weight is singular; the potential is not unique");
  const RMatrix& c = L.complement_vectors();
  if (c.cols() == 0 || fnorm == 0.0) return HermitianMatrix::zero(L.dim());
  const RVector rhs = c.transpose() * vectorize(f);
  const RVector coords = w.factor_.solve(rhs);
  return devectorize(c * coords, L.dim());
}

HermitianMatrix solve_potential_cg(const WeightedOperator& w, const HermitianMatrix& f,
                                   const HermitianMatrix& initial, double tol, int max_iter) {
  const LindbladSet& L = w.lindblad();
  if (!w.definite_weight()) throw WeightError("solve_potential_cg: weight is singular");
  const RMatrix& c = L.complement_vectors();
  if (c.cols() == 0) return HermitianMatrix::zero(L.dim());
  const RMatrix& a = w.restricted_matrix();
  const RVector b = c.transpose() * vectorize(f);
  RVector x = c.transpose() * vectorize(initial);
  RVector r = b - a * x;
  RVector p = r;
  double rr = r.squaredNorm();
  const double stop = tol * tol * std::max(b.squaredNorm(), 1.0);
  for (int it = 0; it < max_iter && rr > stop; ++it) {
    const RVector ap = a * p;
    const double alpha = rr / p.dot(ap);
    x += alpha * p;
    r -= alpha * ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return devectorize(c * x, L.dim());
}

double potential_residual(const WeightedOperator& w, const HermitianMatrix& x, const HermitianMatrix& f) {
  return (w.apply(x) - f).norm();
}

// --- Poincare-Wirtinger --------------------------------------------------------

PoincareConstant poincare_constant(const LindbladSet& L, const HermitianMatrix& rho, double eps_pd) {
  const WeightedOperator w(L, rho, eps_pd);
  if (!w.definite_weight() || L.complement_vectors().cols() == 0) return {0.0, true};
  return {w.restricted_min_eig(), false};
}

PoincareConstant poincare_constant(const LindbladSet& L, std::span<const DensityMatrix> samples,
                                   double eps_pd) {
  if (samples.empty()) throw Error("poincare_constant: empty sample set");
  PoincareConstant best{std::numeric_limits<double>::infinity(), false};
  for (const auto& rho : samples) {
    const PoincareConstant c = poincare_constant(L, rho.hermitian(), eps_pd);
    if (c.degenerate) return c;
    best.value = std::min(best.value, c.value);
  }
  return best;
}

HermitianMatrix best_gradient_fit(const LindbladSet& L, const HermitianMatrix& rho, const OperatorStack& v) {
  if (v.flavor() != Flavor::Skew) throw FlavorError("best_gradient_fit: expected a skew-stack");
  const WeightedOperator w(L, rho);
  const HermitianMatrix f = divergence(L, anticommutator_product(rho, v));
  return solve_potential(w, f);
}

// --- momenta -------------------------------------------------------------------

namespace {

double half_kinetic(const OperatorStack& m, const CMatrix& rho_inv) {
  double s = 0.0;
  for (const auto& b : m.blocks()) s += inner_product(b, CMatrix(b * rho_inv)).real();
  return 0.5 * s;
}

}  // namespace

MomentumMinimum momentum_min_check(const LindbladSet& L, const DensityMatrix& rho, const HermitianMatrix& f,
                                   std::mt19937_64& rng, int probes) {
  const WeightedOperator w(L, rho.hermitian());
  MomentumMinimum out;
  out.potential = solve_potential(w, f);
  const OperatorStack gx = gradient(L, out.potential);
  out.optimal_m = gx.right_multiply(rho.matrix());
  const CMatrix rho_inv = rho.matrix().inverse();
  out.primal_min = half_kinetic(out.optimal_m, rho_inv);
  out.dual_max = inner_product(f, out.potential) - 0.5 * quadratic_form(rho.hermitian(), gx);

  out.best_probe = std::numeric_limits<double>::infinity();
  const double scale = std::max(out.optimal_m.norm(), 1.0);
  for (int p = 0; p < probes; ++p) {
    OperatorStack delta = random_stack(L.dim(), L.count(), Flavor::General, rng);
    std::vector<CMatrix> herm, skew;
    for (const auto& b : delta.blocks()) {
      herm.emplace_back(0.5 * (b + CMatrix(b.adjoint())));
      skew.emplace_back(0.5 * (b - CMatrix(b.adjoint())));
    }
    const OperatorStack skew_free =
        project_divergence_free(L, OperatorStack(std::move(skew), Flavor::Skew));
    OperatorStack d = OperatorStack(std::move(herm)) + skew_free;
    const double size = scale * std::pow(10.0, uniform(rng, -3.0, 0.0));
    d *= size / std::max(d.norm(), 1e-300);
    out.best_probe = std::min(out.best_probe, half_kinetic(out.optimal_m + d, rho_inv));
    ++out.probes;
  }
  return out;
}

}  // namespace momt
