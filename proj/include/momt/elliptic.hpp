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

// Weighted elliptic machinery: the quadratic form Q_rho(v) = tr(rho v* v),
// the operator X -> (1/2) div(grad(X) rho + rho grad(X)) and its inverse on
// ker(grad)^perp, the Poincare-Wirtinger constant, and the variational
// characterization of optimal momenta.

#pragma once

#include <random>
#include <span>

#include "momt/lindblad.hpp"

namespace momt {

/// tr(rho v* v) = <v rho; v>. Throws WeightError if rho has an eigenvalue
/// below -eps_pd.
double quadratic_form(const HermitianMatrix& rho, const OperatorStack& v,
                      double eps_pd = kDefaultPdThreshold);

/// M_rho(v) = (v rho + rho v)/2, blockwise.
OperatorStack anticommutator_product(const HermitianMatrix& rho, const OperatorStack& v);

/// X -> (1/2) div(grad(X) rho + rho grad(X)) assembled for one weight rho.
class WeightedOperator {
 public:
  WeightedOperator(LindbladSet lindblad, HermitianMatrix rho, double eps_pd = kDefaultPdThreshold);

  const LindbladSet& lindblad() const noexcept { return L_; }
  const HermitianMatrix& weight() const noexcept { return rho_; }
  /// n^2 x n^2 matrix in the library vectorization.
  const RMatrix& matrix_rep() const noexcept { return rep_; }
  /// The operator expressed in the orthonormal basis of ker(grad)^perp.
  const RMatrix& restricted_matrix() const noexcept { return restricted_; }
  /// Smallest eigenvalue on ker(grad)^perp; 0 when the complement is trivial.
  double restricted_min_eig() const noexcept { return min_eig_; }
  /// True when the weight is positive definite beyond eps_pd.
  bool definite_weight() const noexcept { return definite_; }

  /// Direct (matrix-free) evaluation.
  HermitianMatrix apply(const HermitianMatrix& x) const;

 private:
  friend HermitianMatrix solve_potential(const WeightedOperator&, const HermitianMatrix&);
  LindbladSet L_;
  HermitianMatrix rho_;
  RMatrix rep_;
  RMatrix restricted_;
  Eigen::LLT<RMatrix> factor_;
  double min_eig_ = 0.0;
  bool definite_ = false;
};

WeightedOperator assemble_weighted(const LindbladSet& L, const HermitianMatrix& rho,
                                   double eps_pd = kDefaultPdThreshold);

/// The unique X in ker(grad)^perp with (1/2) div(grad(X) rho + rho grad(X)) = f.
///
/// Throws InfeasibleError if f has a kernel component above 1e-10 ||f|| + 1e-14 and
/// WeightError if rho is not positive definite beyond eps_pd.
HermitianMatrix solve_potential(const WeightedOperator& w, const HermitianMatrix& f);

/// Conjugate-gradient solve of the same system on ker(grad)^perp, started
/// from `initial`. Used as an independent route for uniqueness checks.
HermitianMatrix solve_potential_cg(const WeightedOperator& w, const HermitianMatrix& f,
                                   const HermitianMatrix& initial, double tol = 1e-14,
                                   int max_iter = 1000);

/// ||(1/2) div(grad(X) rho + rho grad(X)) - f||.
double potential_residual(const WeightedOperator& w, const HermitianMatrix& x, const HermitianMatrix& f);

struct PoincareConstant {
  double value = 0.0;
  /// Set when rho is singular or ker(grad)^perp is trivial; value is then 0.
  bool degenerate = false;
};

/// Smallest c with Q_rho(grad(X - proj X)) >= c ||X - proj X||^2.
PoincareConstant poincare_constant(const LindbladSet& L, const HermitianMatrix& rho,
                                   double eps_pd = kDefaultPdThreshold);

/// Minimum of the pointwise constant over a sampled compact set of weights.
PoincareConstant poincare_constant(const LindbladSet& L, std::span<const DensityMatrix> samples,
                                   double eps_pd = kDefaultPdThreshold);

/// The X in ker(grad)^perp minimizing Q_rho(v - grad Y) over Y.
HermitianMatrix best_gradient_fit(const LindbladSet& L, const HermitianMatrix& rho,
                                  const OperatorStack& v);

struct MomentumMinimum {
  double primal_min = 0.0;  // (1/2) <m; m rho^-1> at m = grad(X) rho
  double dual_max = 0.0;    // <f; X> - Q_rho(grad X)/2
  OperatorStack optimal_m;
  HermitianMatrix potential;
  /// Smallest objective over the random feasible probes (infinity if none).
  double best_probe = 0.0;
  int probes = 0;
};

/// Evaluates both sides of the min-max characterization of the cheapest
/// momentum carrying the flux f, and probes `probes` random feasible
/// perturbations m + delta with div(delta - delta_*) = 0.
MomentumMinimum momentum_min_check(const LindbladSet& L, const DensityMatrix& rho,
                                   const HermitianMatrix& f, std::mt19937_64& rng, int probes = 20);

}  // namespace momt
