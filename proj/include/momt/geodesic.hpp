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

// Discretized dynamic transport between density matrices.
//
// Densities live on the nodes of a uniform grid, momenta and potentials on
// the intervals. For fixed node densities the cheapest momentum of interval
// k is m_k = grad(X_k) rho_bar_k with X_k the potential carrying the flux
// (rho_{k+1} - rho_k)/dt, so the optimizer only moves interior nodes and
// every iterate satisfies the discrete continuity equation exactly.
//
// Conventions: primal_cost is sum_k dt F(rho_bar_k, m_k); the squared
// distance is twice that (the action integrates tr(rho v* v) = 2F).

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "momt/action.hpp"
#include "momt/elliptic.hpp"
#include "momt/lindblad.hpp"
#include "momt/path.hpp"

namespace momt {

struct Warning {
  std::string code;
  std::string message;
};

struct IterationState;

enum class Method {
  /// Damped Newton with a finite-difference Hessian of the analytic gradient.
  Newton,
  /// Limited-memory BFGS.
  LBFGS,
};

struct SolverConfig {
  Method method = Method::Newton;
  int intervals = 32;
  int max_iter = 500;
  /// Stop when ||projected gradient|| <= grad_tol * (1 + |cost|).
  double grad_tol = 1e-7;
  /// Eigenvalue floor enforced on interior nodes by the line search.
  double eps_pd = 1e-8;
  int lbfgs_memory = 12;
  /// 0 selects configured_threads().
  int threads = 0;
  /// Called once per accepted iterate, including the initial path.
  std::function<void(const IterationState&)> observer;
};

struct IterationState {
  int iteration;
  double cost;
  double grad_norm;
  const DiscretePath& path;
};

struct GeodesicResult {
  DiscretePath path;
  double distance = 0.0;
  double primal_cost = 0.0;
  /// Squared distance, 2 * primal_cost.
  double action = 0.0;
  DualPath dual_path;
  double dual_value = 0.0;
  double gap = 0.0;
  /// Per-interval F(rho_bar_k, m_k).
  std::vector<double> hamiltonian;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
  double continuity_residual = 0.0;
  std::vector<Warning> warnings;
};

/// ||project_kernel(rho1 - rho0)||; zero iff a finite-cost path can exist.
double feasibility_gap(const LindbladSet& L, const HermitianMatrix& rho0, const HermitianMatrix& rho1);

/// Fills in per-interval potentials and optimal momenta for the given nodes.
DiscretePath assemble_path(const LindbladSet& L, std::vector<DensityMatrix> nodes, int threads = 1);

/// Linear interpolation of the endpoints with optimal interval momenta.
/// Throws InfeasibleError when the endpoint difference touches ker(grad).
DiscretePath initial_path(const LindbladSet& L, const DensityMatrix& rho0, const DensityMatrix& rho1, int K);

/// Largest per-interval norm of rho_{k+1} - rho_k - (dt/2) div(m_k - m_k*).
double continuity_residual(const LindbladSet& L, const DiscretePath& path);

/// Largest eigenvalue over intervals of
/// (lambda_{k+1} - lambda_k)/dt + (grad lambda_bar_k)*(grad lambda_bar_k)/2.
double hj_residual(const LindbladSet& L, const DualPath& dual);

struct DualCertificate {
  DualPath path;
  double value = 0.0;
  /// Identity shift applied on each interval during the repair.
  std::vector<double> shifts;
};

/// Hamilton-Jacobi subsolution seeded from the interval potentials and
/// repaired interval by interval with identity shifts, which leave the
/// gradient unchanged. value = <lambda_K; rho_K> - <lambda_0; rho_0> never
/// exceeds path_cost(path).
DualCertificate dual_certificate(const LindbladSet& L, const DiscretePath& path);

/// Minimizes path_cost over interior node densities (Newton by default).
GeodesicResult optimize_geodesic(const LindbladSet& L, const DensityMatrix& rho0, const DensityMatrix& rho1,
                                 const SolverConfig& config = {});

struct SpeedCheck {
  double s;
  double t;
  /// sqrt((t - s) * sum over the window of dt * 2F).
  double window_distance;
  /// (t - s) * distance.
  double expected;
  double rel_error;
  bool ok;
};

struct HamiltonianProfile {
  std::vector<double> values;
  double mean = 0.0;
  double rel_std = 0.0;
  std::vector<SpeedCheck> speed_check;
  bool speed_ok = true;
};

HamiltonianProfile hamiltonian_profile(const GeodesicResult& result);

double distance(const LindbladSet& L, const DensityMatrix& rho0, const DensityMatrix& rho1,
                const SolverConfig& config = {});

/// Reduced objective over interior node coordinates in the orthonormal basis
/// of ker(grad)^perp. Exposed for gradient cross-checks.
class ReducedObjective {
 public:
  ReducedObjective(LindbladSet L, const DensityMatrix& rho0, const DensityMatrix& rho1, int K, int threads = 1);

  int dimension() const noexcept;
  int intervals() const noexcept { return K_; }

  struct Evaluation {
    bool feasible = false;  // every interior node above the floor
    double min_eigenvalue = 0.0;
    double cost = 0.0;
    RVector gradient;
    std::vector<HermitianMatrix> potentials;
    std::vector<HermitianMatrix> nodes;
  };

  Evaluation evaluate(const RVector& y, double floor, bool with_gradient = true) const;
  std::vector<HermitianMatrix> nodes(const RVector& y) const;

  /// Central-difference Hessian of the analytic gradient. Node j only couples
  /// to j - 1 and j + 1, so nodes three apart are probed together. `step` is
  /// shrunk to stay inside the eigenvalue floor.
  RMatrix hessian(const RVector& y, double floor, double step = 1e-5) const;

 private:
  Evaluation evaluate_with(const RVector& y, double floor, bool with_gradient, int threads) const;

  LindbladSet L_;
  int K_;
  int threads_;
  std::vector<HermitianMatrix> base_;
};

}  // namespace momt
