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

#include "momt/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "momt/parallel.hpp"

namespace momt {

namespace {

constexpr double kFeasibilityTolerance = 1e-10;

void require_strict(const DensityMatrix& rho, const char* which) {
  const double lo = rho.hermitian().min_eigenvalue();
  if (!(lo > kDefaultPdThreshold)) {
    std::ostringstream os;
    os << which << " must be positive definite; smallest eigenvalue is " << lo;
    throw DensityError(DensityError::Kind::NotPositive, lo, os.str());
  }
}

void require_feasible(const LindbladSet& L, const HermitianMatrix& rho0, const HermitianMatrix& rho1) {
  const double gap = feasibility_gap(L, rho0, rho1);
  if (gap > kFeasibilityTolerance) {
    std::ostringstream os;
    os << "endpoints are not connectable: rho1 - rho0 has a component of norm " << gap
       << " in ker(grad), which no flux can change (kernel dimension " << L.kernel_dim() << ")";
    throw InfeasibleError(gap, os.str());
  }
}

struct IntervalSolution {
  HermitianMatrix potential;
  double cost = 0.0;
  HermitianMatrix gram;
};

IntervalSolution solve_interval(const LindbladSet& L, const HermitianMatrix& left, const HermitianMatrix& right,
                                double dt, bool with_gram) {
  const HermitianMatrix mid = 0.5 * (left + right);
  // The exact flux lies in ker(grad)^perp; drop kernel rounding noise.
  const HermitianMatrix flux = project_kernel_complement(L, (right - left) * (1.0 / dt));
  const WeightedOperator w(L, mid);
  IntervalSolution out;
  out.potential = solve_potential(w, flux);
  out.cost = dt * 0.5 * inner_product(out.potential, flux);
  if (with_gram) out.gram = gram(gradient(L, out.potential));
  return out;
}

int effective_threads(int requested, int n, int K) {
  // Thread start-up dominates below this per-evaluation workload.
  if (n < 4 || K < 8) return 1;
  return requested > 0 ? requested : configured_threads();
}

}  // namespace

double feasibility_gap(const LindbladSet& L, const HermitianMatrix& rho0, const HermitianMatrix& rho1) {
  return project_kernel(L, rho1 - rho0).norm();
}

DiscretePath assemble_path(const LindbladSet& L, std::vector<DensityMatrix> nodes, int threads) {
  if (nodes.size() < 2) throw DimensionError("assemble_path: need at least two nodes");
  const int K = static_cast<int>(nodes.size()) - 1;
  DiscretePath path;
  path.densities = std::move(nodes);
  path.potentials.resize(static_cast<std::size_t>(K));
  path.momenta.resize(static_cast<std::size_t>(K));
  parallel_for(K, threads, [&](int k) {
    const auto i = static_cast<std::size_t>(k);
    const IntervalSolution s =
        solve_interval(L, path.densities[i].hermitian(), path.densities[i + 1].hermitian(), 1.0 / K, false);
    path.momenta[i] = gradient(L, s.potential).right_multiply(path.midpoint(k).matrix());
    path.potentials[i] = s.potential;
  });
  return path;
}

DiscretePath initial_path(const LindbladSet& L, const DensityMatrix& rho0, const DensityMatrix& rho1, int K) {
  if (K < 1) throw Error("initial_path: K must be at least 1");
  require_strict(rho0, "rho0");
  require_strict(rho1, "rho1");
  require_feasible(L, rho0, rho1);
  std::vector<DensityMatrix> nodes;
  nodes.reserve(static_cast<std::size_t>(K + 1));
  nodes.push_back(rho0);
  for (int k = 1; k < K; ++k) {
    const double t = static_cast<double>(k) / K;
    nodes.push_back(validate_density(rho0.hermitian() + t * (rho1.hermitian() - rho0.hermitian()), true));
  }
  nodes.push_back(rho1);
  return assemble_path(L, std::move(nodes));
}

double continuity_residual(const LindbladSet& L, const DiscretePath& path) {
  double worst = 0.0;
  for (int k = 0; k < path.intervals(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const OperatorStack& m = path.momenta[i];
    std::vector<CMatrix> diff;
    for (const auto& b : m.blocks()) diff.emplace_back(b - b.adjoint());
    const OperatorStack skew = OperatorStack::project(std::move(diff), Flavor::Skew);
    const HermitianMatrix lhs = path.densities[i + 1].hermitian() - path.densities[i].hermitian();
    const HermitianMatrix rhs = (0.5 * path.dt()) * divergence(L, skew);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

double hj_residual(const LindbladSet& L, const DualPath& dual) {
  double worst = -std::numeric_limits<double>::infinity();
  const double dt = dual.dt();
  for (int k = 0; k < dual.intervals(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const HermitianMatrix r =
        (dual.nodes[i + 1] - dual.nodes[i]) * (1.0 / dt) + 0.5 * gram(gradient(L, dual.midpoint(k)));
    worst = std::max(worst, r.max_eigenvalue());
  }
  return worst;
}

// --- dual certificate ----------------------------------------------------------

DualCertificate dual_certificate(const LindbladSet& L, const DiscretePath& path) {
  if (!path.has_potentials()) throw Error("dual_certificate: path carries no interval potentials");
  const int K = path.intervals();
  const double dt = path.dt();
  const auto& x = path.potentials;
  const int n = L.dim();

  DualCertificate cert;
  auto& lam = cert.path.nodes;
  lam.resize(static_cast<std::size_t>(K + 1));
  if (K == 1) {
    lam[0] = x[0];
    lam[1] = x[0];
  } else {
    lam[0] = 1.5 * x[0] - 0.5 * x[1];
    for (int j = 1; j < K; ++j) lam[static_cast<std::size_t>(j)] = 0.5 * (x[static_cast<std::size_t>(j - 1)] + x[static_cast<std::size_t>(j)]);
    lam[static_cast<std::size_t>(K)] = 1.5 * x[static_cast<std::size_t>(K - 1)] - 0.5 * x[static_cast<std::size_t>(K - 2)];
  }

  // Identity shifts commute with grad, so each interval residual depends only
  // on the unshifted seed; shift every later node so the largest eigenvalue
  // of each residual becomes exactly zero.
  cert.shifts.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const HermitianMatrix r = (lam[i + 1] - lam[i]) * (1.0 / dt) + 0.5 * gram(gradient(L, cert.path.midpoint(k)));
    cert.shifts[i] = r.max_eigenvalue();
  }
  double offset = 0.0;
  const HermitianMatrix eye = HermitianMatrix::identity(n);
  for (int k = 0; k < K; ++k) {
    offset += dt * cert.shifts[static_cast<std::size_t>(k)];
    lam[static_cast<std::size_t>(k + 1)] -= offset * eye;
  }
  cert.value = inner_product(lam.back(), path.densities.back().hermitian()) -
               inner_product(lam.front(), path.densities.front().hermitian());
  return cert;
}

// --- reduced objective ---------------------------------------------------------

ReducedObjective::ReducedObjective(LindbladSet L, const DensityMatrix& rho0, const DensityMatrix& rho1, int K,
                                   int threads)
    : L_(std::move(L)), K_(K), threads_(effective_threads(threads, L_.dim(), K)) {
  if (K < 1) throw Error("ReducedObjective: K must be at least 1");
  base_.reserve(static_cast<std::size_t>(K + 1));
  for (int k = 0; k <= K; ++k) {
    const double t = static_cast<double>(k) / K;
    base_.push_back(k == 0 ? rho0.hermitian() : k == K ? rho1.hermitian()
                                                       : rho0.hermitian() + t * (rho1.hermitian() - rho0.hermitian()));
  }
}

int ReducedObjective::dimension() const noexcept {
  return (K_ - 1) * static_cast<int>(L_.complement_vectors().cols());
}

std::vector<HermitianMatrix> ReducedObjective::nodes(const RVector& y) const {
  const RMatrix& c = L_.complement_vectors();
  const int d = static_cast<int>(c.cols());
  if (y.size() != dimension()) throw DimensionError("ReducedObjective: coordinate vector has wrong size");
  std::vector<HermitianMatrix> out = base_;
  for (int j = 1; j < K_; ++j)
    out[static_cast<std::size_t>(j)] += devectorize(c * y.segment((j - 1) * d, d), L_.dim());
  return out;
}

ReducedObjective::Evaluation ReducedObjective::evaluate(const RVector& y, double floor, bool with_gradient) const {
  return evaluate_with(y, floor, with_gradient, threads_);
}

ReducedObjective::Evaluation ReducedObjective::evaluate_with(const RVector& y, double floor, bool with_gradient,
                                                             int threads) const {
  Evaluation ev;
  ev.nodes = nodes(y);
  ev.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int j = 1; j < K_; ++j)
    ev.min_eigenvalue = std::min(ev.min_eigenvalue, ev.nodes[static_cast<std::size_t>(j)].min_eigenvalue());
  if (K_ > 1 && !(ev.min_eigenvalue > floor)) return ev;
  ev.feasible = true;

  const double dt = 1.0 / K_;
  std::vector<IntervalSolution> parts(static_cast<std::size_t>(K_));
  parallel_for(K_, threads, [&](int k) {
    const auto i = static_cast<std::size_t>(k);
    parts[i] = solve_interval(L_, ev.nodes[i], ev.nodes[i + 1], dt, with_gradient);
  });

  ev.potentials.reserve(parts.size());
  for (auto& p : parts) {
    ev.cost += p.cost;
    ev.potentials.push_back(p.potential);
  }
  if (!with_gradient) return ev;

  const RMatrix& c = L_.complement_vectors();
  const int d = static_cast<int>(c.cols());
  ev.gradient.resize(dimension());
  for (int j = 1; j < K_; ++j) {
    const auto a = static_cast<std::size_t>(j - 1);
    const auto b = static_cast<std::size_t>(j);
    const HermitianMatrix g =
        parts[a].potential - parts[b].potential - (0.25 * dt) * (parts[a].gram + parts[b].gram);
    ev.gradient.segment((j - 1) * d, d) = c.transpose() * vectorize(g);
  }
  return ev;
}

RMatrix ReducedObjective::hessian(const RVector& y, double floor, double step) const {
  const int dim = dimension();
  RMatrix h = RMatrix::Zero(dim, dim);
  if (dim == 0) return h;
  const int d = static_cast<int>(L_.complement_vectors().cols());
  const Evaluation centre = evaluate_with(y, floor, false, 1);
  if (!centre.feasible) throw Error("ReducedObjective::hessian: point violates the eigenvalue floor");
  // Unit coordinate moves change node eigenvalues by at most the step.
  const double hstep = std::min(step, 0.25 * (centre.min_eigenvalue - floor));

  const int colors = std::min(3, K_ - 1);
  const int probes = colors * d;
  std::vector<RVector> diffs(static_cast<std::size_t>(probes));
  parallel_for(probes, threads_, [&](int p) {
    const int color = p / d;
    const int coord = p % d;
    RVector e = RVector::Zero(dim);
    for (int j = 1 + color; j < K_; j += 3) e((j - 1) * d + coord) = 1.0;
    const Evaluation plus = evaluate_with(y + hstep * e, floor, true, 1);
    const Evaluation minus = evaluate_with(y - hstep * e, floor, true, 1);
    if (!plus.feasible || !minus.feasible) throw Error("ReducedObjective::hessian: probe left the feasible set");
    diffs[static_cast<std::size_t>(p)] = (plus.gradient - minus.gradient) / (2.0 * hstep);
  });

  for (int p = 0; p < probes; ++p) {
    const int color = p / d;
    const int coord = p % d;
    const RVector& g = diffs[static_cast<std::size_t>(p)];
    for (int j = 1 + color; j < K_; j += 3) {
      const int col = (j - 1) * d + coord;
      for (int i = std::max(1, j - 1); i <= std::min(K_ - 1, j + 1); ++i)
        h.block((i - 1) * d, col, d, 1) = g.segment((i - 1) * d, d);
    }
  }
  return 0.5 * (h + h.transpose());
}

// --- optimizer -----------------------------------------------------------------

namespace {

DiscretePath path_from(const LindbladSet& L, const ReducedObjective::Evaluation& ev) {
  DiscretePath path;
  const int K = static_cast<int>(ev.potentials.size());
  path.densities.reserve(ev.nodes.size());
  for (const auto& node : ev.nodes) path.densities.push_back(validate_density(node, false));
  path.potentials = ev.potentials;
  path.momenta.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    path.momenta.push_back(gradient(L, ev.potentials[static_cast<std::size_t>(k)]).right_multiply(path.midpoint(k).matrix()));
  return path;
}

constexpr double kDecrementFloor = 1e-14;

/// -H^{-1} g, adding a multiple of the identity until H factors.
RVector newton_direction(const RMatrix& h, const RVector& g) {
  if (g.size() == 0) return g;
  Eigen::LLT<RMatrix> llt(h);
  double shift = 1e-12 * std::max(h.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  while (llt.info() != Eigen::Success && shift < 1e300) {
    llt.compute(h + shift * RMatrix::Identity(h.rows(), h.cols()));
    shift *= 10.0;
  }
  if (llt.info() != Eigen::Success) return -g;
  return -llt.solve(g);
}

/// Two-loop recursion for the L-BFGS direction -H g.
RVector lbfgs_direction(const RVector& g, const std::deque<std::pair<RVector, RVector>>& memory) {
  RVector q = g;
  std::vector<double> alpha(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    const auto& [s, y] = memory[i];
    alpha[i] = s.dot(q) / y.dot(s);
    q -= alpha[i] * y;
  }
  if (!memory.empty()) {
    const auto& [s, y] = memory.back();
    q *= s.dot(y) / y.dot(y);
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const auto& [s, y] = memory[i];
    const double beta = y.dot(q) / y.dot(s);
    q += (alpha[i] - beta) * s;
  }
  return -q;
}

}  // namespace

GeodesicResult optimize_geodesic(const LindbladSet& L, const DensityMatrix& rho0, const DensityMatrix& rho1,
                                 const SolverConfig& config) {
  if (rho0.dim() != L.dim() || rho1.dim() != L.dim()) throw DimensionError("optimize_geodesic: dimension mismatch");
  if (config.intervals < 1) throw Error("optimize_geodesic: need at least one interval");
  require_strict(rho0, "rho0");
  require_strict(rho1, "rho1");
  require_feasible(L, rho0, rho1);

  GeodesicResult result;
  if (L.kernel_dim() > 1) {
    std::ostringstream os;
    os << "ker(grad) has dimension " << L.kernel_dim()
       << "; distances are only finite between endpoints whose difference is orthogonal to it";
    result.warnings.push_back({"kernel-dim", os.str()});
    result.warnings.push_back({"dual-identity-shift-only",
                               "dual repair shifts only along the identity; the certificate may be loose"});
  }

  const int K = config.intervals;
  const ReducedObjective objective(L, rho0, rho1, K, config.threads);
  const double floor =
      std::min(config.eps_pd, 0.5 * std::min(rho0.hermitian().min_eigenvalue(), rho1.hermitian().min_eigenvalue()));

  RVector y = RVector::Zero(objective.dimension());
  ReducedObjective::Evaluation ev = objective.evaluate(y, floor);
  std::deque<std::pair<RVector, RVector>> memory;
  const auto memory_cap = static_cast<std::size_t>(std::max(config.lbfgs_memory, 1));

  auto notify = [&](int it) {
    if (!config.observer) return;
    const DiscretePath p = path_from(L, ev);
    config.observer(IterationState{it, ev.cost, ev.gradient.norm(), p});
  };

  int it = 0;
  bool boundary_hit = false;
  bool stalled = false;
  notify(0);
  for (; it < config.max_iter; ++it) {
    const double gnorm = ev.gradient.norm();
    if (gnorm <= config.grad_tol * (1.0 + std::abs(ev.cost))) {
      result.converged = true;
      break;
    }
    const bool newton = config.method == Method::Newton;
    RVector dir = newton ? newton_direction(objective.hessian(y, floor), ev.gradient)
                         : lbfgs_direction(ev.gradient, memory);
    double slope = ev.gradient.dot(dir);
    if (!(slope < 0.0)) {
      memory.clear();
      dir = -ev.gradient;
      slope = -gnorm * gnorm;
    }
    // Predicted decrease below cost round-off: nothing left to gain.
    if (newton && -slope <= kDecrementFloor * (1.0 + std::abs(ev.cost))) {
      result.converged = true;
      break;
    }
    double step = newton || !memory.empty() ? 1.0 : std::min(1.0, 1.0 / gnorm);

    bool accepted = false;
    bool floor_limited = false;
    ReducedObjective::Evaluation trial;
    for (int ls = 0; ls < 60; ++ls) {
      trial = objective.evaluate(y + step * dir, floor);
      if (!trial.feasible) {
        floor_limited = true;
      } else if (trial.cost <= ev.cost + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!newton && !memory.empty()) {
        memory.clear();
        --it;
        continue;
      }
      (floor_limited ? boundary_hit : stalled) = true;
      break;
    }

    RVector s = step * dir;
    RVector dg = trial.gradient - ev.gradient;
    if (!newton && s.dot(dg) > 1e-14 * s.norm() * dg.norm()) {
      memory.emplace_back(std::move(s), std::move(dg));
      if (memory.size() > memory_cap) memory.pop_front();
    }
    y += step * dir;
    ev = std::move(trial);
    notify(it + 1);
  }

  result.iterations = it;
  result.grad_norm = ev.gradient.norm();
  if (boundary_hit)
    result.warnings.push_back({"boundary-hit",
                               "line search could not keep interior densities above the eigenvalue floor; "
                               "returning the best iterate"});
  if (stalled)
    result.warnings.push_back({"line-search-stalled", "no descent step found before reaching the gradient tolerance"});
  if (!result.converged && !boundary_hit && !stalled)
    result.warnings.push_back({"max-iter", "iteration limit reached before the gradient tolerance"});

  result.path = path_from(L, ev);
  result.continuity_residual = continuity_residual(L, result.path);
  result.hamiltonian.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    result.hamiltonian.push_back(kinetic(result.path.midpoint(k), result.path.momenta[static_cast<std::size_t>(k)]).value());
  result.primal_cost = path_cost(result.path).value();
  result.action = 2.0 * result.primal_cost;
  result.distance = std::sqrt(result.action);

  DualCertificate cert = dual_certificate(L, result.path);
  result.dual_path = std::move(cert.path);
  result.dual_value = cert.value;
  result.gap = result.primal_cost - result.dual_value;
  return result;
}

HamiltonianProfile hamiltonian_profile(const GeodesicResult& result) {
  HamiltonianProfile prof;
  prof.values = result.hamiltonian;
  const int K = static_cast<int>(prof.values.size());
  if (K == 0) return prof;
  double sum = 0.0;
  for (double v : prof.values) sum += v;
  prof.mean = sum / K;
  double var = 0.0;
  for (double v : prof.values) var += (v - prof.mean) * (v - prof.mean);
  const double sd = std::sqrt(var / K);
  prof.rel_std = prof.mean > 0.0 ? sd / prof.mean : 0.0;

  // Window means deviate from the global mean by at most sqrt(K) * std.
  const double tol = std::sqrt(static_cast<double>(K)) * prof.rel_std + 1e-9;
  const double dt = 1.0 / K;
  auto window = [&](int a, int b) {
    double act = 0.0;
    for (int k = a; k < b; ++k) act += dt * 2.0 * prof.values[static_cast<std::size_t>(k)];
    SpeedCheck c{};
    c.s = a * dt;
    c.t = b * dt;
    c.window_distance = std::sqrt((c.t - c.s) * act);
    c.expected = (c.t - c.s) * result.distance;
    c.rel_error = c.expected > 0.0 ? std::abs(c.window_distance - c.expected) / c.expected : c.window_distance;
    c.ok = c.rel_error <= tol;
    prof.speed_ok = prof.speed_ok && c.ok;
    prof.speed_check.push_back(c);
  };
  for (int j = 1; j <= K; ++j) window(0, j);
  for (int j = 1; j < K; ++j) window(j, K);
  return prof;
}

double distance(const LindbladSet& L, const DensityMatrix& rho0, const DensityMatrix& rho1,
                const SolverConfig& config) {
  return optimize_geodesic(L, rho0, rho1, config).distance;
}

}  // namespace momt
