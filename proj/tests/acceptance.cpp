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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "momt/verify.hpp"
#include "test_support.hpp"

#ifndef MOMT_CLI_PATH
#error "MOMT_CLI_PATH must point at the momt executable"
#endif

using namespace momt;
using namespace momt::testing;

namespace {

// Pinned tolerances.
constexpr double kCalculusTol = 1e-11;
constexpr double kQuadraticTol = 1e-11;
constexpr double kPoincareTol = 1e-10;
constexpr double kResidualTol = 1e-9;
constexpr double kBoundTol = 1e-10;
constexpr double kPinvTol = 1e-9;
constexpr double kMinMaxTol = 1e-9;
constexpr double kProbeTol = 1e-10;
constexpr double kConvexTol = 1e-10;
constexpr double kFenchelLowTol = 1e-10;
constexpr double kFenchelHighTol = 1e-9;
constexpr double kTraceTol = 1e-12;
constexpr double kWeakDualityTol = 1e-9;
constexpr double kRelGapTol = 1e-3;
constexpr double kOracleTol = 1e-3;
constexpr double kRelStdTol = 1e-3;
constexpr double kHalfPathTol = 1e-2;
constexpr double kSymmetryTol = 1e-3;
constexpr double kTriangleSlack = 2e-3;
constexpr double kRefineTol = 1e-9;
constexpr double kGapNoise = 1e-12;
constexpr double kFeasibleTol = 1e-12;

constexpr std::uint64_t kSeed = 20170101;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <typename T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

double worst_of(const std::vector<verify::PropertyResult>& results, const std::string& name, bool* failed) {
  for (const auto& r : results)
    if (r.name == name) {
      if (r.status != verify::Status::Pass) *failed = true;
      return r.worst;
    }
  *failed = true;
  return std::numeric_limits<double>::infinity();
}

SolverConfig config_for(const io::ProblemSpec& spec, int K) {
  SolverConfig c = io::solver_config(spec.config);
  c.intervals = K;
  return c;
}

GeodesicResult solve(const io::ProblemSpec& spec, int K) {
  return optimize_geodesic(spec.lindblad, *spec.rho0, *spec.rho1, config_for(spec, K));
}

double frozen_distance(const std::string& problem, int K) {
  for (const auto& e : io::json::parse(read_fixture("oracle_values.json")))
    if (e["problem"] == problem && e["K"] == K) return e["distance"].get<double>();
  return std::numeric_limits<double>::quiet_NaN();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MOMT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 1. Operator calculus on 200 seeded cases per identity.
Outcome operator_calculus() {
  Outcome o;
  verify::Options opt;
  opt.seed = kSeed;
  opt.cases = 200;
  double worst = 0.0;
  bool failed = false;
  for (const LindbladSet& L : {LindbladSet::pauli(), qutrit_set()}) {
    const auto r = verify::run_calculus(L, opt);
    for (const char* name : {"gradient-divergence adjointness", "product rule for the symmetric product",
                             "closed-form laplacian equals minus divergence of gradient", "divergence is traceless"})
      worst = std::max(worst, worst_of(r, name, &failed));
  }
  o.pass = !failed && worst <= kCalculusTol;
  o.detail = (Detail() << "max error " << worst << " over 4 identities x 200 cases x 2 operator sets").str();
  return o;
}

// 2. Weighted quadratic form identities and convexity on 100 seeded cases.
Outcome quadratic_form_identities() {
  Outcome o;
  verify::Options opt;
  opt.seed = kSeed;
  opt.cases = 100;
  double worst = 0.0;
  bool failed = false;
  for (const LindbladSet& L : {LindbladSet::pauli(), qutrit_set()}) {
    const auto c = verify::run_calculus(L, opt);
    for (const char* name : {"weighted quadratic form polarization", "weighted quadratic form interpolation identity",
                             "skew stacks commute through the weight"})
      worst = std::max(worst, worst_of(c, name, &failed));
    const auto d = verify::run_duality(L, opt);
    worst = std::max(worst, worst_of(d, "quadratic energy is convex along potential segments", &failed));
    worst_of(d, "quadratic energy is strictly convex off the kernel", &failed);
  }
  o.pass = !failed && worst <= kQuadraticTol;
  o.detail = (Detail() << "max relative error " << worst << ", strict convexity checked").str();
  return o;
}

// 3. Sampled Poincare inequality for the Pauli set.
Outcome poincare() {
  Outcome o;
  const LindbladSet L = LindbladSet::pauli();
  Rng rng(kSeed);
  int violations = 0;
  double min_c = std::numeric_limits<double>::infinity();
  for (int w = 0; w < 50; ++w) {
    const DensityMatrix rho = random_density(2, rng, 0.05);
    const double c = poincare_constant(L, rho).value;
    min_c = std::min(min_c, c);
    for (int s = 0; s < 100; ++s) {
      const HermitianMatrix x = project_kernel_complement(L, random_hermitian(2, rng));
      const double lhs = quadratic_form(rho, gradient(L, x));
      const double rhs = c * std::pow(x.norm(), 2);
      if (lhs < rhs - kPoincareTol * std::max(1.0, rhs)) ++violations;
    }
  }
  o.pass = violations == 0 && min_c > 0.0;
  o.detail = (Detail() << violations << " violations in 50 x 100 samples, smallest constant " << min_c).str();
  return o;
}

// 4. Weighted potential solver.
Outcome potential_solver() {
  Outcome o;
  Rng rng(kSeed + 4);
  double worst_res = 0.0, worst_bound = 0.0, worst_pinv = 0.0;
  for (const LindbladSet& L : {LindbladSet::pauli(), qutrit_set()}) {
    const int n = L.dim();
    const int d = n * n;
    for (int c = 0; c < 50; ++c) {
      const DensityMatrix rho = random_density(n, rng);
      const WeightedOperator w(L, rho);
      const HermitianMatrix f = project_kernel_complement(L, random_hermitian(n, rng));
      const HermitianMatrix x = solve_potential(w, f);
      worst_res = std::max(worst_res, potential_residual(w, x, f) / std::max(f.norm(), 1.0));
      worst_bound = std::max(worst_bound, w.restricted_min_eig() * x.norm() - f.norm());
    }
    // Pseudo-inverse of the unweighted operator from the closed-form laplacian.
    RMatrix lap(d, d);
    for (int j = 0; j < d; ++j) lap.col(j) = -vectorize(laplacian(L, devectorize(RVector::Unit(d, j), n)));
    const RMatrix pinv = Eigen::CompleteOrthogonalDecomposition<RMatrix>(lap).pseudoInverse();
    const WeightedOperator mixed(L, DensityMatrix::maximally_mixed(n));
    for (int c = 0; c < 10; ++c) {
      const HermitianMatrix f = project_kernel_complement(L, random_hermitian(n, rng));
      const HermitianMatrix expected = devectorize(static_cast<double>(n) * (pinv * vectorize(f)), n);
      worst_pinv = std::max(worst_pinv, (solve_potential(mixed, f) - expected).norm() / std::max(1.0, expected.norm()));
    }
  }
  o.pass = worst_res <= kResidualTol && worst_bound <= kBoundTol && worst_pinv <= kPinvTol;
  o.detail = (Detail() << "100 instances: residual " << worst_res << ", bound excess " << worst_bound
                       << ", pseudo-inverse gap " << worst_pinv)
                 .str();
  return o;
}

// 5. Min-max characterization of the cheapest momentum.
Outcome min_max() {
  Outcome o;
  const LindbladSet L = qutrit_set();
  Rng rng(kSeed + 5);
  std::mt19937_64 gen(kSeed + 5);
  double worst_eq = 0.0, worst_probe = 0.0;
  for (int c = 0; c < 50; ++c) {
    const DensityMatrix rho = random_density(3, rng);
    const HermitianMatrix f = project_kernel_complement(L, random_hermitian(3, rng));
    const auto r = momentum_min_check(L, rho, f, gen, 20);
    worst_eq = std::max(worst_eq, std::abs(r.primal_min - r.dual_max) / std::max(1.0, std::abs(r.primal_min)));
    worst_probe = std::max(worst_probe, r.primal_min - r.best_probe);
  }
  o.pass = worst_eq <= kMinMaxTol && worst_probe <= kProbeTol;
  o.detail = (Detail() << "50 instances: relative min-max gap " << worst_eq << ", best probe undercut "
                       << std::max(0.0, worst_probe))
                 .str();
  return o;
}

// 6. Kinetic functional convexity and its conjugate.
Outcome fenchel() {
  Outcome o;
  Rng rng(kSeed + 6);
  double worst_convex = 0.0;
  for (int s = 0; s < 200; ++s) {
    const DensityMatrix r0 = random_density(3, rng), r1 = random_density(3, rng);
    const OperatorStack m0 = random_stack(3, 2, Flavor::General, rng), m1 = random_stack(3, 2, Flavor::General, rng);
    const double mid = kinetic(0.5 * (r0.hermitian() + r1.hermitian()), 0.5 * (m0 + m1)).value();
    worst_convex = std::max(worst_convex, mid - 0.5 * (kinetic(r0, m0).value() + kinetic(r1, m1).value()));
  }

  int disagreements = 0;
  double lowest_gap = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 200; ++s) {
    const OperatorStack b = random_stack(3, 2, Flavor::General, rng);
    HermitianMatrix a = -0.5 * HermitianMatrix::symmetrize(gram(b).matrix());
    a += uniform(rng, -0.5, 0.5) * HermitianMatrix::identity(3);
    CMatrix sum = a.matrix();
    for (const auto& blk : b.blocks()) sum += 0.5 * blk.adjoint() * blk;
    const double top = Eigen::SelfAdjointEigenSolver<CMatrix>(sum).eigenvalues().maxCoeff();
    const bool feasible = legendre_feasible({a, b});
    if (feasible != (top <= 1e-10)) ++disagreements;
    if (feasible) {
      const DensityMatrix rho = random_density(3, rng);
      const OperatorStack m = random_stack(3, 2, Flavor::General, rng);
      lowest_gap = std::min(lowest_gap, fenchel_gap(rho, m, {a, b}));
    }
  }

  const LindbladSet L = qutrit_set();
  double worst_sub = 0.0;
  for (int s = 0; s < 50; ++s) {
    const DensityMatrix rho = random_density(3, rng);
    const HermitianMatrix x = random_hermitian(3, rng);
    const OperatorStack m = gradient(L, x).right_multiply(rho.matrix());
    worst_sub = std::max(worst_sub, std::abs(fenchel_gap(rho, m, subdifferential_point(L, x))));
  }
  o.pass = worst_convex <= kConvexTol && disagreements == 0 && lowest_gap >= -kFenchelLowTol &&
           worst_sub <= kFenchelHighTol;
  o.detail = (Detail() << "convexity excess " << std::max(0.0, worst_convex) << ", classifier disagreements "
                       << disagreements << ", min gap " << lowest_gap << ", gap at subgradient " << worst_sub)
                 .str();
  return o;
}

// 7. Trace lower bound and trace conservation along solver iterates.
Outcome trace_bounds() {
  Outcome o;
  Rng rng(kSeed + 7);
  int violations = 0;
  for (int s = 0; s < 200; ++s)
    if (!trace_lower_bound(random_density(3, rng, 0.01), random_stack(3, 2, Flavor::General, rng))) ++violations;
  double worst_trace = 0.0;
  int iterates = 0;
  for (const char* name : {"pauli.json", "qutrit.json"}) {
    const auto spec = load_problem(name);
    SolverConfig c = config_for(spec, 32);
    c.observer = [&](const IterationState& st) {
      ++iterates;
      for (const auto& rho : st.path.densities) worst_trace = std::max(worst_trace, std::abs(rho.hermitian().trace() - 1.0));
    };
    optimize_geodesic(spec.lindblad, *spec.rho0, *spec.rho1, c);
  }
  o.pass = violations == 0 && worst_trace <= kTraceTol;
  o.detail = (Detail() << violations << " bound violations in 200 samples, trace drift " << worst_trace << " over "
                       << iterates << " iterates")
                 .str();
  return o;
}

// 8. End-to-end distance with certificate.
Outcome end_to_end() {
  Outcome o;
  std::ostringstream os;
  for (const char* name : {"pauli.json", "qutrit.json"}) {
    const auto spec = load_problem(name);
    SolverConfig c = config_for(spec, 32);
    double worst_weak = -std::numeric_limits<double>::infinity();
    c.observer = [&](const IterationState& st) {
      const auto cert = dual_certificate(spec.lindblad, st.path);
      worst_weak = std::max(worst_weak, cert.value - st.cost);
    };
    const auto r = optimize_geodesic(spec.lindblad, *spec.rho0, *spec.rho1, c);
    const double rel_gap = r.gap / r.primal_cost;
    const double oracle = frozen_distance(name, 32);
    const double rel_err = std::abs(r.distance - oracle) / oracle;
    o.pass = o.pass && r.converged && worst_weak <= kWeakDualityTol && r.gap >= -kWeakDualityTol &&
             rel_gap <= kRelGapTol && rel_err <= kOracleTol;
    os << name << ": distance " << r.distance << " (oracle rel err " << rel_err << "), rel gap " << rel_gap << "; ";
  }
  o.detail = os.str();
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// 9. Constant Hamiltonian and half-path distance.
Outcome hamiltonian() {
  Outcome o;
  std::ostringstream os;
  for (const char* name : {"pauli.json", "qutrit.json"}) {
    const auto spec = load_problem(name);
    const auto full = solve(spec, 32);
    const auto prof = hamiltonian_profile(full);
    const DensityMatrix mid = full.path.densities[16];
    const auto half = optimize_geodesic(spec.lindblad, *spec.rho0, mid, config_for(spec, 32));
    const double rel = std::abs(half.distance - 0.5 * full.distance) / (0.5 * full.distance);
    o.pass = o.pass && full.converged && half.converged && prof.rel_std <= kRelStdTol && rel <= kHalfPathTol;
    os << name << ": rel_std " << prof.rel_std << ", half-path rel err " << rel << "; ";
  }
  o.detail = os.str();
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// 10. Metric sanity on the fixture points.
Outcome metric() {
  Outcome o;
  const auto j = io::json::parse(read_fixture("metric_points.json"));
  const LindbladSet L = io::parse_lindblad(j["lindblad"], "$.lindblad");
  std::vector<DensityMatrix> pts;
  for (const auto& d : j["densities"])
    pts.push_back(validate_density(HermitianMatrix(io::parse_matrix(d, "$.densities")), true));
  SolverConfig c;
  c.intervals = 16;
  c.grad_tol = 1e-10;
  const int P = static_cast<int>(pts.size());
  std::vector<std::vector<double>> d(static_cast<std::size_t>(P), std::vector<double>(static_cast<std::size_t>(P)));
  bool converged = true;
  for (int a = 0; a < P; ++a)
    for (int b = 0; b < P; ++b) {
      const auto r = optimize_geodesic(L, pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)], c);
      converged = converged && r.converged;
      d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = r.distance;
    }
  auto D = [&](int a, int b) { return d[static_cast<std::size_t>(a % P)][static_cast<std::size_t>(b % P)]; };
  double self = 0.0, sym = 0.0, tri = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < P; ++a) {
    self = std::max(self, D(a, a));
    sym = std::max(sym, std::abs(D(a, a + 1) - D(a + 1, a)) / D(a, a + 1));
    tri = std::max(tri, D(a, a + 2) - D(a, a + 1) - D(a + 1, a + 2));
  }
  o.pass = converged && self == 0.0 && sym <= kSymmetryTol && tri <= kTriangleSlack;
  o.detail = (Detail() << "self distance " << self << ", symmetry rel err " << sym << " (5 pairs), triangle excess "
                       << tri << " (5 triples)")
                 .str();
  return o;
}

// 11. Refinement K = 8, 16, 32.
Outcome refinement() {
  Outcome o;
  std::ostringstream os;
  for (const char* name : {"pauli.json", "qutrit.json"}) {
    const auto spec = load_problem(name);
    std::vector<GeodesicResult> rs;
    for (int K : {8, 16, 32}) rs.push_back(solve(spec, K));
    bool ok = true;
    for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
      ok = ok && rs[i].distance >= rs[i + 1].distance - kRefineTol;
      ok = ok && rs[i + 1].gap <= rs[i].gap + kGapNoise;
    }
    o.pass = o.pass && ok;
    os << name << ": distances " << rs[0].distance << " " << rs[1].distance << " " << rs[2].distance << ", gaps "
       << rs[0].gap << " " << rs[1].gap << " " << rs[2].gap << "; ";
  }
  o.detail = os.str();
  o.detail.resize(o.detail.size() - 2);
  return o;
}

// 12. Feasibility gate.
Outcome feasibility_gate() {
  Outcome o;
  const int swap_code = run_cli("distance " + fixture_path("sigma_z_swap.json"));
  const int pauli_code = run_cli("distance " + fixture_path("pauli.json"));
  Rng rng(kSeed + 12);
  const LindbladSet L = LindbladSet::pauli();
  int refused = 0;
  for (int s = 0; s < 100; ++s) {
    const DensityMatrix a = random_density(2, rng, 0.01), b = random_density(2, rng, 0.01);
    try {
      if (feasibility_gap(L, a, b) > kFeasibleTol) ++refused;
      initial_path(L, a, b, 4);
    } catch (const InfeasibleError&) {
      ++refused;
    }
  }
  o.pass = swap_code == 2 && pauli_code == 0 && refused == 0;
  o.detail = (Detail() << "sigma_z swap exit " << swap_code << ", Pauli fixture exit " << pauli_code
                       << ", Pauli refusals " << refused << "/100")
                 .str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"operator calculus identities", operator_calculus},
      {"weighted quadratic form identities and convexity", quadratic_form_identities},
      {"Poincare inequality", poincare},
      {"weighted potential solver", potential_solver},
      {"cheapest momentum min-max equality", min_max},
      {"kinetic functional and conjugate", fenchel},
      {"trace bound and trace conservation", trace_bounds},
      {"end-to-end distance with certificate", end_to_end},
      {"constant Hamiltonian and half-path distance", hamiltonian},
      {"metric sanity", metric},
      {"grid refinement", refinement},
      {"feasibility gate", feasibility_gate},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    if (!out.pass) ++failed;
    std::printf("[%s] %2d %s: %s\n", out.pass ? "PASS" : "FAIL", index, name, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
