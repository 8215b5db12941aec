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

#include "momt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "momt/random.hpp"

namespace momt::verify {

const char* status_name(Status s) noexcept {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Skip:
      return "skip";
  }
  return "?";
}

namespace {

// Worst-case tracker for one property. `observe` takes an error that must
// stay at or below the tolerance.
class Tracker {
 public:
  Tracker(std::string suite, std::string name, double tol) {
    r_.suite = std::move(suite);
    r_.name = std::move(name);
    r_.tolerance = tol;
  }

  void observe(double err, const std::string& where = {}) {
    ++r_.cases;
    if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
    if (err > r_.worst) {
      r_.worst = err;
      if (err > r_.tolerance && first_failure_.empty()) first_failure_ = where.empty() ? "case " + std::to_string(r_.cases - 1) : where;
    }
  }

  void note(std::string detail) { extra_ = std::move(detail); }

  PropertyResult finish() {
    r_.status = r_.worst <= r_.tolerance ? Status::Pass : Status::Fail;
    std::ostringstream os;
    os << r_.cases << " cases, worst " << r_.worst << " (tolerance " << r_.tolerance << ")";
    if (!first_failure_.empty()) os << "; first violation at " << first_failure_;
    if (!extra_.empty()) os << "; " << extra_;
    r_.detail = os.str();
    return r_;
  }

 private:
  PropertyResult r_;
  std::string first_failure_;
  std::string extra_;
};

PropertyResult skipped(const std::string& suite, const std::string& name, const std::string& why) {
  PropertyResult r;
  r.suite = suite;
  r.name = name;
  r.status = Status::Skip;
  r.detail = why;
  return r;
}

double rel(double a, double b, double scale) { return std::abs(a - b) / std::max(1.0, scale); }

HermitianMatrix random_psd(int n, Rng& rng) {
  const CMatrix a = random_complex(n, rng);
  return HermitianMatrix::symmetrize(a * a.adjoint() / n);
}

// v rho as a general stack.
OperatorStack times(const OperatorStack& v, const HermitianMatrix& rho) { return v.right_multiply(rho.matrix()); }

// Operators may come from unchecked_for_testing, so no Hermitian wrapper.
CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace

// --- calculus ----------------------------------------------------------------------

std::vector<PropertyResult> run_calculus(const LindbladSet& L, const Options& opt) {
  const std::string suite = "calculus";
  const int n = L.dim();
  const int N = L.count();
  Rng rng(opt.seed);
  std::vector<PropertyResult> out;

  {
    Tracker t(suite, "inner product conjugate symmetry", 1e-13);
    for (int c = 0; c < opt.cases; ++c) {
      const CMatrix x = random_complex(n, rng), y = random_complex(n, rng);
      t.observe(std::abs(inner_product(x, y) - std::conj(inner_product(y, x))) / std::max(1.0, x.norm() * y.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "gradient-divergence adjointness", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix x = random_hermitian(n, rng);
      const OperatorStack y = random_stack(n, N, Flavor::Skew, rng);
      const OperatorStack gx = gradient(L, x);
      const Complex lhs = inner_product(gx, y);
      const double rhs = inner_product(x, divergence(L, y));
      t.observe(std::abs(lhs - rhs) / std::max(1.0, std::max(gx.norm(), x.norm()) * y.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "product rule for the symmetric product", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix x = random_hermitian(n, rng), y = random_hermitian(n, rng);
      const CMatrix &xm = x.matrix(), &ym = y.matrix();
      const OperatorStack lhs = gradient(L, HermitianMatrix::symmetrize(xm * ym + ym * xm));
      const OperatorStack gx = gradient(L, x), gy = gradient(L, y);
      double err = 0.0, scale = 0.0;
      for (int k = 0; k < N; ++k) {
        const CMatrix rhs = gx.block(k) * ym + xm * gy.block(k) + gy.block(k) * xm + ym * gx.block(k);
        err = std::max(err, (lhs.block(k) - rhs).norm());
        scale = std::max(scale, rhs.norm());
      }
      t.observe(err / std::max(1.0, scale));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "closed-form laplacian equals minus divergence of gradient", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix x = random_hermitian(n, rng);
      const HermitianMatrix a = laplacian(L, x), b = laplacian_composed(L, x);
      t.observe((a - b).norm() / std::max(1.0, a.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "divergence is traceless", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const OperatorStack y = random_stack(n, N, Flavor::Skew, rng);
      t.observe(std::abs(divergence(L, y).trace()) / std::max(1.0, y.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "laplacian is negative semidefinite", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix x = random_hermitian(n, rng);
      const HermitianMatrix lx = laplacian(L, x);
      t.observe(std::max(0.0, inner_product(x, lx)) / std::max(1.0, x.norm() * lx.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "gradient matrix reproduces gradient", 1e-12);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix x = random_hermitian(n, rng);
      const RVector a = L.grad_matrix() * vectorize(x);
      const RVector b = vectorize_skew_stack(gradient(L, x));
      t.observe((a - b).norm() / std::max(1.0, b.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "kernel basis is orthonormal and annihilated by the gradient", 1e-10);
    const auto basis = L.kernel_basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      t.observe(gradient(L, basis[i]).norm(), "kernel element " + std::to_string(i));
      for (std::size_t j = 0; j < basis.size(); ++j)
        t.observe(std::abs(inner_product(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)));
    }
    const HermitianMatrix e = HermitianMatrix::identity(n) * (1.0 / std::sqrt(static_cast<double>(n)));
    t.observe((project_kernel(L, e) - e).norm(), "identity in the kernel span");
    t.note("kernel_dim " + std::to_string(L.kernel_dim()));
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "kernel projection is orthogonal", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix x = random_hermitian(n, rng);
      const HermitianMatrix p = project_kernel(L, x);
      const HermitianMatrix r = x - p;
      const double s = std::max(1.0, x.norm() * x.norm());
      t.observe(std::abs(r.norm() * r.norm() + p.norm() * p.norm() - x.norm() * x.norm()) / s);
      for (const auto& b : L.kernel_basis()) t.observe(std::abs(inner_product(r, b)) / std::max(1.0, x.norm()));
      t.observe((project_kernel(L, p) - p).norm() / std::max(1.0, x.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "divergence range is orthogonal to the kernel", 1e-10);
    for (int c = 0; c < opt.cases; ++c) {
      OperatorStack p = random_stack(n, N, Flavor::Skew, rng);
      p *= 1.0 / p.norm();
      t.observe(project_kernel(L, divergence(L, p)).norm());
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "weighted quadratic form polarization", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix rho = random_psd(n, rng);
      const OperatorStack v = random_stack(n, N, Flavor::General, rng), w = random_stack(n, N, Flavor::General, rng);
      const double lhs = quadratic_form(rho, v + w);
      const Complex cross = inner_product(times(v, rho), w) + inner_product(times(w, rho), v);
      const double rhs = quadratic_form(rho, v) + quadratic_form(rho, w) + cross.real();
      t.observe((std::abs(lhs - rhs) + std::abs(cross.imag())) / std::max(1.0, std::abs(lhs)));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "weighted quadratic form interpolation identity", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix rho = random_psd(n, rng);
      const OperatorStack v = random_stack(n, N, Flavor::General, rng), w = random_stack(n, N, Flavor::General, rng);
      const double s = uniform(rng);
      const double lhs = quadratic_form(rho, (1.0 - s) * v + s * w);
      const double rhs =
          (1.0 - s) * quadratic_form(rho, v) + s * quadratic_form(rho, w) - s * (1.0 - s) * quadratic_form(rho, v - w);
      t.observe(rel(lhs, rhs, quadratic_form(rho, v) + quadratic_form(rho, w)));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "skew stacks commute through the weight", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const HermitianMatrix rho = random_psd(n, rng);
      const OperatorStack v = random_stack(n, N, Flavor::Skew, rng), w = random_stack(n, N, Flavor::Skew, rng);
      const Complex a = inner_product(times(w, rho), v);
      const Complex b = inner_product(v.left_multiply(rho.matrix()), w);
      t.observe(std::abs(a - b) / std::max(1.0, rho.norm() * v.norm() * w.norm()));
    }
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "operator set is Hermitian", 1e-12);
    for (int k = 0; k < N; ++k) {
      const CMatrix& l = L.op(k);
      t.observe((l - CMatrix(l.adjoint())).norm() / std::max(1.0, l.norm()), "operator " + std::to_string(k));
    }
    // A non-Hermitian operator also breaks the skew structure of commutators.
    for (int c = 0; c < std::min(opt.cases, 20); ++c) {
      const CMatrix x = random_hermitian(n, rng).matrix();
      for (int k = 0; k < N; ++k) {
        const CMatrix g = commutator(L.op(k), x);
        t.observe((g + CMatrix(g.adjoint())).norm() / std::max(1.0, g.norm()));
      }
    }
    out.push_back(t.finish());
  }
  return out;
}

// --- duality -----------------------------------------------------------------------

std::vector<PropertyResult> run_duality(const LindbladSet& L, const Options& opt) {
  const std::string suite = "duality";
  const int n = L.dim();
  const int N = L.count();
  Rng rng(opt.seed + 1);
  std::vector<PropertyResult> out;
  const bool has_complement = L.complement_vectors().cols() > 0;

  auto random_flux = [&]() {
    HermitianMatrix f = project_kernel_complement(L, random_hermitian(n, rng));
    return f;
  };

  {
    Tracker t(suite, "quadratic energy is convex along potential segments", 1e-11);
    Tracker strict(suite, "quadratic energy is strictly convex off the kernel", 1e-11);
    for (int c = 0; c < opt.cases; ++c) {
      const DensityMatrix rho = random_density(n, rng, 0.05);
      const HermitianMatrix x = random_hermitian(n, rng), y = random_hermitian(n, rng);
      auto phi = [&](double s) { return quadratic_form(rho, gradient(L, (1.0 - s) * x + s * y)); };
      const double p0 = phi(0.0), p1 = phi(1.0);
      const double second = p0 + p1 - 2.0 * phi(0.5);
      const double scale = std::max(1.0, p0 + p1);
      t.observe(std::max(0.0, -second) / scale);
      // Second difference of a quadratic is exactly Q(grad(x - y)) / 2.
      const double expected = 0.5 * quadratic_form(rho, gradient(L, x - y));
      t.observe(std::abs(second - expected) / scale);
      if (has_complement) {
        const HermitianMatrix d = project_kernel_complement(L, x - y);
        const double c0 = poincare_constant(L, rho.hermitian()).value;
        const double lower = 0.5 * c0 * d.norm() * d.norm();
        strict.observe(std::max(0.0, lower - expected) / scale);
        if (!(expected > 0.0)) strict.observe(std::numeric_limits<double>::infinity(), "zero second difference");
      }
    }
    out.push_back(t.finish());
    out.push_back(has_complement ? strict.finish()
                                 : skipped(suite, "quadratic energy is strictly convex off the kernel",
                                           "ker(grad)^perp is trivial"));
  }
  {
    Tracker t(suite, "Poincare inequality at sampled weights", 1e-10);
    const int weights = std::max(1, opt.cases / 4);
    for (int w = 0; w < weights; ++w) {
      const DensityMatrix rho = random_density(n, rng, 0.05);
      const double c0 = poincare_constant(L, rho.hermitian()).value;
      for (int s = 0; s < 100; ++s) {
        const HermitianMatrix x = random_hermitian(n, rng);
        const HermitianMatrix d = x - project_kernel(L, x);
        const double lhs = quadratic_form(rho, gradient(L, d));
        const double rhs = c0 * d.norm() * d.norm();
        t.observe(std::max(0.0, rhs - lhs) / std::max(1.0, rhs));
      }
    }
    out.push_back(t.finish());
  }
  if (has_complement) {
    Tracker residual(suite, "weighted potential solve residual", 1e-9);
    Tracker bound(suite, "flux norm dominates smallest eigenvalue times potential norm", 1e-10);
    Tracker unique(suite, "potential independent of the iterative starting point", 1e-10);
    Tracker pinv(suite, "potential matches pseudo-inverse at the maximally mixed weight", 1e-9);
    const RMatrix& G = L.grad_matrix();
    const Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(G.transpose() * G);
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(n);
    const WeightedOperator wm(L, mixed.hermitian());
    for (int c = 0; c < opt.cases; ++c) {
      const DensityMatrix rho = random_density(n, rng, 0.05);
      const HermitianMatrix f = random_flux();
      const WeightedOperator w(L, rho.hermitian());
      const HermitianMatrix x = solve_potential(w, f);
      residual.observe(potential_residual(w, x, f) / std::max(f.norm(), 1.0));
      bound.observe(std::max(0.0, w.restricted_min_eig() * x.norm() - f.norm()) / std::max(1.0, f.norm()));
      const HermitianMatrix x0 = solve_potential_cg(w, f, HermitianMatrix::zero(n));
      const HermitianMatrix x1 = solve_potential_cg(w, f, project_kernel_complement(L, 10.0 * random_hermitian(n, rng)));
      unique.observe((x0 - x1).norm());
      unique.observe((x0 - x).norm());

      // At rho = I/n the operator is -laplacian/n.
      const RVector xo = static_cast<double>(n) * cod.solve(vectorize(f));
      const HermitianMatrix xm = solve_potential(wm, f);
      pinv.observe((vectorize(xm) - xo).norm() / std::max(1.0, xo.norm()));
    }
    out.push_back(residual.finish());
    out.push_back(bound.finish());
    out.push_back(unique.finish());
    out.push_back(pinv.finish());

    Tracker cont(suite, "potential depends continuously on weight and flux", 1e-6);
    const DensityMatrix rho = random_density(n, rng, 0.1);
    const HermitianMatrix f = random_flux();
    HermitianMatrix e = project_kernel_complement(L, random_hermitian(n, rng));
    e *= 0.01 / std::max(e.norm(), 1e-300);
    const HermitianMatrix g = random_flux();
    const HermitianMatrix x = solve_potential(WeightedOperator(L, rho.hermitian()), f);
    double prev = std::numeric_limits<double>::infinity();
    double last = 0.0;
    bool monotone = true;
    for (int l = 0; l <= 30; ++l) {
      const double h = std::ldexp(1.0, -l);
      const HermitianMatrix xl = solve_potential(WeightedOperator(L, rho.hermitian() + h * e), f + h * g);
      last = (xl - x).norm();
      if (last > prev && last > 1e-13) monotone = false;
      prev = last;
    }
    cont.observe(last);
    if (!monotone) cont.observe(std::numeric_limits<double>::infinity(), "error not monotone");
    out.push_back(cont.finish());
  } else {
    out.push_back(skipped(suite, "weighted potential solve", "ker(grad)^perp is trivial"));
  }
  {
    Tracker lower(suite, "velocity energy dominates the potential lower bound", 1e-10);
    Tracker equal(suite, "lower bound is attained at gradient velocities", 1e-10);
    for (int c = 0; c < opt.cases; ++c) {
      const DensityMatrix rho = random_density(n, rng, 0.05);
      const OperatorStack v = random_stack(n, N, Flavor::Skew, rng);
      const HermitianMatrix f = divergence(L, anticommutator_product(rho.hermitian(), v));
      const double energy = 0.5 * quadratic_form(rho, v);
      const HermitianMatrix y = random_hermitian(n, rng);
      const double bound_y = inner_product(f, y) - 0.5 * quadratic_form(rho, gradient(L, y));
      lower.observe(std::max(0.0, bound_y - energy) / std::max(1.0, energy));

      const HermitianMatrix x = random_hermitian(n, rng);
      const OperatorStack gx = gradient(L, x);
      const HermitianMatrix fx = divergence(L, anticommutator_product(rho.hermitian(), gx));
      const double ex = 0.5 * quadratic_form(rho, gx);
      const double bx = inner_product(fx, x) - 0.5 * quadratic_form(rho, gx);
      equal.observe(std::abs(ex - bx) / std::max(1.0, ex));
    }
    out.push_back(lower.finish());
    out.push_back(equal.finish());
  }
  if (has_complement) {
    Tracker mm(suite, "cheapest momentum min-max equality", 1e-9);
    Tracker probe(suite, "feasible perturbations never beat the cheapest momentum", 1e-10);
    for (int c = 0; c < std::max(1, opt.cases / 4); ++c) {
      const DensityMatrix rho = random_density(n, rng, 0.05);
      const HermitianMatrix f = random_flux();
      const MomentumMinimum r = momentum_min_check(L, rho, f, rng, 20);
      mm.observe(std::abs(r.primal_min - r.dual_max) / std::max(std::abs(r.primal_min), 1e-300));
      probe.observe(std::max(0.0, r.primal_min - r.best_probe) / std::max(1.0, r.primal_min));
    }
    out.push_back(mm.finish());
    out.push_back(probe.finish());
  }
  {
    Tracker convex(suite, "kinetic functional is jointly convex", 1e-10);
    Tracker homog(suite, "kinetic functional is positively 1-homogeneous", 1e-10);
    Tracker trace(suite, "kinetic functional dominates squared momentum over twice the trace", 1e-10);
    Tracker young(suite, "Fenchel-Young inequality at random conjugate-feasible points", 1e-10);
    Tracker classify(suite, "conjugate-domain classifier matches the eigenvalue test", 0.0);
    Tracker sup(suite, "sampled conjugate supremum never exceeds the kinetic value", 1e-9);
    for (int c = 0; c < opt.cases; ++c) {
      const double s0 = uniform(rng, 0.2, 3.0), s1 = uniform(rng, 0.2, 3.0);
      const HermitianMatrix r0 = s0 * random_density(n, rng, 0.02).hermitian();
      const HermitianMatrix r1 = s1 * random_density(n, rng, 0.02).hermitian();
      const OperatorStack m0 = random_stack(n, N, Flavor::General, rng);
      const OperatorStack m1 = random_stack(n, N, Flavor::General, rng);
      const double f0 = kinetic(r0, m0).value(), f1 = kinetic(r1, m1).value();
      const double fm = kinetic(0.5 * (r0 + r1), 0.5 * (m0 + m1)).value();
      convex.observe(std::max(0.0, fm - 0.5 * (f0 + f1)) / std::max(1.0, f0 + f1));

      const double scale = uniform(rng, 0.1, 10.0);
      homog.observe(std::abs(kinetic(scale * r0, scale * m0).value() - scale * f0) / std::max(1.0, scale * f0));

      trace.observe(std::max(0.0, m0.squared_norm() / (2.0 * r0.trace()) - f0) / std::max(1.0, f0));

      OperatorStack b = random_stack(n, N, Flavor::General, rng);
      const DualPoint p{-0.5 * gram(b) - random_psd(n, rng), b};
      young.observe(std::max(0.0, -fenchel_gap(r0, m0, p)) / std::max(1.0, f0));

      const double shift = uniform(rng, -1.0, 1.0);
      if (std::abs(shift) > 1e-6) {
        const DualPoint q{-0.5 * gram(b) + shift * HermitianMatrix::identity(n), b};
        CMatrix direct = q.a.matrix();
        for (const auto& blk : b.blocks()) direct += 0.5 * blk.adjoint() * blk;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(direct, Eigen::EigenvaluesOnly);
        const bool by_eig = es.eigenvalues().maxCoeff() <= 1e-10;
        classify.observe(by_eig == legendre_feasible(q) ? 0.0 : 1.0);
      }

      if (c < opt.cases / 4) {
        const double est = conjugate_sup_estimate(r0, m0, rng, 16);
        sup.observe(std::max(0.0, est - f0) / std::max(1.0, f0));
      }
    }
    out.push_back(convex.finish());
    out.push_back(homog.finish());
    out.push_back(trace.finish());
    out.push_back(young.finish());
    out.push_back(classify.finish());
    out.push_back(sup.finish());
  }
  {
    Tracker gap(suite, "Fenchel gap vanishes at the gradient subdifferential point", 1e-9);
    Tracker nonneg(suite, "Fenchel gap is nonnegative", 1e-10);
    for (int c = 0; c < std::max(1, opt.cases / 4); ++c) {
      const DensityMatrix rho = random_density(n, rng, 0.05);
      const HermitianMatrix x = random_hermitian(n, rng);
      const DualPoint p = subdifferential_point(L, x);
      const OperatorStack m = times(p.b, rho.hermitian());
      const double fval = kinetic(rho, m).value();
      const double g = fenchel_gap(rho, m, p);
      gap.observe(std::abs(g) / std::max(1.0, fval));
      nonneg.observe(std::max(0.0, -g) / std::max(1.0, fval));
      const OperatorStack other = random_stack(n, N, Flavor::General, rng);
      nonneg.observe(std::max(0.0, -fenchel_gap(rho, other, p)) / std::max(1.0, kinetic(rho, other).value()));
    }
    out.push_back(gap.finish());
    out.push_back(nonneg.finish());
  }
  {
    Tracker boundary(suite, "singular weights agree with the regularized limit", 1e-6);
    if (n >= 2) {
      for (int c = 0; c < std::max(1, opt.cases / 10); ++c) {
        // Rank-deficient weight with one zero eigenvalue.
        const CMatrix u = random_unitary(n, rng);
        RVector ev(n);
        for (int i = 0; i < n; ++i) ev(i) = i == 0 ? 0.0 : uniform(rng, 0.2, 1.0);
        const HermitianMatrix rho =
            HermitianMatrix::symmetrize(u * ev.cast<Complex>().asDiagonal() * u.adjoint() / ev.sum());
        const OperatorStack m = times(random_stack(n, N, Flavor::General, rng), rho);
        const ExtendedValue at = kinetic(rho, m);
        const ExtendedValue reg = kinetic(rho + 1e-8 * HermitianMatrix::identity(n), m);
        if (!at.is_finite() || !reg.is_finite()) {
          boundary.observe(std::numeric_limits<double>::infinity(), "compatible momentum rated infinite");
          continue;
        }
        boundary.observe(std::abs(at.value() - reg.value()) / std::max(1.0, at.value()));
      }
    }
    out.push_back(boundary.finish());
  }

  if (opt.rho0 && opt.rho1) {
    Tracker weak(suite, "certified duality gap is nonnegative", 1e-9);
    Tracker rel_gap(suite, "relative certified gap at convergence", 1e-3);
    SolverConfig cfg = opt.solver;
    cfg.observer = [&](const IterationState& s) {
      const DualCertificate cert = dual_certificate(L, s.path);
      weak.observe(std::max(0.0, cert.value - s.cost), "iteration " + std::to_string(s.iteration));
    };
    const GeodesicResult r = optimize_geodesic(L, *opt.rho0, *opt.rho1, cfg);
    weak.observe(std::max(0.0, -r.gap));
    const double rg = r.primal_cost > 0.0 ? r.gap / r.primal_cost : std::abs(r.gap);
    rel_gap.observe(r.converged ? rg : std::numeric_limits<double>::infinity(),
                    r.converged ? "final" : "solver did not converge");
    std::ostringstream os;
    os << "distance " << r.distance << ", rel_gap " << rg;
    rel_gap.note(os.str());
    out.push_back(weak.finish());
    out.push_back(rel_gap.finish());
  } else {
    out.push_back(skipped(suite, "certified duality gap", "problem has no endpoints"));
  }
  return out;
}

// --- conservation ------------------------------------------------------------------

std::vector<PropertyResult> run_conservation(const LindbladSet& L, const Options& opt) {
  const std::string suite = "conservation";
  std::vector<PropertyResult> out;
  if (!opt.rho0 || !opt.rho1) {
    out.push_back(skipped(suite, "solver iterate properties", "problem has no endpoints"));
    return out;
  }
  const DensityMatrix& rho0 = *opt.rho0;
  const DensityMatrix& rho1 = *opt.rho1;

  {
    Tracker t(suite, "heat flow preserves trace and Hermiticity", 1e-10);
    for (const auto* rho : {&rho0, &rho1}) {
      const DensityMatrix r = heat_flow(L, *rho, 1.0, 400);
      t.observe(std::abs(r.hermitian().trace() - 1.0));
    }
    out.push_back(t.finish());
  }

  Tracker cont(suite, "every iterate satisfies discrete continuity", 1e-9);
  Tracker trace(suite, "every iterate conserves trace at each node", 1e-12);
  Tracker weak(suite, "weak duality holds at every iterate", 1e-9);
  Tracker mono(suite, "objective is non-increasing across accepted steps", 1e-12);
  Tracker ends(suite, "endpoint difference is orthogonal to the kernel", 1e-10);
  double prev = std::numeric_limits<double>::infinity();
  SolverConfig cfg = opt.solver;
  cfg.observer = [&](const IterationState& s) {
    const std::string where = "iteration " + std::to_string(s.iteration);
    cont.observe(continuity_residual(L, s.path), where);
    for (const auto& d : s.path.densities) trace.observe(std::abs(d.hermitian().trace() - 1.0), where);
    const DualCertificate cert = dual_certificate(L, s.path);
    weak.observe(std::max(0.0, cert.value - s.cost), where);
    mono.observe(std::max(0.0, s.cost - prev) / std::max(1.0, std::abs(prev)), where);
    prev = s.cost;
  };
  const GeodesicResult r = optimize_geodesic(L, rho0, rho1, cfg);
  ends.observe(feasibility_gap(L, r.path.densities.front(), r.path.densities.back()));
  out.push_back(cont.finish());
  out.push_back(trace.finish());
  out.push_back(weak.finish());
  out.push_back(mono.finish());
  out.push_back(ends.finish());

  {
    Tracker t(suite, "kinetic value equals the gradient-velocity energy", 1e-10);
    for (int k = 0; k < r.path.intervals(); ++k) {
      const HermitianMatrix mid = r.path.midpoint(k);
      const double via_v = 0.5 * quadratic_form(mid, gradient(L, r.path.potentials[static_cast<std::size_t>(k)]));
      const double f = kinetic(mid, r.path.momenta[static_cast<std::size_t>(k)]).value();
      t.observe(std::abs(via_v - f) / std::max(1.0, f), "interval " + std::to_string(k));
    }
    out.push_back(t.finish());
  }

  const HamiltonianProfile prof = hamiltonian_profile(r);
  {
    Tracker t(suite, "Hamiltonian is constant along the converged path", 1e-3);
    t.observe(r.converged ? prof.rel_std : std::numeric_limits<double>::infinity(),
              r.converged ? "rel_std" : "solver did not converge");
    out.push_back(t.finish());
  }
  {
    Tracker t(suite, "geodesic has constant speed on every window", 0.0);
    for (const auto& c : prof.speed_check) {
      std::ostringstream os;
      os << "window [" << c.s << ", " << c.t << "]";
      t.observe(c.ok ? 0.0 : c.rel_error, os.str());
    }
    out.push_back(t.finish());
  }
  return out;
}

std::vector<PropertyResult> run_suite(const LindbladSet& L, const std::string& suite, const Options& options) {
  if (suite == "calculus") return run_calculus(L, options);
  if (suite == "duality") return run_duality(L, options);
  if (suite == "conservation") return run_conservation(L, options);
  if (suite == "all") {
    std::vector<PropertyResult> out = run_calculus(L, options);
    for (auto&& r : run_duality(L, options)) out.push_back(std::move(r));
    for (auto&& r : run_conservation(L, options)) out.push_back(std::move(r));
    return out;
  }
  throw Error("unknown suite '" + suite + "' (expected calculus, duality, conservation or all)");
}

bool all_passed(const std::vector<PropertyResult>& results) {
  return std::none_of(results.begin(), results.end(), [](const PropertyResult& r) { return r.status == Status::Fail; });
}

}  // namespace momt::verify
