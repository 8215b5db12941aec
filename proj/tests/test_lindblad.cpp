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

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "momt/lindblad.hpp"
#include "test_support.hpp"

using namespace momt;
using namespace momt::testing;

namespace {

double stack_distance(const OperatorStack& a, const OperatorStack& b) { return (a - b).norm(); }

}  // namespace

TEST_SUITE("lindblad") {
  TEST_CASE("gradient of sigma_x under sigma_z is 2i sigma_y") {
    const OperatorStack g = gradient(sigma_z_set(), HermitianMatrix(sx()));
    CHECK(g.flavor() == Flavor::Skew);
    CHECK((g.block(0) - Complex(0, 2) * sy()).norm() == 0.0);
  }

  TEST_CASE("identity has zero gradient") {
    const LindbladSet L = LindbladSet::pauli();
    CHECK(gradient(L, HermitianMatrix::identity(2)).norm() == 0.0);
  }

  TEST_CASE("dimension mismatches are rejected") {
    const LindbladSet L = LindbladSet::pauli();
    CHECK_THROWS_AS(gradient(L, HermitianMatrix::identity(3)), DimensionError);
    CHECK_THROWS_AS(divergence(L, OperatorStack::zeros(2, 2, Flavor::Skew)), DimensionError);
    CHECK_THROWS_AS(divergence(L, OperatorStack::zeros(2, 3, Flavor::General)), FlavorError);
    CHECK_THROWS_AS(LindbladSet({HermitianMatrix(sx()), HermitianMatrix::identity(3)}), DimensionError);
  }

  TEST_CASE("divergence of zero is zero; divergence of gradient is minus the laplacian") {
    const LindbladSet L = qutrit_set();
    CHECK(divergence(L, OperatorStack::zeros(3, 2, Flavor::Skew)).norm() == 0.0);
    Rng rng(11);
    for (int c = 0; c < 50; ++c) {
      const HermitianMatrix x = random_hermitian(3, rng);
      const HermitianMatrix a = divergence(L, gradient(L, x));
      CHECK((a + laplacian(L, x)).norm() <= 1e-12 * std::max(1.0, a.norm()));
    }
  }

  TEST_CASE("adjointness on random pairs") {
    const LindbladSet L = qutrit_set();
    Rng rng(12);
    for (int c = 0; c < 50; ++c) {
      const HermitianMatrix x = random_hermitian(3, rng);
      const OperatorStack y = random_stack(3, 2, Flavor::Skew, rng);
      const Complex lhs = inner_product(gradient(L, x), y);
      const double rhs = inner_product(x, divergence(L, y));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)) * 10.0);
    }
  }

  TEST_CASE("laplacian examples") {
    CHECK(laplacian(LindbladSet::pauli(), HermitianMatrix::identity(2)).norm() == 0.0);
    const HermitianMatrix l = laplacian(sigma_z_set(), HermitianMatrix(sx()));
    CHECK((l.matrix() + 4.0 * sx()).norm() <= 1e-15);
    Rng rng(13);
    const LindbladSet L = qutrit_set();
    for (int c = 0; c < 50; ++c) {
      const HermitianMatrix x = random_hermitian(3, rng);
      CHECK(inner_product(x, laplacian(L, x)) <= 1e-12);
      CHECK(std::abs(laplacian(L, x).trace()) <= 1e-12);
    }
  }

  TEST_CASE("grad matrix reproduces gradient blockwise") {
    const LindbladSet L = qutrit_set();
    REQUIRE(L.grad_matrix().rows() == 2 * 9);
    REQUIRE(L.grad_matrix().cols() == 9);
    Rng rng(14);
    for (int c = 0; c < 20; ++c) {
      const HermitianMatrix x = random_hermitian(3, rng);
      const OperatorStack g = devectorize_skew_stack(L.grad_matrix() * vectorize(x), 3, 2);
      CHECK(stack_distance(g, gradient(L, x)) <= 1e-12);
    }
  }

  TEST_CASE("kernel of the Pauli set is the identity") {
    const LindbladSet L = LindbladSet::pauli();
    REQUIRE(L.kernel_dim() == 1);
    const HermitianMatrix e = HermitianMatrix::identity(2) * (1.0 / std::sqrt(2.0));
    CHECK((L.kernel_basis()[0] - e).norm() <= 1e-15);
  }

  TEST_CASE("identity operator set has a full kernel") {
    for (int n : {2, 3}) {
      const LindbladSet L({HermitianMatrix::identity(n)});
      CHECK(L.kernel_dim() == n * n);
    }
  }

  TEST_CASE("sigma_z kernel is span{I, sigma_z}") {
    const LindbladSet L = sigma_z_set();
    REQUIRE(L.kernel_dim() == 2);
    // Singular values below the cutoff are exactly the kernel directions.
    const RVector& s = L.singular_values();
    CHECK(s(s.size() - 1) <= 1e-10);
    CHECK(s(s.size() - 2) <= 1e-10);
    CHECK(s(1) > 1.0);
    const HermitianMatrix z(sz());
    CHECK((project_kernel(L, z) - z).norm() <= 1e-14);
    for (const auto& b : L.kernel_basis()) CHECK(gradient(L, b).norm() <= 1e-10);
  }

  TEST_CASE("kernel basis is orthonormal and contains the identity") {
    Rng rng(15);
    for (int trial = 0; trial < 5; ++trial) {
      // Operators sharing a block structure produce larger kernels.
      CMatrix a = CMatrix::Zero(4, 4);
      a.topLeftCorner(2, 2) = random_hermitian(2, rng).matrix();
      a.bottomRightCorner(2, 2) = random_hermitian(2, rng).matrix();
      const LindbladSet L({HermitianMatrix(a)});
      CHECK(L.kernel_dim() >= 2);
      const auto basis = L.kernel_basis();
      for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
          CHECK(std::abs(inner_product(basis[i], basis[j]) - (i == j ? 1.0 : 0.0)) <= 1e-12);
      const HermitianMatrix e = HermitianMatrix::identity(4) * 0.5;
      CHECK((project_kernel(L, e) - e).norm() <= 1e-12);
    }
  }

  TEST_CASE("kernel projection") {
    const LindbladSet L = LindbladSet::pauli();
    const HermitianMatrix x = HermitianMatrix(sz()) + 3.0 * HermitianMatrix::identity(2);
    CHECK((project_kernel(L, x) - 3.0 * HermitianMatrix::identity(2)).norm() <= 1e-14);
    const HermitianMatrix k = HermitianMatrix::identity(2);
    CHECK((project_kernel(L, k) - k).norm() <= 1e-14);

    const LindbladSet Q = qutrit_set();
    Rng rng(16);
    for (int c = 0; c < 50; ++c) {
      const HermitianMatrix y = random_hermitian(3, rng);
      const HermitianMatrix p = project_kernel(Q, y);
      const double lhs = std::pow((y - p).norm(), 2) + std::pow(p.norm(), 2);
      CHECK(lhs == doctest::Approx(std::pow(y.norm(), 2)).epsilon(1e-13));
      // Minimality against random kernel elements.
      const HermitianMatrix z = p + uniform(rng, -1, 1) * Q.kernel_basis()[0];
      CHECK((y - z).norm() >= (y - p).norm() - 1e-14);
    }
  }

  TEST_CASE("divergence range is orthogonal to the kernel") {
    const LindbladSet L = sigma_z_set();
    Rng rng(17);
    for (int c = 0; c < 50; ++c) {
      const OperatorStack p = random_stack(2, 1, Flavor::Skew, rng);
      CHECK(project_kernel(L, divergence(L, p)).norm() <= 1e-10);
    }
  }

  TEST_CASE("divergence-free projection") {
    const LindbladSet L = qutrit_set();
    Rng rng(18);
    for (int c = 0; c < 20; ++c) {
      const OperatorStack y = random_stack(3, 2, Flavor::Skew, rng);
      CHECK(divergence(L, project_divergence_free(L, y)).norm() <= 1e-12 * y.norm());
    }
  }

  TEST_CASE("heat flow fixed points and trivial horizon") {
    const LindbladSet L = LindbladSet::pauli();
    const DensityMatrix rho = density({0.9, 0.1});
    CHECK((heat_flow(L, rho, 0.0, 10).hermitian() - rho.hermitian()).norm() == 0.0);
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
    CHECK((heat_flow(L, mixed, 3.0, 100).hermitian() - mixed.hermitian()).norm() <= 1e-15);
  }

  TEST_CASE("Pauli heat flow relaxes exponentially to I/2") {
    // For the Pauli set the laplacian is -8 on traceless matrices, so the
    // traceless part decays like exp(-4t).
    const LindbladSet L = LindbladSet::pauli();
    const DensityMatrix rho = density({0.9, 0.1});
    const double T = 5.0;
    const DensityMatrix out = heat_flow(L, rho, T, 2000);
    const HermitianMatrix half = HermitianMatrix::identity(2) * 0.5;
    const HermitianMatrix expected = half + std::exp(-4.0 * T) * (rho.hermitian() - half);
    CHECK((out.hermitian() - expected).norm() <= 1e-9);
    CHECK((out.hermitian() - half).norm() <= 1e-3);
    CHECK(std::abs(out.hermitian().trace() - 1.0) <= 1e-10);
  }

  TEST_CASE("heat flow matches the exponential of the vectorized generator") {
    const LindbladSet L = qutrit_set();
    Rng rng(19);
    const DensityMatrix rho = random_density(3, rng, 0.1);
    RMatrix gen(9, 9);
    for (int j = 0; j < 9; ++j) gen.col(j) = 0.5 * vectorize(laplacian(L, devectorize(RVector::Unit(9, j), 3)));

    HermitianMatrix h = random_hermitian(3, rng);
    h *= 0.3;
    for (bool with_h : {false, true}) {
      RMatrix g = gen;
      if (with_h) {
        // -i[H, X] is Hermitian for Hermitian X.
        for (int j = 0; j < 9; ++j) {
          const CMatrix x = devectorize(RVector::Unit(9, j), 3).matrix();
          const CMatrix c = Complex(0, -1) * (h.matrix() * x - x * h.matrix());
          g.col(j) += vectorize(HermitianMatrix::symmetrize(c));
        }
      }
      const double T = 0.7;
      const RMatrix e = (T * g).exp();
      const HermitianMatrix exact = devectorize(e * vectorize(rho), 3);
      const DensityMatrix approx =
          with_h ? heat_flow(L, rho, T, 4000, h) : heat_flow(L, rho, T, 4000);
      CHECK((approx.hermitian() - exact).norm() <= 1e-8);
      CHECK(std::abs(approx.hermitian().trace() - 1.0) <= 1e-10);
    }
  }

  TEST_CASE("heat flow rejects unstable step sizes") {
    // Large operators make the explicit step unstable.
    const LindbladSet L({10.0 * HermitianMatrix(sx()), 10.0 * HermitianMatrix(sz())});
    CHECK_THROWS_AS(heat_flow(L, density({0.9, 0.1}), 1.0, 1), StabilityError);
    CHECK_THROWS_AS(heat_flow(L, density({0.9, 0.1}), -1.0, 1), Error);
    CHECK_THROWS_AS(heat_flow(L, density({0.9, 0.1}), 1.0, 0), Error);
  }

  TEST_CASE("unchecked operator sets break adjointness") {
    CMatrix bad = sx();
    bad(0, 1) = 2.0;
    const LindbladSet L = LindbladSet::unchecked_for_testing({bad});
    Rng rng(20);
    double worst = 0.0;
    for (int c = 0; c < 10; ++c) {
      const HermitianMatrix x = random_hermitian(2, rng);
      const OperatorStack y = random_stack(2, 1, Flavor::Skew, rng);
      worst = std::max(worst, std::abs(inner_product(gradient(L, x), y) - inner_product(x, divergence(L, y))));
    }
    CHECK(worst > 1e-3);
  }
}
