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

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "momt/hermitian.hpp"

namespace momt {

/// Relative singular-value cutoff used for every rank decision on the
/// gradient superoperator.
inline constexpr double kKernelRelativeThreshold = 1e-10;

/// The operator set L_1..L_N inducing the gradient X -> (L_k X - X L_k)_k.
///
/// Construction caches the (N n^2) x n^2 real matrix of the gradient in the
/// library-wide vectorization, an orthonormal basis of ker(grad) (always
/// starting with I/sqrt(n)), an orthonormal basis of its complement, and an
/// orthonormal basis of range(grad). Copies share the cached state.
class LindbladSet {
 public:
  explicit LindbladSet(std::vector<HermitianMatrix> operators);

  /// Builds a set without Hermitian checks or symmetrization. Only meant for
  /// negative-control tests of the verification suites.
  static LindbladSet unchecked_for_testing(std::vector<CMatrix> operators);

  /// {sigma_x, sigma_y, sigma_z}.
  static LindbladSet pauli();

  int dim() const noexcept;
  int count() const noexcept;
  /// False only for sets built by unchecked_for_testing from non-Hermitian
  /// operators; gradient() then returns the raw commutators untagged.
  bool hermitian() const noexcept;
  const CMatrix& op(int k) const;
  std::span<const CMatrix> operators() const noexcept;

  const RMatrix& grad_matrix() const noexcept;
  std::span<const HermitianMatrix> kernel_basis() const noexcept;
  int kernel_dim() const noexcept;
  /// Columns: vectorized orthonormal basis of ker(grad).
  const RMatrix& kernel_vectors() const noexcept;
  /// Columns: vectorized orthonormal basis of ker(grad)^perp.
  const RMatrix& complement_vectors() const noexcept;
  /// Columns: orthonormal basis of range(grad) inside the vectorized S^N.
  const RMatrix& range_vectors() const noexcept;
  /// Singular values of grad_matrix, descending.
  const RVector& singular_values() const noexcept;

 private:
  struct State;
  explicit LindbladSet(std::shared_ptr<const State> s) : s_(std::move(s)) {}
  static std::shared_ptr<const State> build(std::vector<CMatrix> ops);
  std::shared_ptr<const State> s_;
};

/// (L_k X - X L_k)_k as a skew-stack.
OperatorStack gradient(const LindbladSet& L, const HermitianMatrix& x);

/// sum_k L_k Y_k - Y_k L_k for a skew-stack Y.
HermitianMatrix divergence(const LindbladSet& L, const OperatorStack& y);

/// Closed form sum_k 2 L_k X L_k* - X L_k* L_k - L_k* L_k X.
HermitianMatrix laplacian(const LindbladSet& L, const HermitianMatrix& x);

/// -divergence(gradient(X)); agrees with laplacian() for Hermitian L.
HermitianMatrix laplacian_composed(const LindbladSet& L, const HermitianMatrix& x);

std::span<const HermitianMatrix> kernel_basis(const LindbladSet& L);

/// Orthogonal projection onto ker(grad).
HermitianMatrix project_kernel(const LindbladSet& L, const HermitianMatrix& x);

/// x - project_kernel(x).
HermitianMatrix project_kernel_complement(const LindbladSet& L, const HermitianMatrix& x);

/// Orthogonal projection of a skew-stack onto ker(divergence) = range(grad)^perp.
OperatorStack project_divergence_free(const LindbladSet& L, const OperatorStack& y);

/// Lindblad heat flow rho' = -i[H, rho] + Laplacian(rho)/2 integrated with
/// `steps` explicit midpoint steps up to time T. Throws StabilityError when
/// an iterate develops an eigenvalue below -1e-8.
DensityMatrix heat_flow(const LindbladSet& L, const DensityMatrix& rho0, double T, int steps,
                        const std::optional<HermitianMatrix>& hamiltonian = std::nullopt);

}  // namespace momt
