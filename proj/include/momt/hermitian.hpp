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

// Dense complex matrix foundation: Hermitian and skew-Hermitian types,
// operator stacks, the trace inner product, density validation and the
// real vectorization of the Hermitian matrices used by every superoperator
// in the library.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "momt/errors.hpp"

namespace momt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kDefaultPdThreshold = 1e-10;

/// Largest entrywise modulus of a complex matrix (0 for empty input).
double max_abs(const CMatrix& a);

/// Element of the real vector space of n x n Hermitian matrices.
///
/// The checked constructor accepts input whose deviation from symmetry is at
/// most `tol * max(1, max|a_ij|)` and stores (A + A*)/2; larger deviations
/// raise SymmetryError.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& a, double tol = kSymmetryTolerance);

  /// Stores (A + A*)/2 without checking. For results that are Hermitian by
  /// construction and only carry rounding noise.
  static HermitianMatrix symmetrize(const CMatrix& a);
  static HermitianMatrix zero(int n);
  static HermitianMatrix identity(int n);
  static HermitianMatrix diagonal(std::span<const double> d);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const;
  /// Hilbert-Schmidt norm sqrt(tr(X*X)).
  double norm() const;
  /// Eigenvalues in ascending order.
  RVector eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  HermitianMatrix& operator+=(const HermitianMatrix& o);
  HermitianMatrix& operator-=(const HermitianMatrix& o);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator-(HermitianMatrix a) { return a *= -1.0; }

 private:
  struct Unchecked {};
  HermitianMatrix(Unchecked, CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Element of the space of n x n skew-Hermitian matrices.
class SkewHermitianMatrix {
 public:
  SkewHermitianMatrix() = default;
  explicit SkewHermitianMatrix(const CMatrix& a, double tol = kSymmetryTolerance);
  static SkewHermitianMatrix antisymmetrize(const CMatrix& a);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  struct Unchecked {};
  SkewHermitianMatrix(Unchecked, CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

enum class Flavor { General, Hermitian, Skew };

const char* flavor_name(Flavor f) noexcept;

/// N-stack of n x n complex blocks: elements of S^N, H^N or general momenta
/// in C^{nN x n}. The flavor tag is checked block by block at construction.
class OperatorStack {
 public:
  OperatorStack() = default;
  OperatorStack(std::vector<CMatrix> blocks, Flavor flavor = Flavor::General,
                double tol = kSymmetryTolerance);

  static OperatorStack zeros(int n, int count, Flavor flavor = Flavor::General);
  /// Re-tags and projects every block onto the flavor's symmetry class.
  static OperatorStack project(std::vector<CMatrix> blocks, Flavor flavor);

  int dim() const noexcept { return n_; }
  int count() const noexcept { return static_cast<int>(blocks_.size()); }
  Flavor flavor() const noexcept { return flavor_; }
  const CMatrix& block(int k) const { return blocks_.at(static_cast<std::size_t>(k)); }
  std::span<const CMatrix> blocks() const noexcept { return blocks_; }

  /// Sum of squared Hilbert-Schmidt norms of the blocks.
  double squared_norm() const;
  double norm() const;

  /// Block-wise product m_k * a; flavor becomes General.
  OperatorStack right_multiply(const CMatrix& a) const;
  OperatorStack left_multiply(const CMatrix& a) const;

  OperatorStack& operator+=(const OperatorStack& o);
  OperatorStack& operator-=(const OperatorStack& o);
  OperatorStack& operator*=(double s);

  friend OperatorStack operator+(OperatorStack a, const OperatorStack& b) { return a += b; }
  friend OperatorStack operator-(OperatorStack a, const OperatorStack& b) { return a -= b; }
  friend OperatorStack operator*(double s, OperatorStack a) { return a *= s; }
  friend OperatorStack operator*(OperatorStack a, double s) { return a *= s; }

 private:
  void check_same_shape(const OperatorStack& o, const char* op) const;

  int n_ = 0;
  std::vector<CMatrix> blocks_;
  Flavor flavor_ = Flavor::General;
};

/// Unit-trace positive semidefinite Hermitian matrix. Only obtainable through
/// validate_density, so every instance satisfies the invariants.
class DensityMatrix {
 public:
  DensityMatrix() = default;

  const HermitianMatrix& hermitian() const noexcept { return base_; }
  const CMatrix& matrix() const noexcept { return base_.matrix(); }
  int dim() const noexcept { return base_.dim(); }
  operator const HermitianMatrix&() const noexcept { return base_; }

  /// The maximally mixed state I/n.
  static DensityMatrix maximally_mixed(int n);

 private:
  friend DensityMatrix validate_density(const HermitianMatrix&, bool, double);
  explicit DensityMatrix(HermitianMatrix base) : base_(std::move(base)) {}
  HermitianMatrix base_;
};

/// Traceless Hermitian matrix: a tangent vector to the density manifold.
class TangentDirection {
 public:
  explicit TangentDirection(HermitianMatrix base);
  const HermitianMatrix& hermitian() const noexcept { return base_; }

 private:
  HermitianMatrix base_;
};

/// tr(X*Y) for equally shaped matrices.
Complex inner_product(const CMatrix& x, const CMatrix& y);
/// Sum over blocks of tr(X_k* Y_k).
Complex inner_product(const OperatorStack& x, const OperatorStack& y);
/// tr(XY) for Hermitian arguments; real by construction.
double inner_product(const HermitianMatrix& x, const HermitianMatrix& y);

/// Re <m; b>, i.e. (<m;b> + <b;m>)/2.
double symmetric_dot(const OperatorStack& m, const OperatorStack& b);

/// Blockwise conjugate transpose (m -> m_*).
OperatorStack adjoint_stack(const OperatorStack& m);

/// Accepts iff |tr A - 1| <= 1e-12 and the smallest eigenvalue is > eps_pd
/// (strict) or >= -eps_pd (non-strict). Otherwise throws DensityError.
DensityMatrix validate_density(const HermitianMatrix& a, bool strict,
                               double eps_pd = kDefaultPdThreshold);

// --- eigen utilities ---------------------------------------------------------

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

HermitianEigen eigh(const CMatrix& a);
/// Moore-Penrose inverse of a Hermitian PSD matrix; eigenvalues below
/// `threshold` are treated as zero.
CMatrix pseudo_inverse(const HermitianMatrix& a, double threshold);
/// Orthogonal projector onto the eigenspace of eigenvalues with |value| <= threshold.
CMatrix null_projector(const HermitianMatrix& a, double threshold);

// --- real vectorization --------------------------------------------------------
//
// H(n) is treated as a real inner-product space of dimension n^2 with the
// orthonormal basis: E_jj for j = 0..n-1, then (E_ij + E_ji)/sqrt2 for i < j,
// then i(E_ij - E_ji)/sqrt2 for i < j (row-major pair order). Skew-Hermitian
// matrices S are vectorized through the Hermitian matrix -iS.

int real_dimension(int n) noexcept;
std::vector<HermitianMatrix> hermitian_basis(int n);
RVector vectorize(const HermitianMatrix& x);
HermitianMatrix devectorize(const Eigen::Ref<const RVector>& v, int n);
RVector vectorize_skew(const CMatrix& s);
CMatrix devectorize_skew(const Eigen::Ref<const RVector>& v, int n);
/// Concatenated vectorization of a skew-stack (N * n^2 entries).
RVector vectorize_skew_stack(const OperatorStack& s);
OperatorStack devectorize_skew_stack(const Eigen::Ref<const RVector>& v, int n, int count);

}  // namespace momt
