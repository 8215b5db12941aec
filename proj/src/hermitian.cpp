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

#include "momt/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace momt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_square(const CMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
}

double symmetry_scale(const CMatrix& a) { return std::max(1.0, max_abs(a)); }

}  // namespace

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

// --- HermitianMatrix ---------------------------------------------------------

HermitianMatrix::HermitianMatrix(const CMatrix& a, double tol) {
  require_square(a, "HermitianMatrix");
  const double dev = max_abs(a - a.adjoint());
  if (dev > tol * symmetry_scale(a)) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |A - A*| = " << dev << " exceeds tolerance " << tol;
    throw SymmetryError(os.str());
  }
  m_ = 0.5 * (a + a.adjoint());
}

HermitianMatrix HermitianMatrix::symmetrize(const CMatrix& a) {
  require_square(a, "HermitianMatrix");
  return HermitianMatrix(Unchecked{}, 0.5 * (a + a.adjoint()));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return HermitianMatrix(Unchecked{}, CMatrix::Zero(n, n));
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(Unchecked{}, CMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> d) {
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return HermitianMatrix(Unchecked{}, std::move(m));
}

double HermitianMatrix::trace() const { return m_.trace().real(); }

double HermitianMatrix::norm() const { return m_.norm(); }

RVector HermitianMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianMatrix::min_eigenvalue() const { return eigenvalues()(0); }

double HermitianMatrix::max_eigenvalue() const {
  const RVector ev = eigenvalues();
  return ev(ev.size() - 1);
}

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& o) {
  if (o.dim() != dim()) throw DimensionError("HermitianMatrix +: dimension mismatch");
  m_ += o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& o) {
  if (o.dim() != dim()) throw DimensionError("HermitianMatrix -: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

// --- SkewHermitianMatrix -----------------------------------------------------

SkewHermitianMatrix::SkewHermitianMatrix(const CMatrix& a, double tol) {
  require_square(a, "SkewHermitianMatrix");
  const double dev = max_abs(a + a.adjoint());
  if (dev > tol * symmetry_scale(a)) {
    std::ostringstream os;
    os << "matrix is not skew-Hermitian: max |A + A*| = " << dev << " exceeds tolerance " << tol;
    throw SymmetryError(os.str());
  }
  m_ = 0.5 * (a - a.adjoint());
}

SkewHermitianMatrix SkewHermitianMatrix::antisymmetrize(const CMatrix& a) {
  require_square(a, "SkewHermitianMatrix");
  return SkewHermitianMatrix(Unchecked{}, 0.5 * (a - a.adjoint()));
}

// --- OperatorStack -----------------------------------------------------------

const char* flavor_name(Flavor f) noexcept {
  switch (f) {
    case Flavor::General:
      return "general";
    case Flavor::Hermitian:
      return "hermitian-stack";
    case Flavor::Skew:
      return "skew-stack";
  }
  return "unknown";
}

OperatorStack::OperatorStack(std::vector<CMatrix> blocks, Flavor flavor, double tol)
    : blocks_(std::move(blocks)), flavor_(flavor) {
  if (blocks_.empty()) throw DimensionError("OperatorStack: at least one block is required");
  n_ = static_cast<int>(blocks_.front().rows());
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    CMatrix& b = blocks_[k];
    require_square(b, "OperatorStack block");
    if (b.rows() != n_) throw DimensionError("OperatorStack: blocks differ in size");
    if (flavor_ == Flavor::General) continue;
    const double sign = flavor_ == Flavor::Hermitian ? -1.0 : 1.0;
    const double dev = max_abs(b + sign * CMatrix(b.adjoint()));
    if (dev > tol * symmetry_scale(b)) {
      std::ostringstream os;
      os << "OperatorStack block " << k << " violates " << flavor_name(flavor_)
         << " symmetry by " << dev;
      throw FlavorError(os.str());
    }
    b = 0.5 * (b - sign * CMatrix(b.adjoint()));
  }
}

OperatorStack OperatorStack::zeros(int n, int count, Flavor flavor) {
  return OperatorStack(std::vector<CMatrix>(static_cast<std::size_t>(count), CMatrix::Zero(n, n)), flavor);
}

OperatorStack OperatorStack::project(std::vector<CMatrix> blocks, Flavor flavor) {
  if (flavor != Flavor::General) {
    const double sign = flavor == Flavor::Hermitian ? 1.0 : -1.0;
    for (auto& b : blocks) b = 0.5 * (b + sign * CMatrix(b.adjoint()));
  }
  return OperatorStack(std::move(blocks), flavor);
}

double OperatorStack::squared_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return s;
}

double OperatorStack::norm() const { return std::sqrt(squared_norm()); }

OperatorStack OperatorStack::right_multiply(const CMatrix& a) const {
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.emplace_back(b * a);
  return OperatorStack(std::move(out));
}

OperatorStack OperatorStack::left_multiply(const CMatrix& a) const {
  std::vector<CMatrix> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.emplace_back(a * b);
  return OperatorStack(std::move(out));
}

void OperatorStack::check_same_shape(const OperatorStack& o, const char* op) const {
  if (o.n_ != n_ || o.count() != count()) {
    std::ostringstream os;
    os << "OperatorStack " << op << ": shape mismatch (" << count() << "x" << n_ << " vs "
       << o.count() << "x" << o.n_ << ")";
    throw DimensionError(os.str());
  }
}

OperatorStack& OperatorStack::operator+=(const OperatorStack& o) {
  check_same_shape(o, "+");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += o.blocks_[k];
  if (o.flavor_ != flavor_) flavor_ = Flavor::General;
  return *this;
}

OperatorStack& OperatorStack::operator-=(const OperatorStack& o) {
  check_same_shape(o, "-");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= o.blocks_[k];
  if (o.flavor_ != flavor_) flavor_ = Flavor::General;
  return *this;
}

OperatorStack& OperatorStack::operator*=(double s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

// --- densities ---------------------------------------------------------------

DensityMatrix DensityMatrix::maximally_mixed(int n) {
  return DensityMatrix(HermitianMatrix::identity(n) * (1.0 / n));
}

TangentDirection::TangentDirection(HermitianMatrix base) : base_(std::move(base)) {
  if (std::abs(base_.trace()) > kTraceTolerance) {
    std::ostringstream os;
    os << "tangent direction must be traceless, trace = " << base_.trace();
    throw DensityError(DensityError::Kind::NotUnitTrace, base_.trace(), os.str());
  }
}

DensityMatrix validate_density(const HermitianMatrix& a, bool strict, double eps_pd) {
  const double tr = a.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << "NotUnitTrace: trace = " << tr;
    throw DensityError(DensityError::Kind::NotUnitTrace, tr, os.str());
  }
  const double lo = a.min_eigenvalue();
  const bool ok = strict ? lo > eps_pd : lo >= -eps_pd;
  if (!ok) {
    std::ostringstream os;
    os << "NotPositive: smallest eigenvalue = " << lo
       << (strict ? " is not above the definiteness threshold " : " is below -")
       << eps_pd;
    throw DensityError(DensityError::Kind::NotPositive, lo, os.str());
  }
  return DensityMatrix(a);
}

// --- inner products ----------------------------------------------------------

Complex inner_product(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError("inner_product: shape mismatch");
  // tr(X*Y) = sum_ij conj(X_ij) Y_ij
  return x.conjugate().cwiseProduct(y).sum();
}

Complex inner_product(const OperatorStack& x, const OperatorStack& y) {
  if (x.dim() != y.dim() || x.count() != y.count())
    throw DimensionError("inner_product: stack shape mismatch");
  Complex s{};
  for (int k = 0; k < x.count(); ++k) s += inner_product(x.block(k), y.block(k));
  return s;
}

double inner_product(const HermitianMatrix& x, const HermitianMatrix& y) {
  return inner_product(x.matrix(), y.matrix()).real();
}

double symmetric_dot(const OperatorStack& m, const OperatorStack& b) {
  return inner_product(m, b).real();
}

OperatorStack adjoint_stack(const OperatorStack& m) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(m.count()));
  for (const auto& b : m.blocks()) out.emplace_back(b.adjoint());
  return OperatorStack(std::move(out), m.flavor());
}

// --- eigen utilities ---------------------------------------------------------

HermitianEigen eigh(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix pseudo_inverse(const HermitianMatrix& a, double threshold) {
  const auto [values, vectors] = eigh(a.matrix());
  RVector inv = RVector::Zero(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (std::abs(values(i)) > threshold) inv(i) = 1.0 / values(i);
  return vectors * inv.cast<Complex>().asDiagonal() * vectors.adjoint();
}

CMatrix null_projector(const HermitianMatrix& a, double threshold) {
  const auto [values, vectors] = eigh(a.matrix());
  RVector sel = RVector::Zero(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (std::abs(values(i)) <= threshold) sel(i) = 1.0;
  return vectors * sel.cast<Complex>().asDiagonal() * vectors.adjoint();
}

// --- vectorization -----------------------------------------------------------

int real_dimension(int n) noexcept { return n * n; }

std::vector<HermitianMatrix> hermitian_basis(int n) {
  std::vector<HermitianMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  for (int k = 0; k < n * n; ++k) basis.push_back(devectorize(RVector::Unit(n * n, k), n));
  return basis;
}

RVector vectorize(const HermitianMatrix& x) {
  const int n = x.dim();
  const CMatrix& m = x.matrix();
  RVector v(n * n);
  int idx = 0;
  for (int j = 0; j < n; ++j) v(idx++) = m(j, j).real();
  // <(E_ij + E_ji)/sqrt2, X> = sqrt2 Re X_ij ; <i(E_ij - E_ji)/sqrt2, X> = sqrt2 Im X_ij
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(idx++) = 2.0 * kInvSqrt2 * m(i, j).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v(idx++) = 2.0 * kInvSqrt2 * m(i, j).imag();
  return v;
}

HermitianMatrix devectorize(const Eigen::Ref<const RVector>& v, int n) {
  if (v.size() != n * n) throw DimensionError("devectorize: expected n^2 coefficients");
  CMatrix m = CMatrix::Zero(n, n);
  int idx = 0;
  for (int j = 0; j < n; ++j) m(j, j) = v(idx++);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) += kInvSqrt2 * v(idx);
      m(j, i) += kInvSqrt2 * v(idx);
      ++idx;
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      m(i, j) += Complex(0.0, kInvSqrt2 * v(idx));
      m(j, i) += Complex(0.0, -kInvSqrt2 * v(idx));
      ++idx;
    }
  return HermitianMatrix::symmetrize(m);
}

RVector vectorize_skew(const CMatrix& s) {
  return vectorize(HermitianMatrix::symmetrize(Complex(0.0, -1.0) * s));
}

CMatrix devectorize_skew(const Eigen::Ref<const RVector>& v, int n) {
  return Complex(0.0, 1.0) * devectorize(v, n).matrix();
}

RVector vectorize_skew_stack(const OperatorStack& s) {
  const int d = s.dim() * s.dim();
  RVector v(d * s.count());
  for (int k = 0; k < s.count(); ++k) v.segment(k * d, d) = vectorize_skew(s.block(k));
  return v;
}

OperatorStack devectorize_skew_stack(const Eigen::Ref<const RVector>& v, int n, int count) {
  const int d = n * n;
  if (v.size() != d * count) throw DimensionError("devectorize_skew_stack: size mismatch");
  std::vector<CMatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) blocks.push_back(devectorize_skew(v.segment(k * d, d), n));
  return OperatorStack::project(std::move(blocks), Flavor::Skew);
}

}  // namespace momt
