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

#include "momt/lindblad.hpp"

#include <cmath>
#include <sstream>

namespace momt {

struct LindbladSet::State {
  int n = 0;
  std::vector<CMatrix> ops;
  RMatrix grad;
  RVector singular;
  RMatrix kernel;
  RMatrix complement;
  RMatrix range;
  std::vector<HermitianMatrix> kernel_basis;
  bool hermitian = true;
};

namespace {

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

std::vector<CMatrix> raw_commutators(std::span<const CMatrix> ops, const CMatrix& x) {
  std::vector<CMatrix> out;
  out.reserve(ops.size());
  for (const auto& l : ops) out.emplace_back(l * x - x * l);
  return out;
}

}  // namespace

std::shared_ptr<const LindbladSet::State> LindbladSet::build(std::vector<CMatrix> ops) {
  if (ops.empty()) throw DimensionError("LindbladSet: at least one operator is required");
  auto s = std::make_shared<State>();
  s->n = static_cast<int>(ops.front().rows());
  for (const auto& l : ops)
    if (l.rows() != s->n || l.cols() != s->n)
      throw DimensionError("LindbladSet: operators must share one square dimension");
  s->ops = std::move(ops);
  for (const auto& l : s->ops) s->hermitian = s->hermitian && (l - l.adjoint()).norm() == 0.0;

  const int n = s->n;
  const int d = n * n;
  const int count = static_cast<int>(s->ops.size());
  s->grad.resize(d * count, d);
  for (int j = 0; j < d; ++j) {
    const HermitianMatrix b = devectorize(RVector::Unit(d, j), n);
    const auto blocks = raw_commutators(s->ops, b.matrix());
    for (int k = 0; k < count; ++k)
      s->grad.block(k * d, j, d, 1) = vectorize_skew(blocks[static_cast<std::size_t>(k)]);
  }

  Eigen::JacobiSVD<RMatrix> svd(s->grad, Eigen::ComputeFullU | Eigen::ComputeFullV);
  s->singular = svd.singularValues();
  const double smax = s->singular.size() > 0 ? s->singular(0) : 0.0;
  const double cutoff = kKernelRelativeThreshold * smax;
  int rank = 0;
  while (rank < s->singular.size() && smax > 0.0 && s->singular(rank) > cutoff) ++rank;

  const RMatrix& v = svd.matrixV();
  s->range = svd.matrixU().leftCols(rank);
  const RMatrix null = v.rightCols(d - rank);

  // Orthonormal kernel basis whose first element is I/sqrt(n); the complement
  // is made exactly traceless so moves along it never change the trace.
  RVector e = vectorize(HermitianMatrix::identity(n)) / std::sqrt(static_cast<double>(n));
  s->complement = v.leftCols(rank);
  s->complement -= e * (e.transpose() * s->complement);
  s->kernel.resize(d, d - rank);
  s->kernel.col(0) = e;
  if (d - rank > 1) {
    const RMatrix rest = null - e * (e.transpose() * null);
    Eigen::JacobiSVD<RMatrix> rsvd(rest, Eigen::ComputeThinU);
    s->kernel.rightCols(d - rank - 1) = rsvd.matrixU().leftCols(d - rank - 1);
  }
  for (int j = 0; j < s->kernel.cols(); ++j) s->kernel_basis.push_back(devectorize(s->kernel.col(j), n));
  return s;
}

LindbladSet::LindbladSet(std::vector<HermitianMatrix> operators) {
  std::vector<CMatrix> raw;
  raw.reserve(operators.size());
  for (auto& h : operators) raw.push_back(h.matrix());
  s_ = build(std::move(raw));
}

LindbladSet LindbladSet::unchecked_for_testing(std::vector<CMatrix> operators) {
  return LindbladSet(build(std::move(operators)));
}

LindbladSet LindbladSet::pauli() {
  return LindbladSet({HermitianMatrix(pauli_x()), HermitianMatrix(pauli_y()), HermitianMatrix(pauli_z())});
}

int LindbladSet::dim() const noexcept { return s_->n; }
int LindbladSet::count() const noexcept { return static_cast<int>(s_->ops.size()); }
bool LindbladSet::hermitian() const noexcept { return s_->hermitian; }
const CMatrix& LindbladSet::op(int k) const { return s_->ops.at(static_cast<std::size_t>(k)); }
std::span<const CMatrix> LindbladSet::operators() const noexcept { return s_->ops; }
const RMatrix& LindbladSet::grad_matrix() const noexcept { return s_->grad; }
std::span<const HermitianMatrix> LindbladSet::kernel_basis() const noexcept { return s_->kernel_basis; }
int LindbladSet::kernel_dim() const noexcept { return static_cast<int>(s_->kernel_basis.size()); }
const RMatrix& LindbladSet::kernel_vectors() const noexcept { return s_->kernel; }
const RMatrix& LindbladSet::complement_vectors() const noexcept { return s_->complement; }
const RMatrix& LindbladSet::range_vectors() const noexcept { return s_->range; }
const RVector& LindbladSet::singular_values() const noexcept { return s_->singular; }

// --- calculus ----------------------------------------------------------------

namespace {

void require_dim(const LindbladSet& L, int n, const char* op) {
  if (L.dim() != n) {
    std::ostringstream os;
    os << op << ": operator set acts on " << L.dim() << "x" << L.dim() << " matrices, argument is " << n
       << "x" << n;
    throw DimensionError(os.str());
  }
}

}  // namespace

OperatorStack gradient(const LindbladSet& L, const HermitianMatrix& x) {
  require_dim(L, x.dim(), "gradient");
  if (!L.hermitian()) return OperatorStack(raw_commutators(L.operators(), x.matrix()), Flavor::General);
  return OperatorStack::project(raw_commutators(L.operators(), x.matrix()), Flavor::Skew);
}

HermitianMatrix divergence(const LindbladSet& L, const OperatorStack& y) {
  require_dim(L, y.dim(), "divergence");
  if (y.count() != L.count()) throw DimensionError("divergence: stack length differs from operator count");
  if (y.flavor() != Flavor::Skew)
    throw FlavorError(std::string("divergence: expected a skew-stack, got ") + flavor_name(y.flavor()));
  CMatrix out = CMatrix::Zero(L.dim(), L.dim());
  for (int k = 0; k < L.count(); ++k) out += L.op(k) * y.block(k) - y.block(k) * L.op(k);
  return HermitianMatrix::symmetrize(out);
}

HermitianMatrix laplacian(const LindbladSet& L, const HermitianMatrix& x) {
  require_dim(L, x.dim(), "laplacian");
  const CMatrix& m = x.matrix();
  CMatrix out = CMatrix::Zero(L.dim(), L.dim());
  for (const auto& l : L.operators()) {
    const CMatrix la = l.adjoint();
    const CMatrix ll = la * l;
    out += 2.0 * l * m * la - m * ll - ll * m;
  }
  return HermitianMatrix::symmetrize(out);
}

HermitianMatrix laplacian_composed(const LindbladSet& L, const HermitianMatrix& x) {
  if (L.hermitian()) return -divergence(L, gradient(L, x));
  const OperatorStack g = gradient(L, x);
  CMatrix out = CMatrix::Zero(L.dim(), L.dim());
  for (int k = 0; k < L.count(); ++k) out -= L.op(k) * g.block(k) - g.block(k) * L.op(k);
  return HermitianMatrix::symmetrize(out);
}

std::span<const HermitianMatrix> kernel_basis(const LindbladSet& L) { return L.kernel_basis(); }

HermitianMatrix project_kernel(const LindbladSet& L, const HermitianMatrix& x) {
  require_dim(L, x.dim(), "project_kernel");
  const RMatrix& k = L.kernel_vectors();
  const RVector c = k.transpose() * vectorize(x);
  return devectorize(k * c, L.dim());
}

HermitianMatrix project_kernel_complement(const LindbladSet& L, const HermitianMatrix& x) {
  return x - project_kernel(L, x);
}

OperatorStack project_divergence_free(const LindbladSet& L, const OperatorStack& y) {
  require_dim(L, y.dim(), "project_divergence_free");
  if (y.flavor() != Flavor::Skew) throw FlavorError("project_divergence_free: expected a skew-stack");
  if (y.count() != L.count()) throw DimensionError("project_divergence_free: stack length mismatch");
  const RMatrix& u = L.range_vectors();
  RVector v = vectorize_skew_stack(y);
  v -= u * (u.transpose() * v);
  return devectorize_skew_stack(v, L.dim(), L.count());
}

// --- heat flow ---------------------------------------------------------------

DensityMatrix heat_flow(const LindbladSet& L, const DensityMatrix& rho0, double T, int steps,
                        const std::optional<HermitianMatrix>& hamiltonian) {
  require_dim(L, rho0.dim(), "heat_flow");
  if (!(T >= 0.0)) throw Error("heat_flow: T must be nonnegative");
  if (steps < 1) throw Error("heat_flow: steps must be at least 1");
  if (hamiltonian) require_dim(L, hamiltonian->dim(), "heat_flow hamiltonian");

  const Complex minus_i(0.0, -1.0);
  auto rhs = [&](const CMatrix& rho) {
    CMatrix d = 0.5 * laplacian(L, HermitianMatrix::symmetrize(rho)).matrix();
    if (hamiltonian) {
      const CMatrix& h = hamiltonian->matrix();
      d += minus_i * (h * rho - rho * h);
    }
    return d;
  };

  const double h = T / steps;
  CMatrix rho = rho0.matrix();
  for (int s = 0; s < steps && T > 0.0; ++s) {
    const CMatrix mid = rho + 0.5 * h * rhs(rho);
    rho = rho + h * rhs(mid);
    rho = 0.5 * (rho + CMatrix(rho.adjoint()));
    const double lo = HermitianMatrix::symmetrize(rho).min_eigenvalue();
    if (lo < -1e-8) {
      std::ostringstream os;
      os << "heat_flow: step " << s << " produced eigenvalue " << lo << " with step size " << h
         << "; increase the number of steps";
      throw StabilityError(os.str());
    }
  }
  return validate_density(HermitianMatrix::symmetrize(rho), false, 1e-8);
}

}  // namespace momt
