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

#include "joint_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace momt::oracle {

namespace {

// Orthonormal Hermitian basis, off-diagonal pairs interleaved.
std::vector<CMat> basis(int n) {
  std::vector<CMat> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i) {
    CMat b = CMat::Zero(n, n);
    b(i, i) = 1.0;
    out.push_back(b);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      CMat s = CMat::Zero(n, n), a = CMat::Zero(n, n);
      s(i, j) = s(j, i) = r;
      a(i, j) = Cx(0.0, r);
      a(j, i) = Cx(0.0, -r);
      out.push_back(s);
      out.push_back(a);
    }
  return out;
}

class Problem {
 public:
  Problem(const std::vector<CMat>& ops, const CMat& rho0, const CMat& rho1, int K)
      : ops_(ops), rho0_(rho0), rho1_(rho1), K_(K), n_(static_cast<int>(rho0.rows())), N_(static_cast<int>(ops.size())),
        basis_(basis(n_)), dt_(1.0 / K) {
    h_ = n_ * n_;
    mb_ = 2 * n_ * n_ * N_;
    nr_ = (K_ - 1) * h_;
    size_ = nr_ + K_ * mb_;
  }

  int size() const { return size_; }
  int rho_offset(int k) const { return (k - 1) * h_; }  // interior k only
  int m_offset(int k) const { return nr_ + k * mb_; }

  RVec coords(const CMat& x) const {
    RVec c(h_);
    for (int i = 0; i < h_; ++i) c(i) = (basis_[static_cast<std::size_t>(i)].adjoint() * x).trace().real();
    return c;
  }
  CMat herm(const Eigen::Ref<const RVec>& c) const {
    CMat x = CMat::Zero(n_, n_);
    for (int i = 0; i < h_; ++i) x += c(i) * basis_[static_cast<std::size_t>(i)];
    return x;
  }

  CMat node(const RVec& z, int k) const {
    if (k == 0) return rho0_;
    if (k == K_) return rho1_;
    return herm(z.segment(rho_offset(k), h_));
  }
  CMat block(const RVec& z, int k, int l) const {
    const int off = m_offset(k) + l * 2 * h_;
    CMat b(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) b(i, j) = Cx(z(off + i * n_ + j), z(off + h_ + i * n_ + j));
    return b;
  }
  void put_block(RVec& g, int k, int l, const CMat& b) const {
    const int off = m_offset(k) + l * 2 * h_;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        g(off + i * n_ + j) += b(i, j).real();
        g(off + h_ + i * n_ + j) += b(i, j).imag();
      }
  }

  // rho_{k+1} - rho_k - (dt/2) sum_l [L_l, m_l - m_l*], in basis coordinates.
  RVec constraints(const RVec& z) const {
    RVec c(K_ * h_);
    for (int k = 0; k < K_; ++k) {
      CMat div = CMat::Zero(n_, n_);
      for (int l = 0; l < N_; ++l) {
        const CMat m = block(z, k, l);
        const CMat s = m - m.adjoint();
        const CMat& L = ops_[static_cast<std::size_t>(l)];
        div += L * s - s * L;
      }
      c.segment(k * h_, h_) = coords(node(z, k + 1) - node(z, k) - 0.5 * dt_ * div);
    }
    return c;
  }

  // Interval term and its gradient; returns +inf when the midpoint is not
  // positive definite.
  double interval(const RVec& z, int k, RVec* grad) const {
    const CMat mid = 0.5 * (node(z, k) + node(z, k + 1));
    Eigen::SelfAdjointEigenSolver<CMat> es(mid);
    if (!(es.eigenvalues()(0) > 0.0)) return std::numeric_limits<double>::infinity();
    const CMat inv = es.eigenvectors() * es.eigenvalues().cwiseInverse().cast<Cx>().asDiagonal() *
                     es.eigenvectors().adjoint();
    double f = 0.0;
    CMat gram = CMat::Zero(n_, n_);
    for (int l = 0; l < N_; ++l) {
      const CMat m = block(z, k, l);
      f += 0.5 * dt_ * (m.adjoint() * m * inv).trace().real();
      if (grad) {
        put_block(*grad, k, l, dt_ * m * inv);
        gram += m.adjoint() * m;
      }
    }
    if (grad) {
      const RVec gr = coords(-0.25 * dt_ * inv * gram * inv);
      if (k > 0) grad->segment(rho_offset(k), h_) += gr;
      if (k + 1 < K_) grad->segment(rho_offset(k + 1), h_) += gr;
    }
    return f;
  }

  double cost(const RVec& z, RVec* grad) const {
    if (grad) grad->setZero(size_);
    double f = 0.0;
    for (int k = 0; k < K_; ++k) f += interval(z, k, grad);
    return f;
  }

  // Global indices touched by interval k.
  std::vector<int> local_indices(int k) const {
    std::vector<int> idx;
    if (k > 0)
      for (int i = 0; i < h_; ++i) idx.push_back(rho_offset(k) + i);
    if (k + 1 < K_)
      for (int i = 0; i < h_; ++i) idx.push_back(rho_offset(k + 1) + i);
    for (int i = 0; i < mb_; ++i) idx.push_back(m_offset(k) + i);
    return idx;
  }

  // Central differences of the analytic gradient, one interval at a time.
  RMat hessian(const RVec& z, double h) const {
    RMat H = RMat::Zero(size_, size_);
    for (int k = 0; k < K_; ++k) {
      const std::vector<int> idx = local_indices(k);
      for (int j : idx) {
        RVec zp = z, zm = z;
        zp(j) += h;
        zm(j) -= h;
        RVec gp = RVec::Zero(size_), gm = RVec::Zero(size_);
        interval(zp, k, &gp);
        interval(zm, k, &gm);
        for (int i : idx) H(i, j) += (gp(i) - gm(i)) / (2.0 * h);
      }
    }
    return 0.5 * (H + H.transpose());
  }

  // Linear interpolation with minimum-norm momenta per interval.
  RVec start() const {
    RVec z = RVec::Zero(size_);
    for (int k = 1; k < K_; ++k) {
      const double t = static_cast<double>(k) / K_;
      z.segment(rho_offset(k), h_) = coords((1.0 - t) * rho0_ + t * rho1_);
    }
    // Constraint map of one interval's momenta.
    RMat D(h_, mb_);
    for (int j = 0; j < mb_; ++j) {
      RVec e = RVec::Zero(size_);
      e(m_offset(0) + j) = 1.0;
      RVec zero = RVec::Zero(size_);
      // Isolate the momentum part of interval 0's constraint.
      const RVec c1 = constraints(e).segment(0, h_);
      const RVec c0 = constraints(zero).segment(0, h_);
      D.col(j) = c1 - c0;
    }
    const Eigen::CompleteOrthogonalDecomposition<RMat> cod(D);
    const RVec step = coords((rho1_ - rho0_) * (1.0 / K_));
    const RVec m = cod.solve(-step);
    for (int k = 0; k < K_; ++k) z.segment(m_offset(k), mb_) = m;
    return z;
  }

  RMat constraint_matrix(RVec* offset) const {
    const RVec c0 = constraints(RVec::Zero(size_));
    RMat A(K_ * h_, size_);
    for (int j = 0; j < size_; ++j) {
      RVec e = RVec::Zero(size_);
      e(j) = 1.0;
      A.col(j) = constraints(e) - c0;
    }
    *offset = c0;
    return A;
  }

  std::vector<CMat> nodes(const RVec& z) const {
    std::vector<CMat> out;
    for (int k = 0; k <= K_; ++k) out.push_back(node(z, k));
    return out;
  }
  std::vector<std::vector<CMat>> momenta(const RVec& z) const {
    std::vector<std::vector<CMat>> out(static_cast<std::size_t>(K_));
    for (int k = 0; k < K_; ++k)
      for (int l = 0; l < N_; ++l) out[static_cast<std::size_t>(k)].push_back(block(z, k, l));
    return out;
  }

 private:
  std::vector<CMat> ops_;
  CMat rho0_, rho1_;
  int K_, n_, N_;
  std::vector<CMat> basis_;
  double dt_;
  int h_ = 0, mb_ = 0, nr_ = 0, size_ = 0;
};

}  // namespace

JointResult solve_joint(const std::vector<CMat>& operators, const CMat& rho0, const CMat& rho1, int K, int max_iter) {
  if (K < 1 || operators.empty()) throw std::invalid_argument("solve_joint: need K >= 1 and operators");
  const Problem P(operators, rho0, rho1, K);

  RVec offset;
  const RMat A = P.constraint_matrix(&offset);
  // Null space of A from a rank-revealing QR of its transpose.
  Eigen::ColPivHouseholderQR<RMat> qr(A.transpose());
  const RMat Q = qr.householderQ() * RMat::Identity(P.size(), P.size());
  qr.setThreshold(1e-12);
  const int rank = static_cast<int>(qr.rank());
  const RMat Z = Q.rightCols(P.size() - rank);

  RVec z = P.start();
  JointResult out;
  RVec g;
  double f = P.cost(z, &g);
  for (int it = 0; it < max_iter; ++it) {
    const RVec gw = Z.transpose() * g;
    const RMat Hw = Z.transpose() * P.hessian(z, 1e-6) * Z;
    Eigen::LLT<RMat> llt(Hw);
    double shift = 1e-14 * Hw.diagonal().cwiseAbs().maxCoeff();
    while (llt.info() != Eigen::Success) {
      llt.compute(Hw + shift * RMat::Identity(Hw.rows(), Hw.cols()));
      shift *= 10.0;
    }
    const RVec dw = -llt.solve(gw);
    const double decrement = -gw.dot(dw);
    out.iterations = it;
    out.decrement = decrement;
    out.grad_norm = gw.norm();
    if (decrement <= 1e-20 * (1.0 + f)) break;

    const RVec dz = Z * dw;
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 80; ++ls, t *= 0.5) {
      RVec gt;
      const RVec zt = z + t * dz;
      const double ft = P.cost(zt, &gt);
      if (std::isfinite(ft) && ft <= f - 1e-4 * t * decrement) {
        z = zt;
        f = ft;
        g = gt;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }

  out.cost = f;
  out.distance = std::sqrt(2.0 * f);
  out.constraint_residual = P.constraints(z).cwiseAbs().maxCoeff();
  out.nodes = P.nodes(z);
  out.momenta = P.momenta(z);
  (void)offset;
  return out;
}

}  // namespace momt::oracle
