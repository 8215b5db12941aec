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

// The kinetic action F(rho, m) = <m; m rho^-1>/2 extended to all of
// H x C^{nN x n}, its convex conjugate (the indicator of a + b*b/2 <= 0),
// Fenchel-Young gaps and the discretized path cost.

#pragma once

#include <random>

#include "momt/lindblad.hpp"
#include "momt/path.hpp"

namespace momt {

/// Value in [0, inf]. Infinity is an explicit tag, never a large float.
class ExtendedValue {
 public:
  static ExtendedValue finite(double v) { return ExtendedValue(true, v); }
  static ExtendedValue infinite() { return ExtendedValue(false, 0.0); }

  bool is_finite() const noexcept { return finite_; }
  /// Throws if infinite.
  double value() const;

  friend ExtendedValue operator+(ExtendedValue a, ExtendedValue b) {
    if (!a.finite_ || !b.finite_) return infinite();
    return finite(a.value_ + b.value_);
  }
  friend ExtendedValue operator*(double s, ExtendedValue a) {
    if (!a.finite_) return a;
    return finite(s * a.value_);
  }

 private:
  ExtendedValue(bool f, double v) : finite_(f), value_(v) {}
  bool finite_;
  double value_;
};

/// Point (a, b) of the conjugate domain H x C^{nN x n}.
struct DualPoint {
  HermitianMatrix a;
  OperatorStack b;
};

/// Range-compatibility tolerance for singular weights: m is compatible when
/// ||m P_ker(rho)|| <= kCompatibilityTolerance * ||m||.
inline constexpr double kCompatibilityTolerance = 1e-9;

/// F(rho, m).
///  - rho > eps_pd: tr(m* m rho^-1)/2.
///  - some eigenvalue < -eps_pd: infinite.
///  - otherwise (singular PSD): finite iff every block annihilates ker(rho),
///    and then tr(m* m rho^+)/2.
ExtendedValue kinetic(const HermitianMatrix& rho, const OperatorStack& m, double eps_pd = kDefaultPdThreshold);

/// sum_k b_k* b_k.
HermitianMatrix gram(const OperatorStack& b);

/// True iff the largest eigenvalue of a + b*b/2 is <= tol.
bool legendre_feasible(const DualPoint& p, double tol = 1e-10);

/// F(rho, m) - <a; rho> - b.m. Requires a feasible p and finite F.
double fenchel_gap(const HermitianMatrix& rho, const OperatorStack& m, const DualPoint& p,
                   double eps_pd = kDefaultPdThreshold);

/// (-(grad X)*(grad X)/2, grad X): a subgradient of F at (rho, grad(X) rho).
DualPoint subdifferential_point(const LindbladSet& L, const HermitianMatrix& x);

/// F(rho, m) >= ||m||^2 / (2 tr rho) - 1e-10 whenever F is finite.
bool trace_lower_bound(const HermitianMatrix& rho, const OperatorStack& m, double eps_pd = kDefaultPdThreshold);

/// Lower estimate of sup{<a; rho> + b.m : a + b*b/2 <= 0} from the closed-form
/// maximizer b = m rho^+ and `samples` random feasible points around it.
/// Audits the boundary rule of kinetic() from below.
double conjugate_sup_estimate(const HermitianMatrix& rho, const OperatorStack& m, std::mt19937_64& rng,
                              int samples = 64);

/// sum_k dt F(midpoint_k, m_k); infinite if any interval is.
ExtendedValue path_cost(const DiscretePath& path, double eps_pd = kDefaultPdThreshold);

}  // namespace momt
