// Copyright 2026 The entcap Authors
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

/**
 * @file
 * Canonical form of two-qubit unitaries.
 *
 * Every U in U(4) is locally equivalent to
 *
 *     U_d = exp(i (a1 XX + a2 YY + a3 ZZ)),   pi/4 >= a1 >= a2 >= |a3| >= 0,
 *
 * which is diagonal in the Bell basis returned by bell_basis(), with
 * eigenphases
 *
 *     l1 = -a1 + a2 + a3,  l2 = a1 - a2 + a3,
 *     l3 =  a1 + a2 - a3,  l4 = -a1 - a2 - a3.
 */

#include <Eigen/Dense>
#include <array>

#include "entcap/qcore.hpp"

namespace entcap {

struct CanonicalParams {
  std::array<double, 3> alpha{};
  /// Set by decompose() when the input is locally equivalent to the complex
  /// conjugate of build_canonical_unitary(*this) rather than to it; alpha[2]
  /// is then reported with flipped sign. Capacities do not depend on it.
  bool conjugated = false;

  /// Bell-basis eigenphases (l1, l2, l3, l4); they sum to zero.
  std::array<double, 4> lambdas() const;

  /// pi/4 >= a1 >= a2 >= |a3| >= 0 up to `tolerance`.
  bool is_canonical(double tolerance = 1e-9) const;
};

/// Bell basis with the phase convention under which the concurrence of
/// sum_j b_j |Phi_j> is |sum_j b_j^2|:
///   Phi1 = -i(|00> - |11>)/sqrt2,  Phi2 = (|00> + |11>)/sqrt2,
///   Phi3 = -i(|01> + |10>)/sqrt2,  Phi4 = (|01> - |10>)/sqrt2.
const std::array<Eigen::Vector4cd, 4> &bell_basis();
/// Columns are Phi1..Phi4.
const Eigen::Matrix4cd &bell_basis_matrix();

/// sum_j exp(i l_j) |Phi_j><Phi_j|. Any real triple is accepted.
TwoQubitUnitary build_canonical_unitary(const CanonicalParams &params);

/// (Y (x) Y) U^T (Y (x) Y). Throws DimensionMismatch unless 4x4.
ComplexMatrix u_tilde(const ComplexMatrix &u);

/// Eigenvalues of u_tilde(U') U' with U' = U / det(U)^(1/4) (principal root),
/// ordered by argument in (-pi, pi]. Defined up to a common sign.
using LocalInvariants = std::array<Complex, 4>;
LocalInvariants local_invariants(const TwoQubitUnitary &u);

/// Smallest max-norm distance between the multisets, minimized over the
/// common sign ambiguity.
double invariant_distance(const LocalInvariants &a, const LocalInvariants &b);

/// Canonical parameters of u. Throws BranchResolutionFailure if no phase
/// branch reproduces the invariants of u.
CanonicalParams decompose(const TwoQubitUnitary &u);

/// Coefficients b_j = <Phi_j|psi>. Throws DimensionMismatch unless two qubits.
Eigen::Vector4cd bell_coefficients(const PureState &psi);
/// sum_j b_j |Phi_j>; b must have unit norm.
PureState state_from_bell_coefficients(const Eigen::Vector4cd &b);

}  // namespace entcap
