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

#include <optional>
#include <string_view>

#include "entcap/qcore.hpp"

namespace entcap {

enum class MeasureKind {
  Concurrence,
  ConcurrenceSquared,
  EntropyOfEntanglement,
  LinearEntropy,
};

/// Short names used on the command line: c2, concurrence, entropy, linear.
std::string_view to_string(MeasureKind kind);
std::optional<MeasureKind> parse_measure(std::string_view name);

/// True for the measures only defined on one qubit per party.
bool requires_two_qubits(MeasureKind kind);

/// |<psi| Y (x) Y |psi*>| with conjugation in the computational basis.
double concurrence(const PureState &psi);

/// Von Neumann entropy of A's reduced state, in bits.
double entropy_of_entanglement(const PureState &psi);

/// 1 - Tr(rho_A^2).
double linear_entropy(const PureState &psi);
/// 2 (1 - Tr(rho_A^2)); equals C^2 on two qubits. Two-qubit states only.
double normalized_linear_entropy(const PureState &psi);

/// Throws UnsupportedMeasureForDimension for concurrence measures on more than
/// two qubits and WrongPartition when a party holds no qubit.
double evaluate(MeasureKind kind, const PureState &psi);

/// h((1 + sqrt(1 - c^2)) / 2): entropy of a two-qubit pure state with
/// concurrence c. Throws OutOfRange outside [0, 1].
double entropy_from_concurrence(double c);

/// Measure value together with its gradient with respect to the Schmidt
/// matrix M of the state (rows: A, columns: B). For real perturbations,
/// d(value) = Re sum_ij conj(G_ij) dM_ij, i.e. G = dF/dRe M + i dF/dIm M.
struct MeasureGradient {
  double value = 0.0;
  ComplexMatrix gradient;
};

/// Smallest smoothing of the concurrence used by the optimizers.
inline constexpr double kConcurrenceSmoothing = 1e-8;

/// Works on unnormalized M as a function of rho = M M^dagger; callers are
/// expected to project out the radial direction. For the entropy, eigenvalues
/// below kEigenvalueFloor contribute p * -log2(kEigenvalueFloor) instead of 0,
/// which keeps the objective continuous for line searches. The concurrence is
/// replaced by sqrt(C^2 + smoothing^2) - smoothing, which is differentiable at
/// C = 0 and within `smoothing` of C.
MeasureGradient evaluate_with_gradient(
    MeasureKind kind, const ComplexMatrix &schmidt,
    double smoothing = kConcurrenceSmoothing);
/// Value part of evaluate_with_gradient.
double evaluate_schmidt(MeasureKind kind, const ComplexMatrix &schmidt,
                        double smoothing = kConcurrenceSmoothing);

}  // namespace entcap
