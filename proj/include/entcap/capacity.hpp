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
 * Closed-form single-copy entangling capacities without ancillas, for a gate
 * in canonical form, and the bounds that follow from numerical capacities.
 */

#include <optional>
#include <string_view>

#include "entcap/canonical.hpp"
#include "entcap/measures.hpp"
#include "entcap/optimize.hpp"

namespace entcap {

/// Which closed form applies. OneEbit: a1 + a2 >= pi/4 and a2 + a3 <= pi/4,
/// so one e-bit is reachable from a product state. Region1: a1 + a2 < pi/4.
/// Region2: a2 + a3 > pi/4.
enum class RegionTag { OneEbit, Region1, Region2 };

std::string_view to_string(RegionTag tag);

/// Throws NotCanonical unless params.is_canonical(). Boundary points within
/// 1e-12 are assigned to OneEbit.
RegionTag region_of(const CanonicalParams &params);

struct AnalyticCapacity {
  /// In the measure's own units.
  double value = 0.0;
  RegionTag region = RegionTag::OneEbit;
  /// Unset when the closed form does not give a state and none was resolved.
  std::optional<PureState> optimal_state;
  double initial_entanglement = 0.0;
  /// The value extends a formula outside the region where it was derived and
  /// is backed by numerical checks only.
  bool extrapolated = false;
  /// Linear entropy only: the value under the 2 (1 - Tr rho^2) normalization.
  std::optional<double> rescaled_value;
};

/// max_{j<k} |sin(l_k - l_j)| over the Bell eigenphases.
double max_gap_sine(const CanonicalParams &params);

/// Capacity for the squared concurrence. When `resolve` is given, the OneEbit
/// product optimum is found numerically with it.
AnalyticCapacity capacity_c2(const CanonicalParams &params,
                             const std::optional<OptimizerConfig> &resolve = {});

/// Capacity for the concurrence, always reached from a product state. The
/// Region2 value is marked extrapolated. With `resolve`, a product optimum is
/// found numerically.
AnalyticCapacity capacity_concurrence(
    const CanonicalParams &params,
    const std::optional<OptimizerConfig> &resolve = {});

/// Capacity for 1 - Tr(rho_A^2); rescaled_value carries the 2x convention.
/// Region2 is optimized numerically over the (Phi1, Phi4) subspace.
AnalyticCapacity capacity_linear_entropy(const CanonicalParams &params,
                                         double tolerance = 1e-9);

/// Capacity for the entropy of entanglement: exactly 1 on OneEbit, otherwise
/// the best state in span(Phi3, Phi4) (Region1) or span(Phi1, Phi4) (Region2),
/// found by a 64 x 64 scan followed by local ascent. Throws ConvergenceFailure
/// if the refinement does not settle.
AnalyticCapacity capacity_entropy_no_ancilla(const CanonicalParams &params,
                                             double tolerance = 1e-9);

/// Best cos(theta) Phi_j + e^{i phi} sin(theta) Phi_k for `measure`;
/// j and k are 1-based Bell indices.
struct PairAnsatzOptimum {
  double value = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double initial_entanglement = 0.0;
  double final_entanglement = 0.0;
  PureState state;
};
PairAnsatzOptimum optimize_pair_ansatz(const CanonicalParams &params,
                                       MeasureKind measure, int j, int k,
                                       double tolerance = 1e-9);

/// |sum_j e^{2i l_j} b_j^2|^2 - |sum_j b_j^2|^2. Throws NotNormalized unless
/// sum |b_j|^2 = 1 within 1e-10.
double delta_c2_bell(const Eigen::Vector4cd &b, const CanonicalParams &params);

struct InterconversionBounds {
  /// E-bits needed per copy of u1 to simulate it: EC_E(u1).
  double ebit_lower_bound_u1 = 0.0;
  /// Copies of u2 obtainable per use of u1: EC_E(u1) / EC_E(u2).
  double rate_upper_bound_u1_to_u2 = 0.0;
};

/// Entropy capacities with one ancilla per side. Throws
/// ZeroCapacityDenominator when EC_E(u2) <= zero_tolerance.
InterconversionBounds interconversion_bounds(const TwoQubitUnitary &u1,
                                             const TwoQubitUnitary &u2,
                                             const OptimizerConfig &config,
                                             double zero_tolerance = 1e-6);

/// n times the single-copy entropy capacity with one ancilla per side;
/// collective use of n copies reduces to n single-copy steps when initial
/// entanglement is available. Throws OutOfRange for n < 1.
double n_copy_capacity(const TwoQubitUnitary &u, int n,
                       const OptimizerConfig &config);

}  // namespace entcap
