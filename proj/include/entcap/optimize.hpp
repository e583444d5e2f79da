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
 * Numerical entangling capacity: the largest increase E(U psi) - E(psi) of an
 * entanglement measure over initial pure states, optionally with ancilla
 * qubits on either side.
 *
 * Qubit layout: (A ancillas, A shared, B shared, B ancillas). U acts on the two
 * shared qubits; the entanglement cut separates all of A's qubits from all of
 * B's.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "entcap/canonical.hpp"
#include "entcap/measures.hpp"
#include "entcap/qcore.hpp"

namespace entcap {

enum class GradientMode { FiniteDifference, Analytic };

struct OptimizerConfig {
  /// Unset means 32, or 64 when the state dimension reaches 64.
  std::optional<int> restarts;
  int max_iterations = 5000;
  double objective_tolerance = 1e-8;
  double step_tolerance = 1e-10;
  std::uint64_t master_seed = 0;
  GradientMode gradient_mode = GradientMode::Analytic;
  /// Threads used to run restarts; results do not depend on it.
  int workers = 1;

  int effective_restarts(Eigen::Index dimension) const;
  /// Throws OutOfRange on non-positive counts or tolerances.
  void validate() const;
};

inline constexpr int kMaxAncillas = 2;
/// Central-difference step used in GradientMode::FiniteDifference.
inline constexpr double kFiniteDifferenceStep = 1e-6;

enum class FamilyKind { Cnot, Dcnot, Swap };

std::string_view to_string(FamilyKind kind);
std::optional<FamilyKind> parse_family(std::string_view name);

/// exp(i alpha (XX)), exp(i alpha (XX + YY)) or exp(i alpha (XX + YY + ZZ)).
struct GateFamily {
  FamilyKind kind = FamilyKind::Cnot;
  double alpha = 0.0;

  CanonicalParams params() const;
};

/// Throws OutOfRange unless alpha lies in [0, pi/4].
TwoQubitUnitary family_unitary(const GateFamily &family);

struct CapacityResult {
  double value = 0.0;
  PureState optimal_state;
  double initial_entanglement = 0.0;
  double final_entanglement = 0.0;
  int converged_restarts = 0;
  std::uint64_t best_restart_seed = 0;
};

/// Party labels for the ancilla layout described above.
std::vector<Party> ancilla_partition(int anc_a, int anc_b);

/// Unit-norm state from interleaved (re, im) pairs. Throws ZeroVector for an
/// all-zero input and DimensionMismatch if the length is not 2 * 2^n.
PureState parameterize_state(std::span<const double> raw,
                             std::vector<Party> partition);

/// The map raw -> E(U psi) - E(psi), psi = parameterize_state(raw).
class StateObjective {
 public:
  StateObjective(const TwoQubitUnitary &u, MeasureKind measure, int anc_a,
                 int anc_b);

  Eigen::Index dimension() const { return dim_a_ * dim_b_; }
  int anc_a() const { return anc_a_; }
  int anc_b() const { return anc_b_; }
  MeasureKind measure() const { return measure_; }
  /// Copy whose concurrence terms use the given smoothing (see
  /// evaluate_with_gradient).
  StateObjective with_smoothing(double smoothing) const;
  std::vector<Party> partition() const {
    return ancilla_partition(anc_a_, anc_b_);
  }

  /// Objective at parameterize_state(raw).
  double value(std::span<const double> raw) const;
  /// Objective and its gradient with respect to raw, including the
  /// normalization map.
  double value_and_gradient(std::span<const double> raw,
                            Eigen::VectorXd &gradient) const;

  /// U applied to the shared pair.
  ComplexVector evolve(const ComplexVector &psi) const;
  PureState evolve(const PureState &psi) const;

  // Internals shared with the optimizers. `psi` must be normalized.
  struct Terms {
    double initial = 0.0;
    double final = 0.0;
    ComplexVector initial_gradient;
    /// Gradient of E(U psi) with respect to psi.
    ComplexVector final_gradient;
  };
  Terms terms(const ComplexVector &psi, bool with_gradient) const;
  double final_only(const ComplexVector &psi, ComplexVector *gradient) const;

 private:
  void apply_pair(const Eigen::Matrix4cd &m, ComplexVector &psi) const;
  double measure_at(const ComplexVector &psi, ComplexVector *gradient) const;

  TwoQubitUnitary u_;
  MeasureKind measure_;
  int anc_a_;
  int anc_b_;
  Eigen::Index dim_a_;
  Eigen::Index dim_b_;
  double smoothing_ = kConcurrenceSmoothing;
};

/// Multi-start maximization over all initial states. Throws
/// UnsupportedMeasureForDimension for concurrence with ancillas, OutOfRange for
/// more than kMaxAncillas per side, and ConvergenceFailure if no restart
/// converges.
CapacityResult numeric_capacity(const TwoQubitUnitary &u, MeasureKind measure,
                                int anc_a, int anc_b,
                                const OptimizerConfig &config);

/// As numeric_capacity, restricted to initial states |a> (x) |b> that are
/// products across the cut.
CapacityResult product_start_capacity(const TwoQubitUnitary &u,
                                      MeasureKind measure, int anc_a, int anc_b,
                                      const OptimizerConfig &config);

/// Among states reaching at least (numeric capacity - slack), looks for one
/// with the least initial entanglement. Quadratic-penalty refinement started
/// from every near-optimal restart.
CapacityResult min_initial_entanglement_capacity(const TwoQubitUnitary &u,
                                                 MeasureKind measure, int anc_a,
                                                 int anc_b,
                                                 const OptimizerConfig &config,
                                                 double slack = 1e-6);

struct SweepRow {
  /// Family parameter, or alpha[0] for canonical sweeps.
  double alpha = 0.0;
  CanonicalParams params;
  double capacity = 0.0;
  double initial_entanglement = 0.0;
  double final_entanglement = 0.0;
  int converged_restarts = 0;
  /// Non-empty when this row's optimization failed; numbers are then NaN.
  std::string error;
};

/// n points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, int n);

enum class SweepMode {
  /// numeric_capacity
  Full,
  /// product_start_capacity
  ProductStart,
  /// min_initial_entanglement_capacity
  MinInitialEntanglement,
};

/// One row per alpha. Errors are recorded in the row.
std::vector<SweepRow> family_sweep(FamilyKind kind, std::span<const double> alphas,
                                   MeasureKind measure, int anc_a, int anc_b,
                                   const OptimizerConfig &config,
                                   SweepMode mode = SweepMode::Full);

/// One row per canonical triple.
std::vector<SweepRow> canonical_sweep(std::span<const CanonicalParams> points,
                                      MeasureKind measure, int anc_a, int anc_b,
                                      const OptimizerConfig &config,
                                      SweepMode mode = SweepMode::Full);

}  // namespace entcap
