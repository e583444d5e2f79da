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
 * Dense complex linear algebra and pure-state primitives shared by every
 * other part of the library.
 *
 * Qubit 0 is the most significant bit of a basis index throughout.
 */

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace entcap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// Default tolerance for the unitarity check, max-norm of U^dagger U - I.
inline constexpr double kUnitaryTolerance = 1e-10;
/// Default tolerance on | ||psi|| - 1 |.
inline constexpr double kNormTolerance = 1e-10;
/// Eigenvalues below this contribute nothing to entropies.
inline constexpr double kEigenvalueFloor = 1e-12;

/// max_ij |(U^dagger U - I)_ij|
double unitarity_residual(const ComplexMatrix &m);

namespace pauli {
Eigen::Matrix2cd identity();
Eigen::Matrix2cd x();
Eigen::Matrix2cd y();
Eigen::Matrix2cd z();
}  // namespace pauli

/// A 4x4 unitary acting on one qubit of each party.
class TwoQubitUnitary {
 public:
  /// Throws DimensionMismatch unless 4x4 and NotUnitary past `tolerance`.
  explicit TwoQubitUnitary(const ComplexMatrix &m,
                           double tolerance = kUnitaryTolerance);

  static TwoQubitUnitary identity();
  static TwoQubitUnitary cnot();
  /// CNOT(A->B) followed by CNOT(B->A).
  static TwoQubitUnitary dcnot();
  static TwoQubitUnitary swap();

  const Eigen::Matrix4cd &matrix() const { return m_; }
  TwoQubitUnitary adjoint() const;
  /// Entrywise complex conjugate in the computational basis.
  TwoQubitUnitary conjugate() const;

  friend TwoQubitUnitary operator*(const TwoQubitUnitary &a,
                                   const TwoQubitUnitary &b);

 private:
  struct Trusted {};
  TwoQubitUnitary(Trusted, const Eigen::Matrix4cd &m) : m_(m) {}

  Eigen::Matrix4cd m_;
};

/// (V_A (x) V_B) U (W_A (x) W_B)
TwoQubitUnitary dress_with_locals(const TwoQubitUnitary &u,
                                  const Eigen::Matrix2cd &va,
                                  const Eigen::Matrix2cd &vb,
                                  const Eigen::Matrix2cd &wa,
                                  const Eigen::Matrix2cd &wb);

enum class Party : std::uint8_t { A, B };

/// Unit-norm state vector over n qubits with an A|B label per qubit.
class PureState {
 public:
  /// Throws DimensionMismatch if the length is not 2^partition.size() and
  /// NotNormalized if the norm is off by more than kNormTolerance.
  PureState(ComplexVector amplitudes, std::vector<Party> partition);

  /// Two-qubit state with qubit 0 held by A and qubit 1 by B.
  static PureState two_qubit(const Eigen::Vector4cd &amplitudes);
  /// Computational basis state |bits>, qubit 0 first.
  static PureState basis(std::span<const int> bits,
                         std::vector<Party> partition);

  int num_qubits() const { return static_cast<int>(partition_.size()); }
  Eigen::Index dimension() const { return amplitudes_.size(); }
  const ComplexVector &amplitudes() const { return amplitudes_; }
  const std::vector<Party> &partition() const { return partition_; }
  Party party(int qubit) const { return partition_.at(qubit); }

  int count(Party p) const;
  /// True when both parties hold at least one qubit.
  bool has_valid_cut() const { return count(Party::A) > 0 && count(Party::B) > 0; }

 private:
  ComplexVector amplitudes_;
  std::vector<Party> partition_;
};

/// Hermitian, unit-trace, positive semidefinite matrix.
class DensityMatrix {
 public:
  /// Validates the invariants to within `tolerance`; throws DimensionMismatch
  /// for non-square input and OutOfRange otherwise.
  explicit DensityMatrix(ComplexMatrix m, double tolerance = 1e-10);

  const ComplexMatrix &matrix() const { return m_; }
  Eigen::Index dimension() const { return m_.rows(); }
  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;

 private:
  ComplexMatrix m_;
};

/// Kronecker product; dimensions multiply.
ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// Apply `u` to the ordered pair (qa, qb), qa being u's first qubit. qa must
/// belong to A and qb to B.
PureState apply_to_qubit_pair(const TwoQubitUnitary &u, const PureState &psi,
                              int qa, int qb);

/// Amplitudes rearranged as a (dim A) x (dim B) matrix, so that
/// rho_A = M M^dagger. Row and column indices order each party's qubits as in
/// the state.
ComplexMatrix schmidt_matrix(const PureState &psi);

/// Reduced state of the party `keep`.
DensityMatrix partial_trace(const PureState &psi, Party keep);

/// -sum p log2 p over eigenvalues p >= kEigenvalueFloor.
double von_neumann_entropy_bits(const DensityMatrix &rho);
double entropy_bits_of_spectrum(const Eigen::VectorXd &probabilities);

/// Binary entropy in bits; h(0) = h(1) = 0.
double binary_entropy(double p);

/// Gaussian-normalized complex vector, uniform on the unit sphere.
ComplexVector haar_random_vector(Eigen::Index dim, std::uint64_t seed);

/// Haar-random state of n qubits; the first ceil(n/2) qubits are labelled A.
PureState haar_random_state(int n, std::uint64_t seed);
PureState haar_random_state(std::vector<Party> partition, std::uint64_t seed);

/// Two independent Haar-random single-qubit unitaries.
std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> haar_random_local_unitary(
    std::uint64_t seed);

}  // namespace entcap
