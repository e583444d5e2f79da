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

#include "entcap/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>

#include "entcap/error.hpp"
#include "entcap/rng.hpp"

namespace entcap {

double unitarity_residual(const ComplexMatrix &m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const ComplexMatrix r =
      m.adjoint() * m - ComplexMatrix::Identity(m.rows(), m.cols());
  return r.cwiseAbs().maxCoeff();
}

namespace pauli {
Eigen::Matrix2cd identity() { return Eigen::Matrix2cd::Identity(); }
Eigen::Matrix2cd x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
Eigen::Matrix2cd y() {
  Eigen::Matrix2cd m;
  m << 0, -kI, kI, 0;
  return m;
}
Eigen::Matrix2cd z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

TwoQubitUnitary::TwoQubitUnitary(const ComplexMatrix &m, double tolerance) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw DimensionMismatch("two-qubit unitary must be 4x4, got " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()));
  }
  const double residual = unitarity_residual(m);
  if (!(residual <= tolerance)) {
    throw NotUnitary("||U^dagger U - I||_max = " + std::to_string(residual) +
                     " exceeds " + std::to_string(tolerance));
  }
  m_ = m;
}

TwoQubitUnitary TwoQubitUnitary::identity() {
  return {Trusted{}, Eigen::Matrix4cd::Identity()};
}

TwoQubitUnitary TwoQubitUnitary::cnot() {
  Eigen::Matrix4cd m;
  m << 1, 0, 0, 0,  //
      0, 1, 0, 0,   //
      0, 0, 0, 1,   //
      0, 0, 1, 0;
  return {Trusted{}, m};
}

TwoQubitUnitary TwoQubitUnitary::dcnot() {
  Eigen::Matrix4cd reverse;
  reverse << 1, 0, 0, 0,  //
      0, 0, 0, 1,         //
      0, 0, 1, 0,         //
      0, 1, 0, 0;
  return {Trusted{}, reverse * cnot().matrix()};
}

TwoQubitUnitary TwoQubitUnitary::swap() {
  Eigen::Matrix4cd m;
  m << 1, 0, 0, 0,  //
      0, 0, 1, 0,   //
      0, 1, 0, 0,   //
      0, 0, 0, 1;
  return {Trusted{}, m};
}

TwoQubitUnitary TwoQubitUnitary::adjoint() const {
  return {Trusted{}, m_.adjoint()};
}

TwoQubitUnitary TwoQubitUnitary::conjugate() const {
  return {Trusted{}, m_.conjugate()};
}

TwoQubitUnitary operator*(const TwoQubitUnitary &a, const TwoQubitUnitary &b) {
  return {TwoQubitUnitary::Trusted{}, a.m_ * b.m_};
}

TwoQubitUnitary dress_with_locals(const TwoQubitUnitary &u,
                                  const Eigen::Matrix2cd &va,
                                  const Eigen::Matrix2cd &vb,
                                  const Eigen::Matrix2cd &wa,
                                  const Eigen::Matrix2cd &wb) {
  const ComplexMatrix m =
      tensor_product(va, vb) * u.matrix() * tensor_product(wa, wb);
  // Products of unitaries drift by a few ulps only.
  return TwoQubitUnitary(m, 1e-12);
}

PureState::PureState(ComplexVector amplitudes, std::vector<Party> partition)
    : amplitudes_(std::move(amplitudes)), partition_(std::move(partition)) {
  if (partition_.empty() || partition_.size() > 30 ||
      amplitudes_.size() != (Eigen::Index{1} << partition_.size())) {
    throw DimensionMismatch("state of length " +
                            std::to_string(amplitudes_.size()) +
                            " does not match " +
                            std::to_string(partition_.size()) + " qubits");
  }
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
    throw NotNormalized("state norm is " + std::to_string(norm));
  }
}

PureState PureState::two_qubit(const Eigen::Vector4cd &amplitudes) {
  return {ComplexVector(amplitudes), {Party::A, Party::B}};
}

PureState PureState::basis(std::span<const int> bits,
                           std::vector<Party> partition) {
  if (bits.size() != partition.size()) {
    throw DimensionMismatch("basis label length differs from qubit count");
  }
  Eigen::Index index = 0;
  for (int b : bits) index = (index << 1) | (b != 0 ? 1 : 0);
  ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << bits.size());
  v(index) = 1.0;
  return {std::move(v), std::move(partition)};
}

int PureState::count(Party p) const {
  int n = 0;
  for (Party q : partition_) n += (q == p) ? 1 : 0;
  return n;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, double tolerance)
    : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw DimensionMismatch("density matrix must be square");
  }
  const double hermitian_residual = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (hermitian_residual > tolerance) {
    throw OutOfRange("density matrix is not Hermitian (residual " +
                     std::to_string(hermitian_residual) + ")");
  }
  const double trace_error = std::abs(m_.trace() - Complex(1.0));
  if (trace_error > tolerance) {
    throw OutOfRange("density matrix trace differs from 1 by " +
                     std::to_string(trace_error));
  }
  if (eigenvalues().minCoeff() < -tolerance) {
    throw OutOfRange("density matrix has a negative eigenvalue");
  }
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

PureState apply_to_qubit_pair(const TwoQubitUnitary &u, const PureState &psi,
                              int qa, int qb) {
  const int n = psi.num_qubits();
  if (qa < 0 || qa >= n || qb < 0 || qb >= n) {
    throw IndexOutOfRange("qubit pair (" + std::to_string(qa) + ", " +
                          std::to_string(qb) + ") outside " +
                          std::to_string(n) + " qubits");
  }
  if (qa == qb) throw IndexOutOfRange("qubit pair must be distinct");
  if (psi.party(qa) != Party::A || psi.party(qb) != Party::B) {
    throw WrongPartition("first qubit must belong to A and second to B");
  }

  const Eigen::Index bit_a = Eigen::Index{1} << (n - 1 - qa);
  const Eigen::Index bit_b = Eigen::Index{1} << (n - 1 - qb);
  const Eigen::Matrix4cd &m = u.matrix();
  ComplexVector out = psi.amplitudes();
  for (Eigen::Index i = 0; i < psi.dimension(); ++i) {
    if ((i & bit_a) || (i & bit_b)) continue;
    const Eigen::Index idx[4] = {i, i | bit_b, i | bit_a, i | bit_a | bit_b};
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) v(k) = out(idx[k]);
    const Eigen::Vector4cd w = m * v;
    for (int k = 0; k < 4; ++k) out(idx[k]) = w(k);
  }
  out.normalize();
  return {std::move(out), psi.partition()};
}

ComplexMatrix schmidt_matrix(const PureState &psi) {
  const int n = psi.num_qubits();
  const int na = psi.count(Party::A);
  const int nb = n - na;
  ComplexMatrix m(Eigen::Index{1} << na, Eigen::Index{1} << nb);
  for (Eigen::Index i = 0; i < psi.dimension(); ++i) {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    for (int q = 0; q < n; ++q) {
      const Eigen::Index bit = (i >> (n - 1 - q)) & 1;
      if (psi.party(q) == Party::A) {
        row = (row << 1) | bit;
      } else {
        col = (col << 1) | bit;
      }
    }
    m(row, col) = psi.amplitudes()(i);
  }
  return m;
}

DensityMatrix partial_trace(const PureState &psi, Party keep) {
  const ComplexMatrix m = schmidt_matrix(psi);
  ComplexMatrix rho = keep == Party::A ? ComplexMatrix(m * m.adjoint())
                                       : ComplexMatrix(m.transpose() * m.conjugate());
  // Exact Hermiticity; M M^dagger is Hermitian only up to rounding.
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix(std::move(rho));
}

double entropy_bits_of_spectrum(const Eigen::VectorXd &probabilities) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p >= kEigenvalueFloor) s -= p * std::log2(p);
  }
  // An eigenvalue slightly above 1 would give a tiny negative sum.
  return std::max(s, 0.0);
}

double von_neumann_entropy_bits(const DensityMatrix &rho) {
  return entropy_bits_of_spectrum(rho.eigenvalues());
}

double binary_entropy(double p) {
  Eigen::VectorXd spectrum(2);
  spectrum << p, 1.0 - p;
  return entropy_bits_of_spectrum(spectrum);
}

namespace {

ComplexVector gaussian_vector(Eigen::Index dim, CounterRng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v;
}

Eigen::Matrix2cd haar_unitary_2x2(CounterRng &rng) {
  const ComplexVector g = gaussian_vector(4, rng);
  Eigen::Matrix2cd ginibre;
  ginibre << g(0), g(1), g(2), g(3);
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(ginibre);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 2; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace

ComplexVector haar_random_vector(Eigen::Index dim, std::uint64_t seed) {
  CounterRng rng(seed);
  ComplexVector v = gaussian_vector(dim, rng);
  v.normalize();
  return v;
}

PureState haar_random_state(std::vector<Party> partition, std::uint64_t seed) {
  const Eigen::Index dim = Eigen::Index{1} << partition.size();
  return {haar_random_vector(dim, seed), std::move(partition)};
}

PureState haar_random_state(int n, std::uint64_t seed) {
  if (n < 1) throw OutOfRange("qubit count must be positive");
  std::vector<Party> partition(n, Party::B);
  for (int q = 0; q < (n + 1) / 2; ++q) partition[q] = Party::A;
  return haar_random_state(std::move(partition), seed);
}

std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> haar_random_local_unitary(
    std::uint64_t seed) {
  CounterRng root(seed);
  CounterRng first = root.split(0);
  CounterRng second = root.split(1);
  return {haar_unitary_2x2(first), haar_unitary_2x2(second)};
}

}  // namespace entcap
