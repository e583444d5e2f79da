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

#include "entcap/measures.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "entcap/error.hpp"

namespace entcap {

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Concurrence:
      return "concurrence";
    case MeasureKind::ConcurrenceSquared:
      return "c2";
    case MeasureKind::EntropyOfEntanglement:
      return "entropy";
    case MeasureKind::LinearEntropy:
      return "linear";
  }
  return "unknown";
}

std::optional<MeasureKind> parse_measure(std::string_view name) {
  for (MeasureKind k :
       {MeasureKind::Concurrence, MeasureKind::ConcurrenceSquared,
        MeasureKind::EntropyOfEntanglement, MeasureKind::LinearEntropy}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

bool requires_two_qubits(MeasureKind kind) {
  return kind == MeasureKind::Concurrence ||
         kind == MeasureKind::ConcurrenceSquared;
}

namespace {

void require_cut(const PureState &psi) {
  if (!psi.has_valid_cut()) {
    throw WrongPartition("both parties need at least one qubit");
  }
}

void require_two_qubits(const PureState &psi) {
  if (psi.num_qubits() != 2) {
    throw UnsupportedMeasureForDimension(
        "concurrence is defined for two qubits only, got " +
        std::to_string(psi.num_qubits()));
  }
  if (psi.party(0) == psi.party(1)) {
    throw WrongPartition("concurrence needs one qubit per party");
  }
}

// Hermitian eigendecomposition of the smaller reduced state. `left` selects
// rho = M M^dagger (A side) over M^dagger M (conjugate of B's reduced state).
struct ReducedSpectrum {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
  bool left = true;
};

ReducedSpectrum reduced_spectrum(const ComplexMatrix &m, bool with_vectors) {
  ReducedSpectrum out;
  out.left = m.rows() <= m.cols();
  const ComplexMatrix rho =
      out.left ? ComplexMatrix(m * m.adjoint()) : ComplexMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      rho, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  out.values = es.eigenvalues();
  if (with_vectors) out.vectors = es.eigenvectors();
  return out;
}

// -log2(floor): slope of -p log2 p continued linearly below the floor.
const double kFloorSlope = -std::log2(kEigenvalueFloor);

// Entropy with -p log2 p replaced by p * kFloorSlope below the floor. The
// floored sum jumps by about 4e-11 there, which stalls line searches at
// product-state optima; this version is continuous, concave, and differs by
// less than that.
double continued_entropy_bits(const Eigen::VectorXd &spectrum) {
  double s = 0.0;
  for (double p : spectrum) {
    if (p >= kEigenvalueFloor) {
      s -= p * std::log2(p);
    } else if (p > 0.0) {
      s += p * kFloorSlope;
    }
  }
  return std::max(s, 0.0);
}

// d f(rho) = Tr(G d rho) -> gradient with respect to M.
ComplexMatrix chain_through_rho(const ComplexMatrix &m, const ReducedSpectrum &s,
                                const Eigen::VectorXd &derivative) {
  const ComplexMatrix g =
      s.vectors * derivative.asDiagonal() * s.vectors.adjoint();
  return s.left ? ComplexMatrix(2.0 * g * m) : ComplexMatrix(2.0 * m * g);
}

}  // namespace

double concurrence(const PureState &psi) {
  require_two_qubits(psi);
  static const Eigen::Matrix4cd yy = tensor_product(pauli::y(), pauli::y());
  const Eigen::Vector4cd a = psi.amplitudes();
  return std::abs(a.dot(yy * a.conjugate()));
}

double entropy_of_entanglement(const PureState &psi) {
  require_cut(psi);
  return von_neumann_entropy_bits(partial_trace(psi, Party::A));
}

double linear_entropy(const PureState &psi) {
  require_cut(psi);
  const ComplexMatrix rho = partial_trace(psi, Party::A).matrix();
  return 1.0 - rho.cwiseAbs2().sum();
}

double normalized_linear_entropy(const PureState &psi) {
  require_two_qubits(psi);
  return 2.0 * linear_entropy(psi);
}

double evaluate(MeasureKind kind, const PureState &psi) {
  switch (kind) {
    case MeasureKind::Concurrence:
      return concurrence(psi);
    case MeasureKind::ConcurrenceSquared: {
      const double c = concurrence(psi);
      return c * c;
    }
    case MeasureKind::EntropyOfEntanglement:
      return entropy_of_entanglement(psi);
    case MeasureKind::LinearEntropy:
      return linear_entropy(psi);
  }
  throw OutOfRange("unknown measure");
}

double entropy_from_concurrence(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw OutOfRange("concurrence must lie in [0, 1], got " + std::to_string(c));
  }
  return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

MeasureGradient evaluate_with_gradient(MeasureKind kind, const ComplexMatrix &m,
                                       double smoothing) {
  MeasureGradient out;
  switch (kind) {
    case MeasureKind::Concurrence:
    case MeasureKind::ConcurrenceSquared: {
      if (m.rows() != 2 || m.cols() != 2) {
        throw UnsupportedMeasureForDimension(
            "concurrence is defined for two qubits only");
      }
      const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
      // conj of the transposed adjugate
      Eigen::Matrix2cd cofactor;
      cofactor << std::conj(m(1, 1)), -std::conj(m(1, 0)),
          -std::conj(m(0, 1)), std::conj(m(0, 0));
      const double mag = std::abs(det);
      if (kind == MeasureKind::ConcurrenceSquared) {
        out.value = 4.0 * mag * mag;
        out.gradient = 8.0 * det * cofactor;
      } else {
        // sqrt(C^2 + eta^2) - eta: smooth at C = 0, where product-state optima
        // sit, and within eta of C.
        const double root = std::hypot(2.0 * mag, smoothing);
        out.value = root - smoothing;
        out.gradient = 4.0 * det / root * cofactor;
      }
      return out;
    }
    case MeasureKind::EntropyOfEntanglement: {
      const ReducedSpectrum s = reduced_spectrum(m, true);
      Eigen::VectorXd derivative(s.values.size());
      for (Eigen::Index k = 0; k < s.values.size(); ++k) {
        const double p = s.values(k);
        derivative(k) = p >= kEigenvalueFloor
                            ? -(std::log(p) + 1.0) / std::numbers::ln2
                            : kFloorSlope;
      }
      out.value = continued_entropy_bits(s.values);
      out.gradient = chain_through_rho(m, s, derivative);
      return out;
    }
    case MeasureKind::LinearEntropy: {
      const bool left = m.rows() <= m.cols();
      const ComplexMatrix rho = left ? ComplexMatrix(m * m.adjoint())
                                     : ComplexMatrix(m.adjoint() * m);
      out.value = 1.0 - rho.cwiseAbs2().sum();
      out.gradient = left ? ComplexMatrix(-4.0 * rho * m)
                          : ComplexMatrix(-4.0 * m * rho);
      return out;
    }
  }
  throw OutOfRange("unknown measure");
}

double evaluate_schmidt(MeasureKind kind, const ComplexMatrix &m,
                        double smoothing) {
  switch (kind) {
    case MeasureKind::Concurrence:
    case MeasureKind::ConcurrenceSquared: {
      if (m.rows() != 2 || m.cols() != 2) {
        throw UnsupportedMeasureForDimension(
            "concurrence is defined for two qubits only");
      }
      const double c = 2.0 * std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
      return kind == MeasureKind::Concurrence
                 ? std::hypot(c, smoothing) - smoothing
                 : c * c;
    }
    case MeasureKind::EntropyOfEntanglement:
      return continued_entropy_bits(reduced_spectrum(m, false).values);
    case MeasureKind::LinearEntropy: {
      const ComplexMatrix rho = m.rows() <= m.cols()
                                    ? ComplexMatrix(m * m.adjoint())
                                    : ComplexMatrix(m.adjoint() * m);
      return 1.0 - rho.cwiseAbs2().sum();
    }
  }
  throw OutOfRange("unknown measure");
}

}  // namespace entcap
