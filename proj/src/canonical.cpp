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

#include "entcap/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "entcap/error.hpp"

namespace entcap {

namespace {

// Two eigenphases closer than this are treated as one repeated eigenvalue.
constexpr double kPhaseClusterTolerance = 1e-7;
// Rebuilt invariants must agree with the input's to this accuracy.
constexpr double kBranchTolerance = 1e-8;
// Components this close to 0 or pi/4 are reported exactly.
constexpr double kSnapTolerance = 1e-12;

Eigen::Matrix4cd pauli_product(const Eigen::Matrix2cd &p) {
  return tensor_product(p, p);
}

// Replace eigenphases that agree within the cluster tolerance by their
// circular mean, so repeated eigenvalues lift consistently.
void cluster_phases(std::array<double, 4> &phases) {
  std::array<bool, 4> done{};
  for (int i = 0; i < 4; ++i) {
    if (done[i]) continue;
    Complex sum = std::polar(1.0, phases[i]);
    std::array<int, 4> members{i};
    int size = 1;
    for (int j = i + 1; j < 4; ++j) {
      if (done[j]) continue;
      if (std::abs(std::polar(1.0, phases[j]) - std::polar(1.0, phases[i])) <
          kPhaseClusterTolerance) {
        sum += std::polar(1.0, phases[j]);
        members[size++] = j;
      }
    }
    if (size == 1) continue;
    const double mean = std::arg(sum);
    for (int k = 0; k < size; ++k) {
      // Keep each member on its own side of the branch cut.
      const double delta = std::remainder(mean - phases[members[k]], 2 * kPi);
      phases[members[k]] += delta;
      done[members[k]] = true;
    }
  }
}

double snap(double a) {
  if (std::abs(a) < kSnapTolerance) return 0.0;
  if (std::abs(a - kPi / 4) < kSnapTolerance) return kPi / 4;
  if (std::abs(a + kPi / 4) < kSnapTolerance) return -kPi / 4;
  return a;
}

// Map an arbitrary triple into the Weyl chamber using moves that preserve
// local equivalence: shifts by pi/2, permutations, and sign flips of pairs.
// Returns the chamber point with a3 possibly negative.
std::array<double, 3> to_chamber(std::array<double, 3> a) {
  for (double &x : a) {
    x -= (kPi / 2) * std::round(x / (kPi / 2));
    if (x < -kPi / 4 + kSnapTolerance) x += kPi / 2;
    x = snap(x);
  }
  std::stable_sort(a.begin(), a.end(), [](double x, double y) {
    return std::abs(x) > std::abs(y);
  });
  if (a[0] < 0) {
    a[0] = -a[0];
    a[2] = -a[2];
  }
  if (a[1] < 0) {
    a[1] = -a[1];
    a[2] = -a[2];
  }
  // On the a1 = pi/4 face the sign of a3 is a local choice.
  if (a[2] < 0 && a[0] == kPi / 4) a[2] = -a[2];
  return a;
}

}  // namespace

std::array<double, 4> CanonicalParams::lambdas() const {
  const auto [a1, a2, a3] = alpha;
  return {-a1 + a2 + a3, a1 - a2 + a3, a1 + a2 - a3, -a1 - a2 - a3};
}

bool CanonicalParams::is_canonical(double tolerance) const {
  const auto [a1, a2, a3] = alpha;
  return a1 <= kPi / 4 + tolerance && a1 >= a2 - tolerance &&
         a2 >= std::abs(a3) - tolerance && std::abs(a3) >= 0.0;
}

const std::array<Eigen::Vector4cd, 4> &bell_basis() {
  static const std::array<Eigen::Vector4cd, 4> basis = [] {
    const double r = 1.0 / std::sqrt(2.0);
    std::array<Eigen::Vector4cd, 4> b;
    b[0] << -kI * r, 0, 0, kI * r;
    b[1] << r, 0, 0, r;
    b[2] << 0, -kI * r, -kI * r, 0;
    b[3] << 0, r, -r, 0;
    return b;
  }();
  return basis;
}

const Eigen::Matrix4cd &bell_basis_matrix() {
  static const Eigen::Matrix4cd m = [] {
    Eigen::Matrix4cd out;
    for (int j = 0; j < 4; ++j) out.col(j) = bell_basis()[j];
    return out;
  }();
  return m;
}

TwoQubitUnitary build_canonical_unitary(const CanonicalParams &params) {
  const auto lambdas = params.lambdas();
  Eigen::Vector4cd phases;
  for (int j = 0; j < 4; ++j) phases(j) = std::polar(1.0, lambdas[j]);
  const Eigen::Matrix4cd &b = bell_basis_matrix();
  return TwoQubitUnitary(b * phases.asDiagonal() * b.adjoint());
}

ComplexMatrix u_tilde(const ComplexMatrix &u) {
  if (u.rows() != 4 || u.cols() != 4) {
    throw DimensionMismatch("u_tilde expects a 4x4 matrix");
  }
  static const Eigen::Matrix4cd yy = pauli_product(pauli::y());
  return yy * u.transpose() * yy;
}

namespace {

LocalInvariants invariants_of_special(const Eigen::Matrix4cd &special) {
  const Eigen::Matrix4cd product = u_tilde(special) * special;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(product, false);
  LocalInvariants out;
  for (int j = 0; j < 4; ++j) out[j] = es.eigenvalues()(j);
  std::sort(out.begin(), out.end(), [](Complex x, Complex y) {
    return std::arg(x) < std::arg(y);
  });
  return out;
}

Eigen::Matrix4cd special_representative(const Eigen::Matrix4cd &m, int root) {
  const Complex det = m.determinant();
  const Complex fourth_root = std::polar(
      std::pow(std::abs(det), 0.25), (std::arg(det) + 2 * kPi * root) / 4);
  return m / fourth_root;
}

}  // namespace

LocalInvariants local_invariants(const TwoQubitUnitary &u) {
  return invariants_of_special(special_representative(u.matrix(), 0));
}

double invariant_distance(const LocalInvariants &a, const LocalInvariants &b) {
  double best = std::numeric_limits<double>::infinity();
  for (double sign : {1.0, -1.0}) {
    std::array<int, 4> perm;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double worst = 0.0;
      for (int j = 0; j < 4; ++j) {
        worst = std::max(worst, std::abs(a[j] - sign * b[perm[j]]));
      }
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return best;
}

CanonicalParams decompose(const TwoQubitUnitary &u) {
  const LocalInvariants target = local_invariants(u);
  for (int root = 0; root < 4; ++root) {
    const Eigen::Matrix4cd special = special_representative(u.matrix(), root);
    const LocalInvariants inv = invariants_of_special(special);

    std::array<double, 4> phases;
    for (int j = 0; j < 4; ++j) phases[j] = std::arg(inv[j]);
    cluster_phases(phases);

    // Lift 2 l_j = phase_j to l_j with sum exactly zero; which lift and which
    // eigenvalue ordering is chosen only moves alpha within its local
    // equivalence class, which to_chamber() undoes.
    std::array<double, 4> l;
    for (int j = 0; j < 4; ++j) l[j] = phases[j] / 2;
    const double total = l[0] + l[1] + l[2] + l[3];
    l[3] -= kPi * std::round(total / kPi);

    const std::array<double, 3> raw = {(l[1] + l[2]) / 2, (l[0] + l[2]) / 2,
                                       (l[0] + l[1]) / 2};
    const std::array<double, 3> chamber = to_chamber(raw);

    CanonicalParams signed_params{chamber, false};
    if (invariant_distance(local_invariants(build_canonical_unitary(signed_params)),
                           target) > kBranchTolerance) {
      continue;
    }
    CanonicalParams out = signed_params;
    if (out.alpha[2] < 0) {
      out.alpha[2] = -out.alpha[2];
      out.conjugated = true;
    }
    return out;
  }
  throw BranchResolutionFailure(
      "no eigenphase branch reproduces the local invariants");
}

Eigen::Vector4cd bell_coefficients(const PureState &psi) {
  if (psi.num_qubits() != 2) {
    throw DimensionMismatch("Bell coefficients need a two-qubit state");
  }
  return bell_basis_matrix().adjoint() * psi.amplitudes();
}

PureState state_from_bell_coefficients(const Eigen::Vector4cd &b) {
  return PureState::two_qubit(bell_basis_matrix() * b);
}

}  // namespace entcap
