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

#include "entcap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "entcap/ascent.hpp"
#include "entcap/error.hpp"

namespace entcap {

namespace {

constexpr double kRegionTolerance = 1e-12;
constexpr int kScanPoints = 64;
constexpr int kRefinedSeeds = 4;

void require_canonical(const CanonicalParams &p) {
  if (!p.is_canonical()) {
    throw NotCanonical("alpha = (" + std::to_string(p.alpha[0]) + ", " +
                       std::to_string(p.alpha[1]) + ", " +
                       std::to_string(p.alpha[2]) +
                       ") violates pi/4 >= a1 >= a2 >= |a3|");
  }
}

double sum12(const CanonicalParams &p) { return p.alpha[0] + p.alpha[1]; }
// Capacities are even in a3: U(a1, a2, -a3) = (Z I) conj(U(a1, a2, a3)) (Z I).
double sum23(const CanonicalParams &p) {
  return p.alpha[1] + std::abs(p.alpha[2]);
}

Eigen::Vector4cd pair_coefficients(int j, int k, double theta, double phi) {
  Eigen::Vector4cd b = Eigen::Vector4cd::Zero();
  b(j - 1) = std::cos(theta);
  b(k - 1) = std::polar(std::sin(theta), phi);
  return b;
}

}  // namespace

std::string_view to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::OneEbit:
      return "OneEbit";
    case RegionTag::Region1:
      return "Region1";
    case RegionTag::Region2:
      return "Region2";
  }
  return "unknown";
}

RegionTag region_of(const CanonicalParams &params) {
  require_canonical(params);
  if (sum12(params) < kPi / 4 - kRegionTolerance) return RegionTag::Region1;
  if (sum23(params) > kPi / 4 + kRegionTolerance) return RegionTag::Region2;
  return RegionTag::OneEbit;
}

double max_gap_sine(const CanonicalParams &params) {
  const auto l = params.lambdas();
  double best = 0.0;
  for (int j = 0; j < 4; ++j) {
    for (int k = j + 1; k < 4; ++k) {
      best = std::max(best, std::abs(std::sin(l[k] - l[j])));
    }
  }
  return best;
}

AnalyticCapacity capacity_c2(const CanonicalParams &params,
                             const std::optional<OptimizerConfig> &resolve) {
  AnalyticCapacity out;
  out.region = region_of(params);
  switch (out.region) {
    case RegionTag::OneEbit:
      out.value = 1.0;
      out.initial_entanglement = 0.0;
      if (resolve) {
        out.optimal_state =
            product_start_capacity(build_canonical_unitary(params),
                                   MeasureKind::ConcurrenceSquared, 0, 0,
                                   *resolve)
                .optimal_state;
      }
      break;
    case RegionTag::Region1: {
      const double s = sum12(params);
      const double xi = s / 2 - kPi / 8;
      // The +i relative phase is the one that reaches the capacity under
      // U_d = exp(+i sum a_j s_j s_j); with -i the final C^2 falls short.
      Eigen::Vector4cd psi;
      psi << 0, std::sin(xi), kI * std::cos(xi), 0;
      out.value = std::sin(2 * s);
      out.initial_entanglement = (1 - std::sin(2 * s)) / 2;
      out.optimal_state = PureState::two_qubit(psi);
      break;
    }
    case RegionTag::Region2: {
      const double s = sum23(params);
      Eigen::Vector4cd b;
      b << 1, 0, 0, std::polar(1.0, kPi / 4 + s);
      b /= std::sqrt(2.0);
      out.value = std::sin(2 * s);
      out.initial_entanglement = (1 - std::sin(2 * s)) / 2;
      Eigen::Vector4cd psi = bell_basis_matrix() * b;
      if (params.alpha[2] < 0) {
        // psi -> (Z I) conj(psi) for the conjugate gate.
        psi = psi.conjugate().eval();
        psi(2) = -psi(2);
        psi(3) = -psi(3);
      }
      out.optimal_state = PureState::two_qubit(psi);
      break;
    }
  }
  return out;
}

AnalyticCapacity capacity_concurrence(
    const CanonicalParams &params,
    const std::optional<OptimizerConfig> &resolve) {
  AnalyticCapacity out;
  out.region = region_of(params);
  switch (out.region) {
    case RegionTag::OneEbit:
      out.value = 1.0;
      break;
    case RegionTag::Region1:
      out.value = std::sin(2 * sum12(params));
      break;
    case RegionTag::Region2:
      out.value = std::sin(2 * sum23(params));
      out.extrapolated = true;
      break;
  }
  out.initial_entanglement = 0.0;
  if (resolve) {
    out.optimal_state =
        product_start_capacity(build_canonical_unitary(params),
                               MeasureKind::Concurrence, 0, 0, *resolve)
            .optimal_state;
  }
  return out;
}

PairAnsatzOptimum optimize_pair_ansatz(const CanonicalParams &params,
                                       MeasureKind measure, int j, int k,
                                       double tolerance) {
  if (j < 1 || j > 4 || k < 1 || k > 4 || j == k) {
    throw IndexOutOfRange("Bell indices must be distinct values in 1..4");
  }
  const StateObjective objective(build_canonical_unitary(params), measure, 0, 0);
  const Eigen::Matrix4cd &bell = bell_basis_matrix();
  Eigen::Matrix<Complex, 4, 2> span;
  span.col(0) = bell.col(j - 1);
  span.col(1) = bell.col(k - 1);

  auto delta = [&](const Eigen::Vector4cd &b) {
    const StateObjective::Terms t = objective.terms(bell * b, false);
    return t.final - t.initial;
  };

  // Coarse scan; theta in [0, pi/2], phi in [0, 2 pi).
  struct Cell {
    double value;
    int index;
    double theta;
    double phi;
  };
  std::vector<Cell> cells;
  cells.reserve(kScanPoints * kScanPoints);
  for (int a = 0; a < kScanPoints; ++a) {
    const double theta = (kPi / 2) * a / (kScanPoints - 1);
    for (int c = 0; c < kScanPoints; ++c) {
      const double phi = 2 * kPi * c / kScanPoints;
      cells.push_back({delta(pair_coefficients(j, k, theta, phi)),
                       a * kScanPoints + c, theta, phi});
    }
  }
  // Best values first, ties broken by grid index.
  std::sort(cells.begin(), cells.end(), [](const Cell &x, const Cell &y) {
    return x.value != y.value ? x.value > y.value : x.index < y.index;
  });

  // Local ascent on the unit sphere of the two complex coefficients.
  const SmoothObjective f = [&](const Eigen::VectorXd &x,
                                Eigen::VectorXd *gradient) {
    const Eigen::Vector2cd c(Complex(x(0), x(1)), Complex(x(2), x(3)));
    const StateObjective::Terms t = objective.terms(span * c, gradient != nullptr);
    if (gradient != nullptr) {
      const Eigen::Vector2cd g =
          span.adjoint() * (t.final_gradient - t.initial_gradient);
      gradient->resize(4);
      *gradient << g(0).real(), g(0).imag(), g(1).real(), g(1).imag();
    }
    return t.final - t.initial;
  };
  AscentOptions options;
  options.objective_tolerance = tolerance * 1e-3;
  options.max_iterations = 20000;
  const Eigen::Index blocks[] = {4};

  double best_value = -std::numeric_limits<double>::infinity();
  Eigen::Vector2cd best_c;
  bool any_converged = false;
  const int seeds = std::min<int>(kRefinedSeeds, static_cast<int>(cells.size()));
  for (int s = 0; s < seeds; ++s) {
    Eigen::VectorXd x0(4);
    x0 << std::cos(cells[s].theta), 0.0,
        std::sin(cells[s].theta) * std::cos(cells[s].phi),
        std::sin(cells[s].theta) * std::sin(cells[s].phi);
    const AscentResult r = sphere_ascent(f, x0, blocks, options);
    any_converged = any_converged || r.converged;
    if (r.value > best_value) {
      best_value = r.value;
      best_c = Eigen::Vector2cd(Complex(r.x(0), r.x(1)), Complex(r.x(2), r.x(3)));
    }
  }
  if (!any_converged) {
    throw ConvergenceFailure("pair-ansatz refinement did not converge");
  }

  // Remove the global phase so that the Phi_j coefficient is real, >= 0.
  if (std::abs(best_c(0)) > 0.0) {
    best_c *= std::conj(best_c(0)) / std::abs(best_c(0));
  }
  best_c.normalize();
  PureState state = PureState::two_qubit(span * best_c);
  const double e0 = evaluate(measure, state);
  const double ef = evaluate(measure, objective.evolve(state));
  return PairAnsatzOptimum{ef - e0,
                           std::atan2(std::abs(best_c(1)), std::abs(best_c(0))),
                           std::abs(best_c(1)) > 0.0 ? std::arg(best_c(1)) : 0.0,
                           e0,
                           ef,
                           std::move(state)};
}

AnalyticCapacity capacity_linear_entropy(const CanonicalParams &params,
                                         double tolerance) {
  AnalyticCapacity out;
  out.region = region_of(params);
  switch (out.region) {
    case RegionTag::OneEbit:
      out.value = 0.5;
      break;
    case RegionTag::Region1: {
      const AnalyticCapacity c2 = capacity_c2(params);
      out.value = c2.value / 2;
      out.initial_entanglement = c2.initial_entanglement / 2;
      out.optimal_state = c2.optimal_state;
      break;
    }
    case RegionTag::Region2: {
      PairAnsatzOptimum best = optimize_pair_ansatz(
          params, MeasureKind::LinearEntropy, 1, 4, tolerance);
      out.value = best.value;
      out.initial_entanglement = best.initial_entanglement;
      out.optimal_state = std::move(best.state);
      break;
    }
  }
  out.rescaled_value = 2 * out.value;
  return out;
}

AnalyticCapacity capacity_entropy_no_ancilla(const CanonicalParams &params,
                                             double tolerance) {
  AnalyticCapacity out;
  out.region = region_of(params);
  if (out.region == RegionTag::OneEbit) {
    out.value = 1.0;
    return out;
  }
  const int j = out.region == RegionTag::Region1 ? 3 : 1;
  PairAnsatzOptimum best = optimize_pair_ansatz(
      params, MeasureKind::EntropyOfEntanglement, j, 4, tolerance);
  out.value = best.value;
  out.initial_entanglement = best.initial_entanglement;
  out.optimal_state = std::move(best.state);
  return out;
}

double delta_c2_bell(const Eigen::Vector4cd &b, const CanonicalParams &params) {
  const double norm2 = b.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw NotNormalized("sum |b_j|^2 = " + std::to_string(norm2));
  }
  const auto l = params.lambdas();
  Complex initial = 0.0;
  Complex final = 0.0;
  for (int j = 0; j < 4; ++j) {
    const Complex sq = b(j) * b(j);
    initial += sq;
    final += std::polar(1.0, 2 * l[j]) * sq;
  }
  return std::norm(final) - std::norm(initial);
}

InterconversionBounds interconversion_bounds(const TwoQubitUnitary &u1,
                                             const TwoQubitUnitary &u2,
                                             const OptimizerConfig &config,
                                             double zero_tolerance) {
  const double ec1 =
      numeric_capacity(u1, MeasureKind::EntropyOfEntanglement, 1, 1, config)
          .value;
  const double ec2 =
      numeric_capacity(u2, MeasureKind::EntropyOfEntanglement, 1, 1, config)
          .value;
  if (ec2 <= zero_tolerance) {
    throw ZeroCapacityDenominator(
        "second unitary has entangling capacity " + std::to_string(ec2) +
        "; it is locally equivalent to the identity");
  }
  return {ec1, ec1 / ec2};
}

double n_copy_capacity(const TwoQubitUnitary &u, int n,
                       const OptimizerConfig &config) {
  if (n < 1) throw OutOfRange("copy count must be >= 1");
  return n *
         numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 1, 1, config)
             .value;
}

}  // namespace entcap
