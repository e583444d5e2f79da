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

#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "entcap/ascent.hpp"
#include "entcap/capacity.hpp"
#include "entcap/error.hpp"
#include "entcap/measures.hpp"
#include "entcap/optimize.hpp"
#include "entcap/rng.hpp"
#include "test_support.hpp"

using namespace entcap;

namespace {

// H(cos^2(pi/8)), the product-start entropy capacity of CNOT at pi/8.
constexpr double kEntropyCos2Pi8 = 0.6008760366928562;

OptimizerConfig config(std::uint64_t seed = 0) {
  OptimizerConfig c;
  c.master_seed = seed;
  return c;
}

std::vector<double> random_raw(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 5);
  std::normal_distribution<double> g;
  std::vector<double> out(n);
  for (double &x : out) x = g(rng);
  return out;
}

}  // namespace

TEST_CASE("family unitaries") {
  CHECK(family_unitary({FamilyKind::Cnot, 0.0}).matrix().isIdentity(1e-15));
  const CanonicalParams p = GateFamily{FamilyKind::Dcnot, 0.3}.params();
  CHECK(p.alpha[0] == 0.3);
  CHECK(p.alpha[1] == 0.3);
  CHECK(p.alpha[2] == 0.0);
  CHECK(GateFamily{FamilyKind::Swap, 0.2}.params().alpha[2] == 0.2);
  // exp(i pi/4 (XX+YY+ZZ)) is SWAP up to phase.
  const ComplexMatrix s = family_unitary({FamilyKind::Swap, kPi / 4}).matrix();
  const Complex phase = s(0, 0);
  CHECK(testing::max_abs_diff(s, phase * TwoQubitUnitary::swap().matrix()) <= 1e-12);
  CHECK_THROWS_AS(family_unitary({FamilyKind::Cnot, -0.01}), OutOfRange);
  CHECK_THROWS_AS(family_unitary({FamilyKind::Swap, kPi / 4 + 0.01}), OutOfRange);
  CHECK(parse_family("dcnot") == FamilyKind::Dcnot);
  CHECK_FALSE(parse_family("toffoli").has_value());
}

TEST_CASE("configuration validation") {
  OptimizerConfig c;
  CHECK(c.effective_restarts(4) == 32);
  CHECK(c.effective_restarts(64) == 64);
  c.restarts = 5;
  CHECK(c.effective_restarts(64) == 5);
  c.restarts = 0;
  CHECK_THROWS_AS(c.validate(), OutOfRange);
  c.restarts.reset();
  c.objective_tolerance = -1;
  CHECK_THROWS_AS(c.validate(), OutOfRange);
  CHECK(linear_grid(0, 1, 5) == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(linear_grid(2, 3, 1) == std::vector<double>{2});
}

TEST_CASE("ancilla partition layout") {
  CHECK(ancilla_partition(0, 0) == std::vector<Party>{Party::A, Party::B});
  CHECK(ancilla_partition(2, 1) ==
        std::vector<Party>{Party::A, Party::A, Party::A, Party::B, Party::B});
}

TEST_CASE("state parameterization") {
  const std::array<double, 8> raw{3, 0, 0, 0, 0, 0, 0, 4};
  const PureState psi = parameterize_state(raw, ancilla_partition(0, 0));
  CHECK(psi.amplitudes()(0).real() == doctest::Approx(0.6));
  CHECK(psi.amplitudes()(3).imag() == doctest::Approx(0.8));
  CHECK(psi.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
  const std::array<double, 8> zero{};
  CHECK_THROWS_AS(parameterize_state(zero, ancilla_partition(0, 0)), ZeroVector);
  const std::array<double, 6> odd{1, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(parameterize_state(odd, ancilla_partition(0, 0)),
                  DimensionMismatch);
  CHECK_THROWS_AS(parameterize_state(raw, ancilla_partition(1, 0)),
                  DimensionMismatch);
}

TEST_CASE("objective gradient matches central differences") {
  struct Case {
    TwoQubitUnitary u;
    MeasureKind measure;
    int a, b;
  };
  const std::vector<Case> cases = {
      {build_canonical_unitary(testing::random_canonical(1, 0.05)),
       MeasureKind::ConcurrenceSquared, 0, 0},
      {testing::random_dressed(TwoQubitUnitary::cnot(), 3),
       MeasureKind::EntropyOfEntanglement, 1, 1},
      {family_unitary({FamilyKind::Dcnot, 0.4}), MeasureKind::LinearEntropy, 1, 0},
      {family_unitary({FamilyKind::Swap, 0.3}), MeasureKind::Concurrence, 0, 0},
      {family_unitary({FamilyKind::Swap, 0.6}), MeasureKind::EntropyOfEntanglement,
       0, 2},
  };
  int point = 0;
  for (const Case &c : cases) {
    const StateObjective obj(c.u, c.measure, c.a, c.b);
    for (int k = 0; k < 10; ++k, ++point) {
      const std::vector<double> raw = random_raw(2 * obj.dimension(), 100 + point);
      Eigen::VectorXd g;
      obj.value_and_gradient(raw, g);
      const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(
          raw.data(), static_cast<Eigen::Index>(raw.size()));
      const Eigen::VectorXd fd = central_difference_gradient(
          [&](const Eigen::VectorXd &y) {
            return obj.value({y.data(), static_cast<std::size_t>(y.size())});
          },
          x, 1e-5);
      CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, fd.norm()));
    }
  }
}

TEST_CASE("objective is E(U psi) - E(psi)") {
  const TwoQubitUnitary u = testing::random_dressed(TwoQubitUnitary::cnot(), 9);
  const StateObjective obj(u, MeasureKind::EntropyOfEntanglement, 1, 0);
  const std::vector<double> raw = random_raw(16, 44);
  const PureState psi = parameterize_state(raw, obj.partition());
  const double expected = entropy_of_entanglement(obj.evolve(psi)) -
                          entropy_of_entanglement(psi);
  CHECK(obj.value(raw) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("sphere ascent maximizes a quadratic form") {
  // max x^T A x on the unit sphere is the top eigenvalue.
  Eigen::MatrixXd a(3, 3);
  a << 2, 1, 0, 1, 3, 1, 0, 1, 4;
  const SmoothObjective f = [&](const Eigen::VectorXd &x, Eigen::VectorXd *g) {
    if (g) *g = 2 * a * x;
    return x.dot(a * x);
  };
  const std::array<Eigen::Index, 1> blocks{3};
  const AscentResult r =
      sphere_ascent(f, Eigen::Vector3d(1, 0, 0), blocks, AscentOptions{});
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(es.eigenvalues()(2)).epsilon(1e-10));
  CHECK(r.x.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("numeric capacity examples") {
  const OptimizerConfig cfg = config();
  const CapacityResult swap0 = numeric_capacity(
      TwoQubitUnitary::swap(), MeasureKind::EntropyOfEntanglement, 0, 0, cfg);
  CHECK(std::abs(swap0.value) <= 1e-6);
  const CapacityResult swap1 = numeric_capacity(
      TwoQubitUnitary::swap(), MeasureKind::EntropyOfEntanglement, 1, 1, cfg);
  CHECK(swap1.value >= 2 - 1e-3);
  const CapacityResult cnot = numeric_capacity(
      TwoQubitUnitary::cnot(), MeasureKind::EntropyOfEntanglement, 0, 0, cfg);
  CHECK(cnot.value == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(cnot.converged_restarts >= 1);
  CHECK(cnot.value == doctest::Approx(cnot.final_entanglement -
                                      cnot.initial_entanglement)
                          .epsilon(1e-12));
  CHECK(cnot.optimal_state.num_qubits() == 2);
}

TEST_CASE("numeric concurrence capacity agrees with the closed form") {
  for (double a : {0.1, 0.3, 0.5, 0.7}) {
    const TwoQubitUnitary u = family_unitary({FamilyKind::Cnot, a});
    const CapacityResult r =
        numeric_capacity(u, MeasureKind::Concurrence, 0, 0, config());
    CHECK(r.value == doctest::Approx(std::sin(2 * a)).epsilon(1e-6));
  }
}

TEST_CASE("numeric c2 agrees with the closed form on random gates") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const CanonicalParams p = testing::random_canonical(300 + s, 0.02);
    const TwoQubitUnitary u = testing::random_dressed(build_canonical_unitary(p), s);
    const CapacityResult r =
        numeric_capacity(u, MeasureKind::ConcurrenceSquared, 0, 0, config(s));
    CHECK(std::abs(r.value - capacity_c2(p).value) <= 1e-5);
  }
}

TEST_CASE("numeric capacity errors") {
  const TwoQubitUnitary u = TwoQubitUnitary::cnot();
  CHECK_THROWS_AS(numeric_capacity(u, MeasureKind::Concurrence, 1, 0, config()),
                  UnsupportedMeasureForDimension);
  CHECK_THROWS_AS(numeric_capacity(u, MeasureKind::ConcurrenceSquared, 0, 1, config()),
                  DimensionMismatch);
  CHECK_THROWS_AS(
      numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 3, 0, config()),
      OutOfRange);
  CHECK_THROWS_AS(
      numeric_capacity(u, MeasureKind::EntropyOfEntanglement, -1, 0, config()),
      OutOfRange);
  OptimizerConfig tight = config();
  tight.max_iterations = 1;
  CHECK_THROWS_AS(numeric_capacity(family_unitary({FamilyKind::Dcnot, 0.5}),
                                   MeasureKind::EntropyOfEntanglement, 0, 0, tight),
                  ConvergenceFailure);
}

TEST_CASE("product-start capacity") {
  const OptimizerConfig cfg = config();
  const auto ps = [&](double a) {
    return product_start_capacity(family_unitary({FamilyKind::Cnot, a}),
                                  MeasureKind::EntropyOfEntanglement, 0, 0, cfg);
  };
  CHECK(ps(kPi / 4).value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(ps(kPi / 8).value - kEntropyCos2Pi8) <= 1e-4);
  CHECK(std::abs(ps(0.0).value) <= 1e-9);
  const CapacityResult r = ps(kPi / 8);
  CHECK(r.initial_entanglement <= 1e-9);
}

TEST_CASE("full capacity dominates product start, which is non-negative") {
  for (FamilyKind f : {FamilyKind::Cnot, FamilyKind::Dcnot, FamilyKind::Swap}) {
    for (double a : {0.2, 0.5}) {
      const TwoQubitUnitary u = family_unitary({f, a});
      const double full =
          numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 0, 0, config())
              .value;
      const double prod =
          product_start_capacity(u, MeasureKind::EntropyOfEntanglement, 0, 0,
                                 config())
              .value;
      CHECK(prod >= -1e-9);
      CHECK(full >= prod - 1e-6);
    }
  }
}

TEST_CASE("finite-difference and analytic gradients reach the same capacity") {
  const TwoQubitUnitary u = family_unitary({FamilyKind::Dcnot, 0.4});
  OptimizerConfig fd = config();
  fd.gradient_mode = GradientMode::FiniteDifference;
  const double a =
      numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 0, 0, config()).value;
  const double b =
      numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 0, 0, fd).value;
  CHECK(std::abs(a - b) <= 1e-6);
}

TEST_CASE("results do not depend on the worker count") {
  const TwoQubitUnitary u = family_unitary({FamilyKind::Swap, 0.5});
  OptimizerConfig one = config(17);
  OptimizerConfig four = config(17);
  four.workers = 4;
  const CapacityResult a =
      numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 1, 1, one);
  const CapacityResult b =
      numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 1, 1, four);
  CHECK(a.value == b.value);
  CHECK(a.best_restart_seed == b.best_restart_seed);
  CHECK(a.converged_restarts == b.converged_restarts);
  CHECK(a.optimal_state.amplitudes() == b.optimal_state.amplitudes());
}

TEST_CASE("minimum initial entanglement among optimal states") {
  // CNOT at pi/4 reaches one ebit from a product state.
  const CapacityResult r = min_initial_entanglement_capacity(
      TwoQubitUnitary::cnot(), MeasureKind::EntropyOfEntanglement, 0, 0, config());
  CHECK(r.value >= 1 - 1e-5);
  CHECK(r.initial_entanglement <= 1e-4);
}

TEST_CASE("family sweep") {
  const std::vector<double> grid = linear_grid(0, kPi / 4, 20);
  const std::vector<SweepRow> rows = family_sweep(
      FamilyKind::Dcnot, grid, MeasureKind::EntropyOfEntanglement, 0, 0, config());
  REQUIRE(rows.size() == 20);
  CHECK(std::abs(rows.front().capacity) <= 1e-6);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].error.empty());
    CHECK(rows[k].alpha == grid[k]);
    if (k > 0) CHECK(rows[k].capacity >= rows[k - 1].capacity - 1e-4);
  }
  CHECK(rows.back().capacity == doctest::Approx(1.0)
                                    .epsilon(1e-4));
}

TEST_CASE("sweep rows record errors as NaN") {
  const std::array<double, 2> alphas{0.3, 1.2};
  const std::vector<SweepRow> rows = family_sweep(
      FamilyKind::Cnot, alphas, MeasureKind::EntropyOfEntanglement, 0, 0, config());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].error.empty());
  CHECK_FALSE(rows[1].error.empty());
  CHECK(std::isnan(rows[1].capacity));
  CHECK(std::isnan(rows[1].initial_entanglement));
}

TEST_CASE("canonical sweep matches the closed form") {
  std::vector<CanonicalParams> points;
  for (std::uint64_t s = 0; s < 4; ++s) {
    points.push_back(testing::random_canonical(500 + s, 0.02));
  }
  const std::vector<SweepRow> rows = canonical_sweep(
      points, MeasureKind::ConcurrenceSquared, 0, 0, config());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].alpha == points[k].alpha[0]);
    CHECK(std::abs(rows[k].capacity - capacity_c2(points[k]).value) <= 1e-5);
  }
}

TEST_CASE("ancillas saturate at one per side") {
  for (FamilyKind f : {FamilyKind::Cnot, FamilyKind::Dcnot, FamilyKind::Swap}) {
    for (double a : {kPi / 16, 3 * kPi / 16}) {
      const TwoQubitUnitary u = family_unitary({f, a});
      const double one =
          numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 1, 1, config())
              .value;
      const double two =
          numeric_capacity(u, MeasureKind::EntropyOfEntanglement, 2, 2, config())
              .value;
      CHECK(two - one <= 1e-3);
      CHECK(two >= one - 1e-4);
    }
  }
}
