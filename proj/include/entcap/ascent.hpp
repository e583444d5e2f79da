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

#include <Eigen/Dense>
#include <functional>
#include <span>

namespace entcap {

/// Objective value at x; fills *gradient with the Euclidean gradient when
/// gradient is non-null.
using SmoothObjective =
    std::function<double(const Eigen::VectorXd &x, Eigen::VectorXd *gradient)>;

struct AscentOptions {
  int max_iterations = 5000;
  /// Stop once the objective improved by less than this over `stall_window`
  /// iterations while the gradient norm failed to halve.
  double objective_tolerance = 1e-8;
  int stall_window = 20;
  /// Stop once an accepted step would be shorter than this.
  double step_tolerance = 1e-10;
  /// A run counts as converged only if the tangent gradient norm is below
  /// this at exit.
  double gradient_tolerance = 1e-6;
  /// Longest step, in parameter norm.
  double max_step = 0.2;
  /// Armijo sufficient-increase constant.
  double armijo = 1e-4;
};

struct AscentResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Projected gradient ascent on a product of unit spheres.
///
/// x is the concatenation of blocks with the given sizes; each block is kept at
/// unit Euclidean norm. Steps follow a limited-memory BFGS direction built
/// from tangent-projected curvature pairs (the tangent gradient when that is
/// not an ascent direction), backtracking until the Armijo condition holds.
AscentResult sphere_ascent(const SmoothObjective &objective, Eigen::VectorXd x0,
                           std::span<const Eigen::Index> block_sizes,
                           const AscentOptions &options);

/// Central-difference gradient of f at x with step h.
Eigen::VectorXd central_difference_gradient(
    const std::function<double(const Eigen::VectorXd &)> &f,
    const Eigen::VectorXd &x, double h);

}  // namespace entcap
