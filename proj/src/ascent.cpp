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

#include "entcap/ascent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

#include "entcap/error.hpp"

namespace entcap {

namespace {

// Curvature pairs kept by the quasi-Newton direction.
constexpr std::size_t kMemory = 8;

void normalize_blocks(Eigen::VectorXd &x, std::span<const Eigen::Index> blocks) {
  Eigen::Index offset = 0;
  for (Eigen::Index size : blocks) {
    auto seg = x.segment(offset, size);
    const double n = seg.norm();
    if (!(n > 0.0)) throw ZeroVector("parameter block has zero norm");
    seg /= n;
    offset += size;
  }
}

void project_to_tangent(const Eigen::VectorXd &x, Eigen::VectorXd &g,
                        std::span<const Eigen::Index> blocks) {
  Eigen::Index offset = 0;
  for (Eigen::Index size : blocks) {
    const auto xs = x.segment(offset, size);
    auto gs = g.segment(offset, size);
    gs -= xs.dot(gs) * xs;
    offset += size;
  }
}

}  // namespace

AscentResult sphere_ascent(const SmoothObjective &objective, Eigen::VectorXd x,
                           std::span<const Eigen::Index> blocks,
                           const AscentOptions &options) {
  Eigen::Index total = 0;
  for (Eigen::Index size : blocks) total += size;
  if (total != x.size()) {
    throw DimensionMismatch("block sizes do not cover the parameter vector");
  }
  normalize_blocks(x, blocks);

  Eigen::VectorXd g(x.size());
  double f = objective(x, &g);
  project_to_tangent(x, g, blocks);
  double gnorm = g.norm();

  struct Sample {
    double value;
    double gradient_norm;
  };
  std::deque<Sample> history{{f, gnorm}};

  // Curvature pairs for -f: s = step taken, y = -(change in gradient).
  struct Pair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> coeffs;
  const auto direction = [&]() -> Eigen::VectorXd {
    if (memory.empty()) return g;
    Eigen::VectorXd q = g;
    coeffs.assign(memory.size(), 0.0);
    for (std::size_t k = memory.size(); k-- > 0;) {
      coeffs[k] = memory[k].rho * memory[k].s.dot(q);
      q -= coeffs[k] * memory[k].y;
    }
    const Pair &last = memory.back();
    Eigen::VectorXd r = (last.s.dot(last.y) / last.y.squaredNorm()) * q;
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const double b = memory[k].rho * memory[k].y.dot(r);
      r += (coeffs[k] - b) * memory[k].s;
    }
    project_to_tangent(x, r, blocks);
    return r;
  };

  AscentResult result;
  int it = 0;
  Eigen::VectorXd x_new(x.size());
  Eigen::VectorXd g_new(x.size());
  for (; it < options.max_iterations; ++it) {
    if (gnorm < options.gradient_tolerance) break;

    Eigen::VectorXd d = direction();
    double slope = g.dot(d);
    if (!(slope > 0.0)) {
      memory.clear();
      d = g;
      slope = gnorm * gnorm;
    }
    double step = std::min(1.0, options.max_step / d.norm());

    bool accepted = false;
    double f_new = f;
    while (true) {
      while (step * d.norm() >= options.step_tolerance) {
        x_new = x + step * d;
        normalize_blocks(x_new, blocks);
        f_new = objective(x_new, &g_new);
        if (f_new >= f + options.armijo * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (accepted || memory.empty()) break;
      // Retry once along the gradient.
      memory.clear();
      d = g;
      slope = gnorm * gnorm;
      step = std::min(1.0, options.max_step / gnorm);
    }
    if (!accepted) break;

    project_to_tangent(x_new, g_new, blocks);
    Eigen::VectorXd sk = x_new - x;
    Eigen::VectorXd yk = g - g_new;
    project_to_tangent(x_new, sk, blocks);
    project_to_tangent(x_new, yk, blocks);
    const double sy = sk.dot(yk);
    if (sy > 1e-12 * sk.norm() * yk.norm()) {
      memory.push_back({std::move(sk), std::move(yk), 1.0 / sy});
      if (memory.size() > kMemory) memory.pop_front();
    }

    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    gnorm = g.norm();

    // A stall needs both a flat objective and a gradient that has stopped
    // shrinking; near boundary optima the objective flattens long before the
    // gradient settles.
    history.push_back({f, gnorm});
    if (static_cast<int>(history.size()) > options.stall_window) {
      const double gained = f - history.front().value;
      const bool gradient_stuck = gnorm >= 0.5 * history.front().gradient_norm;
      history.pop_front();
      if (gained < options.objective_tolerance && gradient_stuck) {
        ++it;
        break;
      }
    }
  }

  result.x = std::move(x);
  result.value = f;
  result.gradient_norm = gnorm;
  result.iterations = it;
  result.converged = gnorm < options.gradient_tolerance;
  return result;
}

Eigen::VectorXd central_difference_gradient(
    const std::function<double(const Eigen::VectorXd &)> &f,
    const Eigen::VectorXd &x, double h) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = f(probe);
    probe(i) = x(i) - h;
    const double down = f(probe);
    probe(i) = x(i);
    grad(i) = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace entcap
