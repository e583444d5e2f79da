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

#include "entcap/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>

#include "entcap/ascent.hpp"
#include "entcap/error.hpp"
#include "entcap/rng.hpp"

namespace entcap {

int OptimizerConfig::effective_restarts(Eigen::Index dimension) const {
  if (restarts) return *restarts;
  return dimension >= 64 ? 64 : 32;
}

void OptimizerConfig::validate() const {
  if (restarts && *restarts < 1) throw OutOfRange("restarts must be >= 1");
  if (max_iterations < 1) throw OutOfRange("max_iterations must be >= 1");
  if (!(objective_tolerance > 0.0) || !(step_tolerance > 0.0)) {
    throw OutOfRange("tolerances must be positive");
  }
  if (workers < 1) throw OutOfRange("workers must be >= 1");
}

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Cnot:
      return "cnot";
    case FamilyKind::Dcnot:
      return "dcnot";
    case FamilyKind::Swap:
      return "swap";
  }
  return "unknown";
}

std::optional<FamilyKind> parse_family(std::string_view name) {
  for (FamilyKind k : {FamilyKind::Cnot, FamilyKind::Dcnot, FamilyKind::Swap}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

CanonicalParams GateFamily::params() const {
  switch (kind) {
    case FamilyKind::Cnot:
      return {{alpha, 0.0, 0.0}};
    case FamilyKind::Dcnot:
      return {{alpha, alpha, 0.0}};
    case FamilyKind::Swap:
      return {{alpha, alpha, alpha}};
  }
  return {};
}

TwoQubitUnitary family_unitary(const GateFamily &family) {
  // Accept grid endpoints printed to ~10 digits.
  constexpr double slack = 1e-9;
  if (!(family.alpha >= -slack && family.alpha <= kPi / 4 + slack)) {
    throw OutOfRange("family parameter must lie in [0, pi/4], got " +
                     std::to_string(family.alpha));
  }
  GateFamily clamped = family;
  clamped.alpha = std::clamp(family.alpha, 0.0, kPi / 4);
  return build_canonical_unitary(clamped.params());
}

std::vector<Party> ancilla_partition(int anc_a, int anc_b) {
  std::vector<Party> p(anc_a + 1, Party::A);
  p.insert(p.end(), anc_b + 1, Party::B);
  return p;
}

namespace {

ComplexVector to_complex(std::span<const double> raw) {
  ComplexVector v(static_cast<Eigen::Index>(raw.size() / 2));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = Complex(raw[2 * i], raw[2 * i + 1]);
  }
  return v;
}

Eigen::VectorXd to_real(const ComplexVector &v) {
  Eigen::VectorXd raw(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    raw(2 * i) = v(i).real();
    raw(2 * i + 1) = v(i).imag();
  }
  return raw;
}

void check_ancillas(MeasureKind measure, int anc_a, int anc_b) {
  if (anc_a < 0 || anc_b < 0 || anc_a > kMaxAncillas || anc_b > kMaxAncillas) {
    throw OutOfRange("ancilla counts must lie in [0, " +
                     std::to_string(kMaxAncillas) + "]");
  }
  if (requires_two_qubits(measure) && (anc_a != 0 || anc_b != 0)) {
    throw UnsupportedMeasureForDimension(
        "concurrence measures do not accept ancillas");
  }
}

}  // namespace

PureState parameterize_state(std::span<const double> raw,
                             std::vector<Party> partition) {
  const std::size_t expected = std::size_t{2} << partition.size();
  if (raw.size() != expected) {
    throw DimensionMismatch("raw parameter vector has length " +
                            std::to_string(raw.size()) + ", expected " +
                            std::to_string(expected));
  }
  ComplexVector v = to_complex(raw);
  const double n = v.norm();
  if (!(n > 0.0)) throw ZeroVector("cannot normalize the zero vector");
  v /= n;
  return {std::move(v), std::move(partition)};
}

StateObjective::StateObjective(const TwoQubitUnitary &u, MeasureKind measure,
                               int anc_a, int anc_b)
    : u_(u),
      measure_(measure),
      anc_a_(anc_a),
      anc_b_(anc_b),
      dim_a_(Eigen::Index{2} << anc_a),
      dim_b_(Eigen::Index{2} << anc_b) {
  check_ancillas(measure, anc_a, anc_b);
}

StateObjective StateObjective::with_smoothing(double smoothing) const {
  StateObjective copy = *this;
  copy.smoothing_ = smoothing;
  return copy;
}

void StateObjective::apply_pair(const Eigen::Matrix4cd &m,
                                ComplexVector &psi) const {
  // Index = ((ancA * 2 + a) * 2 + b) * 2^anc_b + ancB.
  const Eigen::Index inner = Eigen::Index{1} << anc_b_;
  const Eigen::Index outer = Eigen::Index{1} << anc_a_;
  for (Eigen::Index hi = 0; hi < outer; ++hi) {
    for (Eigen::Index lo = 0; lo < inner; ++lo) {
      const Eigen::Index base = hi * 4 * inner + lo;
      Eigen::Vector4cd v;
      for (int k = 0; k < 4; ++k) v(k) = psi(base + k * inner);
      const Eigen::Vector4cd w = m * v;
      for (int k = 0; k < 4; ++k) psi(base + k * inner) = w(k);
    }
  }
}

ComplexVector StateObjective::evolve(const ComplexVector &psi) const {
  ComplexVector out = psi;
  apply_pair(u_.matrix(), out);
  return out;
}

PureState StateObjective::evolve(const PureState &psi) const {
  if (psi.dimension() != dimension()) {
    throw DimensionMismatch("state does not match the ancilla layout");
  }
  return apply_to_qubit_pair(u_, psi, anc_a_, anc_a_ + 1);
}

double StateObjective::measure_at(const ComplexVector &psi,
                                  ComplexVector *gradient) const {
  using RowMajor =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const ComplexMatrix m = Eigen::Map<const RowMajor>(psi.data(), dim_a_, dim_b_);
  if (gradient == nullptr) return evaluate_schmidt(measure_, m, smoothing_);
  MeasureGradient mg = evaluate_with_gradient(measure_, m, smoothing_);
  gradient->resize(psi.size());
  Eigen::Map<RowMajor>(gradient->data(), dim_a_, dim_b_) = mg.gradient;
  return mg.value;
}

StateObjective::Terms StateObjective::terms(const ComplexVector &psi,
                                            bool with_gradient) const {
  Terms t;
  const ComplexVector phi = evolve(psi);
  if (!with_gradient) {
    t.initial = measure_at(psi, nullptr);
    t.final = measure_at(phi, nullptr);
    return t;
  }
  t.initial = measure_at(psi, &t.initial_gradient);
  t.final = measure_at(phi, &t.final_gradient);
  apply_pair(u_.matrix().adjoint(), t.final_gradient);
  return t;
}

double StateObjective::final_only(const ComplexVector &psi,
                                  ComplexVector *gradient) const {
  const ComplexVector phi = evolve(psi);
  const double value = measure_at(phi, gradient);
  if (gradient != nullptr) apply_pair(u_.matrix().adjoint(), *gradient);
  return value;
}

double StateObjective::value(std::span<const double> raw) const {
  const PureState psi = parameterize_state(raw, partition());
  const Terms t = terms(psi.amplitudes(), false);
  return t.final - t.initial;
}

double StateObjective::value_and_gradient(std::span<const double> raw,
                                          Eigen::VectorXd &gradient) const {
  ComplexVector v = to_complex(raw);
  const double n = v.norm();
  if (!(n > 0.0)) throw ZeroVector("cannot normalize the zero vector");
  if (v.size() != dimension()) {
    throw DimensionMismatch("raw parameter vector does not match the layout");
  }
  v /= n;
  const Terms t = terms(v, true);
  ComplexVector g = t.final_gradient - t.initial_gradient;
  // Chain through psi = v / |v|: remove the radial part and rescale.
  const double radial = (v.adjoint() * g)(0).real();
  g = (g - radial * v) / n;
  gradient = to_real(g);
  return t.final - t.initial;
}

namespace {

constexpr double kConcurrenceContinuation[] = {1e-2, 1e-4, 1e-6,
                                               kConcurrenceSmoothing};
// Initial concurrence below which a restart is tested as a kink optimum.
constexpr double kKinkThreshold = 1e-6;

struct RestartOutcome {
  std::uint64_t seed = 0;
  ComplexVector state;
  double value = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

AscentOptions ascent_options(const OptimizerConfig &config) {
  AscentOptions o;
  o.max_iterations = config.max_iterations;
  o.objective_tolerance = config.objective_tolerance;
  o.step_tolerance = config.step_tolerance;
  return o;
}

// Runs task(i) for i in [0, n) on `workers` threads. Each slot is written by
// exactly one task, so the output is independent of scheduling.
template <typename Task>
std::vector<RestartOutcome> run_tasks(int n, int workers, const Task &task) {
  std::vector<RestartOutcome> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        out[i] = task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::min(workers, n);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

SmoothObjective with_gradient_mode(SmoothObjective analytic,
                                   GradientMode mode) {
  if (mode == GradientMode::Analytic) return analytic;
  return [analytic](const Eigen::VectorXd &x, Eigen::VectorXd *gradient) {
    const double f = analytic(x, nullptr);
    if (gradient != nullptr) {
      *gradient = central_difference_gradient(
          [&](const Eigen::VectorXd &p) {
            Eigen::VectorXd q = p;
            q.normalize();
            return analytic(q, nullptr);
          },
          x, kFiniteDifferenceStep);
    }
    return f;
  };
}

// First-order test for dC = C(U psi) - C(psi) at a product state, where
// C(psi) = 2 |det M| has a kink: 0 must lie in g_f - {2 w K : |w| <= 1}
// after projection onto the tangent space, with g_f the gradient of the final
// term and K the conjugated cofactor matrix of M.
bool kink_stationary(const StateObjective &obj, const ComplexVector &psi,
                     double tolerance) {
  if (obj.anc_a() != 0 || obj.anc_b() != 0) return false;
  const Complex det = psi(0) * psi(3) - psi(1) * psi(2);
  if (2.0 * std::abs(det) > kKinkThreshold) return false;
  ComplexVector g;
  obj.final_only(psi, &g);
  ComplexVector k(4);
  k << std::conj(psi(3)), -std::conj(psi(2)), -std::conj(psi(1)),
      std::conj(psi(0));
  const auto tangent = [&](ComplexVector v) {
    return ComplexVector(v - psi.dot(v).real() * psi);
  };
  g = tangent(g);
  k = tangent(k);
  const double kk = k.squaredNorm();
  if (kk == 0.0) return g.norm() < tolerance;
  Complex w = k.dot(g) / (2.0 * kk);
  if (std::abs(w) > 1.0) w /= std::abs(w);
  return (g - 2.0 * w * k).norm() < tolerance;
}

// Full-state objective on the unit sphere of R^(2 dim).
SmoothObjective delta_objective(const StateObjective &obj) {
  return [&obj](const Eigen::VectorXd &x, Eigen::VectorXd *gradient) {
    const ComplexVector psi = to_complex({x.data(), std::size_t(x.size())});
    const StateObjective::Terms t = obj.terms(psi, gradient != nullptr);
    if (gradient != nullptr) {
      *gradient = to_real(t.final_gradient - t.initial_gradient);
    }
    return t.final - t.initial;
  };
}

CapacityResult finish(const StateObjective &obj,
                      const std::vector<RestartOutcome> &outcomes) {
  int converged = 0;
  const RestartOutcome *best = nullptr;
  for (const RestartOutcome &o : outcomes) {
    if (o.converged) ++converged;
    // Strictly greater keeps the lowest seed among equal values.
    if (best == nullptr || o.value > best->value) best = &o;
  }
  if (converged == 0) {
    throw ConvergenceFailure("none of " + std::to_string(outcomes.size()) +
                             " restarts converged");
  }
  PureState state(best->state.normalized(), obj.partition());
  const PureState final_state = obj.evolve(state);
  const double e0 = evaluate(obj.measure(), state);
  const double ef = evaluate(obj.measure(), final_state);
  return CapacityResult{ef - e0,     std::move(state), e0, ef,
                        converged,   best->seed};
}

std::vector<RestartOutcome> full_restarts(const StateObjective &obj,
                                          const OptimizerConfig &config) {
  config.validate();
  const Eigen::Index dim = obj.dimension();
  const int n = config.effective_restarts(dim);
  // The concurrence has a kink on product states, where its optima sit; it is
  // approached through a sequence of shrinking smoothings.
  std::vector<StateObjective> stages;
  if (obj.measure() == MeasureKind::Concurrence) {
    for (double eta : kConcurrenceContinuation) stages.push_back(obj.with_smoothing(eta));
  } else {
    stages.push_back(obj);
  }
  std::vector<SmoothObjective> objectives;
  for (const StateObjective &stage : stages) {
    objectives.push_back(
        with_gradient_mode(delta_objective(stage), config.gradient_mode));
  }
  const Eigen::Index blocks[] = {2 * dim};
  const AscentOptions options = ascent_options(config);
  return run_tasks(n, config.workers, [&](int i) {
    RestartOutcome o;
    o.seed = config.master_seed + static_cast<std::uint64_t>(i);
    AscentResult r;
    r.x = to_real(haar_random_vector(dim, o.seed));
    for (const SmoothObjective &f : objectives) {
      r = sphere_ascent(f, r.x, blocks, options);
    }
    o.state = to_complex({r.x.data(), std::size_t(r.x.size())});
    o.value = r.value;
    o.converged = r.converged ||
                  (obj.measure() == MeasureKind::Concurrence &&
                   kink_stationary(obj, o.state.normalized(),
                                   AscentOptions{}.gradient_tolerance));
    return o;
  });
}

}  // namespace

CapacityResult numeric_capacity(const TwoQubitUnitary &u, MeasureKind measure,
                                int anc_a, int anc_b,
                                const OptimizerConfig &config) {
  const StateObjective obj(u, measure, anc_a, anc_b);
  return finish(obj, full_restarts(obj, config));
}

CapacityResult product_start_capacity(const TwoQubitUnitary &u,
                                      MeasureKind measure, int anc_a, int anc_b,
                                      const OptimizerConfig &config) {
  config.validate();
  const StateObjective obj(u, measure, anc_a, anc_b);
  const Eigen::Index dim_a = Eigen::Index{2} << anc_a;
  const Eigen::Index dim_b = Eigen::Index{2} << anc_b;

  // x = (raw A factor, raw B factor); psi = a (x) b, so initial E = 0.
  const SmoothObjective analytic = [&](const Eigen::VectorXd &x,
                                       Eigen::VectorXd *gradient) {
    const ComplexVector a = to_complex({x.data(), std::size_t(2 * dim_a)});
    const ComplexVector b =
        to_complex({x.data() + 2 * dim_a, std::size_t(2 * dim_b)});
    ComplexVector psi(dim_a * dim_b);
    for (Eigen::Index i = 0; i < dim_a; ++i) {
      psi.segment(i * dim_b, dim_b) = a(i) * b;
    }
    if (gradient == nullptr) return obj.final_only(psi, nullptr);
    ComplexVector g;
    const double value = obj.final_only(psi, &g);
    using RowMajor =
        Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> gm(g.data(), dim_a, dim_b);
    const ComplexVector ga = gm * b.conjugate();
    const ComplexVector gb = gm.transpose() * a.conjugate();
    gradient->resize(x.size());
    gradient->head(2 * dim_a) = to_real(ga);
    gradient->tail(2 * dim_b) = to_real(gb);
    return value;
  };
  const SmoothObjective f = with_gradient_mode(analytic, config.gradient_mode);

  const int n = config.effective_restarts(obj.dimension());
  const Eigen::Index blocks[] = {2 * dim_a, 2 * dim_b};
  const AscentOptions options = ascent_options(config);
  const auto outcomes = run_tasks(n, config.workers, [&](int i) {
    RestartOutcome o;
    o.seed = config.master_seed + static_cast<std::uint64_t>(i);
    CounterRng rng(o.seed);
    Eigen::VectorXd x0(2 * (dim_a + dim_b));
    x0.head(2 * dim_a) = to_real(haar_random_vector(dim_a, rng.split(0)()));
    x0.tail(2 * dim_b) = to_real(haar_random_vector(dim_b, rng.split(1)()));
    const AscentResult r = sphere_ascent(f, x0, blocks, options);
    const ComplexVector a = to_complex({r.x.data(), std::size_t(2 * dim_a)});
    const ComplexVector b =
        to_complex({r.x.data() + 2 * dim_a, std::size_t(2 * dim_b)});
    o.state.resize(dim_a * dim_b);
    for (Eigen::Index k = 0; k < dim_a; ++k) {
      o.state.segment(k * dim_b, dim_b) = a(k) * b;
    }
    o.value = r.value;
    o.converged = r.converged;
    return o;
  });
  CapacityResult result = finish(obj, outcomes);
  // A product has no entanglement; drop rounding noise in E0.
  result.initial_entanglement = 0.0;
  result.value = result.final_entanglement;
  return result;
}

CapacityResult min_initial_entanglement_capacity(const TwoQubitUnitary &u,
                                                 MeasureKind measure, int anc_a,
                                                 int anc_b,
                                                 const OptimizerConfig &config,
                                                 double slack) {
  const StateObjective obj(u, measure, anc_a, anc_b);
  const std::vector<RestartOutcome> outcomes = full_restarts(obj, config);
  CapacityResult best = finish(obj, outcomes);
  const double target = best.value - slack;

  std::vector<const RestartOutcome *> starts;
  for (const RestartOutcome &o : outcomes) {
    if (o.value >= target) starts.push_back(&o);
  }

  const Eigen::Index blocks[] = {2 * obj.dimension()};
  AscentOptions options = ascent_options(config);
  for (const RestartOutcome *start : starts) {
    Eigen::VectorXd x = to_real(start->state);
    for (double weight : {1e2, 1e4, 1e6}) {
      // Maximize -E0 - weight * max(0, target - dE)^2.
      const SmoothObjective penalized = [&](const Eigen::VectorXd &p,
                                            Eigen::VectorXd *gradient) {
        const ComplexVector psi = to_complex({p.data(), std::size_t(p.size())});
        const StateObjective::Terms t = obj.terms(psi, gradient != nullptr);
        const double shortfall = std::max(0.0, target - (t.final - t.initial));
        if (gradient != nullptr) {
          const ComplexVector g =
              -t.initial_gradient +
              2.0 * weight * shortfall * (t.final_gradient - t.initial_gradient);
          *gradient = to_real(g);
        }
        return -t.initial - weight * shortfall * shortfall;
      };
      x = sphere_ascent(with_gradient_mode(penalized, config.gradient_mode), x,
                        blocks, options)
              .x;
    }
    PureState state(to_complex({x.data(), std::size_t(x.size())}).normalized(),
                    obj.partition());
    const double e0 = evaluate(measure, state);
    const double ef = evaluate(measure, obj.evolve(state));
    if (ef - e0 >= best.value - 2 * slack && e0 < best.initial_entanglement) {
      best = CapacityResult{ef - e0, std::move(state), e0, ef,
                            best.converged_restarts, start->seed};
    }
  }
  return best;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw OutOfRange("grid needs at least one point");
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  }
  return grid;
}

namespace {

SweepRow sweep_point(double alpha, const CanonicalParams &params,
                     const std::function<TwoQubitUnitary()> &make_unitary,
                     MeasureKind measure, int anc_a, int anc_b,
                     const OptimizerConfig &config, SweepMode mode) {
  SweepRow row;
  row.alpha = alpha;
  row.params = params;
  try {
    const TwoQubitUnitary u = make_unitary();
    const CapacityResult r = [&] {
      switch (mode) {
        case SweepMode::ProductStart:
          return product_start_capacity(u, measure, anc_a, anc_b, config);
        case SweepMode::MinInitialEntanglement:
          return min_initial_entanglement_capacity(u, measure, anc_a, anc_b,
                                                   config);
        case SweepMode::Full:
          break;
      }
      return numeric_capacity(u, measure, anc_a, anc_b, config);
    }();
    row.capacity = r.value;
    row.initial_entanglement = r.initial_entanglement;
    row.final_entanglement = r.final_entanglement;
    row.converged_restarts = r.converged_restarts;
  } catch (const Error &e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.capacity = row.initial_entanglement = row.final_entanglement = nan;
    row.converged_restarts = 0;
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> family_sweep(FamilyKind kind,
                                   std::span<const double> alphas,
                                   MeasureKind measure, int anc_a, int anc_b,
                                   const OptimizerConfig &config,
                                   SweepMode mode) {
  std::vector<SweepRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    const GateFamily family{kind, alpha};
    rows.push_back(sweep_point(
        alpha, family.params(), [&] { return family_unitary(family); }, measure,
        anc_a, anc_b, config, mode));
  }
  return rows;
}

std::vector<SweepRow> canonical_sweep(std::span<const CanonicalParams> points,
                                      MeasureKind measure, int anc_a, int anc_b,
                                      const OptimizerConfig &config,
                                      SweepMode mode) {
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const CanonicalParams &p : points) {
    rows.push_back(sweep_point(
        p.alpha[0], p, [&] { return build_canonical_unitary(p); }, measure,
        anc_a, anc_b, config, mode));
  }
  return rows;
}

}  // namespace entcap
