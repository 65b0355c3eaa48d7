//
// Copyright 2026 The R-ADMM Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "radmm/solver.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <string>

#include "radmm/error.h"
#include "radmm/parallel.h"
#include "radmm/rng.h"

namespace radmm {
namespace {

using Clock = std::chrono::steady_clock;

Snapshot TakeSnapshot(int t, Phase phase, std::span<const NodeState> states,
                      Clock::time_point start) {
  Snapshot s;
  s.t = t;
  s.phase = phase;
  s.primal.reserve(states.size());
  s.dual.reserve(states.size());
  for (const auto& st : states) {
    s.primal.push_back(st.primal);
    s.dual.push_back(st.dual);
  }
  s.wall_seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  return s;
}

// eta * sum_j (f_i(prev) + f_j(prev)) / 2, summed in ascending neighbor order.
Vector ProximalCenterSum(int i, std::span<const NodeState> prev,
                         const Topology& topology, double eta) {
  Vector sum = Vector::Zero(prev[i].primal.size());
  for (int j : topology.neighbors(i)) {
    sum += 0.5 * (prev[i].primal + prev[j].primal);
  }
  return eta * sum;
}

void CheckObjectives(
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives) {
  if (static_cast<int>(objectives.size()) != topology.num_nodes()) {
    throw DimensionMismatch("need one objective per node");
  }
  for (const auto& o : objectives) {
    if (!o) throw InvalidArgument("null objective");
    if (o->dim() != objectives[0]->dim()) {
      throw DimensionMismatch("objectives disagree in dimension");
    }
  }
}

}  // namespace

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kConventional:
      return "conventional";
    case Variant::kRAdmm:
      return "r_admm";
    case Variant::kMrAdmm:
      return "mr_admm";
  }
  return "unknown";
}

Variant ParseVariant(std::string_view name) {
  if (name == "conventional") return Variant::kConventional;
  if (name == "r_admm") return Variant::kRAdmm;
  if (name == "mr_admm") return Variant::kMrAdmm;
  throw ConfigError("variant: unknown value '" + std::string(name) + "'");
}

std::string_view PhaseName(Phase p) {
  switch (p) {
    case Phase::kInitial:
      return "initial";
    case Phase::kOdd:
      return "odd";
    case Phase::kEven:
      return "even";
    case Phase::kConventional:
      return "conventional";
  }
  return "unknown";
}

PenaltySchedule PenaltySchedule::Constant(double eta) {
  return PenaltySchedule([eta](int, int) { return eta; }, eta);
}

PenaltySchedule PenaltySchedule::Geometric(std::vector<double> base,
                                           std::vector<double> ratio) {
  if (base.empty() || ratio.empty()) {
    throw InvalidArgument("geometric schedule needs base and ratio values");
  }
  return PenaltySchedule([base = std::move(base), ratio = std::move(ratio)](
                             int node, int k) {
    double b = base.size() == 1 ? base[0] : base.at(node);
    double q = ratio.size() == 1 ? ratio[0] : ratio.at(node);
    return b * std::pow(q, k);
  });
}

PenaltySchedule PenaltySchedule::Custom(Fn fn) {
  return PenaltySchedule(std::move(fn));
}

void PenaltySchedule::Validate(int n_nodes, int last_k) const {
  for (int i = 0; i < n_nodes; ++i) {
    double previous = 0.0;
    for (int k = 1; k <= last_k; ++k) {
      double eta = Eta(i, k);
      if (!std::isfinite(eta) || !(eta > 0.0)) {
        throw ScheduleViolation("eta for node " + std::to_string(i) +
                                " at k=" + std::to_string(k) +
                                " is not positive and finite");
      }
      if (eta < previous) {
        throw ScheduleViolation("eta for node " + std::to_string(i) +
                                " decreases at k=" + std::to_string(k));
      }
      previous = eta;
    }
  }
}

void SolverConfig::Validate(int n_nodes) const {
  if (outer_pairs < 1) throw InvalidArgument("outer_pairs must be >= 1");
  if (!(inner.tolerance > 0.0)) {
    throw InvalidArgument("inner tolerance must be positive");
  }
  if (inner.max_iterations < 1) {
    throw InvalidArgument("inner max iterations must be >= 1");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidArgument("gamma must be finite and non-negative");
  }
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  const int last_k =
      variant == Variant::kConventional ? 2 * outer_pairs : outer_pairs;
  schedule.Validate(n_nodes, last_k);
  if (variant != Variant::kMrAdmm && !schedule.is_constant()) {
    throw ScheduleViolation(std::string(VariantName(variant)) +
                            " needs a constant penalty schedule");
  }
}

std::vector<NodeState> InitialStates(int n_nodes, int dim, double radius,
                                     std::uint64_t seed) {
  std::vector<NodeState> states(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    auto rng = MakeStream(seed, StreamPurpose::kInitialPrimal, i, 0);
    std::uniform_real_distribution<double> u(-radius, radius);
    states[i].primal.resize(dim);
    for (int c = 0; c < dim; ++c) states[i].primal(c) = u(rng);
    states[i].dual = Vector::Zero(dim);
  }
  return states;
}

InnerResult OddUpdate(int i, std::span<const NodeState> prev,
                      const Topology& topology, double eta,
                      const Objective& objective, const InnerOptions& options,
                      NodeState& out, const Vector* noise) {
  const NodeState& self = prev[i];
  const double weight = eta * topology.degree(i);
  Vector linear = 2.0 * self.dual;
  if (noise) linear += *noise;
  Vector center = ProximalCenterSum(i, prev, topology, eta);

  InnerResult result =
      InnerSolve(objective, linear, center, weight, self.primal, options);

  out.primal = result.solution;
  out.dual = self.dual;
  if (noise) {
    // noise + grad O = -2 lambda - eta sum_j (2 f_i - f_i(prev) - f_j(prev))
    Vector spread = Vector::Zero(out.primal.size());
    for (int j : topology.neighbors(i)) {
      spread += 2.0 * out.primal - self.primal - prev[j].primal;
    }
    out.cached_gradient = -2.0 * self.dual - eta * spread;
  } else {
    out.cached_gradient = objective.Gradient(out.primal);
  }
  out.cached_neighbor_diff.reset();
  return result;
}

void DualUpdate(int i, std::span<NodeState> states, const Topology& topology,
                double eta) {
  NodeState& self = states[i];
  Vector diff = Vector::Zero(self.primal.size());
  for (int j : topology.neighbors(i)) {
    diff += self.primal - states[j].primal;
  }
  self.dual += 0.5 * eta * diff;
  self.cached_neighbor_diff = eta * diff;
}

Vector EvenUpdate(const NodeState& state, int degree, double eta,
                  double gamma) {
  if (!state.cached_gradient || !state.cached_neighbor_diff) {
    throw MissingCache("even update needs the caches of a completed odd update");
  }
  const double denom = 2.0 * eta * degree + gamma;
  if (!(denom > 0.0)) {
    throw InvalidArgument("even step size 1/(2 eta V + gamma) is undefined");
  }
  return state.primal - (*state.cached_gradient + 2.0 * state.dual +
                         *state.cached_neighbor_diff) /
                            denom;
}

std::vector<NodeState> ConventionalStep(
    std::span<const NodeState> states, const Topology& topology,
    std::span<const double> etas,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const InnerOptions& options, int workers, std::span<const Vector> noise,
    int* nonconverged) {
  const int n = topology.num_nodes();
  std::vector<NodeState> next(n);
  std::atomic<int> misses{0};
  ParallelFor(n, workers, [&](int i) {
    const Vector* eps = noise.empty() ? nullptr : &noise[i];
    InnerResult r = OddUpdate(i, states, topology, etas[i], *objectives[i],
                              options, next[i], eps);
    if (!r.converged) ++misses;
  });
  ParallelFor(n, workers, [&](int i) { DualUpdate(i, next, topology, etas[i]); });
  for (auto& s : next) {
    s.cached_gradient.reset();
    s.cached_neighbor_diff.reset();
  }
  if (nonconverged) *nonconverged += misses.load();
  return next;
}

IterationTrace RunSolver(
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const SolverConfig& config, const RunHooks& hooks) {
  CheckObjectives(topology, objectives);
  return RunSolverFrom(topology, objectives, config,
                       InitialStates(topology.num_nodes(), objectives[0]->dim(),
                                     config.init_radius, config.seed),
                       hooks);
}

IterationTrace RunSolverFrom(
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const SolverConfig& config, std::vector<NodeState> states,
    const RunHooks& hooks) {
  CheckObjectives(topology, objectives);
  const int n = topology.num_nodes();
  config.Validate(n);
  if (static_cast<int>(states.size()) != n) {
    throw DimensionMismatch("need one initial state per node");
  }

  const auto start = Clock::now();
  IterationTrace trace;
  trace.snapshots.reserve(2 * config.outer_pairs + 1);
  trace.snapshots.push_back(TakeSnapshot(0, Phase::kInitial, states, start));

  auto announce = [&](int t, Phase p) {
    if (hooks.on_phase) hooks.on_phase(t, p);
  };
  std::vector<double> etas(n);

  if (config.variant == Variant::kConventional) {
    std::vector<Vector> noise;
    for (int t = 1; t <= 2 * config.outer_pairs; ++t) {
      announce(t, Phase::kConventional);
      for (int i = 0; i < n; ++i) etas[i] = config.schedule.Eta(i, t);
      if (hooks.noise) {
        noise.assign(n, Vector());
        ParallelFor(n, config.workers,
                    [&](int i) { noise[i] = hooks.noise(i, t); });
      }
      states = ConventionalStep(states, topology, etas, objectives,
                                config.inner, config.workers, noise,
                                &trace.inner_nonconverged);
      trace.snapshots.push_back(
          TakeSnapshot(t, Phase::kConventional, states, start));
    }
    return trace;
  }

  std::vector<NodeState> next(n);
  for (int k = 1; k <= config.outer_pairs; ++k) {
    for (int i = 0; i < n; ++i) etas[i] = config.schedule.Eta(i, k);

    const int t_odd = 2 * k - 1;
    announce(t_odd, Phase::kOdd);
    std::atomic<int> misses{0};
    ParallelFor(n, config.workers, [&](int i) {
      Vector eps;
      if (hooks.noise) eps = hooks.noise(i, k);
      InnerResult r = OddUpdate(i, states, topology, etas[i], *objectives[i],
                                config.inner, next[i],
                                hooks.noise ? &eps : nullptr);
      if (!r.converged) ++misses;
    });
    trace.inner_nonconverged += misses.load();
    ParallelFor(n, config.workers,
                [&](int i) { DualUpdate(i, next, topology, etas[i]); });
    std::swap(states, next);
    trace.snapshots.push_back(TakeSnapshot(t_odd, Phase::kOdd, states, start));

    const int t_even = 2 * k;
    announce(t_even, Phase::kEven);
    ParallelFor(n, config.workers, [&](int i) {
      next[i].primal =
          EvenUpdate(states[i], topology.degree(i), etas[i], config.gamma);
      next[i].dual = states[i].dual;
      next[i].cached_gradient.reset();
      next[i].cached_neighbor_diff.reset();
    });
    std::swap(states, next);
    trace.snapshots.push_back(
        TakeSnapshot(t_even, Phase::kEven, states, start));
  }
  return trace;
}

double AverageObjective(
    std::span<const Vector> primal,
    std::span<const std::shared_ptr<const Objective>> objectives) {
  if (primal.size() != objectives.size() || primal.empty()) {
    throw DimensionMismatch("need one primal per objective");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < primal.size(); ++i) {
    sum += objectives[i]->Value(primal[i]);
  }
  return sum / static_cast<double>(primal.size());
}

}  // namespace radmm
