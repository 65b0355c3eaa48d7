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

#include "radmm/privacy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "radmm/error.h"
#include "radmm/rng.h"

namespace radmm {
namespace {

const ErmObjective* AsErm(const Objective& objective) {
  if (auto* erm = dynamic_cast<const ErmObjective*>(&objective)) return erm;
  if (auto* counted = dynamic_cast<const CountingObjective*>(&objective)) {
    return AsErm(counted->inner());
  }
  return nullptr;
}

// (2C/B_i) (1.4 c1 / (rho/N + 2 eta V_i) + alpha)
double BoundTerm(const ObjectiveParams& p, int batch, double eta, int degree,
                 double alpha) {
  const double curvature =
      1.4 * p.c1 / (p.rho / p.n_nodes + 2.0 * eta * degree);
  return 2.0 * p.C / batch * (curvature + alpha);
}

}  // namespace

NoiseParams NoiseParams::Constant(double alpha) {
  return NoiseParams([alpha](int, int) { return alpha; });
}

NoiseParams NoiseParams::PerNode(std::vector<double> alpha) {
  if (alpha.empty()) throw InvalidArgument("per-node alpha list is empty");
  return NoiseParams(
      [alpha = std::move(alpha)](int node, int) { return alpha.at(node); });
}

NoiseParams NoiseParams::Custom(Fn fn) { return NoiseParams(std::move(fn)); }

void NoiseParams::Validate(int n_nodes, int last_k) const {
  for (int i = 0; i < n_nodes; ++i) {
    for (int k = 1; k <= last_k; ++k) {
      double a = Alpha(i, k);
      if (!std::isfinite(a) || !(a > 0.0)) {
        throw InvalidArgument("alpha for node " + std::to_string(i) +
                              " at k=" + std::to_string(k) +
                              " must be positive and finite");
      }
    }
  }
}

Vector SampleNoise(double alpha, int d, std::mt19937_64& rng) {
  if (!(alpha > 0.0) || d < 1) {
    throw InvalidArgument("noise needs alpha > 0 and d >= 1");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector direction(d);
  double norm = 0.0;
  do {
    for (int c = 0; c < d; ++c) direction(c) = normal(rng);
    norm = direction.norm();
  } while (norm == 0.0);
  std::gamma_distribution<double> radius(static_cast<double>(d), 1.0 / alpha);
  return radius(rng) / norm * direction;
}

Vector SampleNoiseForNode(std::uint64_t seed, int node, int k, double alpha,
                          int d) {
  auto rng = MakeStream(seed, StreamPurpose::kNoise, node, k);
  return SampleNoise(alpha, d, rng);
}

InnerResult PrivateOddUpdate(int i, std::span<const NodeState> prev,
                             const Topology& topology, double eta,
                             const Objective& objective,
                             const InnerOptions& options, const Vector& noise,
                             NodeState& out) {
  return OddUpdate(i, prev, topology, eta, objective, options, out, &noise);
}

Vector PrivateEvenUpdate(const NodeState& state, int degree, double eta,
                         double gamma) {
  return EvenUpdate(state, degree, eta, gamma);
}

PrivacyReport PrivacyBound(const ObjectiveParams& params,
                           const Topology& topology,
                           const PenaltySchedule& schedule,
                           const NoiseParams& noise, int outer_pairs,
                           std::span<const int> batch_sizes,
                           Accounting accounting) {
  const int n = topology.num_nodes();
  if (static_cast<int>(batch_sizes.size()) != n) {
    throw DimensionMismatch("need one batch size per node");
  }
  if (outer_pairs < 0) throw InvalidArgument("K must be non-negative");
  for (int b : batch_sizes) {
    if (b < 1) throw InvalidArgument("batch sizes must be positive");
  }
  if (!(params.C > 0.0) || !(params.rho > 0.0) || !(params.c1 > 0.0)) {
    throw InvalidArgument("C, rho and c1 must be positive");
  }

  const int iterations = 2 * outer_pairs;
  const bool every = accounting == Accounting::kEveryIteration;
  const int updates = every ? iterations : outer_pairs;

  PrivacyReport report;
  report.per_node.assign(n, 0.0);
  report.per_k.assign(updates, std::vector<double>(n, 0.0));
  report.per_iteration.assign(iterations, std::vector<double>(n, 0.0));
  report.cumulative.assign(iterations, 0.0);

  for (int u = 1; u <= updates; ++u) {
    for (int i = 0; i < n; ++i) {
      double term = BoundTerm(params, batch_sizes[i], schedule.Eta(i, u),
                              topology.degree(i), noise.Alpha(i, u));
      report.per_k[u - 1][i] = term;
      const int t = every ? u : 2 * u - 1;
      report.per_iteration[t - 1][i] = term;
    }
  }
  std::vector<double> running(n, 0.0);
  for (int t = 1; t <= iterations; ++t) {
    for (int i = 0; i < n; ++i) running[i] += report.per_iteration[t - 1][i];
    report.cumulative[t - 1] = *std::max_element(running.begin(), running.end());
  }
  report.per_node = running;
  report.beta = n > 0 ? *std::max_element(running.begin(), running.end()) : 0.0;
  return report;
}

bool CheckEta1Condition(const ObjectiveParams& params, const Topology& topology,
                        const PenaltySchedule& schedule,
                        std::span<const int> batch_sizes) {
  const int n = topology.num_nodes();
  if (static_cast<int>(batch_sizes.size()) != n) {
    throw DimensionMismatch("need one batch size per node");
  }
  double rhs = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    rhs = std::min(rhs, batch_sizes[i] / params.C *
                            (params.rho / params.n_nodes +
                             2.0 * schedule.Eta(i, 1) * topology.degree(i)));
  }
  return 2.0 * params.c1 < rhs;
}

std::vector<int> RequireErmObjectives(
    std::span<const std::shared_ptr<const Objective>> objectives) {
  std::vector<int> batches;
  batches.reserve(objectives.size());
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    const ErmObjective* erm = objectives[i] ? AsErm(*objectives[i]) : nullptr;
    if (!erm) {
      throw UnsupportedObjective(
          "privacy accounting needs the logistic ERM objective at node " +
          std::to_string(i));
    }
    batches.push_back(erm->data().size());
  }
  return batches;
}

PrivateRun RunPrivate(
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const ObjectiveParams& params, const PrivateRunConfig& config) {
  const std::vector<int> batches = RequireErmObjectives(objectives);
  const int n = topology.num_nodes();
  if (static_cast<int>(batches.size()) != n) {
    throw DimensionMismatch("need one objective per node");
  }
  params.Validate(*std::min_element(batches.begin(), batches.end()));

  const bool every = config.variant == Variant::kConventional;
  config.noise.Validate(n, every ? 2 * config.outer_pairs : config.outer_pairs);

  PrivateRun run;
  run.eta1_condition_holds =
      CheckEta1Condition(params, topology, config.schedule, batches);
  if (config.enforce_eta1_condition && !run.eta1_condition_holds) {
    throw ConfigError("schedule: eta_i(1) violates the privacy precondition");
  }

  SolverConfig solver;
  solver.variant = config.variant;
  solver.schedule = config.schedule;
  solver.gamma = config.gamma;
  solver.outer_pairs = config.outer_pairs;
  solver.inner = config.inner;
  solver.seed = config.seed;
  solver.workers = config.workers;

  const int d = objectives[0]->dim();
  RunHooks hooks;
  hooks.on_phase = config.on_phase;
  hooks.noise = [&](int node, int k) {
    const double alpha = config.noise.Alpha(node, k);
    if (config.noise_source) return config.noise_source(node, k, alpha, d);
    return SampleNoiseForNode(config.seed, node, k, alpha, d);
  };
  run.trace = RunSolver(topology, objectives, solver, hooks);
  run.report = PrivacyBound(
      params, topology, config.schedule, config.noise, config.outer_pairs,
      batches, every ? Accounting::kEveryIteration : Accounting::kOddIterations);
  return run;
}

PrivateRun RunPrivate(const Topology& topology,
                      std::span<const Dataset> datasets,
                      const ObjectiveParams& params,
                      const PrivateRunConfig& config) {
  std::vector<std::shared_ptr<const Objective>> objectives;
  objectives.reserve(datasets.size());
  for (const auto& data : datasets) {
    objectives.push_back(std::make_shared<ErmObjective>(data, params));
  }
  return RunPrivate(topology, objectives, params, config);
}

}  // namespace radmm
