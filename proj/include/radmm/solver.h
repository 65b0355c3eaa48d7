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

#ifndef RADMM_SOLVER_H_
#define RADMM_SOLVER_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "radmm/inner_solver.h"
#include "radmm/objective.h"
#include "radmm/topology.h"

namespace radmm {

enum class Variant { kConventional, kRAdmm, kMrAdmm };
enum class Phase { kInitial, kOdd, kEven, kConventional };

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);  // throws ConfigError
std::string_view PhaseName(Phase p);

// Per-node penalty k -> eta_i(2k-1). For conventional ADMM the index is the
// plain iteration number instead of the pair index.
class PenaltySchedule {
 public:
  using Fn = std::function<double(int node, int k)>;

  static PenaltySchedule Constant(double eta);
  // eta_i(2k-1) = base[i] * ratio[i]^k. A single-element vector applies to
  // every node.
  static PenaltySchedule Geometric(std::vector<double> base,
                                   std::vector<double> ratio);
  static PenaltySchedule Custom(Fn fn);

  double Eta(int node, int k) const { return fn_(node, k); }
  bool is_constant() const { return constant_.has_value(); }

  // Throws ScheduleViolation unless 0 < eta_i(k) <= eta_i(k+1) < inf for
  // every node and k in [1, last_k].
  void Validate(int n_nodes, int last_k) const;

 private:
  explicit PenaltySchedule(Fn fn, std::optional<double> constant = {})
      : fn_(std::move(fn)), constant_(constant) {}

  Fn fn_;
  std::optional<double> constant_;
};

struct NodeState {
  Vector primal;
  Vector dual;
  // grad O(f_i(2k-1)) (private runs: plus the odd-iteration noise), stored by
  // the odd update.
  std::optional<Vector> cached_gradient;
  // eta_i(2k-1) * sum_j (f_i(2k-1) - f_j(2k-1)), stored by the dual update.
  std::optional<Vector> cached_neighbor_diff;
};

struct SolverConfig {
  Variant variant = Variant::kRAdmm;
  PenaltySchedule schedule = PenaltySchedule::Constant(1.0);
  double gamma = 0.0;
  int outer_pairs = 1;  // K; conventional ADMM runs 2K iterations
  InnerOptions inner;
  std::uint64_t seed = 0;
  int workers = 1;
  double init_radius = 0.5;  // f_i(0) ~ U[-r, r]^d

  void Validate(int n_nodes) const;
};

struct Snapshot {
  int t = 0;
  Phase phase = Phase::kInitial;
  std::vector<Vector> primal;
  std::vector<Vector> dual;
  double wall_seconds = 0.0;
};

// snapshots[0] is the initial state, snapshots[t] the state after
// iteration t.
struct IterationTrace {
  std::vector<Snapshot> snapshots;
  int inner_nonconverged = 0;

  int iterations() const { return static_cast<int>(snapshots.size()) - 1; }
};

// Optional instrumentation and perturbation for RunSolver.
struct RunHooks {
  // Called before each half-iteration starts, on the driver thread.
  std::function<void(int t, Phase phase)> on_phase;
  // When set, every data-touching primal update minimizes the objective
  // plus noise(i, k)^T f, where k is the pair index (iteration index for
  // conventional ADMM). Called exactly once per node per perturbed update.
  std::function<Vector(int node, int k)> noise;
};

// Random f_i(0) in [-r, r]^d from the (seed, node) stream, duals zero.
std::vector<NodeState> InitialStates(int n_nodes, int dim, double radius,
                                     std::uint64_t seed);

// Odd-iteration primal update. Reads only `prev` (the 2k-2 snapshot) and
// writes node i's next state into `out`: the minimizer of
//   O(f) + (2 lambda_i + noise)^T f + eta sum_j |(f_i + f_j)/2 - f|^2,
// with the dual carried over and the gradient cache filled. Without noise
// the cache is a fresh grad O(f_i(2k-1)); with noise it is noise + grad O
// recovered from the stationarity condition, so the noise itself is never
// stored.
InnerResult OddUpdate(int i, std::span<const NodeState> prev,
                      const Topology& topology, double eta,
                      const Objective& objective, const InnerOptions& options,
                      NodeState& out, const Vector* noise = nullptr);

// lambda_i += (eta / 2) sum_j (f_i - f_j) using the odd primals in
// `states`; also stores eta * sum_j (f_i - f_j). Touches only states[i].
void DualUpdate(int i, std::span<NodeState> states, const Topology& topology,
                double eta);

// Recycled even update from cached quantities only:
//   f - (cached_gradient + 2 lambda + cached_neighbor_diff) / (2 eta V + gamma)
// Throws MissingCache if either cache is absent.
Vector EvenUpdate(const NodeState& state, int degree, double eta,
                  double gamma);

// One plain ADMM iteration: exact primal solve for all nodes, then the dual
// update. Caches are cleared afterwards.
std::vector<NodeState> ConventionalStep(
    std::span<const NodeState> states, const Topology& topology,
    std::span<const double> etas,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const InnerOptions& options, int workers = 1,
    std::span<const Vector> noise = {}, int* nonconverged = nullptr);

IterationTrace RunSolver(
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const SolverConfig& config, const RunHooks& hooks = {});

// Same as RunSolver but starting from caller-provided states.
IterationTrace RunSolverFrom(
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const SolverConfig& config, std::vector<NodeState> initial,
    const RunHooks& hooks = {});

// (1/N) sum_i O_i(f_i).
double AverageObjective(
    std::span<const Vector> primal,
    std::span<const std::shared_ptr<const Objective>> objectives);

}  // namespace radmm

#endif  // RADMM_SOLVER_H_
