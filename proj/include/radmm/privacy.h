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

#ifndef RADMM_PRIVACY_H_
#define RADMM_PRIVACY_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "radmm/objective.h"
#include "radmm/solver.h"
#include "radmm/topology.h"

namespace radmm {

// Noise scale alpha_i(k) > 0 of the density proportional to
// exp(-alpha |eps|_2). Larger alpha means less noise and a larger privacy
// loss.
class NoiseParams {
 public:
  using Fn = std::function<double(int node, int k)>;

  static NoiseParams Constant(double alpha);
  static NoiseParams PerNode(std::vector<double> alpha);
  static NoiseParams Custom(Fn fn);

  double Alpha(int node, int k) const { return fn_(node, k); }
  void Validate(int n_nodes, int last_k) const;

 private:
  explicit NoiseParams(Fn fn) : fn_(std::move(fn)) {}
  Fn fn_;
};

// Draws eps with density proportional to exp(-alpha |eps|): the norm is
// Gamma(shape d, scale 1/alpha) and the direction is a normalized vector of
// d independent standard normals.
Vector SampleNoise(double alpha, int d, std::mt19937_64& rng);

// SampleNoise on the dedicated (seed, node, k) stream.
Vector SampleNoiseForNode(std::uint64_t seed, int node, int k, double alpha,
                          int d);

// Objective-perturbed odd update. The gradient cache receives
// noise + grad O(f_i(2k-1)) through the stationarity identity; the noise is
// not stored anywhere.
InnerResult PrivateOddUpdate(int i, std::span<const NodeState> prev,
                             const Topology& topology, double eta,
                             const Objective& objective,
                             const InnerOptions& options, const Vector& noise,
                             NodeState& out);

// Even update of the private algorithm. Identical arithmetic to EvenUpdate:
// reads only the recycled caches, no data and no randomness.
Vector PrivateEvenUpdate(const NodeState& state, int degree, double eta,
                         double gamma);

enum class Accounting {
  kOddIterations,   // recycled variants: only odd iterations leak
  kEveryIteration,  // perturbed conventional ADMM: every iteration leaks
};

struct PrivacyReport {
  double beta = 0.0;              // max over nodes of per_node
  std::vector<double> per_node;   // cumulative bound of each node
  // Per perturbed update and node: per_k[k-1][i]. Under kEveryIteration
  // the row index is the iteration instead of the pair.
  std::vector<std::vector<double>> per_k;
  // Per iteration t = 1..2K and node: the bound increment, exactly zero at
  // even iterations under kOddIterations.
  std::vector<std::vector<double>> per_iteration;
  // P(t) for t = 1..2K: max over nodes of the cumulative bound after t.
  std::vector<double> cumulative;
};

// Evaluates
//   beta = max_i sum_k (2C/B_i) (1.4 c1 / (rho/N + 2 eta_i(2k-1) V_i)
//                                + alpha_i(k)).
// K = 0 yields beta = 0.
PrivacyReport PrivacyBound(const ObjectiveParams& params,
                           const Topology& topology,
                           const PenaltySchedule& schedule,
                           const NoiseParams& noise, int outer_pairs,
                           std::span<const int> batch_sizes,
                           Accounting accounting = Accounting::kOddIterations);

// 2 c1 < min_i (B_i / C) (rho/N + 2 eta_i(1) V_i), strictly.
bool CheckEta1Condition(const ObjectiveParams& params, const Topology& topology,
                        const PenaltySchedule& schedule,
                        std::span<const int> batch_sizes);

// The accountant only holds for the logistic ERM objective. Returns the
// per-node batch sizes, looking through CountingObjective wrappers, or throws
// UnsupportedObjective.
std::vector<int> RequireErmObjectives(
    std::span<const std::shared_ptr<const Objective>> objectives);

struct PrivateRunConfig {
  Variant variant = Variant::kMrAdmm;
  PenaltySchedule schedule = PenaltySchedule::Constant(1.0);
  NoiseParams noise = NoiseParams::Constant(1.0);
  double gamma = 0.5;
  int outer_pairs = 1;
  InnerOptions inner;
  std::uint64_t seed = 0;
  int workers = 1;
  // Refuse to run when the eta_i(1) condition fails; otherwise only the
  // PrivateRun flag reports it.
  bool enforce_eta1_condition = false;
  // Replaces SampleNoiseForNode (test hook). Receives (node, k, alpha, d).
  std::function<Vector(int, int, double, int)> noise_source;
  std::function<void(int, Phase)> on_phase;
};

struct PrivateRun {
  IterationTrace trace;
  PrivacyReport report;
  bool eta1_condition_holds = false;
};

// Private R-ADMM / MR-ADMM (or per-iteration perturbed conventional ADMM).
// Every objective must be an ErmObjective sharing `params`.
PrivateRun RunPrivate(
    const Topology& topology,
    std::span<const std::shared_ptr<const Objective>> objectives,
    const ObjectiveParams& params, const PrivateRunConfig& config);

PrivateRun RunPrivate(const Topology& topology,
                      std::span<const Dataset> datasets,
                      const ObjectiveParams& params,
                      const PrivateRunConfig& config);

}  // namespace radmm

#endif  // RADMM_PRIVACY_H_
