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

#ifndef RADMM_EXPERIMENT_H_
#define RADMM_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "radmm/analysis.h"
#include "radmm/data.h"
#include "radmm/privacy.h"
#include "radmm/solver.h"
#include "radmm/topology.h"

namespace radmm {

// L(t) = (1/N) sum_i (1/B_i) sum_n loss(y f_i^T x): plain logistic loss, no
// C or rho weighting.
double AverageLoss(std::span<const Vector> primal,
                   std::span<const Dataset> train);

// Test error of the averaged classifier (1/N) sum_i f_i. A zero margin
// predicts +1. Throws EmptyTestSet.
double ErrorRate(std::span<const Vector> primal, const Dataset& test);

struct DatasetSpec {
  std::string source = "synthetic";  // "synthetic" | "csv"
  int n_samples = 2500;
  int dim = 10;
  double separation = 1.0;
  std::uint64_t seed = 1;
  std::string csv_path;
  std::string schema_path;
  double test_fraction = 0.2;
  std::uint64_t split_seed = 2;
};

struct TopologySpec {
  std::string kind = "random";  // "random" | "explicit" | "file"
  int n_nodes = 5;
  double edge_probability = 0.5;
  std::uint64_t seed = 7;
  std::vector<Edge> edges;
  std::string path;

  Topology Build() const;
};

struct ScheduleSpec {
  std::string kind = "constant";  // "constant" | "geometric"
  double eta = 1.0;
  std::vector<double> base{1.0};   // eta^_i, one value or one per node
  std::vector<double> ratio{1.04};  // q_i, one value or one per node

  PenaltySchedule Build() const;
};

struct NoiseSpec {
  std::string kind = "none";  // "none" | "constant" | "per_node"
  double alpha = 1.0;
  std::vector<double> alphas;

  bool enabled() const { return kind != "none"; }
  NoiseParams Build() const;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  TopologySpec topology;
  Variant variant = Variant::kMrAdmm;
  ScheduleSpec schedule;
  double gamma = 0.5;
  int K = 100;
  double C = 1750.0;  // clipped to min_i B_i
  double rho = 0.22;
  double c1 = 0.25;
  NoiseSpec noise;
  int n_repeats = 10;
  std::uint64_t base_seed = 0;
  double inner_tolerance = 1e-8;
  int inner_max_iterations = 500;
  int workers = 1;
  bool per_iteration_error = false;
  bool enforce_eta1_condition = false;
  // Constants for the convergence-condition check.
  double L = 2.0;
  double mu = 2.0;

  // Throws ConfigError naming the offending field.
  static ExperimentConfig FromJson(const nlohmann::json& j);
  static ExperimentConfig Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;
  void Validate() const;
};

// Data, topology and objective constants shared by every repeat.
struct ExperimentSetup {
  PartitionedData data;
  Topology topology;
  ObjectiveParams params;
};

ExperimentSetup PrepareExperiment(const ExperimentConfig& config);

struct MetricsTrace {
  std::vector<int> t;  // 1..2K
  std::vector<double> L_mean;
  std::vector<double> L_range;
  std::vector<double> P;  // +inf for non-private runs
  std::vector<double> E_per_iteration;  // filled only on request
  double E_mean = 0.0;
  double E_range = 0.0;
  double beta_final = 0.0;
  nlohmann::json config;
};

// n_repeats solver runs with seeds base_seed + l, aggregated in repeat
// order.
MetricsTrace RunExperiment(const ExperimentConfig& config);

// Writes `path` (CSV "t,L_mean,L_range,P") and a sibling summary JSON
// (see SummaryPath) with E_mean, E_range, beta_final and the config.
void EmitResults(const MetricsTrace& trace, const std::filesystem::path& path);
std::filesystem::path SummaryPath(const std::filesystem::path& csv_path);
// Reads back the CSV columns and the summary written by EmitResults.
MetricsTrace ReadResults(const std::filesystem::path& path);

// Accountant for the configured variant and noise: odd-only accounting for
// the recycled variants, every-iteration accounting for conventional ADMM.
PrivacyReport BoundForConfig(const ExperimentConfig& config);

// Constant alpha making BoundForConfig equal target_beta, bisected until the
// bracket stops shrinking. Throws InfeasibleTarget when even alpha -> 0
// exceeds the target.
double CalibrateAlpha(const ExperimentConfig& config, double target_beta);

// Convergence conditions with M_i from GradientLipschitzBound: the
// constant-penalty form for r_admm/conventional, otherwise the general form
// between the first two odd iterations.
ConditionReport CheckForConfig(const ExperimentConfig& config);

}  // namespace radmm

#endif  // RADMM_EXPERIMENT_H_
