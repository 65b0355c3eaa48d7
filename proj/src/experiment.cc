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

#include "radmm/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "radmm/error.h"

namespace radmm {
namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename T>
T Field(const json& j, const std::string& key, const T& fallback,
        const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(path + key + ": " + e.what());
  }
}

// Accepts a scalar or an array of numbers.
std::vector<double> NumberList(const json& j, const std::string& key,
                               const std::vector<double>& fallback,
                               const std::string& path) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  return Field<std::vector<double>>(j, key, fallback, path);
}

std::string FormatDouble(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Thin JSON writer that keeps doubles round-trippable and infinities
// representable.
json JsonNumber(double v) {
  if (std::isfinite(v)) return v;
  return FormatDouble(v);
}

double ReadNumber(const json& v) {
  if (v.is_string()) return std::stod(v.get<std::string>());
  return v.get<double>();
}

}  // namespace

double AverageLoss(std::span<const Vector> primal,
                   std::span<const Dataset> train) {
  if (primal.size() != train.size() || primal.empty()) {
    throw DimensionMismatch("need one classifier per training set");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < primal.size(); ++i) {
    const Dataset& d = train[i];
    if (d.size() == 0) continue;
    Vector margins = d.features * primal[i];
    double sum = 0.0;
    for (int n = 0; n < d.size(); ++n) {
      sum += LogisticLoss(d.labels(n) * margins(n)).value;
    }
    total += sum / d.size();
  }
  return total / static_cast<double>(primal.size());
}

double ErrorRate(std::span<const Vector> primal, const Dataset& test) {
  if (test.size() == 0) throw EmptyTestSet("test set is empty");
  if (primal.empty()) throw DimensionMismatch("no classifiers");
  Vector mean = Vector::Zero(primal[0].size());
  for (const auto& f : primal) mean += f;
  mean /= static_cast<double>(primal.size());
  Vector margins = test.features * mean;
  int wrong = 0;
  for (int n = 0; n < test.size(); ++n) {
    const double predicted = margins(n) >= 0.0 ? 1.0 : -1.0;
    if (predicted != test.labels(n)) ++wrong;
  }
  return static_cast<double>(wrong) / test.size();
}

Topology TopologySpec::Build() const {
  if (kind == "random") {
    return Topology::RandomConnected(n_nodes, edge_probability, seed);
  }
  if (kind == "explicit") return Topology::Build(n_nodes, edges);
  if (kind == "file") return Topology::FromEdgeListFile(path, n_nodes);
  throw ConfigError("topology.kind: unknown value '" + kind + "'");
}

PenaltySchedule ScheduleSpec::Build() const {
  if (kind == "constant") return PenaltySchedule::Constant(eta);
  if (kind == "geometric") return PenaltySchedule::Geometric(base, ratio);
  throw ConfigError("schedule.kind: unknown value '" + kind + "'");
}

NoiseParams NoiseSpec::Build() const {
  if (kind == "constant") return NoiseParams::Constant(alpha);
  if (kind == "per_node") return NoiseParams::PerNode(alphas);
  throw ConfigError("noise.kind: no noise parameters for '" + kind + "'");
}

ExperimentConfig ExperimentConfig::FromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;

  if (j.contains("dataset")) {
    const json& d = j.at("dataset");
    const std::string p = "dataset.";
    c.dataset.source = Field(d, "source", c.dataset.source, p);
    c.dataset.n_samples = Field(d, "n_samples", c.dataset.n_samples, p);
    c.dataset.dim = Field(d, "dim", c.dataset.dim, p);
    c.dataset.separation = Field(d, "separation", c.dataset.separation, p);
    c.dataset.seed = Field(d, "seed", c.dataset.seed, p);
    c.dataset.csv_path = Field(d, "csv_path", c.dataset.csv_path, p);
    c.dataset.schema_path = Field(d, "schema_path", c.dataset.schema_path, p);
    c.dataset.test_fraction =
        Field(d, "test_fraction", c.dataset.test_fraction, p);
    c.dataset.split_seed = Field(d, "split_seed", c.dataset.split_seed, p);
  }
  if (j.contains("topology")) {
    const json& t = j.at("topology");
    const std::string p = "topology.";
    c.topology.kind = Field(t, "kind", c.topology.kind, p);
    c.topology.n_nodes = Field(t, "n_nodes", c.topology.n_nodes, p);
    c.topology.edge_probability =
        Field(t, "edge_probability", c.topology.edge_probability, p);
    c.topology.seed = Field(t, "seed", c.topology.seed, p);
    c.topology.path = Field(t, "path", c.topology.path, p);
    auto pairs = Field<std::vector<std::array<int, 2>>>(t, "edges", {}, p);
    for (const auto& e : pairs) c.topology.edges.emplace_back(e[0], e[1]);
  }
  if (j.contains("variant")) {
    c.variant = ParseVariant(Field<std::string>(j, "variant", "", ""));
  }
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    const std::string p = "schedule.";
    c.schedule.kind = Field(s, "kind", c.schedule.kind, p);
    c.schedule.eta = Field(s, "eta", c.schedule.eta, p);
    c.schedule.base = NumberList(s, "base", c.schedule.base, p);
    c.schedule.ratio = NumberList(s, "q", c.schedule.ratio, p);
  }
  c.gamma = Field(j, "gamma", c.gamma, "");
  c.K = Field(j, "K", c.K, "");
  if (j.contains("objective")) {
    const json& o = j.at("objective");
    c.C = Field(o, "C", c.C, "objective.");
    c.rho = Field(o, "rho", c.rho, "objective.");
    c.c1 = Field(o, "c1", c.c1, "objective.");
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    c.noise.kind = Field(n, "kind", c.noise.kind, "noise.");
    c.noise.alpha = Field(n, "alpha", c.noise.alpha, "noise.");
    c.noise.alphas = NumberList(n, "alphas", c.noise.alphas, "noise.");
  }
  c.n_repeats = Field(j, "n_repeats", c.n_repeats, "");
  c.base_seed = Field(j, "base_seed", c.base_seed, "");
  c.inner_tolerance = Field(j, "inner_tolerance", c.inner_tolerance, "");
  c.inner_max_iterations =
      Field(j, "inner_max_iterations", c.inner_max_iterations, "");
  c.workers = Field(j, "workers", c.workers, "");
  c.per_iteration_error =
      Field(j, "per_iteration_error", c.per_iteration_error, "");
  c.enforce_eta1_condition =
      Field(j, "enforce_eta1_condition", c.enforce_eta1_condition, "");
  c.L = Field(j, "L", c.L, "");
  c.mu = Field(j, "mu", c.mu, "");
  c.Validate();
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return FromJson(j);
}

json ExperimentConfig::ToJson() const {
  json edges = json::array();
  for (const auto& [a, b] : topology.edges) edges.push_back({a, b});
  return json{
      {"dataset",
       {{"source", dataset.source},
        {"n_samples", dataset.n_samples},
        {"dim", dataset.dim},
        {"separation", dataset.separation},
        {"seed", dataset.seed},
        {"csv_path", dataset.csv_path},
        {"schema_path", dataset.schema_path},
        {"test_fraction", dataset.test_fraction},
        {"split_seed", dataset.split_seed}}},
      {"topology",
       {{"kind", topology.kind},
        {"n_nodes", topology.n_nodes},
        {"edge_probability", topology.edge_probability},
        {"seed", topology.seed},
        {"edges", edges},
        {"path", topology.path}}},
      {"variant", std::string(VariantName(variant))},
      {"schedule",
       {{"kind", schedule.kind},
        {"eta", schedule.eta},
        {"base", schedule.base},
        {"q", schedule.ratio}}},
      {"gamma", gamma},
      {"K", K},
      {"objective", {{"C", C}, {"rho", rho}, {"c1", c1}}},
      {"noise",
       {{"kind", noise.kind}, {"alpha", noise.alpha}, {"alphas", noise.alphas}}},
      {"n_repeats", n_repeats},
      {"base_seed", base_seed},
      {"inner_tolerance", inner_tolerance},
      {"inner_max_iterations", inner_max_iterations},
      {"workers", workers},
      {"per_iteration_error", per_iteration_error},
      {"enforce_eta1_condition", enforce_eta1_condition},
      {"L", L},
      {"mu", mu}};
}

void ExperimentConfig::Validate() const {
  if (dataset.source != "synthetic" && dataset.source != "csv") {
    throw ConfigError("dataset.source: expected 'synthetic' or 'csv'");
  }
  if (dataset.source == "csv" &&
      (dataset.csv_path.empty() || dataset.schema_path.empty())) {
    throw ConfigError("dataset.csv_path: csv source needs csv_path and schema_path");
  }
  if (!(dataset.test_fraction >= 0.0 && dataset.test_fraction < 1.0)) {
    throw ConfigError("dataset.test_fraction: must lie in [0, 1)");
  }
  if (topology.kind != "random" && topology.kind != "explicit" &&
      topology.kind != "file") {
    throw ConfigError("topology.kind: expected 'random', 'explicit' or 'file'");
  }
  if (schedule.kind == "constant") {
    if (!(schedule.eta > 0.0)) throw ConfigError("schedule.eta: must be positive");
  } else if (schedule.kind == "geometric") {
    for (double q : schedule.ratio) {
      if (!(q >= 1.0)) throw ConfigError("schedule.q: must be >= 1");
    }
    for (double b : schedule.base) {
      if (!(b > 0.0)) throw ConfigError("schedule.base: must be positive");
    }
  } else {
    throw ConfigError("schedule.kind: expected 'constant' or 'geometric'");
  }
  if (variant != Variant::kMrAdmm && schedule.kind != "constant") {
    throw ConfigError("schedule.kind: " + std::string(VariantName(variant)) +
                      " needs a constant schedule");
  }
  if (noise.kind != "none" && noise.kind != "constant" &&
      noise.kind != "per_node") {
    throw ConfigError("noise.kind: expected 'none', 'constant' or 'per_node'");
  }
  if (noise.kind == "constant" && !(noise.alpha > 0.0)) {
    throw ConfigError("noise.alpha: must be positive");
  }
  if (!(gamma >= 0.0)) throw ConfigError("gamma: must be non-negative");
  if (K < 1) throw ConfigError("K: must be >= 1");
  if (!(C > 0.0)) throw ConfigError("objective.C: must be positive");
  if (!(rho > 0.0)) throw ConfigError("objective.rho: must be positive");
  if (!(c1 > 0.0)) throw ConfigError("objective.c1: must be positive");
  if (n_repeats < 1) throw ConfigError("n_repeats: must be >= 1");
  if (!(inner_tolerance > 0.0)) {
    throw ConfigError("inner_tolerance: must be positive");
  }
  if (inner_max_iterations < 1) {
    throw ConfigError("inner_max_iterations: must be >= 1");
  }
  if (workers < 1) throw ConfigError("workers: must be >= 1");
}

ExperimentSetup PrepareExperiment(const ExperimentConfig& config) {
  config.Validate();
  FeatureSet fs;
  if (config.dataset.source == "synthetic") {
    fs = SyntheticClassification(config.dataset.n_samples, config.dataset.dim,
                                 config.dataset.separation, config.dataset.seed);
  } else {
    fs = Preprocess(LoadCsv(config.dataset.csv_path,
                            LoadSchema(config.dataset.schema_path)));
  }
  Topology topology = config.topology.Build();
  PartitionedData data = SplitAndPartition(
      fs.features, fs.labels, topology.num_nodes(),
      config.dataset.test_fraction, config.dataset.split_seed);
  const auto batches = data.batch_sizes();
  ObjectiveParams params;
  params.C = std::min(config.C, static_cast<double>(
                                    *std::min_element(batches.begin(), batches.end())));
  params.rho = config.rho;
  params.c1 = config.c1;
  params.n_nodes = topology.num_nodes();
  return {std::move(data), std::move(topology), params};
}

MetricsTrace RunExperiment(const ExperimentConfig& config) {
  const ExperimentSetup setup = PrepareExperiment(config);
  const int n = setup.topology.num_nodes();
  const int iterations = 2 * config.K;

  std::vector<std::shared_ptr<const Objective>> objectives;
  for (const auto& d : setup.data.train) {
    objectives.push_back(std::make_shared<ErmObjective>(d, setup.params));
  }

  std::vector<std::vector<double>> losses(config.n_repeats);
  std::vector<std::vector<double>> errors(config.n_repeats);
  std::vector<double> final_error(config.n_repeats);
  PrivacyReport report;

  for (int l = 0; l < config.n_repeats; ++l) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(l);
    IterationTrace trace;
    if (config.noise.enabled()) {
      PrivateRunConfig pc;
      pc.variant = config.variant;
      pc.schedule = config.schedule.Build();
      pc.noise = config.noise.Build();
      pc.gamma = config.gamma;
      pc.outer_pairs = config.K;
      pc.inner = {config.inner_tolerance, config.inner_max_iterations};
      pc.seed = seed;
      pc.workers = config.workers;
      pc.enforce_eta1_condition = config.enforce_eta1_condition;
      PrivateRun run = RunPrivate(setup.topology, objectives, setup.params, pc);
      trace = std::move(run.trace);
      report = std::move(run.report);
    } else {
      SolverConfig sc;
      sc.variant = config.variant;
      sc.schedule = config.schedule.Build();
      sc.gamma = config.gamma;
      sc.outer_pairs = config.K;
      sc.inner = {config.inner_tolerance, config.inner_max_iterations};
      sc.seed = seed;
      sc.workers = config.workers;
      trace = RunSolver(setup.topology, objectives, sc);
    }
    losses[l].resize(iterations);
    for (int t = 1; t <= iterations; ++t) {
      losses[l][t - 1] = AverageLoss(trace.snapshots[t].primal, setup.data.train);
    }
    if (config.per_iteration_error) {
      errors[l].resize(iterations);
      for (int t = 1; t <= iterations; ++t) {
        errors[l][t - 1] = ErrorRate(trace.snapshots[t].primal, setup.data.test);
      }
    }
    final_error[l] = setup.data.test.size() > 0
                         ? ErrorRate(trace.snapshots.back().primal, setup.data.test)
                         : std::numeric_limits<double>::quiet_NaN();
  }

  MetricsTrace out;
  out.config = config.ToJson();
  for (int t = 1; t <= iterations; ++t) {
    double sum = 0.0;
    double lo = kInf;
    double hi = -kInf;
    for (int l = 0; l < config.n_repeats; ++l) {
      const double v = losses[l][t - 1];
      sum += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.t.push_back(t);
    out.L_mean.push_back(sum / config.n_repeats);
    out.L_range.push_back(hi - lo);
    out.P.push_back(config.noise.enabled() ? report.cumulative[t - 1] : kInf);
    if (config.per_iteration_error) {
      double esum = 0.0;
      for (int l = 0; l < config.n_repeats; ++l) esum += errors[l][t - 1];
      out.E_per_iteration.push_back(esum / config.n_repeats);
    }
  }
  double esum = 0.0;
  double elo = kInf;
  double ehi = -kInf;
  for (double e : final_error) {
    esum += e;
    elo = std::min(elo, e);
    ehi = std::max(ehi, e);
  }
  out.E_mean = esum / config.n_repeats;
  out.E_range = ehi - elo;
  out.beta_final = config.noise.enabled() ? report.beta : kInf;
  (void)n;
  return out;
}

std::filesystem::path SummaryPath(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".summary.json");
  return p;
}

void EmitResults(const MetricsTrace& trace, const std::filesystem::path& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "t,L_mean,L_range,P\n";
    for (std::size_t k = 0; k < trace.t.size(); ++k) {
      out << trace.t[k] << ',' << FormatDouble(trace.L_mean[k]) << ','
          << FormatDouble(trace.L_range[k]) << ',' << FormatDouble(trace.P[k])
          << '\n';
    }
    if (!out) throw IoError("failed writing " + path.string());
  }
  json summary{{"E_mean", JsonNumber(trace.E_mean)},
               {"E_range", JsonNumber(trace.E_range)},
               {"beta_final", JsonNumber(trace.beta_final)},
               {"config", trace.config}};
  if (!trace.E_per_iteration.empty()) {
    json per = json::array();
    for (double e : trace.E_per_iteration) per.push_back(JsonNumber(e));
    summary["E_per_iteration"] = per;
  }
  const auto summary_path = SummaryPath(path);
  std::ofstream out(summary_path, std::ios::binary);
  if (!out) throw IoError("cannot write " + summary_path.string());
  out << summary.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + summary_path.string());
}

MetricsTrace ReadResults(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  MetricsTrace trace;
  std::string line;
  if (!std::getline(in, line) || line != "t,L_mean,L_range,P") {
    throw ParseError(path.string() + ": unexpected header");
  }
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    std::stringstream fields(line);
    std::string t, lm, lr, p;
    if (!std::getline(fields, t, ',') || !std::getline(fields, lm, ',') ||
        !std::getline(fields, lr, ',') || !std::getline(fields, p)) {
      throw ParseError(path.string() + ": row " + std::to_string(row) +
                       " is malformed");
    }
    trace.t.push_back(std::stoi(t));
    trace.L_mean.push_back(std::stod(lm));
    trace.L_range.push_back(std::stod(lr));
    trace.P.push_back(std::stod(p));
  }
  std::ifstream sin(SummaryPath(path));
  if (!sin) throw IoError("cannot open " + SummaryPath(path).string());
  const json summary = json::parse(sin);
  trace.E_mean = ReadNumber(summary.at("E_mean"));
  trace.E_range = ReadNumber(summary.at("E_range"));
  trace.beta_final = ReadNumber(summary.at("beta_final"));
  trace.config = summary.at("config");
  if (summary.contains("E_per_iteration")) {
    for (const auto& e : summary["E_per_iteration"]) {
      trace.E_per_iteration.push_back(ReadNumber(e));
    }
  }
  return trace;
}

PrivacyReport BoundForConfig(const ExperimentConfig& config) {
  if (!config.noise.enabled()) {
    throw ConfigError("noise.kind: the accountant needs noise parameters");
  }
  const ExperimentSetup setup = PrepareExperiment(config);
  const auto batches = setup.data.batch_sizes();
  return PrivacyBound(setup.params, setup.topology, config.schedule.Build(),
                      config.noise.Build(), config.K, batches,
                      config.variant == Variant::kConventional
                          ? Accounting::kEveryIteration
                          : Accounting::kOddIterations);
}

double CalibrateAlpha(const ExperimentConfig& config, double target_beta) {
  if (!(target_beta > 0.0) || !std::isfinite(target_beta)) {
    throw InvalidArgument("target beta must be positive and finite");
  }
  const ExperimentSetup setup = PrepareExperiment(config);
  const auto batches = setup.data.batch_sizes();
  const PenaltySchedule schedule = config.schedule.Build();
  const Accounting accounting = config.variant == Variant::kConventional
                                    ? Accounting::kEveryIteration
                                    : Accounting::kOddIterations;
  auto beta_at = [&](double alpha) {
    return PrivacyBound(setup.params, setup.topology, schedule,
                        NoiseParams::Constant(alpha), config.K, batches,
                        accounting)
        .beta;
  };
  double lo = 0.0;
  if (beta_at(std::numeric_limits<double>::min()) >= target_beta) {
    throw InfeasibleTarget("target beta is below the noise-free floor of the bound");
  }
  double hi = 1.0;
  while (beta_at(hi) < target_beta) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw InfeasibleTarget("alpha bracket overflowed");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (beta_at(mid) < target_beta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ConditionReport CheckForConfig(const ExperimentConfig& config) {
  const ExperimentSetup setup = PrepareExperiment(config);
  const int n = setup.topology.num_nodes();
  const Vector lipschitz =
      Vector::Constant(n, GradientLipschitzBound(setup.params));
  const PenaltySchedule schedule = config.schedule.Build();
  if (config.variant != Variant::kMrAdmm) {
    return CheckRConditions(setup.topology, schedule.Eta(0, 1), config.gamma,
                            lipschitz);
  }
  ConditionReport worst;
  worst.margin_i = kInf;
  worst.margin_ii = kInf;
  const int last = std::max(1, config.K - 1);
  for (int k = 1; k <= last; ++k) {
    ConditionInputs in;
    in.eta_now.resize(n);
    in.eta_next.resize(n);
    for (int i = 0; i < n; ++i) {
      in.eta_now(i) = schedule.Eta(i, k);
      in.eta_next(i) = schedule.Eta(i, config.K > 1 ? k + 1 : k);
    }
    in.gamma = config.gamma;
    in.lipschitz = lipschitz;
    in.L = config.L;
    in.mu = config.mu;
    ConditionReport r = CheckMrConditions(setup.topology, in);
    worst.margin_i = std::min(worst.margin_i, r.margin_i);
    worst.margin_ii = std::min(worst.margin_ii, r.margin_ii);
  }
  worst.holds_i = worst.margin_i > 0.0;
  worst.holds_ii = worst.margin_ii > 0.0;
  return worst;
}

}  // namespace radmm
