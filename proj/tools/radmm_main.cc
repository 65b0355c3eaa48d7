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

// Command-line front end: run, bound, check, calibrate.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "radmm/error.h"
#include "radmm/experiment.h"
#include "radmm/io.h"

namespace {

void WriteJson(const nlohmann::json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw radmm::IoError("cannot write " + out);
  f << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recycled ADMM experiments, privacy bounds and condition checks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  int workers = 0;

  auto* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("--config", config_path, "experiment JSON")->required();
  run->add_option("--out", out,
                  "CSV output, default results.csv (summary JSON goes next to it)");
  run->add_option("--workers", workers, "worker threads per half-iteration");

  auto* bound = app.add_subcommand("bound", "evaluate the privacy bound");
  bound->add_option("--config", config_path, "experiment JSON")->required();
  bound->add_option("--out", out, "JSON output (stdout if omitted)");

  auto* check = app.add_subcommand("check", "check the convergence conditions");
  check->add_option("--config", config_path, "experiment JSON")->required();
  check->add_option("--out", out, "JSON output (stdout if omitted)");

  double beta = 0.0;
  auto* calibrate =
      app.add_subcommand("calibrate", "solve for the constant alpha giving beta");
  calibrate->add_option("--beta", beta, "target privacy bound")->required();
  calibrate->add_option("--config", config_path, "experiment JSON")->required();
  calibrate->add_option("--out", out, "JSON output (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    radmm::ExperimentConfig cfg = radmm::ExperimentConfig::Load(config_path);
    if (workers > 0) cfg.workers = workers;

    if (app.got_subcommand(run)) {
      if (out.empty()) out = "results.csv";
      const radmm::MetricsTrace trace = radmm::RunExperiment(cfg);
      radmm::EmitResults(trace, out);
      std::fprintf(stderr, "wrote %s and %s\n", out.c_str(),
                   radmm::SummaryPath(out).string().c_str());
    } else if (app.got_subcommand(bound)) {
      WriteJson(radmm::PrivacyReportJson(radmm::BoundForConfig(cfg)), out);
    } else if (app.got_subcommand(check)) {
      WriteJson(radmm::ConditionReportJson(radmm::CheckForConfig(cfg)), out);
    } else if (app.got_subcommand(calibrate)) {
      const double alpha = radmm::CalibrateAlpha(cfg, beta);
      cfg.noise.kind = "constant";
      cfg.noise.alpha = alpha;
      WriteJson({{"alpha", alpha},
                 {"beta", radmm::BoundForConfig(cfg).beta},
                 {"target_beta", beta}},
                out);
    }
  } catch (const radmm::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
