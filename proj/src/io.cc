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

#include "radmm/io.h"

#include <fstream>

#include "radmm/error.h"

namespace radmm {
namespace {

using nlohmann::json;

json Rows(const std::vector<Vector>& vs) {
  json rows = json::array();
  for (const auto& v : vs) rows.push_back(std::vector<double>(v.begin(), v.end()));
  return rows;
}

}  // namespace

void WriteTraceJsonl(const IterationTrace& trace, std::ostream& out) {
  for (std::size_t t = 1; t < trace.snapshots.size(); ++t) {
    const Snapshot& s = trace.snapshots[t];
    json record{{"t", s.t},
                {"phase", std::string(PhaseName(s.phase))},
                {"primal", Rows(s.primal)},
                {"dual", Rows(s.dual)}};
    out << record.dump() << '\n';
  }
}

void WriteTraceJsonl(const IterationTrace& trace,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  WriteTraceJsonl(trace, out);
  if (!out) throw IoError("failed writing " + path.string());
}

json PrivacyReportJson(const PrivacyReport& report) {
  return json{{"beta", report.beta},
              {"per_node", report.per_node},
              {"per_k", report.per_k}};
}

json ConditionReportJson(const ConditionReport& report) {
  return json{{"holds_i", report.holds_i},
              {"holds_ii", report.holds_ii},
              {"margin_i", report.margin_i},
              {"margin_ii", report.margin_ii}};
}

}  // namespace radmm
