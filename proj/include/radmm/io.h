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

#ifndef RADMM_IO_H_
#define RADMM_IO_H_

#include <filesystem>
#include <ostream>

#include "json.hpp"
#include "radmm/analysis.h"
#include "radmm/privacy.h"
#include "radmm/solver.h"

namespace radmm {

// One JSON object per line for t = 1..T:
//   {"t": 3, "phase": "odd", "primal": [[...], ...], "dual": [[...], ...]}
void WriteTraceJsonl(const IterationTrace& trace, std::ostream& out);
void WriteTraceJsonl(const IterationTrace& trace,
                     const std::filesystem::path& path);

// {"beta": ..., "per_node": [...], "per_k": [[...], ...]}
nlohmann::json PrivacyReportJson(const PrivacyReport& report);

// {"holds_i": ..., "holds_ii": ..., "margin_i": ..., "margin_ii": ...}
nlohmann::json ConditionReportJson(const ConditionReport& report);

}  // namespace radmm

#endif  // RADMM_IO_H_
