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

#ifndef RADMM_DATA_H_
#define RADMM_DATA_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "radmm/objective.h"

namespace radmm {

enum class ColumnKind { kNumeric, kCategorical, kLabel, kIgnore };

// Column roles for CSV ingestion. JSON form:
//   {"columns": {"age": "numeric", "workclass": "categorical",
//                "income": "label", "fnlwgt": "ignore"},
//    "label_map": {">50K": 1, "<=50K": -1},
//    "missing_markers": ["?"],        // optional, default ["?", ""]
//    "drop_missing": true}            // optional, default true
// Every header column must be listed; exactly one column is the label.
struct Schema {
  std::map<std::string, ColumnKind> columns;
  std::map<std::string, int> label_map;
  std::vector<std::string> missing_markers{"?", ""};
  bool drop_missing = true;
};

Schema ParseSchema(std::string_view json_text);
Schema LoadSchema(const std::filesystem::path& path);

// Cells are kept as trimmed strings; missing markers survive until
// Preprocess.
struct RawTable {
  std::vector<std::string> columns;
  std::vector<ColumnKind> kinds;
  std::vector<std::vector<std::string>> rows;
  std::string label_column;
  Schema schema;
};

// Comma-separated, header first, double quotes allowed around cells.
// Throws ParseError naming the row and SchemaMismatch when header and schema
// disagree.
RawTable ParseCsv(std::istream& in, const Schema& schema,
                  std::string_view source = "<stream>");
RawTable LoadCsv(const std::filesystem::path& path, const Schema& schema);

struct FeatureSet {
  Matrix features;
  Vector labels;
};

// (1) drop rows holding a missing marker, (2) one-hot encode categorical
// columns with levels in lexicographic order, (3) divide each numeric column
// by its maximum absolute value, (4) divide each row by max(1, |row|),
// (5) map labels through the schema's label_map.
FeatureSet Preprocess(const RawTable& raw);

struct PartitionedData {
  std::vector<Dataset> train;
  Dataset test;
  int dim = 0;

  std::vector<int> batch_sizes() const;
};

// Seeded shuffle; the first floor(test_fraction * n) shuffled rows form the
// test set and the rest are dealt round-robin to the nodes.
PartitionedData SplitAndPartition(const Matrix& features, const Vector& labels,
                                  int n_nodes, double test_fraction,
                                  std::uint64_t seed);

// Two isotropic unit-variance Gaussian clusters centered at
// +-separation * u for a random unit vector u; label = cluster sign, drawn
// with probability 1/2 each. Rows are then scaled to norm <= 1.
FeatureSet SyntheticClassification(int n_samples, int d, double separation,
                                   std::uint64_t seed);

}  // namespace radmm

#endif  // RADMM_DATA_H_
