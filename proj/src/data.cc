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

#include "radmm/data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "radmm/error.h"

namespace radmm {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

ColumnKind ParseKind(const std::string& name, const std::string& column) {
  if (name == "numeric") return ColumnKind::kNumeric;
  if (name == "categorical") return ColumnKind::kCategorical;
  if (name == "label") return ColumnKind::kLabel;
  if (name == "ignore") return ColumnKind::kIgnore;
  throw SchemaMismatch("column '" + column + "' has unknown kind '" + name + "'");
}

// Splits one CSV record; returns false on an unterminated quote.
bool SplitRecord(const std::string& line, std::vector<std::string>& cells) {
  cells.clear();
  std::string cell;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"') {
        if (k + 1 < line.size() && line[k + 1] == '"') {
          cell.push_back('"');
          ++k;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(Trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(Trim(cell));
  return !quoted;
}

bool IsMissing(const std::string& cell, const Schema& schema) {
  return std::find(schema.missing_markers.begin(), schema.missing_markers.end(),
                   cell) != schema.missing_markers.end();
}

double ParseNumber(const std::string& cell, std::size_t row,
                   const std::string& column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("row " + std::to_string(row + 1) + ", column '" + column +
                     "': '" + cell + "' is not a number");
  }
  return value;
}

}  // namespace

Schema ParseSchema(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaMismatch(std::string("schema is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("columns") || !j["columns"].is_object()) {
    throw SchemaMismatch("schema needs a \"columns\" object");
  }
  Schema s;
  for (const auto& [name, kind] : j["columns"].items()) {
    if (!kind.is_string()) {
      throw SchemaMismatch("column '" + name + "' kind must be a string");
    }
    s.columns[name] = ParseKind(kind.get<std::string>(), name);
  }
  if (j.contains("label_map")) {
    for (const auto& [raw, mapped] : j["label_map"].items()) {
      if (!mapped.is_number_integer() ||
          (mapped.get<int>() != 1 && mapped.get<int>() != -1)) {
        throw SchemaMismatch("label_map values must be 1 or -1");
      }
      s.label_map[raw] = mapped.get<int>();
    }
  }
  if (j.contains("missing_markers")) {
    s.missing_markers = j["missing_markers"].get<std::vector<std::string>>();
  }
  if (j.contains("drop_missing")) s.drop_missing = j["drop_missing"].get<bool>();
  return s;
}

Schema LoadSchema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open schema " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseSchema(buffer.str());
}

RawTable ParseCsv(std::istream& in, const Schema& schema,
                  std::string_view source) {
  RawTable table;
  table.schema = schema;
  std::string line;
  std::vector<std::string> cells;
  if (!std::getline(in, line)) {
    throw ParseError(std::string(source) + ": missing header row");
  }
  if (!SplitRecord(line, cells)) {
    throw ParseError(std::string(source) + ": unterminated quote in header");
  }
  table.columns = cells;

  std::set<std::string> seen;
  int labels = 0;
  for (const auto& c : table.columns) {
    auto it = schema.columns.find(c);
    if (it == schema.columns.end()) {
      throw SchemaMismatch("header column '" + c + "' is not in the schema");
    }
    if (!seen.insert(c).second) {
      throw SchemaMismatch("header column '" + c + "' appears twice");
    }
    table.kinds.push_back(it->second);
    if (it->second == ColumnKind::kLabel) {
      table.label_column = c;
      ++labels;
    }
  }
  for (const auto& [name, kind] : schema.columns) {
    if (!seen.count(name)) {
      throw SchemaMismatch("schema column '" + name + "' is not in the header");
    }
  }
  if (labels != 1) {
    throw SchemaMismatch("schema must name exactly one label column");
  }

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (Trim(line).empty()) continue;
    if (!SplitRecord(line, cells)) {
      throw ParseError(std::string(source) + ": row " + std::to_string(row) +
                       ": unterminated quote");
    }
    if (cells.size() != table.columns.size()) {
      throw ParseError(std::string(source) + ": row " + std::to_string(row) +
                       " has " + std::to_string(cells.size()) +
                       " fields, expected " +
                       std::to_string(table.columns.size()));
    }
    table.rows.push_back(cells);
  }
  return table;
}

RawTable LoadCsv(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ParseCsv(in, schema, path.string());
}

FeatureSet Preprocess(const RawTable& raw) {
  const Schema& schema = raw.schema;
  const std::size_t ncol = raw.columns.size();

  std::vector<const std::vector<std::string>*> kept;
  for (const auto& r : raw.rows) {
    bool missing = false;
    for (std::size_t c = 0; c < ncol && !missing; ++c) {
      missing = raw.kinds[c] != ColumnKind::kIgnore && IsMissing(r[c], schema);
    }
    if (missing && schema.drop_missing) continue;
    kept.push_back(&r);
  }
  if (kept.empty()) throw EmptyAfterFiltering("no rows left after filtering");

  // Output layout: columns in header order, categoricals expanded in place.
  std::vector<int> offset(ncol, -1);
  std::vector<std::map<std::string, int>> levels(ncol);
  int width = 0;
  for (std::size_t c = 0; c < ncol; ++c) {
    if (raw.kinds[c] == ColumnKind::kNumeric) {
      offset[c] = width++;
    } else if (raw.kinds[c] == ColumnKind::kCategorical) {
      std::set<std::string> values;
      for (const auto* r : kept) values.insert((*r)[c]);
      offset[c] = width;
      for (const auto& v : values) levels[c][v] = width++ - offset[c];
    }
  }

  const int n = static_cast<int>(kept.size());
  FeatureSet out;
  out.features = Matrix::Zero(n, width);
  out.labels.resize(n);
  for (int row = 0; row < n; ++row) {
    const auto& r = *kept[row];
    for (std::size_t c = 0; c < ncol; ++c) {
      switch (raw.kinds[c]) {
        case ColumnKind::kNumeric:
          if (!IsMissing(r[c], schema)) {
            out.features(row, offset[c]) = ParseNumber(r[c], row, raw.columns[c]);
          }
          break;
        case ColumnKind::kCategorical:
          out.features(row, offset[c] + levels[c].at(r[c])) = 1.0;
          break;
        case ColumnKind::kLabel: {
          auto it = schema.label_map.find(r[c]);
          if (it != schema.label_map.end()) {
            out.labels(row) = it->second;
          } else if (r[c] == "1" || r[c] == "+1" || r[c] == "-1") {
            out.labels(row) = r[c] == "-1" ? -1.0 : 1.0;
          } else {
            throw UnmappableLabel("row " + std::to_string(row + 1) +
                                  ": label '" + r[c] + "' has no mapping");
          }
          break;
        }
        case ColumnKind::kIgnore:
          break;
      }
    }
  }

  for (std::size_t c = 0; c < ncol; ++c) {
    if (raw.kinds[c] != ColumnKind::kNumeric) continue;
    const double scale = out.features.col(offset[c]).cwiseAbs().maxCoeff();
    if (scale > 0.0) out.features.col(offset[c]) /= scale;
  }
  for (int row = 0; row < n; ++row) {
    const double norm = out.features.row(row).norm();
    if (norm > 1.0) out.features.row(row) /= norm;
  }
  return out;
}

std::vector<int> PartitionedData::batch_sizes() const {
  std::vector<int> b;
  b.reserve(train.size());
  for (const auto& d : train) b.push_back(d.size());
  return b;
}

PartitionedData SplitAndPartition(const Matrix& features, const Vector& labels,
                                  int n_nodes, double test_fraction,
                                  std::uint64_t seed) {
  if (labels.size() != features.rows()) {
    throw DimensionMismatch("label count does not match feature rows");
  }
  if (n_nodes < 1) throw InvalidArgument("need at least one node");
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw InvalidArgument("test_fraction must lie in [0, 1)");
  }
  const int total = static_cast<int>(features.rows());
  const int n_test =
      static_cast<int>(std::floor(test_fraction * total * (1.0 + 1e-12)));
  const int n_train = total - n_test;
  if (n_train < n_nodes) {
    throw TooFewSamples(std::to_string(n_train) + " training rows for " +
                        std::to_string(n_nodes) + " nodes");
  }

  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  auto gather = [&](const std::vector<int>& rows) {
    Dataset d;
    d.features.resize(static_cast<int>(rows.size()), features.cols());
    d.labels.resize(static_cast<int>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
      d.features.row(k) = features.row(rows[k]);
      d.labels(k) = labels(rows[k]);
    }
    return d;
  };

  PartitionedData out;
  out.dim = static_cast<int>(features.cols());
  out.test = gather(std::vector<int>(order.begin(), order.begin() + n_test));
  std::vector<std::vector<int>> buckets(n_nodes);
  for (int pos = 0; pos < n_train; ++pos) {
    buckets[pos % n_nodes].push_back(order[n_test + pos]);
  }
  for (const auto& b : buckets) out.train.push_back(gather(b));
  return out;
}

FeatureSet SyntheticClassification(int n_samples, int d, double separation,
                                   std::uint64_t seed) {
  if (n_samples < 2 || d < 1) {
    throw InvalidArgument("synthetic data needs n_samples >= 2 and d >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  Vector u(d);
  do {
    for (int c = 0; c < d; ++c) u(c) = normal(rng);
  } while (u.norm() == 0.0);
  u.normalize();

  FeatureSet out;
  out.features.resize(n_samples, d);
  out.labels.resize(n_samples);
  for (int n = 0; n < n_samples; ++n) {
    const double y = coin(rng) ? 1.0 : -1.0;
    out.labels(n) = y;
    for (int c = 0; c < d; ++c) {
      out.features(n, c) = y * separation * u(c) + normal(rng);
    }
    const double norm = out.features.row(n).norm();
    if (norm > 1.0) out.features.row(n) /= norm;
  }
  return out;
}

}  // namespace radmm
