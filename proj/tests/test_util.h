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

#ifndef RADMM_TESTS_TEST_UTIL_H_
#define RADMM_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "radmm/objective.h"
#include "radmm/topology.h"

namespace radmm::testing {

// Cyclic Jacobi rotations on a plain row-major copy. Deliberately written
// without Eigen's solvers so it can serve as a cross-check.
inline std::vector<double> JacobiEigenvalues(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  std::vector<double> a(n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) a[r * n + c] = 0.5 * (m(r, c) + m(c, r));
  }
  auto at = [&](int r, int c) -> double& { return a[r * n + c]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
    }
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

inline double MinSymEigen(const Matrix& m) { return JacobiEigenvalues(m)[0]; }

// Rows uniform in the unit ball direction-wise with norm <= 1, labels +-1.
inline Dataset RandomDataset(int b, int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Dataset data{Matrix(b, d), Vector(b)};
  for (int r = 0; r < b; ++r) {
    Vector x(d);
    for (int c = 0; c < d; ++c) x(c) = normal(rng);
    data.features.row(r) = (unit(rng) / std::max(x.norm(), 1e-12)) * x;
    data.labels(r) = unit(rng) < 0.5 ? -1.0 : 1.0;
  }
  return data;
}

inline Vector RandomVector(int d, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(d);
  for (int c = 0; c < d; ++c) v(c) = u(rng);
  return v;
}

inline Topology Path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Topology::Build(n, edges);
}

inline Topology Cycle(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Topology::Build(n, edges);
}

inline Topology Complete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return Topology::Build(n, edges);
}

// 2-coloring by BFS; false when an odd cycle exists.
inline bool IsBipartite(const Topology& t) {
  std::vector<int> color(t.num_nodes(), -1);
  std::vector<int> queue{0};
  color[0] = 0;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    const int u = queue[h];
    for (int v : t.neighbors(u)) {
      if (color[v] < 0) {
        color[v] = 1 - color[u];
        queue.push_back(v);
      } else if (color[v] == color[u]) {
        return false;
      }
    }
  }
  return true;
}

inline std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("radmm_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace radmm::testing

#endif  // RADMM_TESTS_TEST_UTIL_H_
