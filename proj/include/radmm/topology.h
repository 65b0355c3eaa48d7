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

#ifndef RADMM_TOPOLOGY_H_
#define RADMM_TOPOLOGY_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace radmm {

using Edge = std::pair<int, int>;

// Connected undirected network over dense 0-based node indices. Immutable
// once built. Edges are stored normalized (first < second) and sorted, and
// every neighbor list is ascending so neighbor sums reduce in a fixed order.
class Topology {
 public:
  // Throws InvalidEdge for self-loops, out-of-range or duplicate edges and
  // DisconnectedGraph if some node is unreachable. A single node with no
  // edges is accepted as the trivial connected network.
  static Topology Build(int n_nodes, std::span<const Edge> edges);

  // Random spanning tree followed by an independent Bernoulli trial for each
  // remaining pair. Deterministic in `seed`.
  static Topology RandomConnected(int n_nodes, double edge_probability,
                                  std::uint64_t seed);

  // Edge-list text: one "i j" pair per line, '#' starts a comment. The node
  // count is max index + 1 unless `n_nodes` is positive.
  static Topology FromEdgeListFile(const std::filesystem::path& path,
                                   int n_nodes = 0);

  int num_nodes() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
  int degree(int i) const { return static_cast<int>(neighbors_[i].size()); }
  std::vector<int> degrees() const;

  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  Eigen::MatrixXd DegreeMatrix() const;

 private:
  Topology() = default;

  int n_nodes_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> neighbors_;
  Eigen::MatrixXi adjacency_;
};

struct LaplacianPair {
  Eigen::MatrixXd laplacian;  // D - A
  Eigen::MatrixXd signless;   // D + A
};

LaplacianPair LaplacianMatrices(const Topology& topology);

}  // namespace radmm

#endif  // RADMM_TOPOLOGY_H_
