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

#include "radmm/topology.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "radmm/error.h"

namespace radmm {

Topology Topology::Build(int n_nodes, std::span<const Edge> edges) {
  if (n_nodes < 1) {
    throw InvalidEdge("topology needs at least one node");
  }
  Topology t;
  t.n_nodes_ = n_nodes;
  t.adjacency_ = Eigen::MatrixXi::Zero(n_nodes, n_nodes);
  t.neighbors_.assign(n_nodes, {});
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_nodes || b >= n_nodes) {
      throw InvalidEdge("edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ") is out of range");
    }
    if (a == b) {
      throw InvalidEdge("self-loop at node " + std::to_string(a));
    }
    if (t.adjacency_(a, b) != 0) {
      throw InvalidEdge("duplicate edge (" + std::to_string(a) + "," +
                        std::to_string(b) + ")");
    }
    t.adjacency_(a, b) = 1;
    t.adjacency_(b, a) = 1;
    t.edges_.emplace_back(std::min(a, b), std::max(a, b));
    t.neighbors_[a].push_back(b);
    t.neighbors_[b].push_back(a);
  }
  std::sort(t.edges_.begin(), t.edges_.end());
  for (auto& nb : t.neighbors_) std::sort(nb.begin(), nb.end());

  // Breadth-first reachability from node 0.
  std::vector<char> seen(n_nodes, 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int j : t.neighbors_[queue[head]]) {
      if (!seen[j]) {
        seen[j] = 1;
        queue.push_back(j);
      }
    }
  }
  if (static_cast<int>(queue.size()) != n_nodes) {
    auto it = std::find(seen.begin(), seen.end(), 0);
    throw DisconnectedGraph("node " + std::to_string(it - seen.begin()) +
                            " is unreachable from node 0");
  }
  return t;
}

Topology Topology::RandomConnected(int n_nodes, double edge_probability,
                                   std::uint64_t seed) {
  if (n_nodes < 2) {
    throw InvalidEdge("random topology needs at least two nodes");
  }
  if (!(edge_probability >= 0.0 && edge_probability <= 1.0)) {
    throw InvalidEdge("edge probability must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Random spanning tree: attach each node of a random permutation to a
  // uniformly chosen earlier node.
  std::vector<int> order(n_nodes);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n_nodes - 1; i > 0; --i) {
    int j = static_cast<int>(unit(rng) * (i + 1));
    if (j > i) j = i;
    std::swap(order[i], order[j]);
  }
  Eigen::MatrixXi present = Eigen::MatrixXi::Zero(n_nodes, n_nodes);
  std::vector<Edge> edges;
  for (int pos = 1; pos < n_nodes; ++pos) {
    int parent_pos = static_cast<int>(unit(rng) * pos);
    if (parent_pos >= pos) parent_pos = pos - 1;
    int a = order[pos];
    int b = order[parent_pos];
    present(a, b) = present(b, a) = 1;
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  for (int a = 0; a < n_nodes; ++a) {
    for (int b = a + 1; b < n_nodes; ++b) {
      double draw = unit(rng);
      if (!present(a, b) && draw < edge_probability) {
        edges.emplace_back(a, b);
      }
    }
  }
  return Build(n_nodes, edges);
}

Topology Topology::FromEdgeListFile(const std::filesystem::path& path,
                                    int n_nodes) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open edge list " + path.string());
  }
  std::vector<Edge> edges;
  int max_index = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    int a = 0;
    int b = 0;
    if (!(fields >> a)) continue;  // blank or comment-only line
    std::string extra;
    if (!(fields >> b) || (fields >> extra)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) +
                       ": expected two node indices");
    }
    edges.emplace_back(a, b);
    max_index = std::max({max_index, a, b});
  }
  return Build(n_nodes > 0 ? n_nodes : max_index + 1, edges);
}

std::vector<int> Topology::degrees() const {
  std::vector<int> out(n_nodes_);
  for (int i = 0; i < n_nodes_; ++i) out[i] = degree(i);
  return out;
}

Eigen::MatrixXd Topology::DegreeMatrix() const {
  Eigen::VectorXd v(n_nodes_);
  for (int i = 0; i < n_nodes_; ++i) v(i) = degree(i);
  return v.asDiagonal();
}

LaplacianPair LaplacianMatrices(const Topology& topology) {
  Eigen::MatrixXd d = topology.DegreeMatrix();
  Eigen::MatrixXd a = topology.adjacency().cast<double>();
  return {d - a, d + a};
}

}  // namespace radmm
