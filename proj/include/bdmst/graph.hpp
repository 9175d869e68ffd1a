// Copyright 2026 The bdmst-anneal Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bdmst {

// Undirected edge between 0-based vertices, stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;

    Edge() = default;
    Edge(int a, int b) : u(a < b ? a : b), v(a < b ? b : a) {}

    bool has(int x) const { return u == x || v == x; }
    int other(int x) const { return x == u ? v : u; }

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Simple undirected graph. Vertex ids are 0-based internally; the
// external (file, CLI, catalog) convention is 1-based and goes through
// from_one_based / one_based_edges.
class Graph {
  public:
    Graph() = default;
    // Throws GraphError on self-loops, duplicate edges or out-of-range ids.
    Graph(int n, std::vector<Edge> edges);

    static Graph from_one_based(int n, const std::vector<std::pair<int, int>>& edges);

    int num_vertices() const { return n_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    std::span<const int> neighbors(int v) const { return adjacency_[v]; }
    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
    int max_degree() const;

    // Position of the edge in edges(), or -1.
    int edge_index(int u, int v) const;
    bool has_edge(int u, int v) const { return edge_index(u, v) >= 0; }

    bool is_connected() const;
    // BFS hop distances; unreachable vertices get -1.
    std::vector<int> distances_from(int source) const;

    std::vector<std::pair<int, int>> one_based_edges() const;

  private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::vector<int>> edge_ids_;  // parallel to adjacency_
};

// Disjoint-set forest with path halving and union by size.
class UnionFind {
  public:
    explicit UnionFind(int n);
    int find(int x);
    // False if already in the same set.
    bool unite(int a, int b);
    int components() const { return components_; }

  private:
    std::vector<int> parent_;
    std::vector<int> size_;
    int components_;
};

}  // namespace bdmst
