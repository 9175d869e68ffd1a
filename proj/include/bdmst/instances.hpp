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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bdmst/graph.hpp"

namespace bdmst {

// Weighted graph plus degree bound and tree root: one BD-MST problem.
struct ProblemInstance {
    std::string label;
    Graph graph;
    std::vector<int> weights;  // aligned with graph.edges()
    int degree_bound = 2;
    int root = 0;  // 0-based

    int weight(int u, int v) const;
    int max_weight() const;
    // Throws GraphError when the instance breaks a structural invariant
    // (disconnected, weight count mismatch, non-positive weight, bad root, delta < 2).
    void check() const;
};

// Highest-degree vertex, smallest id on ties.
int default_root(const Graph& graph);

struct SpanningTree {
    std::vector<Edge> edges;  // sorted
    std::int64_t cost = 0;
};

enum class TreeDefect { none, not_subgraph, wrong_size, cyclic, disconnected, degree_violation };

std::string_view to_string(TreeDefect defect);

struct TreeVerdict {
    TreeDefect defect = TreeDefect::none;
    std::string detail;

    bool valid() const { return defect == TreeDefect::none; }
    explicit operator bool() const { return valid(); }
};

TreeVerdict validate_tree(const Graph& graph, std::span<const Edge> edges, int degree_bound);

std::int64_t tree_cost(const ProblemInstance& instance, std::span<const Edge> edges);

// Exact oracles guard against combinatorial blowup.
inline constexpr int kMaxExactVertices = 10;

// Calls visit once per spanning tree (edge lists sorted ascending).
// Throws std::invalid_argument past kMaxExactVertices.
void enumerate_spanning_trees(const Graph& graph,
                              const std::function<void(std::span<const Edge>)>& visit);

std::uint64_t count_spanning_trees(const Graph& graph);

struct ExactSolution {
    bool feasible = false;
    SpanningTree tree;  // meaningful only when feasible
};

// Minimum-cost spanning tree with max degree <= degree_bound. Ties go to
// the lexicographically smallest sorted edge list.
ExactSolution solve_bdmst_exact(const ProblemInstance& instance);

// Unconstrained minimum spanning tree.
SpanningTree kruskal_mst(const Graph& graph, std::span<const int> weights);

}  // namespace bdmst
