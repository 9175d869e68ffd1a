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

#include "bdmst/instances.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace bdmst {

int ProblemInstance::weight(int u, int v) const {
    const int idx = graph.edge_index(u, v);
    if (idx < 0) throw GraphError("no edge (" + std::to_string(u + 1) + "," + std::to_string(v + 1) + ")");
    return weights[idx];
}

int ProblemInstance::max_weight() const {
    return weights.empty() ? 0 : *std::max_element(weights.begin(), weights.end());
}

void ProblemInstance::check() const {
    if (static_cast<int>(weights.size()) != graph.num_edges())
        throw GraphError(label + ": " + std::to_string(weights.size()) + " weights for " +
                         std::to_string(graph.num_edges()) + " edges");
    for (int w : weights)
        if (w <= 0) throw GraphError(label + ": edge weights must be positive");
    if (degree_bound < 2) throw GraphError(label + ": degree bound must be at least 2");
    if (root < 0 || root >= graph.num_vertices())
        throw GraphError(label + ": root " + std::to_string(root + 1) + " is not a vertex");
    if (!graph.is_connected()) throw GraphError(label + ": graph is not connected");
}

int default_root(const Graph& graph) {
    int best = 0;
    for (int v = 1; v < graph.num_vertices(); ++v)
        if (graph.degree(v) > graph.degree(best)) best = v;
    return best;
}

std::string_view to_string(TreeDefect defect) {
    switch (defect) {
        case TreeDefect::none: return "valid";
        case TreeDefect::not_subgraph: return "not-subgraph";
        case TreeDefect::wrong_size: return "wrong-size";
        case TreeDefect::cyclic: return "cyclic";
        case TreeDefect::disconnected: return "disconnected";
        case TreeDefect::degree_violation: return "degree-violation";
    }
    return "unknown";
}

TreeVerdict validate_tree(const Graph& graph, std::span<const Edge> edges, int degree_bound) {
    const int n = graph.num_vertices();
    std::vector<int> degree(n, 0);
    for (const Edge& e : edges) {
        if (!graph.has_edge(e.u, e.v))
            return {TreeDefect::not_subgraph,
                    "edge (" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) + ") not in graph"};
        ++degree[e.u];
        ++degree[e.v];
    }
    UnionFind uf(n);
    for (const Edge& e : edges)
        if (!uf.unite(e.u, e.v))
            return {TreeDefect::cyclic,
                    "edge (" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) + ") closes a cycle"};
    if (uf.components() != 1)
        return {TreeDefect::disconnected, std::to_string(uf.components()) + " components"};
    if (static_cast<int>(edges.size()) != n - 1)
        return {TreeDefect::wrong_size, std::to_string(edges.size()) + " edges"};
    for (int v = 0; v < n; ++v)
        if (degree[v] > degree_bound)
            return {TreeDefect::degree_violation,
                    "vertex " + std::to_string(v + 1) + " has degree " + std::to_string(degree[v])};
    return {};
}

std::int64_t tree_cost(const ProblemInstance& instance, std::span<const Edge> edges) {
    std::int64_t cost = 0;
    for (const Edge& e : edges) cost += instance.weight(e.u, e.v);
    return cost;
}

namespace {

class TreeEnumerator {
  public:
    TreeEnumerator(const Graph& graph, const std::function<void(std::span<const Edge>)>& visit)
        : n_(graph.num_vertices()), visit_(visit), sorted_(graph.edges()) {
        std::sort(sorted_.begin(), sorted_.end());
    }

    void run() {
        if (n_ <= 1) {
            visit_({});
            return;
        }
        chosen_.clear();
        recurse(0);
    }

  private:
    // True if chosen_ together with sorted_[from..] still spans every vertex.
    bool still_connectable(std::size_t from) const {
        UnionFind uf(n_);
        for (const Edge& e : chosen_) uf.unite(e.u, e.v);
        for (std::size_t i = from; i < sorted_.size(); ++i) uf.unite(sorted_[i].u, sorted_[i].v);
        return uf.components() == 1;
    }

    bool acyclic_with(const Edge& candidate) const {
        UnionFind uf(n_);
        for (const Edge& e : chosen_) uf.unite(e.u, e.v);
        return uf.find(candidate.u) != uf.find(candidate.v);
    }

    void recurse(std::size_t i) {
        const std::size_t need = static_cast<std::size_t>(n_ - 1);
        if (chosen_.size() == need) {
            visit_(chosen_);
            return;
        }
        if (i >= sorted_.size() || sorted_.size() - i < need - chosen_.size()) return;
        if (acyclic_with(sorted_[i])) {
            chosen_.push_back(sorted_[i]);
            recurse(i + 1);
            chosen_.pop_back();
        }
        if (still_connectable(i + 1)) recurse(i + 1);
    }

    int n_;
    const std::function<void(std::span<const Edge>)>& visit_;
    std::vector<Edge> sorted_;
    std::vector<Edge> chosen_;
};

}  // namespace

void enumerate_spanning_trees(const Graph& graph,
                              const std::function<void(std::span<const Edge>)>& visit) {
    if (graph.num_vertices() > kMaxExactVertices)
        throw std::invalid_argument("spanning tree enumeration limited to " +
                                    std::to_string(kMaxExactVertices) + " vertices");
    if (!graph.is_connected()) return;
    TreeEnumerator(graph, visit).run();
}

std::uint64_t count_spanning_trees(const Graph& graph) {
    std::uint64_t count = 0;
    enumerate_spanning_trees(graph, [&](std::span<const Edge>) { ++count; });
    return count;
}

ExactSolution solve_bdmst_exact(const ProblemInstance& instance) {
    ExactSolution best;
    const int n = instance.graph.num_vertices();
    std::vector<int> degree(n);
    enumerate_spanning_trees(instance.graph, [&](std::span<const Edge> edges) {
        std::fill(degree.begin(), degree.end(), 0);
        for (const Edge& e : edges) {
            ++degree[e.u];
            ++degree[e.v];
        }
        if (*std::max_element(degree.begin(), degree.end()) > instance.degree_bound) return;
        const std::int64_t cost = tree_cost(instance, edges);
        const bool better =
            !best.feasible || cost < best.tree.cost ||
            (cost == best.tree.cost &&
             std::lexicographical_compare(edges.begin(), edges.end(), best.tree.edges.begin(),
                                          best.tree.edges.end()));
        if (better) {
            best.feasible = true;
            best.tree.cost = cost;
            best.tree.edges.assign(edges.begin(), edges.end());
        }
    });
    return best;
}

SpanningTree kruskal_mst(const Graph& graph, std::span<const int> weights) {
    std::vector<int> order(graph.num_edges());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (weights[a] != weights[b]) return weights[a] < weights[b];
        return graph.edges()[a] < graph.edges()[b];
    });
    UnionFind uf(graph.num_vertices());
    SpanningTree tree;
    for (int idx : order) {
        const Edge& e = graph.edges()[idx];
        if (uf.unite(e.u, e.v)) {
            tree.edges.push_back(e);
            tree.cost += weights[idx];
        }
    }
    std::sort(tree.edges.begin(), tree.edges.end());
    return tree;
}

}  // namespace bdmst
