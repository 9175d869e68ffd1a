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

#include "bdmst/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace bdmst {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw GraphError("negative vertex count");
    adjacency_.assign(n, {});
    edge_ids_.assign(n, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.u < 0 || e.v >= n)
            throw GraphError("edge (" + std::to_string(e.u + 1) + "," + std::to_string(e.v + 1) +
                             ") references a vertex outside 1.." + std::to_string(n));
        if (e.u == e.v) throw GraphError("self-loop on vertex " + std::to_string(e.u + 1));
        if (edge_index(e.u, e.v) >= 0)
            throw GraphError("duplicate edge (" + std::to_string(e.u + 1) + "," +
                             std::to_string(e.v + 1) + ")");
        adjacency_[e.u].push_back(e.v);
        adjacency_[e.v].push_back(e.u);
        edge_ids_[e.u].push_back(static_cast<int>(i));
        edge_ids_[e.v].push_back(static_cast<int>(i));
    }
}

Graph Graph::from_one_based(int n, const std::vector<std::pair<int, int>>& edges) {
    std::vector<Edge> converted;
    converted.reserve(edges.size());
    for (auto [a, b] : edges) converted.emplace_back(a - 1, b - 1);
    return Graph(n, std::move(converted));
}

int Graph::max_degree() const {
    int best = 0;
    for (int v = 0; v < n_; ++v) best = std::max(best, degree(v));
    return best;
}

int Graph::edge_index(int u, int v) const {
    if (u < 0 || u >= n_ || v < 0 || v >= n_) return -1;
    const auto& adj = adjacency_[u];
    for (std::size_t k = 0; k < adj.size(); ++k)
        if (adj[k] == v) return edge_ids_[u][k];
    return -1;
}

bool Graph::is_connected() const {
    if (n_ == 0) return true;
    const auto dist = distances_from(0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

std::vector<int> Graph::distances_from(int source) const {
    std::vector<int> dist(n_, -1);
    std::deque<int> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int w : adjacency_[u]) {
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

std::vector<std::pair<int, int>> Graph::one_based_edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges_.size());
    for (const Edge& e : edges_) out.emplace_back(e.u + 1, e.v + 1);
    return out;
}

UnionFind::UnionFind(int n) : parent_(n), size_(n, 1), components_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
}

int UnionFind::find(int x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool UnionFind::unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
}

}  // namespace bdmst
