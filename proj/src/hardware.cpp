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

#include "bdmst/hardware.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace bdmst {

HardwareGraph::HardwareGraph(HardwareFamily family, std::vector<int> params,
                             std::vector<std::pair<int, int>> couplers, std::vector<int> extra_nodes)
    : family_(family), params_(std::move(params)) {
    for (auto& [a, b] : couplers) {
        if (a == b) throw GraphError("hardware coupler on a single qubit");
        if (a > b) std::swap(a, b);
    }
    std::sort(couplers.begin(), couplers.end());
    couplers.erase(std::unique(couplers.begin(), couplers.end()), couplers.end());

    ids_ = std::move(extra_nodes);
    for (auto [a, b] : couplers) {
        ids_.push_back(a);
        ids_.push_back(b);
    }
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
    if (!ids_.empty() && ids_.front() < 0) throw GraphError("negative qubit id");

    index_.assign(ids_.empty() ? 0 : ids_.back() + 1, -1);
    for (int i = 0; i < static_cast<int>(ids_.size()); ++i) index_[ids_[i]] = i;
    std::vector<Edge> edges;
    edges.reserve(couplers.size());
    for (auto [a, b] : couplers) edges.emplace_back(index_[a], index_[b]);
    graph_ = Graph(static_cast<int>(ids_.size()), std::move(edges));
}

std::string HardwareGraph::name() const {
    std::string base = family_ == HardwareFamily::chimera   ? "chimera"
                       : family_ == HardwareFamily::pegasus ? "pegasus"
                                                            : "custom";
    if (family_ == HardwareFamily::custom) return base;
    base += "(";
    for (std::size_t i = 0; i < params_.size(); ++i) base += (i ? "," : "") + std::to_string(params_[i]);
    return base + ")";
}

std::optional<int> HardwareGraph::index(int id) const {
    if (id < 0 || id >= static_cast<int>(index_.size()) || index_[id] < 0) return std::nullopt;
    return index_[id];
}

bool HardwareGraph::has_coupler(int id_a, int id_b) const {
    const auto a = index(id_a);
    const auto b = index(id_b);
    return a && b && graph_.has_edge(*a, *b);
}

std::vector<std::pair<int, int>> HardwareGraph::couplers() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(graph_.num_edges());
    for (const Edge& e : graph_.edges()) out.emplace_back(ids_[e.u], ids_[e.v]);
    std::sort(out.begin(), out.end());
    return out;
}

HardwareGraph chimera_graph(int rows, int cols, int shore) {
    if (cols < 0) cols = rows;
    if (rows < 1 || cols < 1 || shore < 1) throw std::invalid_argument("chimera dimensions must be positive");
    const auto id = [&](int i, int j, int u, int k) { return ((i * cols + j) * 2 + u) * shore + k; };
    std::vector<std::pair<int, int>> couplers;
    std::vector<int> nodes;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            for (int k = 0; k < shore; ++k) {
                nodes.push_back(id(i, j, 0, k));
                nodes.push_back(id(i, j, 1, k));
                for (int kk = 0; kk < shore; ++kk) couplers.emplace_back(id(i, j, 0, k), id(i, j, 1, kk));
                if (i + 1 < rows) couplers.emplace_back(id(i, j, 0, k), id(i + 1, j, 0, k));
                if (j + 1 < cols) couplers.emplace_back(id(i, j, 1, k), id(i, j + 1, 1, k));
            }
    return HardwareGraph(HardwareFamily::chimera, {rows, cols, shore}, std::move(couplers), std::move(nodes));
}

HardwareGraph pegasus_graph(int m) {
    if (m < 2) throw std::invalid_argument("pegasus needs m >= 2");
    constexpr std::array<int, 12> off0 = {2, 2, 2, 2, 10, 10, 10, 10, 6, 6, 6, 6};
    constexpr std::array<int, 12> off1 = {6, 6, 6, 6, 2, 2, 2, 2, 10, 10, 10, 10};
    const int m1 = m - 1;
    const std::array<int, 2> start = {*std::min_element(off1.begin(), off1.end()),
                                      *std::min_element(off0.begin(), off0.end())};
    const std::array<int, 2> end = {12 - *std::max_element(off1.begin(), off1.end()),
                                    12 - *std::max_element(off0.begin(), off0.end())};
    const auto label = [&](int u, int w, int k, int z) { return u * 12 * m * m1 + w * 12 * m1 + k * m1 + z; };
    const auto keep = [&](int u, int w, int k) {
        if (w == 0) return k >= start[u];
        if (w == m1) return k < 12 - end[u];
        return true;
    };

    std::vector<std::pair<int, int>> couplers;
    for (int u = 0; u < 2; ++u)
        for (int w = 0; w < m; ++w) {
            const int k_lo = w == 0 ? start[u] : 0;
            const int k_hi = 12 - (w == m1 ? end[u] : 0);
            for (int k = k_lo; k < k_hi; ++k)
                for (int z = 0; z + 1 < m1; ++z) couplers.emplace_back(label(u, w, k, z), label(u, w, k, z + 1));
            for (int k = k_lo; k < k_hi; k += 2)
                for (int z = 0; z < m1; ++z) couplers.emplace_back(label(u, w, k, z), label(u, w, k + 1, z));
        }
    for (int w = 0; w < m; ++w)
        for (int kk = 0; kk < 12; ++kk) {
            const int k_lo = w ? 0 : off1[kk];
            const int k_hi = w < m1 ? 12 : off1[kk];
            for (int k = k_lo; k < k_hi; ++k)
                for (int z = 0; z < m1; ++z) {
                    const int w2 = z + (kk < off0[k] ? 1 : 0);
                    const int z2 = w - (k < off1[kk] ? 1 : 0);
                    if (keep(0, w, k) && keep(1, w2, kk))
                        couplers.emplace_back(label(0, w, k, z), label(1, w2, kk, z2));
                }
        }
    return HardwareGraph(HardwareFamily::pegasus, {m}, std::move(couplers));
}

HardwareGraph custom_graph(std::vector<std::pair<int, int>> couplers, std::vector<int> nodes) {
    return HardwareGraph(HardwareFamily::custom, {}, std::move(couplers), std::move(nodes));
}

}  // namespace bdmst
