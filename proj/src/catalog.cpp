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

#include "bdmst/catalog.hpp"

#include <algorithm>
#include <stdexcept>

namespace bdmst::catalog {

const std::vector<GraphEntry>& graphs() {
    static const std::vector<GraphEntry> table = {
        {"m4ver1", "DhC", 5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}}},
        {"m5ver1", "Dhc", 5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}}},
        {"m5ver2", "DiK", 5, {{1, 2}, {2, 3}, {2, 5}, {3, 4}, {4, 5}}},
        {"m5ver3", "DjC", 5, {{1, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 5}}},
        {"m5ver5", "DiS", 5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {4, 5}}},
        {"m5ver6", "DKs", 5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {3, 5}}},
        {"m6ver1", "DyK", 5, {{1, 2}, {1, 5}, {2, 5}, {2, 3}, {3, 4}, {4, 5}}},
        {"m6ver2", "DjS", 5, {{1, 2}, {2, 3}, {2, 4}, {2, 5}, {3, 4}, {4, 5}}},
        {"m6ver3", "DjK", 5, {{1, 2}, {2, 3}, {2, 5}, {3, 5}, {3, 4}, {4, 5}}},
        {"m6ver4", "D{K", 5, {{1, 2}, {1, 5}, {1, 3}, {2, 3}, {3, 4}, {4, 5}}},
        {"m6ver5", "D{c", 5, {{1, 2}, {1, 3}, {2, 3}, {3, 5}, {3, 4}, {4, 5}}},
        {"m6ver6", "D]o", 5, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {2, 5}, {4, 5}}},
        {"m7ver1", "D|S", 5, {{1, 2}, {1, 5}, {1, 4}, {2, 5}, {2, 3}, {3, 4}, {4, 5}}},
        {"m7ver2", "DzW", 5, {{1, 2}, {1, 5}, {2, 5}, {2, 3}, {2, 4}, {3, 5}, {4, 5}}},
        {"m7ver3", "D|c", 5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {3, 4}, {4, 5}}},
        {"m7ver4", "D~C", 5, {{1, 2}, {1, 3}, {1, 4}, {2, 4}, {2, 3}, {3, 4}, {4, 5}}},
        {"m7ver5", "D]w", 5, {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {4, 5}, {2, 5}, {3, 5}}},
        {"m7ver6", "Dh{", 5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}, {2, 3}, {3, 4}, {4, 5}}},
        {"m8ver1", "D}k", 5, {{1, 2}, {1, 5}, {1, 3}, {1, 4}, {2, 5}, {2, 3}, {3, 4}, {4, 5}}},
        {"m8ver2", "Dz[", 5, {{1, 2}, {1, 5}, {2, 5}, {2, 3}, {2, 4}, {3, 4}, {3, 5}, {4, 5}}},
        {"m9ver1", "D~k", 5,
         {{1, 2}, {2, 3}, {4, 5}, {1, 5}, {1, 4}, {1, 3}, {2, 5}, {2, 4}, {3, 5}}},
        {"m10ver1", "D~{", 5,
         {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {1, 5}, {1, 4}, {1, 3}, {2, 5}, {2, 4}, {3, 5}}},
    };
    return table;
}

const std::vector<WeightList>& weight_lists() {
    static const std::vector<WeightList> table = {
        {"w2", {1, 2, 1, 2, 1, 2, 1, 2, 1, 2}},
        {"w3", {1, 1, 2, 1, 1, 2, 1, 1, 2, 1}},
        {"w4", {1, 1, 2, 2, 1, 1, 2, 2, 1, 1}},
        {"w5", {1, 4, 1, 4, 1, 4, 1, 4, 1, 4}},
        {"w6", {1, 3, 6, 1, 3, 6, 1, 3, 6, 1}},
        {"w7", {1, 7, 1, 7, 1, 7, 1, 7, 1, 7}},
        {"w8", {3, 2, 1, 3, 2, 1, 3, 2, 1, 3}},
        {"w9", {4, 3, 2, 1, 4, 3, 2, 1, 4, 3}},
        {"w10", {5, 4, 3, 2, 1, 5, 4, 3, 2, 1}},
        {"w11", {6, 5, 4, 3, 2, 1, 6, 5, 4, 3}},
        {"w12", {7, 6, 5, 4, 3, 2, 1, 7, 6, 5}},
        {"w13", {1, 1, 3, 4, 2, 1, 2, 3, 4, 2}},
        {"w14", {3, 2, 1, 1, 1, 1, 2, 4, 2, 2}},
        {"w15", {2, 1, 2, 1, 4, 1, 1, 3, 3, 2}},
        {"w16", {4, 3, 3, 4, 3, 3, 4, 3, 4}},
        {"w17", {3, 4, 7, 5, 5, 5, 5}},
        {"w18", {2, 1, 4, 1, 2, 1, 2}},
        {"w19", {4, 6, 4, 7, 4, 7}},
        {"w20", {1, 1, 2, 3, 2, 3}},
        {"w21", {4, 5, 4, 5, 5}},
        {"w22", {2, 2, 6, 2, 4}},
        {"w23", {3, 3, 5, 2, 3, 2, 5, 2, 5}},
        {"w24", {4, 3, 2, 2}},
        {"w25", {2, 2, 6, 2, 4}},
        {"w26", {4, 3, 3, 3}},
        {"w27", {3, 4, 7, 5, 5, 5, 5}},
        {"w28", {4, 6, 4, 7, 4, 7}},
        {"w29", {6, 4, 2, 2}},
    };
    return table;
}

const GraphEntry& find_graph(const std::string& label) {
    for (const auto& g : graphs())
        if (g.label == label) return g;
    throw std::invalid_argument("unknown catalog graph '" + label + "'");
}

const WeightList& find_weights(const std::string& label) {
    for (const auto& w : weight_lists())
        if (w.label == label) return w;
    throw std::invalid_argument("unknown weight list '" + label + "'");
}

ProblemInstance make_instance(const std::string& graph_label, const std::string& weight_label,
                              int degree_bound, std::optional<int> root) {
    const GraphEntry& entry = find_graph(graph_label);
    const WeightList& list = find_weights(weight_label);
    if (list.weights.size() < entry.edges.size())
        throw std::invalid_argument(weight_label + " has " + std::to_string(list.weights.size()) +
                                    " weights, " + graph_label + " needs " +
                                    std::to_string(entry.edges.size()));
    ProblemInstance inst;
    inst.label = graph_label + "/" + weight_label;
    inst.graph = entry.graph();
    inst.weights.assign(list.weights.begin(), list.weights.begin() + entry.edges.size());
    inst.degree_bound = degree_bound;
    inst.root = root.value_or(default_root(inst.graph));
    inst.check();
    return inst;
}

namespace {

bool admits_bounded_tree(const Graph& graph, int degree_bound) {
    bool found = false;
    std::vector<int> degree(graph.num_vertices());
    enumerate_spanning_trees(graph, [&](std::span<const Edge> edges) {
        if (found) return;
        std::fill(degree.begin(), degree.end(), 0);
        for (const Edge& e : edges) {
            ++degree[e.u];
            ++degree[e.v];
        }
        found = *std::max_element(degree.begin(), degree.end()) <= degree_bound;
    });
    return found;
}

}  // namespace

std::vector<ProblemInstance> all_instances(int degree_bound) {
    std::vector<ProblemInstance> out;
    for (const auto& g : graphs()) {
        if (!admits_bounded_tree(g.graph(), degree_bound)) continue;
        for (const auto& w : weight_lists())
            if (w.weights.size() >= g.edges.size())
                out.push_back(make_instance(g.label, w.label, degree_bound));
    }
    return out;
}

std::vector<ProblemInstance> delta2_ensemble(std::size_t size) {
    std::vector<const GraphEntry*> feasible;
    for (const auto& g : graphs())
        if (admits_bounded_tree(g.graph(), 2)) feasible.push_back(&g);
    std::vector<std::size_t> cursor(feasible.size(), 0);
    const auto& lists = weight_lists();
    std::vector<ProblemInstance> out;
    for (std::size_t round = 0; out.size() < size; ++round) {
        bool progressed = false;
        for (std::size_t gi = 0; gi < feasible.size() && out.size() < size; ++gi) {
            std::size_t& c = cursor[gi];
            while (c < lists.size() && lists[c].weights.size() < feasible[gi]->edges.size()) ++c;
            if (c >= lists.size()) continue;
            out.push_back(make_instance(feasible[gi]->label, lists[c].label, 2));
            ++c;
            progressed = true;
        }
        if (!progressed) break;
    }
    return out;
}

}  // namespace bdmst::catalog
