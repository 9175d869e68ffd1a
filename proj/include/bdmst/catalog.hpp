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

#include <optional>
#include <string>
#include <vector>

#include "bdmst/instances.hpp"

namespace bdmst::catalog {

// All connected 5-vertex test graphs, edges 1-based in table order.
struct GraphEntry {
    std::string label;
    std::string graph6;
    int n = 5;
    std::vector<std::pair<int, int>> edges;

    Graph graph() const { return Graph::from_one_based(n, edges); }
};

struct WeightList {
    std::string label;
    std::vector<int> weights;
};

const std::vector<GraphEntry>& graphs();
const std::vector<WeightList>& weight_lists();

const GraphEntry& find_graph(const std::string& label);
const WeightList& find_weights(const std::string& label);

// Pairs a graph with the first m weights of a list. Label is "<graph>/<weights>".
// Throws std::invalid_argument when the list is shorter than the edge count.
ProblemInstance make_instance(const std::string& graph_label, const std::string& weight_label,
                              int degree_bound, std::optional<int> root = std::nullopt);

// Every graph/weight pairing whose list is long enough and which admits a
// spanning tree of max degree <= degree_bound, in table order.
std::vector<ProblemInstance> all_instances(int degree_bound);

// Fixed 45-instance ensemble for degree bound 2: graphs are visited
// round-robin in table order, each taking the next weight list (table order)
// that is long enough.
std::vector<ProblemInstance> delta2_ensemble(std::size_t size = 45);

}  // namespace bdmst::catalog
