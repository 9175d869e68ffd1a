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
#include <utility>
#include <vector>

#include "bdmst/graph.hpp"

namespace bdmst {

enum class HardwareFamily { chimera, pegasus, custom };

// Physical qubit graph. Qubits carry hardware ids (possibly sparse, as in
// Pegasus); graph() is the same graph over compact indices 0..N-1 assigned
// in increasing id order.
class HardwareGraph {
  public:
    HardwareGraph() = default;
    HardwareGraph(HardwareFamily family, std::vector<int> params,
                  std::vector<std::pair<int, int>> couplers, std::vector<int> extra_nodes = {});

    HardwareFamily family() const { return family_; }
    const std::vector<int>& params() const { return params_; }
    // "chimera(16,16,4)", "pegasus(6)", "custom".
    std::string name() const;

    int num_nodes() const { return graph_.num_vertices(); }
    int num_edges() const { return graph_.num_edges(); }
    int max_degree() const { return graph_.max_degree(); }
    const Graph& graph() const { return graph_; }

    int id(int index) const { return ids_[index]; }
    const std::vector<int>& ids() const { return ids_; }
    std::optional<int> index(int id) const;
    bool has_coupler(int id_a, int id_b) const;
    // Couplers as sorted id pairs.
    std::vector<std::pair<int, int>> couplers() const;

  private:
    HardwareFamily family_ = HardwareFamily::custom;
    std::vector<int> params_;
    std::vector<int> ids_;
    std::vector<int> index_;  // id -> compact index or -1
    Graph graph_;
};

// Qubit (i, j, u, k) gets id ((i * N + j) * 2 + u) * L + k; u = 0 is the
// vertical half of the cell.
HardwareGraph chimera_graph(int rows, int cols = -1, int shore = 4);

// Standard Pegasus P(m), fabric-only, with the usual offsets and linear
// labels u * 12m(m-1) + w * 12(m-1) + k(m-1) + z.
HardwareGraph pegasus_graph(int m);

HardwareGraph custom_graph(std::vector<std::pair<int, int>> couplers, std::vector<int> nodes = {});

}  // namespace bdmst
