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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bdmst/graph.hpp"
#include "bdmst/hardware.hpp"
#include "bdmst/ising.hpp"

namespace bdmst {

// Vertex models: chains[i] holds the hardware ids representing logical i.
struct Embedding {
    std::vector<std::vector<int>> chains;

    int num_logical() const { return static_cast<int>(chains.size()); }
    int physical_count() const;
    void normalize();  // sorts every chain

    friend bool operator==(const Embedding&, const Embedding&) = default;
};

struct EmbeddingVerdict {
    bool valid = false;
    std::string reason;  // empty when valid

    explicit operator bool() const { return valid; }
};

EmbeddingVerdict validate_embedding(const Embedding& embedding, const Graph& logical,
                                    const HardwareGraph& hardware);

struct FindEmbeddingOptions {
    int attempts = 30;
    std::uint64_t seed = 0;
    // Overlap-resolution rounds per attempt before giving up.
    int max_rounds = 48;
    // Shrinking rounds once an attempt is overlap-free.
    int tighten_rounds = 4;
    // A qubit shared by k chains weighs penalty^k; penalty grows per round.
    double penalty = 2.0;
    double penalty_growth = 1.2;
    // Rounds without fewer shared qubits before the congested region is ripped up.
    int patience = 8;
};

struct FindEmbeddingResult {
    std::optional<Embedding> best;
    // Physical count per attempt, 0 where the attempt failed.
    std::vector<int> attempt_sizes;
    int best_attempt = -1;
};

// Randomized chain growth with weighted shortest paths and rip-up retries.
// Returns the smallest valid embedding over all attempts, deterministic in
// the seed. An empty result means no attempt succeeded.
FindEmbeddingResult find_embedding(const Graph& logical, const HardwareGraph& hardware,
                                   const FindEmbeddingOptions& options = {});

// Logical graph of an Ising model: one edge per nonzero coupling.
Graph interaction_graph(const IsingModel& model);

enum class ChainTopology { spanning_tree, all_internal };

struct EmbedOptions {
    ChainTopology topology = ChainTopology::spanning_tree;
    // Enforce |h|, |J| <= 1 and 0 < j_ferro <= 2. Small qsim toys switch
    // this off to explore larger chain strengths.
    bool enforce_hardware_range = true;
};

// Ising model over the physical qubits of an embedding, indexed compactly:
// physical index p is hardware qubit qubits[p].
struct EmbeddedIsing {
    IsingModel ising;
    std::vector<int> qubits;
    std::vector<std::vector<int>> chains;  // logical -> physical indices
    std::vector<int> owner;                // physical index -> logical
    std::vector<std::pair<int, int>> chain_edges;  // physical index pairs, first < second
    double j_ferro = 0.0;

    int num_physical() const { return static_cast<int>(qubits.size()); }
    int num_logical() const { return static_cast<int>(chains.size()); }
    Embedding embedding() const;
    // Energy carried by aligned chains: -j_ferro * #chain_edges.
    double chain_offset() const { return -j_ferro * static_cast<double>(chain_edges.size()); }
};

class EmbeddingError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

EmbeddedIsing embed_ising(const IsingModel& logical, const Embedding& embedding, const HardwareGraph& hardware,
                          double j_ferro, const EmbedOptions& options = {});

// Copies each logical spin onto its whole vertex model.
std::vector<Spin> embed_spins(std::span<const Spin> logical, const EmbeddedIsing& embedded);

struct UnembedResult {
    std::optional<std::vector<Spin>> logical;  // empty on a chain break
    std::vector<int> broken;                   // logical variables whose chains disagree

    bool chain_break() const { return !logical.has_value(); }
};

// Discard policy: any disagreeing chain makes the whole read a chain break.
UnembedResult unembed_read(std::span<const Spin> physical, const EmbeddedIsing& embedded);

struct EmbeddingStats {
    int logical_count = 0;
    int physical_count = 0;
    std::vector<int> sizes;  // per logical variable
    double median_size = 0.0;
    int max_size = 0;
};

EmbeddingStats embedding_stats(const Embedding& embedding);

// Gauge of the physical qubits induced by a logical gauge.
Gauge physical_gauge(const EmbeddedIsing& embedded, const Gauge& logical_gauge);
// Gauges every qubit of vertex model i by a_i. Chain couplings keep their
// value because both endpoints carry the same sign.
EmbeddedIsing partial_gauge(const EmbeddedIsing& embedded, const Gauge& logical_gauge);

}  // namespace bdmst
