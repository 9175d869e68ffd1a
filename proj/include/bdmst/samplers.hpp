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
#include <span>
#include <string>
#include <vector>

#include "bdmst/embedding.hpp"
#include "bdmst/ising.hpp"

namespace bdmst {

struct SaSchedule {
    int sweeps = 1000;
    double beta_start = 0.1;
    double beta_end = 10.0;

    // Throws std::invalid_argument unless sweeps >= 1 and beta_end >= beta_start > 0.
    void check() const;
    double beta(int sweep) const;
};

enum class ReadStatus : std::uint8_t { sampled, chain_break };

struct Read {
    // Physical spins for raw samples, logical spins after unembedding;
    // empty for chain breaks.
    std::vector<Spin> spins;
    // Energy of the model the read was sampled from, in the original frame.
    // Merged chain breaks keep the lowest energy.
    double energy = 0.0;
    std::uint64_t multiplicity = 1;
    int gauge = -1;
    ReadStatus status = ReadStatus::sampled;
    std::vector<int> broken;  // chain-broken logical variables

    bool chain_break() const { return status == ReadStatus::chain_break; }
};

struct ReadSetMeta {
    std::string label;
    std::string sampler;
    std::uint64_t seed = 0;
    std::uint64_t num_reads = 0;
    int num_gauges = 0;
    std::vector<std::uint64_t> gauge_seeds;  // 0 for identity gauges
    SaSchedule schedule;
    double j_ferro = 0.0;
};

struct ReadSet {
    std::vector<Read> reads;
    ReadSetMeta meta;

    std::uint64_t total_reads() const;
    std::uint64_t chain_breaks() const;
    // Merges reads with identical (gauge, status, spins, broken), then sorts
    // by the key (gauge, energy, spins).
    void aggregate();
};

struct SaSampler {
    SaSchedule schedule;

    // Independent restarts from random spins; read r uses the stream
    // derive_seed(seed, r), so results do not depend on read order.
    ReadSet sample(const IsingModel& model, std::uint64_t num_reads, std::uint64_t seed) const;
};

ReadSet simulated_annealing(const IsingModel& model, const SaSchedule& schedule, std::uint64_t num_reads,
                            std::uint64_t seed);

inline constexpr int kMaxExhaustiveSpins = 24;

struct GroundStates {
    double energy = 0.0;
    std::vector<std::uint64_t> minimizers;  // bit i set means spin i = +1
};

std::vector<Spin> mask_to_spins(std::uint64_t mask, int num_spins);
std::uint64_t spins_to_mask(std::span<const Spin> spins);

// Gray-code walk over all 2^n configurations with incremental energies.
// Throws IsingError above kMaxExhaustiveSpins.
void for_each_configuration(const IsingModel& model,
                            const std::function<void(std::uint64_t mask, double energy)>& visit);

GroundStates exhaustive_ground(const IsingModel& model, double tolerance = 1e-9);

using Sampler = std::function<ReadSet(const IsingModel&, std::uint64_t num_reads, std::uint64_t seed)>;

Sampler make_sa_sampler(const SaSchedule& schedule);

struct ExperimentOptions {
    int num_gauges = 100;
    std::uint64_t reads_per_gauge = 500;
    std::uint64_t seed = 0;
    bool random_gauges = true;
};

// Per gauge g: gauge seed derive_seed(seed, g, 0), sampler seed
// derive_seed(seed, g, 1). Reads come back ungauged and unembedded.
ReadSet run_experiment(const EmbeddedIsing& embedded, const Sampler& sampler, const ExperimentOptions& options);

enum class CensusMethod { exhaustive, sampled };

struct CensusOptions {
    CensusMethod method = CensusMethod::exhaustive;
    SaSchedule schedule{};
    std::uint64_t num_reads = 1000;
    std::uint64_t seed = 0;
};

struct Census {
    double ground_energy = 0.0;
    double max_energy = 0.0;  // highest energy seen
    std::uint64_t states = 0;  // distinct configurations within the window
    std::uint64_t broken = 0;

    double fraction() const { return states == 0 ? 0.0 : static_cast<double>(broken) / static_cast<double>(states); }
};

// Distinct physical configurations with energy <= ground + window, and how
// many of them break a chain. The sampled method measures from the lowest
// energy found.
Census low_energy_census(const EmbeddedIsing& embedded, double window, const CensusOptions& options = {});

}  // namespace bdmst
