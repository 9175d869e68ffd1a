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

#include "bdmst/samplers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

#include "bdmst/random.hpp"

namespace bdmst {

void SaSchedule::check() const {
    if (sweeps < 1) throw std::invalid_argument("SA schedule needs at least one sweep");
    if (!(beta_start > 0.0)) throw std::invalid_argument("SA beta_start must be positive");
    if (beta_end < beta_start) throw std::invalid_argument("SA beta_end must be >= beta_start");
}

double SaSchedule::beta(int sweep) const {
    if (sweeps == 1) return beta_end;
    return beta_start + (beta_end - beta_start) * static_cast<double>(sweep) / static_cast<double>(sweeps - 1);
}

std::uint64_t ReadSet::total_reads() const {
    std::uint64_t total = 0;
    for (const Read& r : reads) total += r.multiplicity;
    return total;
}

std::uint64_t ReadSet::chain_breaks() const {
    std::uint64_t total = 0;
    for (const Read& r : reads)
        if (r.chain_break()) total += r.multiplicity;
    return total;
}

void ReadSet::aggregate() {
    const auto identity = [](const Read& r) { return std::tie(r.gauge, r.status, r.spins, r.broken); };
    std::sort(reads.begin(), reads.end(), [&](const Read& a, const Read& b) {
        if (identity(a) != identity(b)) return identity(a) < identity(b);
        return a.energy < b.energy;
    });
    std::vector<Read> merged;
    for (Read& r : reads) {
        if (!merged.empty() && identity(merged.back()) == identity(r)) {
            merged.back().multiplicity += r.multiplicity;
            continue;
        }
        merged.push_back(std::move(r));
    }
    std::sort(merged.begin(), merged.end(), [](const Read& a, const Read& b) {
        return std::tie(a.gauge, a.status, a.energy, a.spins, a.broken) <
               std::tie(b.gauge, b.status, b.energy, b.spins, b.broken);
    });
    reads = std::move(merged);
}

namespace {

// Adjacency of an Ising model in compressed rows.
struct Csr {
    std::vector<int> start;
    std::vector<int> neighbor;
    std::vector<double> weight;

    explicit Csr(const IsingModel& model) {
        const int n = model.num_spins();
        std::vector<int> degree(n, 0);
        for (const auto& [key, value] : model.j) {
            ++degree[key.first];
            ++degree[key.second];
        }
        start.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) start[i + 1] = start[i] + degree[i];
        neighbor.resize(start[n]);
        weight.resize(start[n]);
        std::vector<int> fill(start.begin(), start.end() - 1);
        for (const auto& [key, value] : model.j) {
            neighbor[fill[key.first]] = key.second;
            weight[fill[key.first]++] = value;
            neighbor[fill[key.second]] = key.first;
            weight[fill[key.second]++] = value;
        }
    }
};

void anneal(const IsingModel& model, const Csr& csr, const SaSchedule& schedule, std::uint64_t seed,
            std::vector<Spin>& spins, std::vector<double>& field) {
    const int n = model.num_spins();
    SplitMix64 rng(seed);
    spins.resize(n);
    std::uint64_t word = 0;
    for (int i = 0; i < n; ++i) {
        if (i % 64 == 0) word = rng();
        spins[i] = (word >> (i % 64)) & 1 ? 1 : -1;
    }
    field.assign(model.h.begin(), model.h.end());
    for (int i = 0; i < n; ++i)
        for (int k = csr.start[i]; k < csr.start[i + 1]; ++k) field[i] += csr.weight[k] * spins[csr.neighbor[k]];

    for (int sweep = 0; sweep < schedule.sweeps; ++sweep) {
        const double beta = schedule.beta(sweep);
        for (int i = 0; i < n; ++i) {
            const double delta = -2.0 * spins[i] * field[i];
            if (delta > 0.0) {
                // exp(-37) is below the 2^-53 resolution of the uniform draw.
                const double x = beta * delta;
                if (x > 37.0) continue;
                // 1 - x <= exp(-x) <= 1 / (1 + x + x^2/2) settles most draws without exp.
                const double u = rng.uniform();
                if (u >= 1.0 - x && (u * (1.0 + x + 0.5 * x * x) >= 1.0 || u >= std::exp(-x))) continue;
            }
            spins[i] = static_cast<Spin>(-spins[i]);
            const double twice = 2.0 * spins[i];
            for (int k = csr.start[i]; k < csr.start[i + 1]; ++k) field[csr.neighbor[k]] += twice * csr.weight[k];
        }
    }
}

}  // namespace

ReadSet SaSampler::sample(const IsingModel& model, std::uint64_t num_reads, std::uint64_t seed) const {
    schedule.check();
    if (model.num_spins() == 0) throw IsingError("cannot sample an empty model");
    const Csr csr(model);
    ReadSet out;
    out.reads.reserve(num_reads);
    std::vector<Spin> spins;
    std::vector<double> field;
    for (std::uint64_t r = 0; r < num_reads; ++r) {
        anneal(model, csr, schedule, derive_seed(seed, r), spins, field);
        Read read;
        read.energy = model.energy(spins);
        read.spins = spins;
        out.reads.push_back(std::move(read));
    }
    out.aggregate();
    out.meta.sampler = "sa";
    out.meta.seed = seed;
    out.meta.num_reads = num_reads;
    out.meta.schedule = schedule;
    return out;
}

ReadSet simulated_annealing(const IsingModel& model, const SaSchedule& schedule, std::uint64_t num_reads,
                            std::uint64_t seed) {
    return SaSampler{schedule}.sample(model, num_reads, seed);
}

std::vector<Spin> mask_to_spins(std::uint64_t mask, int num_spins) {
    std::vector<Spin> spins(num_spins);
    for (int i = 0; i < num_spins; ++i) spins[i] = (mask >> i) & 1 ? 1 : -1;
    return spins;
}

std::uint64_t spins_to_mask(std::span<const Spin> spins) {
    if (spins.size() > 64) throw IsingError("mask holds at most 64 spins");
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < spins.size(); ++i)
        if (spins[i] > 0) mask |= std::uint64_t{1} << i;
    return mask;
}

void for_each_configuration(const IsingModel& model,
                            const std::function<void(std::uint64_t mask, double energy)>& visit) {
    const int n = model.num_spins();
    if (n > kMaxExhaustiveSpins)
        throw IsingError("exhaustive enumeration limited to " + std::to_string(kMaxExhaustiveSpins) + " spins, got " +
                         std::to_string(n));
    const Csr csr(model);
    std::vector<Spin> spins(n, -1);
    std::vector<double> field(model.h.begin(), model.h.end());
    for (int i = 0; i < n; ++i)
        for (int k = csr.start[i]; k < csr.start[i + 1]; ++k) field[i] -= csr.weight[k];
    long double energy = model.energy(spins);
    std::uint64_t mask = 0;
    visit(mask, static_cast<double>(energy));
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t step = 1; step < count; ++step) {
        const int i = std::countr_zero(step);
        energy += -2.0L * spins[i] * field[i];
        spins[i] = static_cast<Spin>(-spins[i]);
        mask ^= std::uint64_t{1} << i;
        const double twice = 2.0 * spins[i];
        for (int k = csr.start[i]; k < csr.start[i + 1]; ++k) field[csr.neighbor[k]] += twice * csr.weight[k];
        visit(mask, static_cast<double>(energy));
    }
}

GroundStates exhaustive_ground(const IsingModel& model, double tolerance) {
    GroundStates out;
    out.energy = std::numeric_limits<double>::infinity();
    const double scale = std::max(1.0, model.max_abs_coefficient() * std::max(1, model.num_spins()));
    const double slack = tolerance * scale;
    for_each_configuration(model, [&](std::uint64_t mask, double energy) {
        if (energy < out.energy - slack) {
            out.energy = energy;
            out.minimizers.clear();
        }
        if (energy <= out.energy + slack) {
            out.minimizers.push_back(mask);
            out.energy = std::min(out.energy, energy);
        }
    });
    std::sort(out.minimizers.begin(), out.minimizers.end());
    return out;
}

Sampler make_sa_sampler(const SaSchedule& schedule) {
    return [schedule](const IsingModel& model, std::uint64_t num_reads, std::uint64_t seed) {
        return SaSampler{schedule}.sample(model, num_reads, seed);
    };
}

ReadSet run_experiment(const EmbeddedIsing& embedded, const Sampler& sampler, const ExperimentOptions& options) {
    if (options.num_gauges < 1) throw std::invalid_argument("run_experiment needs at least one gauge");
    ReadSet out;
    out.meta.seed = options.seed;
    out.meta.num_gauges = options.num_gauges;
    out.meta.j_ferro = embedded.j_ferro;
    for (int g = 0; g < options.num_gauges; ++g) {
        const std::uint64_t gauge_seed = options.random_gauges ? derive_seed(options.seed, g, 0) : 0;
        const Gauge logical = options.random_gauges ? random_gauge(embedded.num_logical(), gauge_seed)
                                                    : identity_gauge(embedded.num_logical());
        const Gauge physical = physical_gauge(embedded, logical);
        const EmbeddedIsing gauged = partial_gauge(embedded, logical);
        ReadSet raw = sampler(gauged.ising, options.reads_per_gauge, derive_seed(options.seed, g, 1));
        if (raw.total_reads() != options.reads_per_gauge)
            throw std::runtime_error("sampler returned " + std::to_string(raw.total_reads()) + " reads, expected " +
                                     std::to_string(options.reads_per_gauge));
        out.meta.sampler = raw.meta.sampler;
        out.meta.schedule = raw.meta.schedule;
        out.meta.gauge_seeds.push_back(gauge_seed);
        for (Read& r : raw.reads) {
            Read read;
            read.energy = r.energy;
            read.multiplicity = r.multiplicity;
            read.gauge = g;
            const auto physical_spins = ungauge(r.spins, physical);
            UnembedResult logical_read = unembed_read(physical_spins, embedded);
            if (logical_read.chain_break()) {
                read.status = ReadStatus::chain_break;
                read.broken = std::move(logical_read.broken);
            } else {
                read.spins = std::move(*logical_read.logical);
            }
            out.reads.push_back(std::move(read));
        }
    }
    out.aggregate();
    out.meta.num_reads = out.total_reads();
    return out;
}

Census low_energy_census(const EmbeddedIsing& embedded, double window, const CensusOptions& options) {
    if (window < 0.0) throw std::invalid_argument("census window must be non-negative");
    Census out;
    if (options.method == CensusMethod::exhaustive) {
        std::vector<std::uint64_t> edge_masks;
        for (const auto& [a, b] : embedded.chain_edges)
            edge_masks.push_back((std::uint64_t{1} << a) | (std::uint64_t{1} << b));
        const auto aligned = [&](std::uint64_t mask) {
            for (std::uint64_t e : edge_masks) {
                const std::uint64_t both = mask & e;
                if (both != 0 && both != e) return false;
            }
            return true;
        };
        out.ground_energy = std::numeric_limits<double>::infinity();
        out.max_energy = -std::numeric_limits<double>::infinity();
        for_each_configuration(embedded.ising, [&](std::uint64_t, double energy) {
            out.ground_energy = std::min(out.ground_energy, energy);
            out.max_energy = std::max(out.max_energy, energy);
        });
        const double cutoff = out.ground_energy + window + 1e-9 * std::max(1.0, std::abs(out.ground_energy));
        for_each_configuration(embedded.ising, [&](std::uint64_t mask, double energy) {
            if (energy > cutoff) return;
            ++out.states;
            if (!aligned(mask)) ++out.broken;
        });
        return out;
    }

    const ReadSet reads = simulated_annealing(embedded.ising, options.schedule, options.num_reads, options.seed);
    out.ground_energy = std::numeric_limits<double>::infinity();
    out.max_energy = -std::numeric_limits<double>::infinity();
    for (const Read& r : reads.reads) {
        out.ground_energy = std::min(out.ground_energy, r.energy);
        out.max_energy = std::max(out.max_energy, r.energy);
    }
    const double cutoff = out.ground_energy + window + 1e-9 * std::max(1.0, std::abs(out.ground_energy));
    for (const Read& r : reads.reads) {
        if (r.energy > cutoff) continue;
        ++out.states;
        if (unembed_read(r.spins, embedded).chain_break()) ++out.broken;
    }
    return out;
}

}  // namespace bdmst
