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

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "bdmst/catalog.hpp"
#include "bdmst/random.hpp"
#include "bdmst/samplers.hpp"
#include "doctest.h"

using namespace bdmst;

namespace {

IsingModel random_model(std::mt19937_64& rng, int n, double density) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    std::bernoulli_distribution keep(density);
    IsingModel m(n);
    for (auto& h : m.h) h = c(rng);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (keep(rng)) m.add_coupling(a, b, c(rng));
    return m;
}

IsingModel triangle(double j) {
    IsingModel m(3);
    m.add_coupling(0, 1, j);
    m.add_coupling(1, 2, j);
    m.add_coupling(0, 2, j);
    return m;
}

// Exact Gibbs distribution over masks.
std::vector<double> gibbs(const IsingModel& m, double beta) {
    const int n = m.num_spins();
    std::vector<double> p(std::size_t{1} << n);
    double z = 0.0;
    for (std::uint64_t mask = 0; mask < p.size(); ++mask) {
        p[mask] = std::exp(-beta * m.energy(mask_to_spins(mask, n)));
        z += p[mask];
    }
    for (double& x : p) x /= z;
    return p;
}

}  // namespace

TEST_CASE("sa schedule") {
    SaSchedule s;
    CHECK(s.sweeps == 1000);
    CHECK(s.beta(0) == 0.1);
    CHECK(s.beta(999) == 10.0);
    CHECK(SaSchedule{1, 2.0, 3.0}.beta(0) == 3.0);
    CHECK_THROWS_AS((SaSchedule{0, 0.1, 1.0}.check()), std::invalid_argument);
    CHECK_THROWS_AS((SaSchedule{10, 0.0, 1.0}.check()), std::invalid_argument);
    CHECK_THROWS_AS((SaSchedule{10, 2.0, 1.0}.check()), std::invalid_argument);
}

TEST_CASE("simulated annealing on tiny models") {
    IsingModel one(1);
    one.h[0] = -1.0;
    const auto r1 = simulated_annealing(one, {}, 50, 1);
    REQUIRE(r1.reads.size() == 1);
    CHECK(r1.reads[0].spins == std::vector<Spin>{1});
    CHECK(r1.reads[0].energy == -1.0);
    CHECK(r1.reads[0].multiplicity == 50);
    CHECK(r1.total_reads() == 50);

    IsingModel ferro(2);
    ferro.add_coupling(0, 1, -1.0);
    const auto r2 = simulated_annealing(ferro, {100, 0.1, 8.0}, 2000, 2);
    std::uint64_t aligned = 0;
    for (const Read& r : r2.reads)
        if (r.spins[0] == r.spins[1]) aligned += r.multiplicity;
    // Exact Gibbs weight of the aligned pair at beta_end.
    const auto p = gibbs(ferro, 8.0);
    CHECK(p[0] + p[3] > 0.99);
    CHECK(static_cast<double>(aligned) / 2000.0 >= 0.99);
    CHECK_THROWS_AS(simulated_annealing(IsingModel(0), {}, 1, 0), IsingError);
}

TEST_CASE("simulated annealing is deterministic in the seed") {
    std::mt19937_64 rng(5);
    const auto m = random_model(rng, 16, 0.4);
    const auto a = simulated_annealing(m, {50, 0.1, 3.0}, 300, 9);
    const auto b = simulated_annealing(m, {50, 0.1, 3.0}, 300, 9);
    const auto c = simulated_annealing(m, {50, 0.1, 3.0}, 300, 10);
    REQUIRE(a.reads.size() == b.reads.size());
    for (std::size_t i = 0; i < a.reads.size(); ++i) {
        CHECK(a.reads[i].spins == b.reads[i].spins);
        CHECK(a.reads[i].multiplicity == b.reads[i].multiplicity);
    }
    bool differs = a.reads.size() != c.reads.size();
    for (std::size_t i = 0; !differs && i < a.reads.size(); ++i) differs = a.reads[i].spins != c.reads[i].spins;
    CHECK(differs);
    for (const Read& r : a.reads) CHECK(r.energy == doctest::Approx(m.energy(r.spins)));
}

TEST_CASE("fixed-temperature sampling matches the Gibbs distribution") {
    IsingModel m(3);
    m.h = {0.3, -0.5, 0.1};
    m.add_coupling(0, 1, -0.7);
    m.add_coupling(1, 2, 0.4);
    m.add_coupling(0, 2, 0.2);
    const double beta = 1.0;
    const std::uint64_t reads = 100000;
    const auto rs = simulated_annealing(m, {20, beta, beta}, reads, 11);
    std::vector<double> empirical(8, 0.0);
    for (const Read& r : rs.reads) empirical[spins_to_mask(r.spins)] += static_cast<double>(r.multiplicity) / reads;
    const auto exact = gibbs(m, beta);
    double tv = 0.0;
    for (int k = 0; k < 8; ++k) tv += 0.5 * std::abs(empirical[k] - exact[k]);
    CHECK(tv < 0.02);
}

TEST_CASE("exhaustive ground states") {
    IsingModel one(1);
    one.h[0] = 1.0;
    const auto g1 = exhaustive_ground(one);
    CHECK(g1.energy == -1.0);
    CHECK(g1.minimizers == std::vector<std::uint64_t>{0});

    // Frustrated triangle: every state with one unsatisfied bond.
    const auto g3 = exhaustive_ground(triangle(1.0));
    CHECK(g3.energy == -1.0);
    CHECK(g3.minimizers.size() == 6);

    CHECK_THROWS_AS(exhaustive_ground(IsingModel(25)), IsingError);
}

TEST_CASE("gray-code enumeration visits every state with its energy") {
    std::mt19937_64 rng(17);
    const auto m = random_model(rng, 8, 0.5);
    std::vector<int> seen(256, 0);
    for_each_configuration(m, [&](std::uint64_t mask, double energy) {
        ++seen[mask];
        CHECK(energy == doctest::Approx(m.energy(mask_to_spins(mask, 8))).epsilon(1e-12));
    });
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST_CASE("simulated annealing finds the exhaustive ground state") {
    std::mt19937_64 rng(23);
    int matched = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto m = random_model(rng, 12, 0.5);
        const auto exact = exhaustive_ground(m);
        const auto rs = simulated_annealing(m, {}, 20, trial);
        double best = 1e300;
        for (const Read& r : rs.reads) best = std::min(best, r.energy);
        CHECK(best >= exact.energy - 1e-9);
        matched += std::abs(best - exact.energy) < 1e-9;
    }
    CHECK(matched == 50);
}

TEST_CASE("read set aggregation") {
    ReadSet rs;
    rs.reads.push_back({{1, -1}, 0.5, 2, 0, ReadStatus::sampled, {}});
    rs.reads.push_back({{1, -1}, 0.5, 3, 0, ReadStatus::sampled, {}});
    rs.reads.push_back({{1, -1}, 0.5, 1, 1, ReadStatus::sampled, {}});
    rs.reads.push_back({{}, 2.0, 1, 0, ReadStatus::chain_break, {1}});
    rs.reads.push_back({{}, 1.5, 4, 0, ReadStatus::chain_break, {1}});
    rs.aggregate();
    REQUIRE(rs.reads.size() == 3);
    CHECK(rs.reads[0].multiplicity == 5);
    CHECK(rs.reads[1].chain_break());
    CHECK(rs.reads[1].energy == 1.5);
    CHECK(rs.reads[1].multiplicity == 5);
    CHECK(rs.reads[2].gauge == 1);
    CHECK(rs.total_reads() == 11);
    CHECK(rs.chain_breaks() == 5);
}

namespace {

// Triangle on the 4-cycle 0-4-1-5 of one Chimera cell, third variable on {1, 5}.
EmbeddedIsing toy(const IsingModel& logical, double jf) {
    return embed_ising(logical, Embedding{{{0}, {4}, {1, 5}}}, chimera_graph(1, 1, 4), jf);
}

}  // namespace

TEST_CASE("run_experiment pipeline") {
    IsingModel logical = triangle(0.5);
    logical.h = {0.2, -0.1, 0.3};
    const auto e = toy(logical, 1.0);
    const auto sampler = make_sa_sampler({100, 0.1, 5.0});

    ExperimentOptions identity{.num_gauges = 1, .reads_per_gauge = 400, .seed = 3, .random_gauges = false};
    const auto piped = run_experiment(e, sampler, identity);
    const auto direct = sampler(e.ising, 400, derive_seed(3, 0, 1));
    // One identity gauge is direct sampling followed by unembedding.
    std::map<std::vector<Spin>, std::uint64_t> expected;
    std::uint64_t expected_breaks = 0;
    for (const Read& r : direct.reads) {
        const auto u = unembed_read(r.spins, e);
        if (u.chain_break())
            expected_breaks += r.multiplicity;
        else
            expected[*u.logical] += r.multiplicity;
    }
    std::map<std::vector<Spin>, std::uint64_t> got;
    for (const Read& r : piped.reads)
        if (!r.chain_break()) got[r.spins] += r.multiplicity;
    CHECK(got == expected);
    CHECK(piped.chain_breaks() == expected_breaks);
    CHECK(piped.meta.gauge_seeds == std::vector<std::uint64_t>{0});

    ExperimentOptions many{.num_gauges = 6, .reads_per_gauge = 250, .seed = 4};
    const auto rs = run_experiment(e, sampler, many);
    CHECK(rs.total_reads() == 1500);
    CHECK(rs.meta.num_reads == 1500);
    CHECK(rs.meta.gauge_seeds.size() == 6);
    std::vector<std::uint64_t> per_gauge(6, 0);
    for (const Read& r : rs.reads) {
        per_gauge[r.gauge] += r.multiplicity;
        if (r.chain_break()) {
            CHECK(r.spins.empty());
            CHECK(r.broken == std::vector<int>{2});
        } else {
            // Original frame: aligned reads carry the logical energy plus the chain offset.
            CHECK(r.energy == doctest::Approx(logical.energy(r.spins) + e.chain_offset()));
        }
    }
    CHECK(std::all_of(per_gauge.begin(), per_gauge.end(), [](std::uint64_t c) { return c == 250; }));
    const auto again = run_experiment(e, sampler, many);
    REQUIRE(again.reads.size() == rs.reads.size());
    for (std::size_t i = 0; i < rs.reads.size(); ++i) CHECK(again.reads[i].spins == rs.reads[i].spins);
}

TEST_CASE("low energy census") {
    IsingModel logical = triangle(1.0);
    logical.h = {0.1, -0.2, 0.15};

    // Full window: all 16 states, 8 of them break the {1, 5} chain.
    const auto full = low_energy_census(toy(logical, 1.0), 1e9);
    CHECK(full.states == 16);
    CHECK(full.broken == 8);
    CHECK(full.fraction() == 0.5);

    // Chain stronger than the incident couplings: near-ground states are aligned.
    const auto strong = toy(logical, 2.0);
    const auto c = low_energy_census(strong, 0.05);
    CHECK(c.states >= 1);
    CHECK(c.fraction() == 0.0);

    std::vector<double> fractions;
    for (double jf : {0.5, 1.0, 2.0}) {
        const auto e = toy(logical, jf);
        const auto probe = low_energy_census(e, 0.0);
        const double width = probe.max_energy - probe.ground_energy;
        fractions.push_back(low_energy_census(e, 0.1 * width).fraction());
    }
    CHECK(fractions[0] > fractions[2]);

    CensusOptions sampled{.method = CensusMethod::sampled, .schedule = {200, 0.1, 5.0}, .num_reads = 500, .seed = 1};
    const auto s = low_energy_census(strong, 0.05, sampled);
    CHECK(s.ground_energy == doctest::Approx(c.ground_energy));
    CHECK(s.fraction() == 0.0);
}

TEST_CASE("embedded m4ver1 reaches the oracle cost") {
    const auto instance = catalog::make_instance("m4ver1", "w2", 2);
    const auto qubo = build_qubo(instance);
    const auto scaled = scale_to_range(qubo_to_ising(qubo));
    const auto hw = chimera_graph(16);
    const auto found = find_embedding(interaction_graph(scaled.model), hw, {.attempts = 2, .seed = 1});
    REQUIRE(found.best);
    const auto e = embed_ising(scaled.model, *found.best, hw, 2.0);
    const auto rs = simulated_annealing(e.ising, {}, 1000, 7);
    const std::int64_t optimum = solve_bdmst_exact(instance).tree.cost;
    int ground = 0;
    int optimal_trees = 0;
    for (const Read& r : rs.reads) {
        const auto u = unembed_read(r.spins, e);
        if (u.chain_break()) continue;
        const auto d = decode(qubo, instance, spins_to_bits(*u.logical));
        CHECK(std::llround((r.energy - e.chain_offset()) / scaled.scale) == d.energy);
        ground += d.energy == optimum;
        // With epsilon 0 some reads at the optimum energy are broken encodings.
        optimal_trees += d.valid() && d.tree->cost == optimum;
    }
    CHECK(ground >= 1);
    CHECK(optimal_trees >= 1);
}
