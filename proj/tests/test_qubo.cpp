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

#include <random>

#include "bdmst/catalog.hpp"
#include "bdmst/qubo.hpp"
#include "doctest.h"

using namespace bdmst;

namespace {

int level_count(const std::vector<std::vector<int>>& levels, int v) {
    return static_cast<int>(levels[v].size());
}

// Evaluates the groups one by one: cost + A * (sum of penalties).
std::int64_t evaluate_by_groups(const MappingTerms& t, std::int64_t a, std::span<const std::uint8_t> bits) {
    return t.cost.evaluate(bits) + a * (t.one_parent.evaluate(bits) + t.one_level.evaluate(bits) +
                                        t.degree.evaluate(bits) + t.consistency.evaluate(bits));
}

std::vector<std::uint8_t> random_bits(std::mt19937_64& rng, int n, double p = 0.5) {
    std::bernoulli_distribution coin(p);
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = coin(rng) ? 1 : 0;
    return bits;
}

}  // namespace

TEST_CASE("level preprocessing") {
    const auto path = catalog::make_instance("m4ver1", "w2", 2, 2);
    const auto levels = level_preprocess(path);
    CHECK(levels[2] == std::vector<int>{1});
    CHECK(levels[1] == std::vector<int>{2, 3, 4, 5});
    CHECK(levels[3] == std::vector<int>{2, 3, 4, 5});
    CHECK(levels[0] == std::vector<int>{3, 4, 5});
    CHECK(levels[4] == std::vector<int>{3, 4, 5});

    ProblemInstance star;
    star.label = "star";
    star.graph = Graph::from_one_based(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
    star.weights = {1, 1, 1, 1};
    star.degree_bound = 4;
    star.root = 0;
    const auto sl = level_preprocess(star);
    for (int v = 1; v < 5; ++v) CHECK(sl[v] == std::vector<int>{2, 3, 4, 5});

    const auto k5 = catalog::make_instance("m10ver1", "w2", 2, 3);
    const auto kl = level_preprocess(k5);
    for (int v = 0; v < 5; ++v)
        if (v != 3) CHECK(level_count(kl, v) == 4);

    const auto raw = level_preprocess(path, false);
    CHECK(raw[0] == std::vector<int>{2, 3, 4, 5});
}

TEST_CASE("variable counts") {
    const auto k5 = catalog::make_instance("m10ver1", "w2", 2);
    const auto c2 = count_variables(k5);
    CHECK(c2.x == 16);
    CHECK(c2.y == 16);
    CHECK(c2.z == 6);
    CHECK(c2.anc == 36);
    CHECK(c2.total == 74);

    const auto k5d3 = catalog::make_instance("m10ver1", "w2", 3);
    CHECK(count_variables(k5d3).total == 79);
    CHECK(count_variables(k5d3, {.preprocess = false}).total == 79);

    const auto path3 = catalog::make_instance("m4ver1", "w2", 2, 2);
    CHECK(count_variables(path3).x == 6);
    CHECK(count_variables(path3, {.preprocess = false}).y == 16);
    CHECK(count_variables(path3).y < 16);

    // m4ver1 with the default root (vertex 2) has 32 variables.
    CHECK(count_variables(catalog::make_instance("m4ver1", "w2", 2)).total == 32);
    CHECK(count_variables(catalog::make_instance("m5ver1", "w2", 2)).total == 42);

    for (const auto& entry : catalog::graphs()) {
        const Graph g = entry.graph();
        const int m = g.num_edges();
        const int n = g.num_vertices();
        for (int root = 0; root < n; ++root) {
            for (int delta : {2, 3}) {
                ProblemInstance inst;
                inst.label = entry.label;
                inst.graph = g;
                inst.weights.assign(m, 1);
                inst.degree_bound = delta;
                inst.root = root;
                const int dr = g.degree(root);
                for (bool pre : {true, false}) {
                    const auto c = count_variables(inst, {.preprocess = pre, .allow_infeasible = true});
                    CHECK_MESSAGE(c.x == 2 * m - dr, entry.label);
                    CHECK(c.total == c.x + c.y + c.z + c.anc);
                    const int bound = 2 * m - dr + (n - 1) * (n - 1) + n * (delta - 1) + 1 + (2 * m - 2 * dr) * (n - 2);
                    CHECK(c.total <= bound);
                    if (!pre) CHECK(c.total == bound);
                }
            }
        }
    }
}

TEST_CASE("registry layout is X, Y, Z, then ancillas, each sorted") {
    const auto q = build_qubo(catalog::make_instance("m6ver2", "w5", 2));
    const auto& vars = q.registry.vars();
    for (std::size_t i = 1; i < vars.size(); ++i) CHECK(vars[i - 1] < vars[i]);
    CHECK(vars.front().kind == VarKind::X);
    CHECK(describe(vars.front()) == "X 2 1");
}

TEST_CASE("ancilla penalty is zero exactly when a = x*y") {
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y)
            for (int a = 0; a <= 1; ++a) {
                const int f = 3 * a + x * y - 2 * a * x - 2 * a * y;
                CHECK(f >= 0);
                CHECK((f == 0) == (a == x * y));
            }
}

TEST_CASE("decode") {
    const auto inst = catalog::make_instance("m4ver1", "w2", 2);
    const Qubo q = build_qubo(inst);

    const auto bits = encode_tree(q, inst, inst.graph.edges());
    const auto d = decode(q, inst, bits);
    REQUIRE(d.valid());
    CHECK(d.energy == 6);
    CHECK(d.tree->cost == solve_bdmst_exact(inst).tree.cost);

    const std::vector<std::uint8_t> zeros(q.num_vars(), 0);
    const auto dz = decode(q, inst, zeros);
    CHECK(dz.status == DecodeStatus::broken_encoding);
    CHECK(dz.reason == "no-parent");
    CHECK(dz.energy == q.form.offset);
    // One (sum - 1)^2 per non-root vertex for parents and for levels.
    CHECK(dz.energy == q.penalty_weight * 2 * (inst.graph.num_vertices() - 1));

    for (int i = 0; i < q.num_vars(); ++i) {
        if (q.registry.at(i).kind != VarKind::Y) continue;
        auto flipped = bits;
        flipped[i] ^= 1;
        const auto df = decode(q, inst, flipped);
        CHECK(df.reason == "level");
        CHECK(df.energy > d.energy);
    }

    CHECK_THROWS_AS(decode(q, inst, std::vector<std::uint8_t>(3, 0)), std::invalid_argument);
}

TEST_CASE("penalty groups are non-negative and vanish on valid encodings") {
    std::mt19937_64 rng(7);
    for (const char* label : {"m5ver1", "m6ver3", "m7ver5", "m10ver1"}) {
        for (int delta : {2, 3}) {
            const auto inst = catalog::make_instance(label, "w6", delta);
            const MappingTerms t = build_terms(inst);
            const Qubo q = build_qubo(inst);
            for (int trial = 0; trial < 2000; ++trial) {
                const auto bits = random_bits(rng, t.registry.size(), trial % 2 ? 0.5 : 0.15);
                for (const QuadraticForm* f : {&t.one_parent, &t.one_level, &t.degree, &t.consistency})
                    REQUIRE(f->evaluate(bits) >= 0);
            }
            enumerate_spanning_trees(inst.graph, [&](std::span<const Edge> edges) {
                if (!validate_tree(inst.graph, edges, delta)) return;
                const auto bits = encode_tree(q, inst, edges);
                CHECK(t.one_parent.evaluate(bits) == 0);
                CHECK(t.one_level.evaluate(bits) == 0);
                CHECK(t.degree.evaluate(bits) == 0);
                CHECK(t.consistency.evaluate(bits) == 0);
                const auto d = decode(q, inst, bits);
                CHECK(d.valid());
                CHECK(d.energy == tree_cost(inst, edges));
            });
        }
    }
}

TEST_CASE("decode energy equals group-wise polynomial evaluation") {
    std::mt19937_64 rng(11);
    for (const auto& inst : catalog::all_instances(2)) {
        if (inst.label.back() != '2' && inst.label.back() != '9') continue;
        const MappingTerms t = build_terms(inst);
        const Qubo q = build_qubo(inst);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto bits = random_bits(rng, q.num_vars());
            REQUIRE(decode(q, inst, bits).energy == evaluate_by_groups(t, q.penalty_weight, bits));
        }
    }
}

TEST_CASE("infeasible instances need an explicit override") {
    ProblemInstance star;
    star.label = "star";
    star.graph = Graph::from_one_based(5, {{1, 2}, {1, 3}, {1, 4}, {1, 5}});
    star.weights = {1, 2, 3, 4};
    star.degree_bound = 2;
    star.root = 0;
    CHECK_THROWS_AS(build_qubo(star), MappingError);
    CHECK(build_qubo(star, {.allow_infeasible = true}).num_vars() > 0);
    CHECK_THROWS_AS(build_qubo(catalog::make_instance("m5ver1", "w2", 2), {.epsilon = -1}), MappingError);
}

TEST_CASE("exhaustive ground state equals the oracle on small instances") {
    // A 4-vertex path and a triangle with a pendant vertex, both under 26 variables.
    ProblemInstance a;
    a.label = "p4";
    a.graph = Graph::from_one_based(4, {{1, 2}, {2, 3}, {3, 4}});
    a.weights = {3, 1, 2};
    a.degree_bound = 2;
    a.root = 1;

    ProblemInstance b;
    b.label = "paw";
    b.graph = Graph::from_one_based(4, {{1, 2}, {2, 3}, {1, 3}, {3, 4}});
    b.weights = {1, 2, 2, 1};
    b.degree_bound = 2;
    b.root = default_root(b.graph);

    for (const ProblemInstance* inst : {&a, &b}) {
        const auto oracle = solve_bdmst_exact(*inst);
        for (std::int64_t eps : {0, 1}) {
            const Qubo q = build_qubo(*inst, {.epsilon = eps});
            REQUIRE(q.num_vars() <= 26);
            const auto best = brute_force_minimum(q);
            CHECK_MESSAGE(best.energy == oracle.tree.cost, inst->label);
            int valid = 0;
            for (auto mask : best.minimizers) {
                const auto d = decode(q, *inst, mask_to_bits(mask, q.num_vars()));
                if (eps > 0) CHECK_MESSAGE(d.valid(), inst->label, " ", d.reason);
                if (d.valid()) {
                    ++valid;
                    CHECK(d.tree->cost == oracle.tree.cost);
                }
            }
            CHECK(valid > 0);
        }
    }
}

TEST_CASE("zero epsilon admits tied broken encodings") {
    // A leaf hanging off the root by the heaviest edge can drop its parent
    // for exactly A, so without epsilon the optimum is no longer unique.
    ProblemInstance a;
    a.label = "p4";
    a.graph = Graph::from_one_based(4, {{1, 2}, {2, 3}, {3, 4}});
    a.weights = {3, 1, 2};
    a.degree_bound = 2;
    a.root = 1;
    const Qubo q = build_qubo(a);
    const auto best = brute_force_minimum(q);
    CHECK(best.energy == 6);
    CHECK(best.num_minimizers == 5);
    int broken = 0;
    for (auto mask : best.minimizers)
        if (!decode(q, a, mask_to_bits(mask, q.num_vars())).valid()) ++broken;
    CHECK(broken == 4);
}
