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
#include <random>

#include "bdmst/embedding.hpp"
#include "doctest.h"

using namespace bdmst;

namespace {

// Order-independent edge checksum used to freeze generator output.
long long edge_checksum(const HardwareGraph& g) {
    long long sum = 0;
    for (auto [a, b] : g.couplers()) sum += (static_cast<long long>(a) * 7919 + static_cast<long long>(b) * 104729) % 1000000007LL;
    return sum;
}

Graph triangle() { return Graph(3, {{0, 1}, {1, 2}, {0, 2}}); }

// Triangle on the 4-cycle 0-4-1-5-0 inside one Chimera cell: c = {1, 5}.
Embedding triangle_square() { return Embedding{{{0}, {4}, {1, 5}}}; }

IsingModel random_logical(std::mt19937_64& rng, const Graph& g) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    IsingModel m(g.num_vertices());
    for (auto& h : m.h) h = c(rng);
    for (const Edge& e : g.edges()) m.add_coupling(e.u, e.v, c(rng));
    m.offset = c(rng);
    return m;
}

std::vector<Spin> config(std::uint32_t mask, int n) {
    std::vector<Spin> s(n);
    for (int i = 0; i < n; ++i) s[i] = (mask >> i & 1U) ? 1 : -1;
    return s;
}

}  // namespace

TEST_CASE("chimera generator") {
    const auto c1 = chimera_graph(1, 1, 4);
    CHECK(c1.num_nodes() == 8);
    CHECK(c1.num_edges() == 16);
    for (int k = 0; k < 4; ++k)
        for (int kk = 4; kk < 8; ++kk) CHECK(c1.has_coupler(k, kk));
    CHECK_FALSE(c1.has_coupler(0, 1));

    const auto c2 = chimera_graph(2, 1, 4);
    CHECK(c2.num_nodes() == 16);
    CHECK(c2.num_edges() == 36);
    CHECK(c2.has_coupler(0, 8));   // vertical qubits link rows
    CHECK_FALSE(c2.has_coupler(4, 12));

    const auto c16 = chimera_graph(16);
    CHECK(c16.num_nodes() == 2048);
    CHECK(c16.num_edges() == 6016);
    CHECK(c16.max_degree() == 6);
    CHECK(c16.name() == "chimera(16,16,4)");
}

TEST_CASE("pegasus generator matches frozen reference values") {
    struct Row {
        int m, nodes, edges, degree;
    };
    for (const Row r : {Row{2, 40, 164, 13}, Row{3, 128, 704, 14}, Row{4, 264, 1604, 15}, Row{6, 680, 4484, 15},
                        Row{16, 5640, 40484, 15}}) {
        const auto p = pegasus_graph(r.m);
        CHECK(p.num_nodes() == r.nodes);
        CHECK(p.num_nodes() == 24 * r.m * (r.m - 1) - 8 * (r.m - 1));
        CHECK(p.num_edges() == r.edges);
        CHECK(p.max_degree() == r.degree);
    }
    CHECK(edge_checksum(pegasus_graph(2)) == 602401172LL);
    CHECK(edge_checksum(pegasus_graph(3)) == 7686995648LL);
    CHECK(edge_checksum(pegasus_graph(6)) == 244429851524LL);
    CHECK(pegasus_graph(2).ids().front() == 2);
    CHECK_THROWS(pegasus_graph(1));
}

TEST_CASE("custom hardware graphs keep sparse ids") {
    const auto g = custom_graph({{10, 3}, {3, 7}, {7, 3}}, {42});
    CHECK(g.num_nodes() == 4);
    CHECK(g.num_edges() == 2);
    CHECK(g.ids() == std::vector<int>{3, 7, 10, 42});
    CHECK(g.has_coupler(10, 3));
    CHECK_FALSE(g.index(5).has_value());
}

TEST_CASE("embedding validation") {
    const auto hw = chimera_graph(1, 1, 4);
    CHECK(validate_embedding(triangle_square(), triangle(), hw));

    const Embedding overlap{{{0}, {4}, {4, 1}}};
    const auto v1 = validate_embedding(overlap, triangle(), hw);
    CHECK_FALSE(v1);
    CHECK(v1.reason.find("shared") != std::string::npos);

    const Embedding uncovered{{{0}, {4}, {1}}};
    const auto v2 = validate_embedding(uncovered, triangle(), hw);
    CHECK_FALSE(v2);
    CHECK(v2.reason == "logical edge (0,2) has no coupler");

    const Embedding split{{{0}, {4}, {1, 2}}};
    CHECK(validate_embedding(split, triangle(), hw).reason.find("disconnected") != std::string::npos);
    CHECK_FALSE(validate_embedding(Embedding{{{0}, {4}}}, triangle(), hw));
    CHECK_FALSE(validate_embedding(Embedding{{{0}, {4}, {99}}}, triangle(), hw));
}

TEST_CASE("find_embedding") {
    const auto hw = chimera_graph(1, 1, 4);
    const auto r = find_embedding(triangle(), hw, {.attempts = 5, .seed = 3});
    REQUIRE(r.best);
    CHECK(r.best->physical_count() == 4);
    auto sizes = embedding_stats(*r.best).sizes;
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{1, 1, 2});
    CHECK(r.attempt_sizes.size() == 5);

    // Same seed, same answer.
    CHECK(find_embedding(triangle(), hw, {.attempts = 5, .seed = 3}).best == r.best);

    // Bipartite subgraphs of K4,4 embed natively; a larger minor cannot fit.
    std::vector<Edge> k44;
    for (int a = 0; a < 4; ++a)
        for (int b = 4; b < 8; ++b) k44.emplace_back(a, b);
    const auto native = find_embedding(Graph(8, k44), hw, {.attempts = 3});
    REQUIRE(native.best);
    CHECK(embedding_stats(*native.best).max_size == 1);
    // K6 needs 15 edges between six branch sets; a K4,4 minor on six sets keeps at most 14.
    std::vector<Edge> k6;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b) k6.emplace_back(a, b);
    const auto none = find_embedding(Graph(6, k6), hw, {.attempts = 2, .max_rounds = 8});
    CHECK_FALSE(none.best);
    CHECK(none.attempt_sizes == std::vector<int>{0, 0});

    // Chimera unit cell is a minor of Pegasus P6.
    const auto cell = chimera_graph(1, 1, 4);
    const auto p6 = pegasus_graph(6);
    const auto cr = find_embedding(cell.graph(), p6, {.attempts = 2});
    REQUIRE(cr.best);
    CHECK(validate_embedding(*cr.best, cell.graph(), p6));

    // Complete graphs on Chimera, well inside the hardware's capacity.
    std::vector<Edge> k8;
    for (int a = 0; a < 8; ++a)
        for (int b = a + 1; b < 8; ++b) k8.emplace_back(a, b);
    const auto c4 = chimera_graph(4);
    const auto kr = find_embedding(Graph(8, k8), c4, {.attempts = 2});
    REQUIRE(kr.best);
    CHECK(validate_embedding(*kr.best, Graph(8, k8), c4));
}

TEST_CASE("embed_ising") {
    const auto hw = chimera_graph(1, 1, 4);
    IsingModel m(3);
    m.h = {0.2, -0.4, 0.6};
    m.add_coupling(0, 1, 1.0);
    m.add_coupling(1, 2, -0.5);
    m.add_coupling(0, 2, 0.25);
    m.offset = 0.75;
    const auto e = embed_ising(m, triangle_square(), hw, 1.6);
    CHECK(e.num_physical() == 4);
    CHECK(e.qubits == std::vector<int>{0, 1, 4, 5});
    CHECK(e.chains == std::vector<std::vector<int>>{{0}, {2}, {1, 3}});
    CHECK(e.ising.h == std::vector<double>{0.2, 0.3, -0.4, 0.3});
    CHECK(e.chain_edges == std::vector<std::pair<int, int>>{{1, 3}});
    CHECK(e.ising.coupling(1, 3) == -1.6);
    CHECK(e.ising.coupling(0, 2) == 1.0);
    // J(1,2) lands on the smallest id pair between {4} and {1,5}: (1,4).
    CHECK(e.ising.coupling(1, 2) == -0.5);
    CHECK(e.ising.coupling(0, 3) == 0.25);
    CHECK(e.ising.j.size() == 4);
    CHECK(e.embedding() == triangle_square());

    for (std::uint32_t mask = 0; mask < 8; ++mask) {
        const auto s = config(mask, 3);
        const auto p = embed_spins(s, e);
        CHECK(e.ising.energy(p) == doctest::Approx(m.energy(s) + e.chain_offset()));
        CHECK(unembed_read(p, e).logical == s);
    }

    CHECK_THROWS_AS(embed_ising(m, triangle_square(), hw, 2.5), EmbeddingError);
    CHECK_NOTHROW(embed_ising(m, triangle_square(), hw, 8.0, {.enforce_hardware_range = false}));
    IsingModel big = m;
    big.h[0] = 3.0;
    CHECK_THROWS_AS(embed_ising(big, triangle_square(), hw, 1.0), EmbeddingError);
    CHECK_THROWS_AS(embed_ising(m, Embedding{{{0}, {4}, {1}}}, hw, 1.0), EmbeddingError);
    CHECK_THROWS_AS(embed_ising(m, triangle_square(), hw, 0.0), EmbeddingError);

    // Trivial vertex models leave the model unchanged.
    IsingModel pair(2);
    pair.h = {0.5, -0.5};
    pair.add_coupling(0, 1, 0.3);
    const auto trivial = embed_ising(pair, Embedding{{{2}, {6}}}, hw, 1.0);
    CHECK(trivial.ising == pair);
    CHECK(trivial.chain_edges.empty());
}

TEST_CASE("chain topology options") {
    // A 3-qubit chain 0-4-1 plus its closing coupler 1-5? Use a 4-cycle chain.
    const auto hw = chimera_graph(1, 1, 4);
    IsingModel m(2);
    m.add_coupling(0, 1, 0.5);
    const Embedding e{{{0, 1, 4, 5}, {6}}};
    const auto tree = embed_ising(m, e, hw, 1.0);
    const auto all = embed_ising(m, e, hw, 1.0, {.topology = ChainTopology::all_internal});
    CHECK(tree.chain_edges.size() == 3);
    CHECK(all.chain_edges.size() == 4);
}

TEST_CASE("ground states of embedded models") {
    std::mt19937_64 rng(41);
    const auto hw = chimera_graph(1, 1, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = random_logical(rng, triangle());
        double logical_min = 1e300;
        for (std::uint32_t mask = 0; mask < 8; ++mask) logical_min = std::min(logical_min, m.energy(config(mask, 3)));
        for (double jf : {0.5, 1.0, 2.0}) {
            const auto e = embed_ising(m, triangle_square(), hw, jf);
            double aligned_min = 1e300;
            double global_min = 1e300;
            bool global_aligned = false;
            for (std::uint32_t mask = 0; mask < 16; ++mask) {
                const auto p = config(mask, 4);
                const double en = e.ising.energy(p);
                const bool ok = !unembed_read(p, e).chain_break();
                if (ok) aligned_min = std::min(aligned_min, en);
                if (en < global_min - 1e-12) {
                    global_min = en;
                    global_aligned = ok;
                } else if (en < global_min + 1e-12) {
                    global_aligned = global_aligned || ok;
                }
            }
            CHECK(aligned_min == doctest::Approx(logical_min + e.chain_offset()));
            // Above the sum of |J| incident to the chained variable the ground state is aligned.
            const double bound = std::abs(m.coupling(2, 0)) + std::abs(m.coupling(2, 1)) + std::abs(m.h[2]);
            if (jf > bound) CHECK(global_aligned);
        }
    }
}

TEST_CASE("unembed discards broken chains") {
    const auto hw = chimera_graph(1, 1, 4);
    IsingModel m(3);
    m.add_coupling(0, 1, 1.0);
    m.add_coupling(1, 2, 1.0);
    m.add_coupling(0, 2, 1.0);
    const auto e = embed_ising(m, triangle_square(), hw, 1.0);
    const auto r = unembed_read(std::vector<Spin>{1, 1, -1, -1}, e);
    CHECK(r.chain_break());
    CHECK(r.broken == std::vector<int>{2});
    int broken = 0;
    for (std::uint32_t mask = 0; mask < 16; ++mask) broken += unembed_read(config(mask, 4), e).chain_break();
    // Two of the four states of the {q1, q3} chain disagree.
    CHECK(broken == 8);
    CHECK_THROWS_AS(unembed_read(std::vector<Spin>{1, 1}, e), EmbeddingError);
}

TEST_CASE("embedding stats") {
    const auto s = embedding_stats(triangle_square());
    CHECK(s.physical_count == 4);
    CHECK(s.sizes == std::vector<int>{1, 1, 2});
    CHECK(s.median_size == 1.0);
    CHECK(s.max_size == 2);
    CHECK(embedding_stats(Embedding{{{0}, {1, 2}, {3, 4, 5}, {6}}}).median_size == 1.5);
}

TEST_CASE("partial gauge commutes with embedding") {
    std::mt19937_64 rng(43);
    const auto hw = chimera_graph(2);
    std::vector<Edge> edges;
    for (int a = 0; a < 6; ++a)
        for (int b = a + 1; b < 6; ++b)
            if (rng() % 2) edges.emplace_back(a, b);
    const Graph g(6, edges);
    const auto found = find_embedding(g, hw, {.attempts = 2, .seed = 5});
    REQUIRE(found.best);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_logical(rng, g);
        const auto gauge = random_gauge(6, rng());
        const auto e = embed_ising(m, *found.best, hw, 1.6);
        const auto lhs = partial_gauge(e, gauge);
        const auto rhs = embed_ising(gauge_transform(m, gauge), *found.best, hw, 1.6);
        CHECK(lhs.ising == rhs.ising);
        for (auto [p, q] : e.chain_edges) CHECK(lhs.ising.coupling(p, q) == -1.6);
    }
    const auto e = embed_ising(random_logical(rng, g), *found.best, hw, 1.6);
    CHECK(partial_gauge(e, identity_gauge(6)).ising == e.ising);
    CHECK_THROWS_AS(partial_gauge(e, identity_gauge(5)), EmbeddingError);
}
