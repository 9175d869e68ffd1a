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
#include <random>

#include "bdmst/catalog.hpp"
#include "bdmst/ising.hpp"
#include "doctest.h"

using namespace bdmst;

namespace {

std::vector<Spin> config(std::uint32_t mask, int n) {
    std::vector<Spin> s(n);
    for (int i = 0; i < n; ++i) s[i] = (mask >> i & 1U) ? 1 : -1;
    return s;
}

std::vector<double> spectrum(const IsingModel& m) {
    std::vector<double> out;
    for (std::uint32_t mask = 0; mask < (1U << m.num_spins()); ++mask)
        out.push_back(m.energy(config(mask, m.num_spins())));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> argmin_set(const IsingModel& m, double tol = 1e-9) {
    std::vector<std::uint32_t> best;
    double e_min = INFINITY;
    for (std::uint32_t mask = 0; mask < (1U << m.num_spins()); ++mask) {
        const double e = m.energy(config(mask, m.num_spins()));
        if (e < e_min - tol) {
            e_min = e;
            best.clear();
        }
        if (std::abs(e - e_min) <= tol) best.push_back(mask);
    }
    return best;
}

IsingModel random_model(std::mt19937_64& rng, int n, double density = 0.6) {
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::bernoulli_distribution keep(density);
    IsingModel m(n);
    for (auto& v : m.h) v = coef(rng);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (keep(rng)) m.add_coupling(a, b, coef(rng));
    m.offset = coef(rng);
    return m;
}

}  // namespace

TEST_CASE("qubo to ising substitution") {
    QuadraticForm f;
    f.add_linear(0, 1);
    auto m = form_to_ising(f, 1);
    CHECK(m.h[0] == 0.5);
    CHECK(m.offset == 0.5);

    QuadraticForm g;
    g.add_quadratic(0, 1, 1);
    m = form_to_ising(g, 2);
    CHECK(m.coupling(0, 1) == 0.25);
    CHECK(m.h == std::vector<double>{0.25, 0.25});
    CHECK(m.offset == 0.25);

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> c(-9, 9);
    QuadraticForm r;
    for (int i = 0; i < 8; ++i) r.add_linear(i, c(rng));
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) r.add_quadratic(i, j, c(rng));
    r.add_constant(c(rng));
    m = form_to_ising(r, 8);
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
        const auto bits = mask_to_bits(mask, 8);
        CHECK(m.energy(bits_to_spins(bits)) == doctest::Approx(static_cast<double>(r.evaluate(bits))).epsilon(1e-12));
    }
}

TEST_CASE("qubo to ising preserves energies of mapped instances") {
    const auto inst = catalog::make_instance("m4ver1", "w2", 2);
    const Qubo q = build_qubo(inst);
    const IsingModel m = qubo_to_ising(q);
    const auto bits = encode_tree(q, inst, inst.graph.edges());
    CHECK(m.energy(bits_to_spins(bits)) == 6.0);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 500; ++t) {
        std::vector<std::uint8_t> b(q.num_vars());
        for (auto& x : b) x = rng() & 1U;
        CHECK(m.energy(bits_to_spins(b)) == static_cast<double>(q.energy(b)));
    }
}

TEST_CASE("qubo to ising preserves argmin sets") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> c(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 16;
        QuadraticForm f;
        for (int i = 0; i < n; ++i) f.add_linear(i, c(rng));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng() % 3 == 0) f.add_quadratic(i, j, c(rng));
        const auto m = form_to_ising(f, n);
        std::vector<std::uint32_t> q_best;
        std::int64_t q_min = std::numeric_limits<std::int64_t>::max();
        for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
            const auto e = f.evaluate(mask_to_bits(mask, n));
            if (e < q_min) {
                q_min = e;
                q_best.clear();
            }
            if (e == q_min) q_best.push_back(mask);
        }
        CHECK(argmin_set(m) == q_best);
    }
}

TEST_CASE("scale to range") {
    IsingModel m(2);
    m.h = {1.0, -2.0};
    m.add_coupling(0, 1, 4.0);
    const auto s = scale_to_range(m);
    CHECK(s.scale == 0.25);
    CHECK(s.model.h == std::vector<double>{0.25, -0.5});
    CHECK(s.model.coupling(0, 1) == 1.0);

    IsingModel small(1);
    small.h = {-1.0};
    CHECK(scale_to_range(small).scale == 1.0);
    CHECK(scale_to_range(small).model == small);
    CHECK_THROWS_AS(scale_to_range(IsingModel(3)), IsingError);

    std::mt19937_64 rng(23);
    for (int t = 0; t < 10; ++t) {
        const auto r = random_model(rng, 10);
        const auto sr = scale_to_range(r);
        CHECK(sr.model.max_abs_coefficient() == doctest::Approx(1.0));
        CHECK(argmin_set(sr.model) == argmin_set(r));
    }
}

TEST_CASE("gauge transform") {
    IsingModel m(2);
    m.h = {0.3, -0.7};
    m.add_coupling(0, 1, 0.5);
    CHECK(gauge_transform(m, identity_gauge(2)) == m);
    const Gauge g{{1, -1}, 0};
    const auto t = gauge_transform(m, g);
    CHECK(t.h == std::vector<double>{0.3, 0.7});
    CHECK(t.coupling(0, 1) == -0.5);
    CHECK_THROWS_AS(gauge_transform(m, identity_gauge(3)), IsingError);

    std::mt19937_64 rng(29);
    for (int t = 0; t < 50; ++t) {
        const auto r = random_model(rng, 10);
        const auto gauge = random_gauge(10, rng());
        const auto a = spectrum(r);
        const auto b = spectrum(gauge_transform(r, gauge));
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);
    }
}

TEST_CASE("ungauge") {
    std::mt19937_64 rng(31);
    const auto model = random_model(rng, 8);
    const auto gauge = random_gauge(8, 99);
    CHECK(gauge == random_gauge(8, 99));
    const auto gauged = gauge_transform(model, gauge);
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
        const auto s = config(mask, 8);
        CHECK(ungauge(s, identity_gauge(8)) == s);
        CHECK(ungauge(ungauge(s, gauge), gauge) == s);
        CHECK(model.energy(ungauge(s, gauge)) == doctest::Approx(gauged.energy(s)).epsilon(1e-12));
    }
}
