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

#include <cmath>
#include <numeric>

#include "bdmst/qsim.hpp"
#include "bdmst/random.hpp"
#include "doctest.h"

using namespace bdmst;

namespace {

std::vector<double> grid(double a, double b, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
    return out;
}

IsingModel random_model(int n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    IsingModel m(n);
    for (auto& h : m.h) h = 2.0 * rng.uniform() - 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform() < 0.4) m.add_coupling(i, j, 2.0 * rng.uniform() - 1.0);
    return m;
}

}  // namespace

TEST_CASE("schedule table and timeline") {
    AnnealSchedule sch;
    CHECK(sch.A(0.25) == doctest::Approx(0.75));
    CHECK(sch.B(0.25) == doctest::Approx(0.25));
    sch.t_a = 2.0;
    sch.s_p = 0.4;
    sch.t_p = 3.0;
    CHECK(sch.total_time() == doctest::Approx(5.0));
    CHECK(sch.s_at(0.4) == doctest::Approx(0.2));
    CHECK(sch.s_at(0.8) == doctest::Approx(0.4));
    CHECK(sch.s_at(3.0) == doctest::Approx(0.4));
    CHECK(sch.s_at(3.8) == doctest::Approx(0.4));
    CHECK(sch.s_at(4.8) == doctest::Approx(0.9));
    CHECK(sch.s_at(9.0) == 1.0);

    const auto t = parse_schedule_csv("s,A,B\n0,2,0\n0.5, 1, 1\n1,0,3\n");
    CHECK(t.A(0.25) == doctest::Approx(1.5));
    CHECK(t.B(0.75) == doctest::Approx(2.0));
    CHECK_THROWS_AS(parse_schedule_csv("s,A,B\n0,1,0\n0.5,x,1\n1,0,1\n"), QsimError);
    CHECK_THROWS_AS(parse_schedule_csv("s,A,B\n0,1,0\n0.9,1,1\n"), QsimError);
    CHECK_THROWS_AS(parse_schedule_csv("s,A,B\n0,1,0\n0.5,1\n1,0,1\n"), QsimError);
    sch.s_p = 1.0;
    CHECK_THROWS_AS(sch.check(), QsimError);
}

TEST_CASE("Hamiltonian apply, sparse and dense agree") {
    const auto model = random_model(6, 3);
    const Hamiltonian h(classical_energies(model), 6, 0.7, 0.4);
    const Eigen::MatrixXd d = h.dense();
    CHECK((d - d.transpose()).norm() == 0.0);
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(64, -1.0, 2.0), y;
    h.apply(x, y);
    CHECK((y - d * x).norm() < 1e-12);
    CHECK(h.dimension() == 64);
    // Basis convention: bit i set is spin +1.
    std::vector<Spin> spins(6, -1);
    spins[2] = 1;
    CHECK(h.classical()[4] == doctest::Approx(model.energy(spins)));
    CHECK_THROWS_AS(classical_energies(IsingModel(kMaxSimulatedQubits + 1)), QsimError);
}

TEST_CASE("driver-only spectrum is known in closed form") {
    // -A sum X has levels -n + 2m with multiplicity C(n, m).
    const Hamiltonian h(std::vector<double>(1U << 9, 0.0), 9, 1.0, 0.0);
    EigOptions lanczos;
    lanczos.dense_limit = 0;
    const auto eig = lowest_eigs(h, 11, lanczos);
    CHECK(eig.values[0] == doctest::Approx(-9.0));
    for (int i = 1; i <= 9; ++i) CHECK(eig.values[i] == doctest::Approx(-7.0));
    CHECK(eig.values[10] == doctest::Approx(-5.0));
    for (double r : eig.residuals) CHECK(r < 1e-8);
    for (double c : eig.vectors[0]) CHECK(c == doctest::Approx(1.0 / std::sqrt(512.0)));
}

TEST_CASE("Lanczos matches dense diagonalization") {
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto model = random_model(10, seed);
        const Hamiltonian h(classical_energies(model), 10, 0.6, 0.8);
        EigOptions lanczos;
        lanczos.dense_limit = 0;
        EigOptions dense;
        dense.dense_limit = 1U << 10;
        const auto a = lowest_eigs(h, 6, lanczos);
        const auto b = lowest_eigs(h, 6, dense);
        for (int i = 0; i < 6; ++i) {
            CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-10));
            CHECK(a.residuals[i] < 1e-8);
            CHECK(b.residuals[i] < 1e-8);
        }
        CHECK(std::abs(a.vectors[0].dot(b.vectors[0])) == doctest::Approx(1.0));
        CHECK(a.vectors[0].dot(b.vectors[0]) > 0.0);
    }
}

TEST_CASE("toy triangle layout") {
    const auto toy = toy_triangle(2.0);
    REQUIRE(toy.num_physical() == 4);
    CHECK(toy.chains == std::vector<std::vector<int>>{{0}, {1}, {2, 3}});
    CHECK(toy.chain_edges == std::vector<std::pair<int, int>>{{2, 3}});
    CHECK(toy.ising.coupling(2, 3) == -2.0);
    CHECK(toy.ising.coupling(0, 3) == 1.0);
    CHECK(toy.ising.coupling(1, 2) == 1.0);
    CHECK(toy.ising.h[2] == doctest::Approx(0.3));
    const auto strong = with_chain_strength(toy, 8.0);
    CHECK(strong.ising.coupling(2, 3) == -8.0);
    CHECK(strong.j_ferro == 8.0);
}

TEST_CASE("gap minimum moves earlier and shrinks with chain strength") {
    const auto toy = toy_triangle(2.0);
    const auto traces = gap_trace(toy, {2.0, 4.0, 8.0}, grid(0.005, 0.995, 199), 4);
    const double s_star[] = {0.52, 0.445, 0.37};
    const double gap[] = {0.57927, 0.49526, 0.41875};
    for (int i = 0; i < 3; ++i) {
        CHECK(traces[i].s_star() == doctest::Approx(s_star[i]));
        CHECK(traces[i].gap_min() == doctest::Approx(gap[i]).epsilon(1e-4));
    }
    CHECK(traces[2].s_star() < traces[1].s_star());
    CHECK(traces[1].s_star() < traces[0].s_star());
    // One two-qubit chain: <Z Z> = 2 P_L - 1.
    for (std::size_t j = 0; j < traces[0].s.size(); j += 20)
        for (int l = 0; l < 4; ++l)
            CHECK(traces[0].hf[j][l] == doctest::Approx(2.0 * traces[0].p_logical[j][l] - 1.0));
}

TEST_CASE("first-order chain perturbation") {
    const auto toy = toy_triangle(4.0);
    const AnnealSchedule sch;
    const double s = 0.3;
    const auto base = spectrum_trace(toy, sch, {s}, 2);
    CHECK(base.p_logical[0][0] == doctest::Approx(0.837).epsilon(1e-3));
    CHECK(base.p_logical[0][1] == doctest::Approx(0.981).epsilon(1e-3));
    double err[2];
    int idx = 0;
    for (double lambda : {0.08, 0.04}) {
        const double predicted = perturbation_gap_shift(base, lambda)[0];
        const auto exact = spectrum_trace(with_chain_strength(toy, 4.0 - lambda), sch, {s}, 2);
        err[idx++] = std::abs(exact.gap[0] - predicted);
    }
    CHECK(err[1] < 1e-4);
    // Second-order remainder: halving lambda quarters the error.
    CHECK(err[0] / err[1] == doctest::Approx(4.0).epsilon(0.05));

    const auto shifts = energy_shift_check(toy, sch, s, 0.01, 4);
    for (const auto& l : shifts) {
        CHECK_FALSE(l.near_degenerate);
        CHECK(std::abs(l.exact - l.predicted) < 1e-3);
        CHECK(l.exact > l.energy);  // weaker chains raise every level
    }
    // Degenerate driver spectrum is flagged.
    const auto flat = energy_shift_check(toy, sch, 0.0, 0.01, 3);
    CHECK_FALSE(flat[0].near_degenerate);
    CHECK(flat[1].near_degenerate);
}

TEST_CASE("relaxation reaches the Gibbs distribution") {
    const std::vector<double> e{-1.0, -0.4, 0.3, 0.3, 1.2};
    const auto gibbs = gibbs_populations(e, 0.7);
    CHECK(std::accumulate(gibbs.begin(), gibbs.end(), 0.0) == doctest::Approx(1.0));
    const Eigen::MatrixXd w = rate_matrix(e, 0.7, 5.0);
    const Eigen::VectorXd g = Eigen::Map<const Eigen::VectorXd>(gibbs.data(), 5);
    CHECK((w * g).norm() < 1e-12);
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(std::abs(w.col(i).sum()) < 1e-12);
    // Detailed balance.
    CHECK(w(1, 0) * gibbs[0] == doctest::Approx(w(0, 1) * gibbs[1]));

    const std::vector<double> start{0.0, 0.0, 0.0, 0.0, 1.0};
    double previous = kl_divergence(start, gibbs);
    for (double t : {0.05, 0.2, 1.0, 5.0}) {
        const auto p = relax(start, e, 0.7, 5.0, t);
        const double d = kl_divergence(p, gibbs);
        CHECK(d < previous);
        previous = d;
    }
    CHECK(previous < 1e-10);
    CHECK(relax(gibbs, e, 0.7, 5.0, 3.0)[0] == doctest::Approx(gibbs[0]));
}

TEST_CASE("pause relaxation on the toy") {
    RelaxOptions opt;
    AnnealSchedule base;
    const auto toy = toy_triangle(2.0);
    const auto plain = pause_relax_evolve(toy, base, opt);
    CHECK(plain.p_ground > 0.0);
    CHECK(plain.p_ground < 1.0);
    CHECK_FALSE(plain.leakage_flag);
    CHECK(plain.s.back() == 1.0);
    CHECK(plain.t.back() == doctest::Approx(1.0));
    CHECK(plain.populations.front()[0] == 1.0);

    AnnealSchedule paused = base;
    paused.s_p = 0.5;
    paused.t_p = 1.0;
    const auto r = pause_relax_evolve(toy, paused, opt);
    CHECK(r.t.back() == doctest::Approx(2.0));
    REQUIRE(r.pause_populations.size() == 8);
    double sum = 0.0;
    for (double p : r.pause_populations) sum += p;
    CHECK(sum == doctest::Approx(1.0));

    // A long pause thermalizes the tracked levels.
    paused.t_p = 50.0;
    const auto hot = pause_relax_evolve(toy, paused, opt);
    const auto gibbs = gibbs_populations(hot.pause_energies, opt.temperature);
    CHECK(kl_divergence(hot.pause_populations, gibbs) < 1e-8);

    // Freeze-out: no rates at s = 1 with the driver-scaled option.
    opt.scaling = RateScaling::driver_squared;
    const auto frozen = pause_relax_evolve(toy, base, opt);
    CHECK(frozen.p_ground != doctest::Approx(plain.p_ground));

    // Too coarse a grid is refused.
    RelaxOptions coarse;
    coarse.steps_per_unit_s = 2;
    coarse.max_refinements = 0;
    CHECK_THROWS_AS(pause_relax_evolve(toy_triangle(8.0), base, coarse), QsimError);
}

TEST_CASE("closed-form small systems") {
    // One qubit, h = 1: levels -+sqrt(A^2 + B^2).
    IsingModel one(1);
    one.h[0] = 1.0;
    for (double s : {0.0, 0.3, 0.7, 1.0}) {
        const Hamiltonian h(classical_energies(one), 1, 1.0 - s, s);
        const auto eig = lowest_eigs(h, 2);
        const double r = std::hypot(1.0 - s, s);
        CHECK(eig.values[0] == doctest::Approx(-r));
        CHECK(eig.values[1] == doctest::Approx(r));
    }
    // Two-qubit ferromagnet at s = 1: degenerate ground pair.
    IsingModel ferro(2);
    ferro.add_coupling(0, 1, -1.0);
    const auto eig = lowest_eigs(Hamiltonian(classical_energies(ferro), 2, 0.0, 1.0), 3);
    CHECK(eig.values[0] == doctest::Approx(-1.0));
    CHECK(eig.values[1] == doctest::Approx(-1.0));
    CHECK(eig.values[2] == doctest::Approx(1.0));

    // s = 1 diagonal is the classical spectrum; s = 0 ground state is |+>^P.
    const auto toy = toy_triangle(2.0);
    const AnnealSchedule sch;
    const Eigen::MatrixXd end = hamiltonian_at(toy, sch, 1.0).dense();
    std::vector<Spin> spins(4);
    for (int m = 0; m < 16; ++m) {
        for (int i = 0; i < 4; ++i) spins[i] = (m >> i) & 1 ? 1 : -1;
        CHECK(end(m, m) == toy.ising.energy(spins));
    }
    CHECK((end - Eigen::MatrixXd(end.diagonal().asDiagonal())).norm() == 0.0);
    const auto start = lowest_eigs(hamiltonian_at(toy, sch, 0.0), 1);
    CHECK(start.values[0] == doctest::Approx(-4.0));
    CHECK(logical_probability(start.vectors[0], toy) == doctest::Approx(0.5));
    CHECK(hf_expectation(start.vectors[0], toy) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("Lanczos agrees with dense on small random models") {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
        const auto model = random_model(6, seed);
        const Hamiltonian h(classical_energies(model), 6, 0.5, 0.9);
        EigOptions lanczos;
        lanczos.dense_limit = 0;
        const auto a = lowest_eigs(h, 4, lanczos);
        const auto b = lowest_eigs(h, 4);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-10);
    }
}

TEST_CASE("logical probability and chain expectation") {
    const auto toy = toy_triangle(2.0);
    const auto basis = [](int m) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(16);
        v[m] = 1.0;
        return v;
    };
    // Chain qubits are bits 2 and 3.
    CHECK(logical_probability(basis(0b1101), toy) == 1.0);
    CHECK(hf_expectation(basis(0b1101), toy) == 1.0);
    CHECK(logical_probability(basis(0b0101), toy) == 0.0);
    CHECK(hf_expectation(basis(0b0101), toy) == -1.0);
    // (|-+> + |+->)/sqrt2 on the chain is (|00> - |11>)/sqrt2: fully logical.
    Eigen::VectorXd fes = (basis(0b0000) - basis(0b1100)) / std::sqrt(2.0);
    CHECK(logical_probability(fes, toy) == doctest::Approx(1.0));
}

TEST_CASE("perturbation edge cases and determinism") {
    const auto toy = toy_triangle(4.0);
    const AnnealSchedule sch;
    const auto trace = spectrum_trace(toy, sch, grid(0.05, 0.95, 19), 2);
    CHECK(perturbation_gap_shift(trace, 0.0) == trace.gap);
    const auto shifted = perturbation_gap_shift(trace, 0.05);
    for (std::size_t i = 0; i < trace.s.size(); ++i)
        if (trace.p_logical[i][1] > trace.p_logical[i][0]) CHECK(shifted[i] > trace.gap[i]);
    for (const auto& l : energy_shift_check(toy, sch, 0.5, 0.0, 3)) CHECK(l.exact == l.energy);
    const auto ground = energy_shift_check(toy, sch, 0.5, 0.1, 3);
    CHECK(ground[0].exact > ground[0].energy);
    for (const auto& l : ground) CHECK_FALSE(l.rise_violated);

    const auto twice = gap_trace(toy, {2.0, 2.0}, grid(0.1, 0.9, 9), 3);
    CHECK(twice[0].energies == twice[1].energies);
    CHECK(twice[0].gap == twice[1].gap);
}

TEST_CASE("master equation conserves probability") {
    AnnealSchedule sch;
    sch.s_p = 0.45;
    sch.t_p = 2.0;
    const auto r = pause_relax_evolve(toy_triangle(4.0), sch);
    CHECK(r.t.size() == r.populations.size());
    for (const auto& p : r.populations) {
        CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
        for (double x : p) CHECK(x >= -1e-15);
    }
    // Gibbs is a fixed point.
    const std::vector<double> e{-2.0, -1.5, -1.5, 0.2};
    const auto g = gibbs_populations(e, 0.4);
    const auto after = relax(g, e, 0.4, 7.0, 10.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(after[i] - g[i]) < 1e-9);
}
