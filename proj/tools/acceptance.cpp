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

// Acceptance checks. Usage: bdmst_acceptance [criterion ...]; no arguments runs all ten.
// Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bdmst/catalog.hpp"
#include "bdmst/embedding.hpp"
#include "bdmst/hardware.hpp"
#include "bdmst/ising.hpp"
#include "bdmst/metrics.hpp"
#include "bdmst/pipeline.hpp"
#include "bdmst/qsim.hpp"
#include "bdmst/qubo.hpp"
#include "bdmst/samplers.hpp"

using namespace bdmst;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [FAILED: " << what << "]";
        }
    }
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
    return out;
}

// 1. QUBO minimum equals the oracle and every minimizer is an optimal tree.
void mapping_correctness(Outcome& o) {
    // The six connected graphs on four vertices.
    const std::vector<std::vector<std::pair<int, int>>> shapes{
        {{1, 2}, {2, 3}, {3, 4}},                                  // path
        {{1, 2}, {1, 3}, {1, 4}},                                  // star
        {{1, 2}, {2, 3}, {3, 4}, {1, 4}},                          // cycle
        {{1, 2}, {2, 3}, {1, 3}, {3, 4}},                          // paw
        {{1, 2}, {2, 3}, {3, 4}, {1, 4}, {1, 3}},                  // diamond
        {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}}};         // K4
    const std::vector<std::vector<int>> weight_sets{{1, 2, 3, 4, 5, 6}, {3, 1, 2, 2, 1, 3}, {5, 5, 1, 4, 2, 6}};
    int cases = 0, skipped = 0, minimizers = 0, bad = 0;
    for (const auto& shape : shapes)
        for (const auto& ws : weight_sets)
            for (int delta : {2, 3})
                for (int root = 0; root < 4; ++root) {
                    ProblemInstance inst;
                    inst.graph = Graph::from_one_based(4, shape);
                    inst.weights.assign(ws.begin(), ws.begin() + static_cast<long>(shape.size()));
                    inst.degree_bound = delta;
                    inst.root = root;
                    inst.label = "n4";
                    const auto oracle = solve_bdmst_exact(inst);
                    if (!oracle.feasible) continue;
                    const Qubo q = build_qubo(inst, {.epsilon = 1});
                    if (q.num_vars() > 26) {
                        ++skipped;
                        continue;
                    }
                    ++cases;
                    const auto best = brute_force_minimum(q);
                    if (best.energy != oracle.tree.cost) ++bad;
                    for (auto mask : best.minimizers) {
                        ++minimizers;
                        const auto d = decode(q, inst, mask_to_bits(mask, q.num_vars()));
                        if (!d.valid() || !validate_tree(inst.graph, d.tree->edges, delta) ||
                            d.tree->cost != oracle.tree.cost)
                            ++bad;
                    }
                }
    o.detail << cases << " instances with <= 26 variables (" << skipped << " larger skipped), " << minimizers
             << " minimizers";
    o.require(cases > 0, "no instance small enough");
    o.require(bad == 0, std::to_string(bad) + " mismatches");

    // The smallest catalog instance, above the 26-variable line.
    const auto inst = catalog::make_instance("m4ver1", "w2", 2);
    const Qubo q = build_qubo(inst, {.epsilon = 1});
    const auto best = brute_force_minimum(q);
    const auto oracle = solve_bdmst_exact(inst);
    bool all_valid = best.energy == oracle.tree.cost;
    for (auto mask : best.minimizers) {
        const auto d = decode(q, inst, mask_to_bits(mask, q.num_vars()));
        all_valid = all_valid && d.valid() && d.tree->cost == oracle.tree.cost;
    }
    o.detail << "; catalog m4ver1/w2 (" << q.num_vars() << " variables): min " << best.energy << " vs oracle "
             << oracle.tree.cost << ", " << best.num_minimizers << " minimizer(s)";
    o.require(all_valid, "m4ver1/w2 minimum or minimizers");
}

// 2. Variable counts.
void variable_counts(Outcome& o) {
    const auto k5 = catalog::make_instance("m10ver1", "w2", 3);
    const int pre = count_variables(k5).total;
    const int raw = count_variables(k5, {.preprocess = false}).total;
    const int k5d2 = count_variables(catalog::make_instance("m10ver1", "w2", 2)).total;
    o.detail << "K5 Delta=3: preprocessed " << pre << " (want 74), unpreprocessed " << raw
             << " (want 86..100); K5 Delta=2 preprocessed " << k5d2;
    o.require(pre == 74, "K5 Delta=3 preprocessed count");
    o.require(raw >= 86 && raw <= 100, "K5 Delta=3 unpreprocessed count");

    int ok = 0, total = 0;
    for (const auto& entry : catalog::graphs()) {
        ++total;
        auto inst = catalog::make_instance(entry.label, catalog::weight_lists().front().label, 3);
        const int m = inst.graph.num_edges();
        const int dr = inst.graph.degree(inst.root);
        const auto c = count_variables(inst, {.allow_infeasible = true});
        if (c.x == 2 * m - dr) ++ok;
    }
    o.detail << "; X = 2m - d_r on " << ok << "/" << total << " graphs";
    o.require(ok == total && total == 22, "X counts");
}

// 3. Ancilla penalty, both as written and as built by the mapper.
void ancilla_penalty(Outcome& o) {
    int ok = 0;
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y)
            for (int a = 0; a <= 1; ++a) {
                const int f = 3 * a + x * y - 2 * a * x - 2 * a * y;
                if (f >= 0 && (f == 0) == (a == x * y)) ++ok;
            }
    // The mapper's consistency group with the parent at level l-1 (y' = 1)
    // reduces to f on each (x, y, a) triple; check one built ancilla.
    const auto inst = catalog::make_instance("m5ver1", "w2", 2);
    const auto terms = build_terms(inst);
    int anc_ok = 0, anc_seen = 0;
    for (int i = 0; i < terms.registry.size(); ++i) {
        const VarId id = terms.registry.at(i);
        if (id.kind != VarKind::Anc) continue;
        ++anc_seen;
        const int xi = *terms.registry.find(VarId::x(id.a, id.b));
        const int yi = *terms.registry.find(VarId::y(id.b, id.c));
        const int ai = i;
        const int ypi = *terms.registry.find(VarId::y(id.a, id.c - 1));
        const auto coeff = [&](int p, int q) -> std::int64_t {
            const auto it = terms.consistency.quadratic.find({std::min(p, q), std::max(p, q)});
            return it == terms.consistency.quadratic.end() ? 0 : it->second;
        };
        const auto lin = terms.consistency.linear.count(ai) ? terms.consistency.linear.at(ai) : 0;
        // 4a - a y' + x y - 2 a x - 2 a y: with y' = 1 this is 3a + xy - 2ax - 2ay.
        if (lin + coeff(ai, ypi) == 3 && coeff(xi, yi) == 1 && coeff(ai, xi) == -2 && coeff(ai, yi) == -2) ++anc_ok;
    }
    o.detail << ok << "/8 assignments satisfy f >= 0 and f = 0 iff a = xy; mapper ancillas on m5ver1/w2: " << anc_ok
             << "/" << anc_seen;
    o.require(ok == 8, "penalty table");
    o.require(anc_seen > 0 && anc_ok == anc_seen, "mapper ancilla terms");
}

IsingModel random_model(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    IsingModel m(n);
    for (auto& h : m.h) h = u(rng);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (rng() % 2) m.add_coupling(a, b, u(rng));
    return m;
}

std::vector<double> spectrum(const IsingModel& m) {
    std::vector<double> e;
    for_each_configuration(m, [&](std::uint64_t, double energy) { e.push_back(energy); });
    std::sort(e.begin(), e.end());
    return e;
}

// 4. Gauge invariance.
void gauge_invariance(Outcome& o) {
    std::mt19937_64 rng(4);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto m = random_model(rng, 10);
        const auto a = spectrum(m);
        const auto b = spectrum(gauge_transform(m, random_gauge(10, rng())));
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    const auto hw = chimera_graph(2);
    int equal = 0, cases = 0;
    while (cases < 20) {
        std::vector<Edge> edges;
        for (int a = 0; a < 6; ++a)
            for (int b = a + 1; b < 6; ++b)
                if (rng() % 2) edges.emplace_back(a, b);
        if (edges.empty()) continue;
        const Graph g(6, edges);
        const auto found = find_embedding(g, hw, {.attempts = 2, .seed = rng()});
        if (!found.best) continue;
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        IsingModel m(6);
        for (auto& h : m.h) h = u(rng);
        for (auto [a, b] : edges) m.add_coupling(a, b, u(rng));
        const auto gauge = random_gauge(6, rng());
        const auto e = embed_ising(m, *found.best, hw, 1.6);
        ++cases;
        if (partial_gauge(e, gauge).ising == embed_ising(gauge_transform(m, gauge), *found.best, hw, 1.6).ising)
            ++equal;
    }
    o.detail << "50 random 10-spin gauges: max spectrum difference " << worst << "; partial gauge vs embed(gauge) "
             << equal << "/" << cases << " identical";
    o.require(worst <= 1e-12, "spectrum difference");
    o.require(equal == cases, "partial gauge");
}

std::vector<SpectrumTrace> toy_traces() {
    return gap_trace(toy_triangle(2.0), {2.0, 4.0, 8.0}, linspace(0.005, 0.995, 199), 4);
}

// 5. Gap shift with chain strength.
void gap_shift(Outcome& o) {
    const auto t = toy_traces();
    for (const auto& x : t)
        o.detail << "|J_F|=" << x.j_ferro << ": s*=" << x.s_star() << " gap_min=" << x.gap_min() << "; ";
    o.require(t[2].s_star() < t[1].s_star() && t[1].s_star() < t[0].s_star(), "s* ordering");
    o.require(t[2].gap_min() < t[1].gap_min() && t[1].gap_min() < t[0].gap_min(), "gap_min ordering");
}

// 6. First-order perturbation.
void perturbation(Outcome& o) {
    const AnnealSchedule sch;
    const auto toy = toy_triangle(4.0);
    const double jf = 4.0;
    for (double s : {0.3, 0.5, 0.7}) {
        const auto base = spectrum_trace(toy, sch, {s}, 2);
        double err[2];
        for (int i = 0; i < 2; ++i) {
            const double lambda = i == 0 ? 0.08 : 0.04;
            const auto exact = spectrum_trace(with_chain_strength(toy, jf - lambda), sch, {s}, 2);
            err[i] = std::abs(exact.gap[0] - perturbation_gap_shift(base, lambda)[0]);
        }
        const double ratio = err[0] / err[1];
        o.detail << "s=" << s << " gap error ratio " << ratio << "; ";
        o.require(ratio >= 3.0 && ratio <= 5.0, "gap ratio at s=" + std::to_string(s));
    }
    int levels = 0, rises = 0, violations = 0;
    double worst_level_ratio = 4.0;
    for (double s : linspace(0.1, 0.9, 9)) {
        const auto big = energy_shift_check(toy, sch, s, 0.08, 4);
        const auto small = energy_shift_check(toy, sch, s, 0.04, 4);
        for (std::size_t i = 0; i < big.size(); ++i) {
            if (big[i].near_degenerate) continue;
            ++levels;
            const double r = std::abs(big[i].exact - big[i].predicted) / std::abs(small[i].exact - small[i].predicted);
            if (std::abs(r - 4.0) > std::abs(worst_level_ratio - 4.0)) worst_level_ratio = r;
            if (big[i].p_logical > 0.5) ++rises;
            if (big[i].rise_violated || small[i].rise_violated) ++violations;
        }
    }
    o.detail << "levels: " << levels << " non-degenerate, worst residual ratio " << worst_level_ratio << ", " << rises
             << " with P_L > 1/2, " << violations << " failed to rise";
    o.require(worst_level_ratio >= 3.0 && worst_level_ratio <= 5.0, "level residual ratio");
    o.require(violations == 0, "level rise");
}

struct Scan {
    double base = 0.0;
    double best_sp = 0.0;
    double best = 0.0;
    double best_after_gap = 0.0;
};

Scan pause_scan(double jf, double s_star, const RelaxOptions& opt) {
    const auto toy = toy_triangle(jf);
    AnnealSchedule sch;
    Scan out;
    out.base = pause_relax_evolve(toy, sch, opt).p_ground;
    out.best = -1.0;
    out.best_after_gap = -1.0;
    for (int i = 0; i <= 39; ++i) {
        const double sp = std::round((0.20 + 0.02 * i) * 100.0) / 100.0;
        sch.s_p = sp;
        sch.t_p = 1.0;
        const double p = pause_relax_evolve(toy, sch, opt).p_ground;
        if (p > out.best) {
            out.best = p;
            out.best_sp = sp;
        }
        if (sp > s_star) out.best_after_gap = std::max(out.best_after_gap, p);
    }
    return out;
}

// 7. Pause model.
void pause_model(Outcome& o) {
    RelaxOptions opt;
    AnnealSchedule sch;
    sch.s_p = 0.5;
    sch.t_p = 50.0;
    const auto hot = pause_relax_evolve(toy_triangle(2.0), sch, opt);
    const double kl = kl_divergence(hot.pause_populations, gibbs_populations(hot.pause_energies, opt.temperature));
    o.detail << "long pause KL " << kl << "; T=" << opt.temperature << ": ";
    o.require(kl < 1e-6, "Gibbs stationarity");

    const auto traces = gap_trace(toy_triangle(2.0), {2.0, 8.0}, linspace(0.005, 0.995, 199), 2);
    Scan scans[2];
    for (int i = 0; i < 2; ++i) {
        scans[i] = pause_scan(traces[i].j_ferro, traces[i].s_star(), opt);
        o.detail << "|J_F|=" << traces[i].j_ferro << " no pause " << scans[i].base << ", best after s*="
                 << traces[i].s_star() << " " << scans[i].best_after_gap << ", argmax s_p " << scans[i].best_sp
                 << "; ";
        o.require(scans[i].best_after_gap > scans[i].base, "pause gain at |J_F|=" + std::to_string(traces[i].j_ferro));
    }
    o.require(scans[1].best_sp <= scans[0].best_sp, "argmax ordering");

    opt.scaling = RateScaling::driver_squared;
    o.detail << "driver-squared rates: argmax s_p " << pause_scan(2.0, traces[0].s_star(), opt).best_sp << " / "
             << pause_scan(8.0, traces[1].s_star(), opt).best_sp << " at |J_F| = 2 / 8";
}

// 8. Metrics.
void metrics_checks(Outcome& o) {
    const auto inf = ExtendedReal::infinity();
    o.require(tts(0.99, 3.0).value() == 3.0, "tts(0.99, t) = t");
    o.require(tts(0.0, 1.0).is_pos_inf(), "tts(0) = inf");
    const double half = tts(0.5, 2.0).value();
    o.require(std::abs(half - 13.2877) <= 1e-3, "tts(0.5, 2)");
    o.detail << "tts(0.5, 2us) = " << half;

    const auto both = delta_tts(inf, inf);
    const auto gained = delta_tts(inf, 100.0);
    const auto lost = delta_tts(100.0, inf);
    const auto finite = delta_tts(200.0, 100.0);
    int rules = 0;
    rules += both.delta == ExtendedReal(0.0);
    rules += gained.delta.is_pos_inf() && gained.ratio == ExtendedReal(1.0);
    rules += lost.delta.is_neg_inf() && lost.ratio.is_neg_inf();
    rules += finite.delta == ExtendedReal(100.0) && finite.ratio == ExtendedReal(0.5);
    o.detail << "; infinity rules " << rules << "/4";
    o.require(rules == 4, "infinity rules");

    std::vector<ExtendedReal> ensemble;
    std::mt19937_64 rng(8);
    std::exponential_distribution<double> e(0.1);
    for (int i = 0; i < 44; ++i) ensemble.push_back(e(rng));
    ensemble.push_back(inf);
    const auto a = bootstrap_percentiles(ensemble, 2000, 3);
    const auto b = bootstrap_percentiles(ensemble, 2000, 3);
    o.detail << "; bootstrap p35 " << a.p35.to_string() << " p50 " << a.median.to_string() << " p65 "
             << a.p65.to_string();
    o.require(a.p35 <= a.median && a.median <= a.p65, "percentile order");
    o.require(a.p35 == b.p35 && a.median == b.median && a.p65 == b.p65, "bootstrap determinism");
}

// 9. End to end on the Delta=2 ensemble.
void end_to_end(Outcome& o) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig config;
    config.seed = 9;
    config.reads = 50000;
    config.gauges = 100;
    config.embedding.attempts = 4;
    const double jf = 2.0;
    const auto hw = io::hardware_from_spec(config.hardware);
    const auto instances = catalog::delta2_ensemble(45);
    int solved = 0, claimed = 0, uncertified = 0, errors = 0;
    std::ostringstream solved_labels;
    for (const auto& inst : instances) {
        try {
            const auto prepared = prepare_instance(inst, config, hw);
            const auto reads = sample_instance(prepared, hw, jf, config);
            const auto oracle = solve_bdmst_exact(inst);
            std::uint64_t hits = 0;
            for (const auto& r : reads.reads) {
                if (r.chain_break()) continue;
                const auto d = decode(prepared.qubo, inst, spins_to_bits(r.spins));
                if (!d.valid() || d.tree->cost != prepared.optimum) continue;
                claimed += 1;
                if (!validate_tree(inst.graph, d.tree->edges, inst.degree_bound) ||
                    tree_cost(inst, d.tree->edges) != oracle.tree.cost)
                    ++uncertified;
                hits += r.multiplicity;
            }
            const double p = p_success(reads, prepared.qubo, inst, oracle.tree.cost);
            if (p > 0.0) {
                ++solved;
                solved_labels << " " << inst.label;
            }
            if ((hits > 0) != (p > 0.0)) ++uncertified;
            std::cerr << "  " << inst.label << " p_success=" << p << "\n";
        } catch (const std::exception& e) {
            ++errors;
            std::cerr << "  " << inst.label << " error: " << e.what() << "\n";
        }
    }
    const double minutes =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / 60.0;
    o.detail << "SA 1000 sweeps, beta 0.1->10, |J_F|=" << jf << ", 100 gauges x 500 reads: solved " << solved << "/"
             << instances.size() << " (need " << (instances.size() * 9 + 9) / 10 << "); " << claimed
             << " distinct optimal reads, " << uncertified << " uncertified; " << errors << " errors; wall "
             << minutes << " min; solved:" << solved_labels.str();
    o.require(uncertified == 0, "certification");
    o.require(errors == 0, "pipeline errors");
    o.require(solved * 10 >= static_cast<int>(instances.size()) * 9, "solved fraction");
}

// 10. Chain-break census on the toy.
void chain_census(Outcome& o) {
    std::vector<double> fractions;
    for (double jf : {0.5, 1.0, 2.0}) {
        const auto e = toy_triangle(jf, {0.0, 0.0, 0.0});
        const auto probe = low_energy_census(e, 0.0);
        const auto full = low_energy_census(e, 1e9);
        const double window = 0.1 * (full.max_energy - probe.ground_energy);
        const auto c = low_energy_census(e, window);
        fractions.push_back(c.fraction());
        o.detail << "|J_F|=" << jf << ": " << c.broken << "/" << c.states << " broken; ";
    }
    o.detail << "h = 0, window 10% of the spectral width";
    o.require(fractions[0] > fractions[1] && fractions[1] > fractions[2], "strict decrease");
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
        {"mapping correctness", mapping_correctness},
        {"variable counts", variable_counts},
        {"ancilla penalty", ancilla_penalty},
        {"gauge invariance", gauge_invariance},
        {"gap shift", gap_shift},
        {"perturbation theory", perturbation},
        {"pause model", pause_model},
        {"metrics", metrics_checks},
        {"end to end", end_to_end},
        {"chain-break census", chain_census}};

    std::vector<int> chosen;
    for (int i = 1; i < argc; ++i) chosen.push_back(std::stoi(argv[i]));
    if (chosen.empty())
        for (int i = 1; i <= 10; ++i) chosen.push_back(i);

    int failed = 0;
    for (int id : chosen) {
        if (id < 1 || id > 10) {
            std::cerr << "no criterion " << id << "\n";
            return 2;
        }
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[id - 1].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("CRITERION %d %s (%s, %.1f s): %s\n", id, o.pass ? "PASS" : "FAIL", criteria[id - 1].first, secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
