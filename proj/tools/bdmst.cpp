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

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bdmst/catalog.hpp"
#include "bdmst/io.hpp"
#include "bdmst/pipeline.hpp"
#include "bdmst/qsim.hpp"

using namespace bdmst;
namespace fs = std::filesystem;

namespace {

constexpr int kGridErrors = 1;
constexpr int kUsageErrors = 2;

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(io::parse_double(f));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

// "a:b:step" or a comma list.
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text);
    std::vector<double> parts;
    std::stringstream ss(text);
    for (std::string f; std::getline(ss, f, ':');) parts.push_back(io::parse_double(f));
    if (parts.size() != 3 || !(parts[2] > 0.0)) throw std::invalid_argument("grid must be start:stop:step");
    return inclusive_range(parts[0], parts[1], parts[2]);
}

struct InstanceArgs {
    std::string file;
    std::string label;
    int delta = 2;

    void add(CLI::App* app) {
        auto* f = app->add_option("--instance", file, "Instance JSON file");
        auto* l = app->add_option("--label", label, "Catalog label graph/weights, e.g. m4ver1/w2");
        f->excludes(l);
        app->add_option("--delta", delta, "Degree bound for --label")->capture_default_str();
    }
    ProblemInstance load() const {
        if (!file.empty()) return io::instance_from_json(io::read_file(file));
        const auto slash = label.find('/');
        if (label.empty() || slash == std::string::npos)
            throw std::invalid_argument("give --instance FILE or --label graph/weights");
        return catalog::make_instance(label.substr(0, slash), label.substr(slash + 1), delta);
    }
};

std::string file_label(const std::string& label) {
    std::string s = label;
    for (char& c : s)
        if (c == '/') c = '_';
    return s;
}

AnnealSchedule schedule_from(const std::string& path, double t_a) {
    AnnealSchedule s;
    s.t_a = t_a;
    if (!path.empty()) {
        if (!fs::exists(path)) throw QsimError("schedule file not found: " + path);
        s.table = load_schedule_csv(path);
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-degree MST on annealers: mapping, embedding, sampling, spectra and TTS reports"};
    app.set_version_flag("--version", io::kVersion);
    app.require_subcommand(1);

    // instances
    auto* inst = app.add_subcommand("instances", "Catalog instances");
    inst->require_subcommand(1);
    std::string inst_set = "ensemble", inst_out;
    int inst_delta = 2;
    std::size_t inst_size = 45;
    auto* inst_export = inst->add_subcommand("export", "Write instance JSON files");
    inst_export->add_option("--set", inst_set, "ensemble or all")->check(CLI::IsMember({"ensemble", "all"}))->capture_default_str();
    inst_export->add_option("--delta", inst_delta, "Degree bound")->capture_default_str();
    inst_export->add_option("--size", inst_size, "Ensemble size")->capture_default_str();
    inst_export->add_option("--out", inst_out, "Output directory")->required();
    auto* inst_list = inst->add_subcommand("list", "Print labels and sizes");
    inst_list->add_option("--set", inst_set, "ensemble or all")->check(CLI::IsMember({"ensemble", "all"}));
    inst_list->add_option("--delta", inst_delta, "Degree bound");

    // map
    auto* map = app.add_subcommand("map", "Build the QUBO (and Ising model) for one instance");
    InstanceArgs map_inst;
    map_inst.add(map);
    std::int64_t epsilon = 0;
    bool no_pre = false, map_ising = false;
    std::string map_out;
    map->add_option("--epsilon", epsilon, "Penalty margin over the largest weight")->capture_default_str();
    map->add_flag("--no-preprocess", no_pre, "Keep all levels 2..n");
    map->add_flag("--ising", map_ising, "Also write the scaled Ising model");
    map->add_option("--out", map_out, "Output prefix")->required();

    // embed
    auto* embed = app.add_subcommand("embed", "Find a minor embedding for one instance");
    InstanceArgs emb_inst;
    emb_inst.add(embed);
    std::string hw_spec = "chimera:16", emb_out;
    FindEmbeddingOptions emb_opts;
    embed->add_option("--hardware", hw_spec, "chimera:<m>[,<n>,<t>] or pegasus:<m>")->capture_default_str();
    embed->add_option("--seed", emb_opts.seed, "Seed")->capture_default_str();
    embed->add_option("--attempts", emb_opts.attempts, "Randomized attempts")->capture_default_str();
    embed->add_option("--out", emb_out, "Embedding JSON")->required();

    // run
    auto* run = app.add_subcommand("run", "Sweep (s_p, t_p, |J_F|) over instances; resumable");
    std::string config_path, run_output;
    int run_threads = 0;
    run->add_option("config", config_path, "YAML config")->required()->check(CLI::ExistingFile);
    run->add_option("--output", run_output, "Override the output directory");
    run->add_option("--threads", run_threads, "Override the worker count");

    // spectrum
    auto* spec = app.add_subcommand("spectrum", "Exact spectra and the pause relaxation model");
    spec->alias("qsim");
    spec->require_subcommand(1);
    std::string jf_text = "2,4,8", h_text = "0.6,-0.2,0.6", schedule_path, spec_out;
    int grid = 200, levels = 4;
    auto* gap = spec->add_subcommand("gap-trace", "Gap traces of the K3 toy for several |J_F|");
    gap->add_option("--jf", jf_text, "Chain strengths")->capture_default_str();
    gap->add_option("--grid", grid, "Interior grid points")->capture_default_str();
    gap->add_option("--k", levels, "Tracked levels")->capture_default_str();
    gap->add_option("--fields", h_text, "Logical fields of a, b, c")->capture_default_str();
    gap->add_option("--schedule", schedule_path, "Schedule CSV (s,A,B)");
    gap->add_option("--out", spec_out, "Output directory")->required();

    RelaxOptions relax_opts;
    double sp = 0.3, tp = 1.0, ta = 1.0, pause_jf = 2.0;
    std::string rates = "constant", sp_grid = "0.2:0.98:0.02";
    const auto add_relax = [&](CLI::App* c) {
        c->add_option("--temp", relax_opts.temperature, "Temperature")->capture_default_str();
        c->add_option("--gamma0", relax_opts.gamma0, "Rate scale per microsecond")->capture_default_str();
        c->add_option("--k", relax_opts.k, "Tracked levels")->capture_default_str();
        c->add_option("--steps", relax_opts.steps_per_unit_s, "Grid steps per unit s")->capture_default_str();
        c->add_option("--rates", rates, "constant or driver-squared")
            ->check(CLI::IsMember({"constant", "driver-squared"}))
            ->capture_default_str();
        c->add_option("--tp", tp, "Pause duration (microseconds)")->capture_default_str();
        c->add_option("--ta", ta, "Anneal time (microseconds)")->capture_default_str();
        c->add_option("--fields", h_text, "Logical fields of a, b, c")->capture_default_str();
        c->add_option("--schedule", schedule_path, "Schedule CSV (s,A,B)");
        c->add_option("--out", spec_out, "Output CSV")->required();
    };
    auto* pause = spec->add_subcommand("pause", "Population trajectory for one schedule");
    add_relax(pause);
    pause->add_option("--sp", sp, "Pause location; 0 for no pause")->capture_default_str();
    pause->add_option("--jf", pause_jf, "Chain strength")->capture_default_str();
    auto* scan = spec->add_subcommand("pause-scan", "Final ground-state population against s_p");
    add_relax(scan);
    scan->add_option("--jf", jf_text, "Chain strengths")->capture_default_str();
    scan->add_option("--sp-grid", sp_grid, "start:stop:step or list")->capture_default_str();

    // report
    auto* rep = app.add_subcommand("report", "Ensemble medians, bootstrap percentiles and pause comparisons");
    std::vector<std::string> result_files;
    ReportOptions rep_opts;
    std::string rep_out;
    rep->add_option("results", result_files, "Results CSV files")->required()->check(CLI::ExistingFile);
    rep->add_option("--resamples", rep_opts.resamples, "Bootstrap resamples")->capture_default_str();
    rep->add_option("--seed", rep_opts.seed, "Bootstrap seed")->capture_default_str();
    rep->add_option("--out", rep_out, "Output directory")->required();

    // import
    auto* imp = app.add_subcommand("import", "Score an external ReadSet of logical reads");
    InstanceArgs imp_inst;
    imp_inst.add(imp);
    std::string reads_path, imp_out;
    double imp_sp = 0.0;
    imp->add_option("--reads", reads_path, "ReadSet .jsonl.gz")->required()->check(CLI::ExistingFile);
    imp->add_option("--epsilon", epsilon, "Penalty margin used to build the QUBO")->capture_default_str();
    imp->add_option("--jf", pause_jf, "Chain strength used")->capture_default_str();
    imp->add_option("--ta", ta, "Anneal time")->capture_default_str();
    imp->add_option("--sp", imp_sp, "Pause location; 0 for no pause")->capture_default_str();
    imp->add_option("--tp", tp, "Pause duration")->capture_default_str();
    imp->add_option("--out", imp_out, "Results CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (inst_export->parsed() || inst_list->parsed()) {
            const auto list = inst_set == "ensemble" ? catalog::delta2_ensemble(inst_size)
                                                     : catalog::all_instances(inst_delta);
            for (const auto& i : list) {
                if (inst_list->parsed()) {
                    std::cout << i.label << " n=" << i.graph.num_vertices() << " m=" << i.graph.num_edges()
                              << " delta=" << i.degree_bound << " root=" << i.root << "\n";
                } else {
                    io::write_file_atomic((fs::path(inst_out) / (file_label(i.label) + ".json")).string(),
                                          io::instance_to_json(i));
                }
            }
            if (inst_export->parsed()) std::cout << list.size() << " instances written to " << inst_out << "\n";
        } else if (map->parsed()) {
            const auto instance = map_inst.load();
            MappingOptions m;
            m.epsilon = epsilon;
            m.preprocess = !no_pre;
            const auto qubo = build_qubo(instance, m);
            io::write_file_atomic(map_out + ".qubo.txt", io::qubo_to_text(qubo));
            io::write_file_atomic(map_out + ".qubo.json", io::qubo_registry_json(qubo));
            if (map_ising) {
                const auto scaled = scale_to_range(qubo_to_ising(qubo));
                io::write_file_atomic(map_out + ".ising.txt", io::ising_to_text(scaled.model, &qubo.registry));
            }
            const auto c = count_variables(qubo.registry);
            std::cout << instance.label << ": " << c.total << " variables (X " << c.x << ", Y " << c.y << ", Z "
                      << c.z << ", ancilla " << c.anc << "), penalty " << qubo.penalty_weight << "\n";
        } else if (embed->parsed()) {
            const auto instance = emb_inst.load();
            const auto hw = io::hardware_from_spec(hw_spec);
            const auto model = scale_to_range(qubo_to_ising(build_qubo(instance))).model;
            const auto found = find_embedding(interaction_graph(model), hw, emb_opts);
            if (!found.best) {
                std::cerr << "no embedding found in " << emb_opts.attempts << " attempts\n";
                return kGridErrors;
            }
            io::write_file_atomic(emb_out, io::embedding_to_json(*found.best, hw));
            const auto stats = embedding_stats(*found.best);
            std::cout << instance.label << ": " << stats.physical_count << " qubits, max chain " << stats.max_size
                      << "\n";
        } else if (run->parsed()) {
            auto config = load_config(config_path);
            if (!run_output.empty()) config.output = run_output;
            if (run_threads > 0) config.threads = run_threads;
            const auto report = run_experiment_grid(config, &std::cerr);
            std::cout << report.rows.size() << " result rows (" << report.computed_units << " units computed, "
                      << report.resumed_units << " resumed), " << report.errors.size() << " errors\n";
            return report.ok() ? 0 : kGridErrors;
        } else if (gap->parsed()) {
            const auto h = parse_list(h_text);
            const auto sch = schedule_from(schedule_path, 1.0);
            std::vector<double> s_grid;
            for (int i = 1; i <= grid; ++i) s_grid.push_back(static_cast<double>(i) / (grid + 1));
            const auto traces = gap_trace(toy_triangle(2.0, h), parse_list(jf_text), s_grid, levels, sch);
            for (const auto& t : traces) {
                const auto path = fs::path(spec_out) / ("trace_jf" + io::format_double(t.j_ferro) + ".csv");
                io::write_file_atomic(path.string(), io::trace_table(t).to_string());
                std::cout << "|J_F| = " << io::format_double(t.j_ferro) << ": s* = " << t.s_star()
                          << ", gap_min = " << t.gap_min() << " -> " << path.string() << "\n";
            }
        } else if (pause->parsed() || scan->parsed()) {
            relax_opts.scaling = rates == "constant" ? RateScaling::constant : RateScaling::driver_squared;
            const auto h = parse_list(h_text);
            auto sch = schedule_from(schedule_path, ta);
            if (pause->parsed()) {
                if (sp > 0.0) {
                    sch.s_p = sp;
                    sch.t_p = tp;
                }
                const auto r = pause_relax_evolve(toy_triangle(pause_jf, h), sch, relax_opts);
                io::write_file_atomic(spec_out, io::relax_table(r).to_string());
                std::cout << "p_ground = " << r.p_ground << (r.leakage_flag ? " (leakage above 1%)" : "") << "\n";
            } else {
                io::CsvTable t;
                t.comments = {std::string("bdmst ") + io::kVersion + " pause scan",
                              "T " + io::format_double(relax_opts.temperature) + " gamma0 " +
                                  io::format_double(relax_opts.gamma0) + " k " + std::to_string(relax_opts.k) +
                                  " rates " + rates + " t_p " + io::format_double(tp)};
                t.header = {"jf", "s_p", "p_ground"};
                for (double jf : parse_list(jf_text)) {
                    const auto toy = toy_triangle(jf, h);
                    sch.s_p.reset();
                    const double base = pause_relax_evolve(toy, sch, relax_opts).p_ground;
                    t.rows.push_back({io::format_double(jf), "none", io::format_double(base)});
                    double best = base, best_sp = 0.0;
                    for (double s : parse_grid(sp_grid)) {
                        sch.s_p = s;
                        sch.t_p = tp;
                        const double p = pause_relax_evolve(toy, sch, relax_opts).p_ground;
                        t.rows.push_back({io::format_double(jf), io::format_double(s), io::format_double(p)});
                        if (p > best) {
                            best = p;
                            best_sp = s;
                        }
                    }
                    std::cout << "|J_F| = " << io::format_double(jf) << ": no pause " << base << ", best s_p "
                              << best_sp << " -> " << best << "\n";
                }
                io::write_file_atomic(spec_out, t.to_string());
            }
        } else if (rep->parsed()) {
            std::vector<io::ResultRow> rows;
            for (const auto& f : result_files)
                for (auto& r : io::results_from_table(io::CsvTable::parse(io::read_file(f)))) rows.push_back(r);
            const auto report = make_report(rows, rep_opts);
            const std::vector<std::string> header{
                std::string("bdmst ") + io::kVersion,
                "bootstrap seed " + std::to_string(rep_opts.seed) + " resamples " + std::to_string(rep_opts.resamples)};
            io::write_file_atomic((fs::path(rep_out) / "summary.csv").string(),
                                  io::summary_table(report.summaries, header).to_string());
            io::write_file_atomic((fs::path(rep_out) / "comparisons.csv").string(),
                                  comparison_table(report.comparisons, rep_opts).to_string());
            std::cout << report.summaries.size() << " summary rows, " << report.comparisons.size()
                      << " pause comparisons\n";
        } else if (imp->parsed()) {
            const auto instance = imp_inst.load();
            MappingOptions m;
            m.epsilon = epsilon;
            const auto qubo = build_qubo(instance, m);
            const auto exact = solve_bdmst_exact(instance);
            if (!exact.feasible) throw MappingError("instance has no degree-bounded spanning tree");
            const auto reads = io::read_readset(reads_path);
            for (const auto& r : reads.reads)
                if (!r.chain_break() && static_cast<int>(r.spins.size()) != qubo.num_vars())
                    throw io::FormatError("reads have " + std::to_string(r.spins.size()) + " spins, the QUBO has " +
                                          std::to_string(qubo.num_vars()) + " variables");
            io::ResultRow row;
            const double p = p_success(reads, qubo, instance, exact.tree.cost);
            row.result = make_run_result(instance.label, ta, imp_sp > 0.0 ? std::optional<double>(imp_sp) : std::nullopt,
                                         imp_sp > 0.0 ? tp : 0.0, pause_jf, p);
            row.gauges = reads.meta.num_gauges;
            row.reads = reads.total_reads();
            io::write_file_atomic(imp_out, io::results_table({row}, {std::string("bdmst ") + io::kVersion +
                                                                     " imported from " + reads_path})
                                               .to_string());
            std::cout << instance.label << ": p_success = " << p << ", tts = " << row.result.tts.to_string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageErrors;
    }
    return 0;
}
