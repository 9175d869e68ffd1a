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

#include "bdmst/pipeline.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "bdmst/catalog.hpp"
#include "bdmst/random.hpp"
#include "json.hpp"

namespace bdmst {

namespace fs = std::filesystem;

namespace {

std::string join_path(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void expect_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) {
    if (!node.IsMap()) throw ConfigError("config key '" + (path.empty() ? "<root>" : path) + "': expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) throw ConfigError("config key '" + join_path(path, key) + "': unknown key");
    }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) throw ConfigError("config key '" + path + "': expected a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError("config key '" + path + "': cannot read '" + node.Scalar() + "'");
    }
}

template <class T>
void read(const YAML::Node& parent, const std::string& path, const char* key, T& out) {
    if (const auto n = parent[key]) out = scalar<T>(n, join_path(path, key));
}

std::vector<double> read_grid(const YAML::Node& node, const std::string& path) {
    if (node.IsSequence()) {
        std::vector<double> out;
        for (std::size_t i = 0; i < node.size(); ++i)
            out.push_back(scalar<double>(node[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }
    if (node.IsScalar()) return {scalar<double>(node, path)};
    expect_keys(node, path, {"start", "stop", "step"});
    for (const char* k : {"start", "stop", "step"})
        if (!node[k]) throw ConfigError("config key '" + join_path(path, k) + "': required");
    const double start = scalar<double>(node["start"], join_path(path, "start"));
    const double stop = scalar<double>(node["stop"], join_path(path, "stop"));
    const double step = scalar<double>(node["step"], join_path(path, "step"));
    if (!(step > 0.0) || stop < start) throw ConfigError("config key '" + path + "': need step > 0 and stop >= start");
    return inclusive_range(start, stop, step);
}

std::string safe_name(const std::string& label) {
    std::string out = label;
    for (char& c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '.') c = '_';
    return out;
}

std::string unit_key(const std::string& label, double jf) { return safe_name(label) + "__jf" + io::format_double(jf); }

std::string hex(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << v;
    return s.str();
}

std::string point_label(const GridPoint& p) {
    std::string s = "jf=" + io::format_double(p.j_ferro);
    if (!p.s_p) return s + " nopause";
    return s + " sp=" + io::format_double(*p.s_p) + " tp=" + io::format_double(p.t_p);
}

}  // namespace

ExperimentConfig::ExperimentConfig()
    : s_p(inclusive_range(0.2, 0.5, 0.02)), j_ferro(inclusive_range(1.0, 2.0, 0.1)) {}

std::vector<double> inclusive_range(double start, double stop, double step) {
    std::vector<double> out;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= count; ++i) out.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    return out;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void ExperimentConfig::check() const {
    if (threads < 1) throw ConfigError("config key 'threads': must be at least 1");
    if (select != "ensemble" && select != "all" && select != "labels")
        throw ConfigError("config key 'instances.select': use ensemble, all or a list of labels");
    if (select == "labels" && labels.empty()) throw ConfigError("config key 'instances.select': empty label list");
    if (delta < 2) throw ConfigError("config key 'instances.delta': must be at least 2");
    if (ensemble_size < 1) throw ConfigError("config key 'instances.size': must be positive");
    if (mapping.epsilon < 0) throw ConfigError("config key 'mapping.epsilon': must be non-negative");
    if (embedding.attempts < 1) throw ConfigError("config key 'embedding.attempts': must be positive");
    if (!(t_a > 0.0)) throw ConfigError("config key 'sweep.t_a': must be positive");
    if (j_ferro.empty()) throw ConfigError("config key 'sweep.j_ferro': grid is empty");
    for (double jf : j_ferro)
        if (!(jf > 0.0 && jf <= 2.0)) throw ConfigError("config key 'sweep.j_ferro': values must lie in (0, 2]");
    if (!no_pause && s_p.empty()) throw ConfigError("config key 'sweep.s_p': grid is empty and no_pause is off");
    for (double s : s_p)
        if (!(s > 0.0 && s < 1.0)) throw ConfigError("config key 'sweep.s_p': values must lie in (0, 1)");
    if (!s_p.empty() && t_p.empty()) throw ConfigError("config key 'sweep.t_p': grid is empty");
    for (double t : t_p)
        if (!(t >= 0.0)) throw ConfigError("config key 'sweep.t_p': values must be non-negative");
    if (sampler != "sa") throw ConfigError("config key 'sampler.name': only 'sa' is available");
    try {
        schedule.check();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config key 'sampler': ") + e.what());
    }
    if (reads < 1) throw ConfigError("config key 'reads': must be at least 1");
    if (gauges < 1) throw ConfigError("config key 'gauges': must be at least 1");
    if (reads % static_cast<std::uint64_t>(gauges) != 0)
        throw ConfigError("config key 'reads': must be a multiple of gauges");
    try {
        io::hardware_from_spec(hardware);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config key 'hardware': ") + e.what());
    }
    if (select == "labels")
        for (const auto& l : labels)
            if (l.find('/') == std::string::npos)
                throw ConfigError("config key 'instances.select': label '" + l + "' is not graph/weights");
}

std::string ExperimentConfig::canonical() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["select"] = select;
    j["labels"] = labels;
    j["ensemble_size"] = ensemble_size;
    j["delta"] = delta;
    j["root"] = root ? *root : -1;
    j["epsilon"] = mapping.epsilon;
    j["preprocess"] = mapping.preprocess;
    j["hardware"] = hardware;
    j["embedding"] = {embedding.attempts, embedding.seed, embedding.max_rounds, embedding.tighten_rounds,
                      embedding.penalty, embedding.penalty_growth, embedding.patience};
    j["t_a"] = t_a;
    j["no_pause"] = no_pause;
    j["s_p"] = s_p;
    j["t_p"] = t_p;
    j["j_ferro"] = j_ferro;
    j["sampler"] = {sampler, schedule.sweeps, schedule.beta_start, schedule.beta_end};
    j["reads"] = reads;
    j["gauges"] = gauges;
    return j.dump();
}

ExperimentConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config is not valid YAML: ") + e.what());
    }
    ExperimentConfig c;
    if (root.IsNull()) return c;
    expect_keys(root, "", {"seed", "output", "threads", "instances", "mapping", "hardware", "embedding", "sweep",
                           "sampler", "reads", "gauges", "save_reads"});
    read(root, "", "seed", c.seed);
    read(root, "", "output", c.output);
    read(root, "", "threads", c.threads);
    read(root, "", "hardware", c.hardware);
    read(root, "", "reads", c.reads);
    read(root, "", "gauges", c.gauges);
    read(root, "", "save_reads", c.save_reads);
    if (const auto n = root["instances"]) {
        expect_keys(n, "instances", {"select", "size", "delta", "root"});
        if (const auto s = n["select"]) {
            if (s.IsSequence()) {
                c.select = "labels";
                for (std::size_t i = 0; i < s.size(); ++i)
                    c.labels.push_back(scalar<std::string>(s[i], "instances.select[" + std::to_string(i) + "]"));
            } else {
                c.select = scalar<std::string>(s, "instances.select");
                if (c.select.find('/') != std::string::npos) {
                    c.labels = {c.select};
                    c.select = "labels";
                }
            }
        }
        read(n, "instances", "size", c.ensemble_size);
        read(n, "instances", "delta", c.delta);
        if (const auto r = n["root"]) {
            const auto text = scalar<std::string>(r, "instances.root");
            if (text != "max_degree") c.root = scalar<int>(r, "instances.root");
        }
    }
    if (const auto n = root["mapping"]) {
        expect_keys(n, "mapping", {"epsilon", "preprocess"});
        read(n, "mapping", "epsilon", c.mapping.epsilon);
        read(n, "mapping", "preprocess", c.mapping.preprocess);
    }
    if (const auto n = root["embedding"]) {
        expect_keys(n, "embedding", {"attempts", "seed", "max_rounds", "tighten_rounds", "patience"});
        read(n, "embedding", "attempts", c.embedding.attempts);
        read(n, "embedding", "seed", c.embedding.seed);
        read(n, "embedding", "max_rounds", c.embedding.max_rounds);
        read(n, "embedding", "tighten_rounds", c.embedding.tighten_rounds);
        read(n, "embedding", "patience", c.embedding.patience);
    }
    if (const auto n = root["sweep"]) {
        expect_keys(n, "sweep", {"t_a", "no_pause", "s_p", "t_p", "j_ferro"});
        read(n, "sweep", "t_a", c.t_a);
        read(n, "sweep", "no_pause", c.no_pause);
        if (n["s_p"]) c.s_p = n["s_p"].IsNull() ? std::vector<double>{} : read_grid(n["s_p"], "sweep.s_p");
        if (n["t_p"]) c.t_p = read_grid(n["t_p"], "sweep.t_p");
        if (n["j_ferro"]) c.j_ferro = read_grid(n["j_ferro"], "sweep.j_ferro");
    }
    if (const auto n = root["sampler"]) {
        expect_keys(n, "sampler", {"name", "sweeps", "beta_start", "beta_end"});
        read(n, "sampler", "name", c.sampler);
        read(n, "sampler", "sweeps", c.schedule.sweeps);
        read(n, "sampler", "beta_start", c.schedule.beta_start);
        read(n, "sampler", "beta_end", c.schedule.beta_end);
    }
    c.check();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = io::read_file(path);
    } catch (const io::FormatError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(text);
}

std::vector<ProblemInstance> select_instances(const ExperimentConfig& config) {
    std::vector<ProblemInstance> out;
    if (config.select == "ensemble") {
        if (config.delta != 2) throw ConfigError("config key 'instances.select': the ensemble is defined for delta 2");
        out = catalog::delta2_ensemble(config.ensemble_size);
    } else if (config.select == "all") {
        out = catalog::all_instances(config.delta);
    } else {
        for (const auto& label : config.labels) {
            const auto slash = label.find('/');
            try {
                out.push_back(catalog::make_instance(label.substr(0, slash), label.substr(slash + 1), config.delta,
                                                     config.root));
            } catch (const std::exception& e) {
                throw ConfigError("config key 'instances.select': " + label + ": " + e.what());
            }
        }
        return out;
    }
    if (config.root)
        for (auto& inst : out) {
            inst.root = *config.root;
            inst.check();
        }
    return out;
}

std::string GridPoint::key() const { return point_label(*this); }

std::vector<GridPoint> pause_points(const ExperimentConfig& config, double j_ferro) {
    std::vector<GridPoint> out;
    if (config.no_pause) out.push_back({std::nullopt, 0.0, j_ferro});
    for (double s : config.s_p)
        for (double t : config.t_p) out.push_back({s, t, j_ferro});
    return out;
}

PreparedInstance prepare_instance(const ProblemInstance& instance, const ExperimentConfig& config,
                                  const HardwareGraph& hardware) {
    PreparedInstance p;
    p.instance = instance;
    p.qubo = build_qubo(instance, config.mapping);
    p.scaled = scale_to_range(qubo_to_ising(p.qubo));
    const auto exact = solve_bdmst_exact(instance);
    if (!exact.feasible) throw MappingError("no spanning tree meets the degree bound");
    p.optimum = exact.tree.cost;
    FindEmbeddingOptions opts = config.embedding;
    opts.seed = derive_seed(config.embedding.seed, fnv1a(instance.label));
    const auto found = find_embedding(interaction_graph(p.scaled.model), hardware, opts);
    if (!found.best) throw EmbeddingError("no embedding found in " + std::to_string(opts.attempts) + " attempts");
    p.embedding = *found.best;
    return p;
}

ReadSet sample_instance(const PreparedInstance& prepared, const HardwareGraph& hardware, double j_ferro,
                        const ExperimentConfig& config) {
    const auto embedded = embed_ising(prepared.scaled.model, prepared.embedding, hardware, j_ferro);
    ExperimentOptions opts;
    opts.num_gauges = config.gauges;
    opts.reads_per_gauge = config.reads / static_cast<std::uint64_t>(config.gauges);
    opts.seed = derive_seed(config.seed, fnv1a(prepared.instance.label),
                            static_cast<std::uint64_t>(std::llround(j_ferro * 1000.0)));
    ReadSet rs = run_experiment(embedded, make_sa_sampler(config.schedule), opts);
    rs.meta.label = prepared.instance.label;
    return rs;
}

io::ResultRow result_row(const PreparedInstance& prepared, const ReadSet& reads, const GridPoint& point,
                         const ExperimentConfig& config) {
    io::ResultRow row;
    const double p = p_success(reads, prepared.qubo, prepared.instance, prepared.optimum);
    row.result = make_run_result(prepared.instance.label, config.t_a, point.s_p, point.s_p ? point.t_p : 0.0,
                                 point.j_ferro, p);
    row.gauges = config.gauges;
    row.reads = reads.total_reads();
    return row;
}

RunReport run_experiment_grid(const ExperimentConfig& config, std::ostream* log) {
    config.check();
    const auto hardware = io::hardware_from_spec(config.hardware);
    const auto instances = select_instances(config);
    const fs::path out_dir(config.output);
    fs::create_directories(out_dir / "units");
    const std::string config_hash = hex(fnv1a(config.canonical()));

    const fs::path manifest_path = out_dir / "manifest.json";
    std::set<std::string> done;
    if (fs::exists(manifest_path)) {
        const auto m = nlohmann::json::parse(io::read_file(manifest_path.string()));
        if (m.value("config_hash", std::string{}) != config_hash)
            throw ConfigError("output directory " + config.output + " holds a run with a different config");
        for (const auto& k : m.at("units")) done.insert(k.get<std::string>());
    }
    std::mutex mutex;
    const auto record = [&](const std::string& key) {
        std::lock_guard lock(mutex);
        done.insert(key);
        nlohmann::json m;
        m["version"] = io::kVersion;
        m["config_hash"] = config_hash;
        m["units"] = std::vector<std::string>(done.begin(), done.end());
        io::write_file_atomic(manifest_path.string(), m.dump(2) + "\n");
    };

    RunReport report;
    std::map<std::pair<std::size_t, std::size_t>, std::string> errors;
    std::atomic<std::size_t> next{0};
    std::atomic<int> computed{0}, resumed{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
            const auto& inst = instances[i];
            std::optional<PreparedInstance> prepared;
            for (std::size_t j = 0; j < config.j_ferro.size(); ++j) {
                const double jf = config.j_ferro[j];
                const std::string key = unit_key(inst.label, jf);
                {
                    std::lock_guard lock(mutex);
                    if (done.contains(key) && fs::exists(out_dir / "units" / (key + ".csv"))) {
                        ++resumed;
                        continue;
                    }
                }
                try {
                    const auto start = std::chrono::steady_clock::now();
                    if (!prepared) prepared = prepare_instance(inst, config, hardware);
                    const ReadSet reads = sample_instance(*prepared, hardware, jf, config);
                    std::vector<io::ResultRow> rows;
                    for (const auto& point : pause_points(config, jf))
                        rows.push_back(result_row(*prepared, reads, point, config));
                    if (config.save_reads)
                        io::write_readset((out_dir / "reads" / (key + ".jsonl.gz")).string(), reads);
                    io::write_file_atomic((out_dir / "units" / (key + ".csv")).string(),
                                          io::results_table(rows).to_string());
                    record(key);
                    ++computed;
                    const double secs =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                    if (log) {
                        std::lock_guard lock(mutex);
                        *log << key << " p_success=" << io::format_double(rows.front().result.p_success)
                             << " wall=" << secs << "s\n";
                    }
                } catch (const std::exception& e) {
                    std::lock_guard lock(mutex);
                    errors[{i, j}] = inst.label + "," + io::format_double(jf) + "," + e.what();
                    if (log) *log << key << " FAILED: " << e.what() << "\n";
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < config.threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    report.computed_units = computed;
    report.resumed_units = resumed;

    for (const auto& inst : instances)
        for (double jf : config.j_ferro) {
            const fs::path unit = out_dir / "units" / (unit_key(inst.label, jf) + ".csv");
            if (!fs::exists(unit)) continue;
            for (auto& r : io::results_from_table(io::CsvTable::parse(io::read_file(unit.string()))))
                report.rows.push_back(std::move(r));
        }
    for (const auto& [pos, msg] : errors) report.errors.push_back(msg);

    const std::vector<std::string> provenance{
        std::string("bdmst ") + io::kVersion,
        "config_hash " + config_hash,
        "seed " + std::to_string(config.seed),
        "hardware " + hardware.name(),
        "sampler sa sweeps=" + std::to_string(config.schedule.sweeps) +
            " beta_start=" + io::format_double(config.schedule.beta_start) +
            " beta_end=" + io::format_double(config.schedule.beta_end),
        "t_tot = t_a + t_p (microseconds); sampler wall time is not part of TTS"};
    io::write_file_atomic((out_dir / "results.csv").string(), io::results_table(report.rows, provenance).to_string());
    io::CsvTable err;
    err.header = {"instance", "jf", "message"};
    for (const auto& e : report.errors) {
        const auto a = e.find(','), b = e.find(',', a + 1);
        err.rows.push_back({e.substr(0, a), e.substr(a + 1, b - a - 1), e.substr(b + 1)});
    }
    io::write_file_atomic((out_dir / "errors.csv").string(), err.to_string());
    return report;
}

Report make_report(const std::vector<io::ResultRow>& rows, const ReportOptions& options) {
    struct PointOrder {
        bool operator()(const GridPoint& a, const GridPoint& b) const {
            const auto key = [](const GridPoint& p) {
                return std::tuple(p.j_ferro, p.s_p.has_value(), p.s_p.value_or(0.0), p.t_p);
            };
            return key(a) < key(b);
        }
    };
    std::map<GridPoint, std::vector<const io::ResultRow*>, PointOrder> groups;
    for (const auto& r : rows) {
        const auto& x = r.result;
        groups[GridPoint{x.s_p, x.s_p ? x.t_p : 0.0, x.j_ferro}].push_back(&r);
    }
    Report out;
    for (const auto& [point, members] : groups) {
        std::vector<ExtendedReal> t, p;
        for (const auto* m : members) {
            t.push_back(m->result.tts);
            p.push_back(m->result.p_success);
        }
        out.summaries.push_back(bootstrap_percentiles(t, options.resamples, options.seed, "tts " + point.key()));
        out.summaries.push_back(
            bootstrap_percentiles(p, options.resamples, options.seed, "p_success " + point.key()));
    }
    for (const auto& [point, members] : groups) {
        if (!point.s_p) continue;
        const auto base = groups.find(GridPoint{std::nullopt, 0.0, point.j_ferro});
        if (base == groups.end()) continue;
        std::map<std::string, ExtendedReal> baseline;
        for (const auto* m : base->second) baseline[m->result.instance] = m->result.tts;
        std::vector<ExtendedReal> nopause, pause, deltas, ratios;
        ComparisonRow c;
        c.point = point;
        for (const auto* m : members) {
            const auto it = baseline.find(m->result.instance);
            if (it == baseline.end()) continue;
            nopause.push_back(it->second);
            pause.push_back(m->result.tts);
            const auto d = delta_tts(it->second, m->result.tts);
            deltas.push_back(d.delta);
            ratios.push_back(d.ratio);
            c.pos_inf += d.delta.is_pos_inf();
            c.neg_inf += d.delta.is_neg_inf();
        }
        if (deltas.empty()) continue;
        c.instances = deltas.size();
        c.difference_of_medians = difference_of_medians(nopause, pause);
        c.median_of_differences = median(deltas);
        c.median_ratio = median(ratios);
        out.comparisons.push_back(c);
        out.summaries.push_back(
            bootstrap_percentiles(deltas, options.resamples, options.seed, "delta_tts " + point.key()));
        out.summaries.push_back(
            bootstrap_percentiles(ratios, options.resamples, options.seed, "delta_tts_ratio " + point.key()));
    }
    return out;
}

io::CsvTable comparison_table(const std::vector<ComparisonRow>& rows, const ReportOptions& options) {
    io::CsvTable t;
    t.comments = {std::string("bdmst ") + io::kVersion, "bootstrap seed " + std::to_string(options.seed) +
                                                            " resamples " + std::to_string(options.resamples),
                  "delta = TTS(no pause) - TTS(pause); positive means the pause helped"};
    t.header = {"jf",          "s_p",    "t_p",    "instances",   "difference_of_medians", "median_of_differences",
                "median_ratio", "pos_inf", "neg_inf"};
    for (const auto& c : rows)
        t.rows.push_back({io::format_double(c.point.j_ferro), io::format_double(*c.point.s_p),
                          io::format_double(c.point.t_p), std::to_string(c.instances),
                          c.difference_of_medians.to_string(), c.median_of_differences.to_string(),
                          c.median_ratio.to_string(), std::to_string(c.pos_inf), std::to_string(c.neg_inf)});
    return t;
}

}  // namespace bdmst
