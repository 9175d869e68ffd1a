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

#include "bdmst/io.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace bdmst::io {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::string> words(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    for (std::string w; ss >> w;) out.push_back(w);
    return out;
}

long long parse_int(const std::string& text, const std::string& what) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
        throw FormatError("bad integer for " + what + ": '" + text + "'");
    return v;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(what + ": " + e.what());
    }
}

template <class T>
T field(const json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) throw FormatError(what + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(what + ": key '" + key + "': " + e.what());
    }
}

VarKind kind_from_letter(const std::string& s) {
    if (s == "X") return VarKind::X;
    if (s == "Y") return VarKind::Y;
    if (s == "Z") return VarKind::Z;
    if (s == "A") return VarKind::Anc;
    throw FormatError("unknown variable kind '" + s + "'");
}

VarId var_from_words(const std::vector<std::string>& w, std::size_t at) {
    if (w.size() < at + 3) throw FormatError("truncated variable header");
    const VarKind kind = kind_from_letter(w[at]);
    const int p1 = static_cast<int>(parse_int(w[at + 1], "variable"));
    const int p2 = static_cast<int>(parse_int(w[at + 2], "variable"));
    switch (kind) {
        case VarKind::X:
            return VarId::x(p1 - 1, p2 - 1);
        case VarKind::Y:
            return VarId::y(p1 - 1, p2);
        case VarKind::Z:
            return VarId::z(p1 - 1, p2);
        case VarKind::Anc:
            if (w.size() < at + 4) throw FormatError("truncated ancilla header");
            return VarId::anc(p1 - 1, p2 - 1, static_cast<int>(parse_int(w[at + 3], "variable")));
    }
    throw FormatError("unreachable variable kind");
}

std::string spins_string(const std::vector<Spin>& spins) {
    std::string s;
    for (Spin x : spins) s += x > 0 ? '+' : '-';
    return s;
}

std::vector<Spin> spins_from_string(const std::string& s) {
    std::vector<Spin> out;
    for (char c : s) {
        if (c != '+' && c != '-') throw FormatError("spin strings use '+' and '-'");
        out.push_back(c == '+' ? Spin{1} : Spin{-1});
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw FormatError("unterminated quote in CSV line");
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) throw FormatError("NaN cannot be serialized");
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw FormatError("number formatting failed");
    return {buf, ptr};
}

double parse_double(const std::string& text) {
    if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || std::isnan(v))
        throw FormatError("bad number '" + text + "'");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp);
        out << contents;
        if (!out.flush()) throw FormatError("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, target);
}

std::string instance_to_json(const ProblemInstance& instance) {
    json j;
    j["label"] = instance.label;
    j["n"] = instance.graph.num_vertices();
    json edges = json::array();
    for (const Edge& e : instance.graph.edges()) edges.push_back({e.u, e.v});
    j["edges"] = edges;
    j["weights"] = instance.weights;
    j["delta"] = instance.degree_bound;
    j["root"] = instance.root;
    return j.dump(2) + "\n";
}

ProblemInstance instance_from_json(const std::string& text) {
    const std::string what = "instance JSON";
    const json j = parse_json(text, what);
    ProblemInstance out;
    out.label = field<std::string>(j, "label", what);
    const int n = field<int>(j, "n", what);
    const auto pairs = field<std::vector<std::vector<int>>>(j, "edges", what);
    const auto weights = field<std::vector<int>>(j, "weights", what);
    if (weights.size() != pairs.size()) throw FormatError(what + ": weights and edges differ in length");
    std::vector<Edge> edges;
    for (const auto& p : pairs) {
        if (p.size() != 2) throw FormatError(what + ": each edge needs two endpoints");
        edges.emplace_back(p[0], p[1]);
    }
    out.graph = Graph(n, edges);
    out.weights.assign(edges.size(), 0);
    for (std::size_t i = 0; i < edges.size(); ++i)
        out.weights[out.graph.edge_index(edges[i].u, edges[i].v)] = weights[i];
    out.degree_bound = field<int>(j, "delta", what);
    out.root = j.contains("root") ? field<int>(j, "root", what) : default_root(out.graph);
    out.check();
    return out;
}

std::string qubo_to_text(const Qubo& qubo) {
    std::string out = "# qubo " + std::to_string(qubo.num_vars()) + " variables, penalty " +
                      std::to_string(qubo.penalty_weight) + "\n";
    for (int i = 0; i < qubo.num_vars(); ++i)
        out += "# var " + std::to_string(i) + " " + describe(qubo.registry.at(i)) + "\n";
    out += "# offset " + std::to_string(qubo.form.offset) + "\n";
    for (auto [i, c] : qubo.form.linear) out += std::to_string(i) + " " + std::to_string(i) + " " + std::to_string(c) + "\n";
    for (const auto& [key, c] : qubo.form.quadratic)
        out += std::to_string(key.first) + " " + std::to_string(key.second) + " " + std::to_string(c) + "\n";
    return out;
}

Qubo qubo_from_text(const std::string& text) {
    Qubo out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto w = words(line);
        if (w.empty()) continue;
        const std::string where = "QUBO line " + std::to_string(number);
        if (w[0] == "#") {
            if (w.size() >= 3 && w[1] == "var") {
                const int index = static_cast<int>(parse_int(w[2], where));
                if (index != out.registry.size()) throw FormatError(where + ": variables must be listed in order");
                out.registry.add(var_from_words(w, 3));
            } else if (w.size() >= 3 && w[1] == "offset") {
                out.form.offset = parse_int(w[2], where);
            } else if (w.size() >= 6 && w[1] == "qubo" && w[4] == "penalty") {
                out.penalty_weight = parse_int(w[5], where);
            }
            continue;
        }
        if (w.size() != 3) throw FormatError(where + ": expected 'i j coeff'");
        const int i = static_cast<int>(parse_int(w[0], where));
        const int j = static_cast<int>(parse_int(w[1], where));
        if (i < 0 || j < 0 || i >= out.num_vars() || j >= out.num_vars())
            throw FormatError(where + ": variable index out of range");
        out.form.add_quadratic(i, j, parse_int(w[2], where));
    }
    return out;
}

std::string qubo_registry_json(const Qubo& qubo) {
    json j;
    j["num_vars"] = qubo.num_vars();
    j["penalty_weight"] = qubo.penalty_weight;
    j["offset"] = qubo.form.offset;
    json vars = json::array();
    for (int i = 0; i < qubo.num_vars(); ++i) {
        const auto w = words(describe(qubo.registry.at(i)));
        json params = json::array();
        for (std::size_t k = 1; k < w.size(); ++k) params.push_back(parse_int(w[k], "variable"));
        vars.push_back({{"index", i}, {"kind", w[0]}, {"params", params}});
    }
    j["vars"] = vars;
    return j.dump(2) + "\n";
}

std::string ising_to_text(const IsingModel& model, const VariableRegistry* registry) {
    std::string out = "# ising " + std::to_string(model.num_spins()) + " spins\n";
    if (registry)
        for (int i = 0; i < registry->size(); ++i)
            out += "# var " + std::to_string(i) + " " + describe(registry->at(i)) + "\n";
    out += "# offset " + format_double(model.offset) + "\n";
    for (int i = 0; i < model.num_spins(); ++i)
        if (model.h[i] != 0.0) out += std::to_string(i) + " " + std::to_string(i) + " " + format_double(model.h[i]) + "\n";
    for (const auto& [key, v] : model.j)
        out += std::to_string(key.first) + " " + std::to_string(key.second) + " " + format_double(v) + "\n";
    return out;
}

IsingModel ising_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    std::optional<IsingModel> out;
    double offset = 0.0;
    while (std::getline(in, line)) {
        ++number;
        const auto w = words(line);
        if (w.empty()) continue;
        const std::string where = "Ising line " + std::to_string(number);
        if (w[0] == "#") {
            if (w.size() >= 3 && w[1] == "ising") out.emplace(static_cast<int>(parse_int(w[2], where)));
            if (w.size() >= 3 && w[1] == "offset") offset = parse_double(w[2]);
            continue;
        }
        if (!out) throw FormatError(where + ": missing '# ising <n> spins' header");
        if (w.size() != 3) throw FormatError(where + ": expected 'i j value'");
        const int i = static_cast<int>(parse_int(w[0], where));
        const int j = static_cast<int>(parse_int(w[1], where));
        if (i < 0 || j < 0 || i >= out->num_spins() || j >= out->num_spins())
            throw FormatError(where + ": spin index out of range");
        const double v = parse_double(w[2]);
        if (i == j)
            out->h[i] += v;
        else
            out->add_coupling(i, j, v);
    }
    if (!out) throw FormatError("Ising text has no header");
    out->offset = offset;
    return *out;
}

std::string gauge_to_json(const Gauge& gauge) {
    json j;
    j["seed"] = gauge.seed;
    std::vector<int> a(gauge.a.begin(), gauge.a.end());
    j["a"] = a;
    return j.dump() + "\n";
}

Gauge gauge_from_json(const std::string& text) {
    const json j = parse_json(text, "gauge JSON");
    Gauge g;
    g.seed = field<std::uint64_t>(j, "seed", "gauge JSON");
    for (int v : field<std::vector<int>>(j, "a", "gauge JSON")) {
        if (v != 1 && v != -1) throw FormatError("gauge JSON: entries must be +1 or -1");
        g.a.push_back(static_cast<Spin>(v));
    }
    return g;
}

HardwareGraph hardware_from_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    std::vector<int> params;
    if (colon != std::string::npos)
        for (const auto& p : split(spec.substr(colon + 1), ','))
            params.push_back(static_cast<int>(parse_int(p, "hardware " + spec)));
    if (family == "chimera") {
        if (params.empty() || params.size() > 3) throw FormatError("chimera needs 1 to 3 parameters");
        return chimera_graph(params[0], params.size() > 1 ? params[1] : -1, params.size() > 2 ? params[2] : 4);
    }
    if (family == "pegasus") {
        if (params.size() != 1) throw FormatError("pegasus needs one parameter");
        return pegasus_graph(params[0]);
    }
    throw FormatError("unknown hardware '" + spec + "' (use chimera:<m>[,<n>,<t>] or pegasus:<m>)");
}

std::string embedding_to_json(const Embedding& embedding, const HardwareGraph& hardware) {
    json hw;
    switch (hardware.family()) {
        case HardwareFamily::chimera:
            hw["family"] = "chimera";
            break;
        case HardwareFamily::pegasus:
            hw["family"] = "pegasus";
            break;
        case HardwareFamily::custom:
            hw["family"] = "custom";
            break;
    }
    hw["params"] = hardware.params();
    if (hardware.family() == HardwareFamily::custom) {
        json couplers = json::array();
        for (auto [a, b] : hardware.couplers()) couplers.push_back({a, b});
        hw["couplers"] = couplers;
        hw["nodes"] = hardware.ids();
    }
    json chains = json::object();
    for (int v = 0; v < embedding.num_logical(); ++v) chains[std::to_string(v)] = embedding.chains[v];
    json j;
    j["hardware"] = hw;
    j["chains"] = chains;
    return j.dump(2) + "\n";
}

LoadedEmbedding embedding_from_json(const std::string& text) {
    const std::string what = "embedding JSON";
    const json j = parse_json(text, what);
    if (!j.contains("hardware") || !j.contains("chains")) throw FormatError(what + ": needs 'hardware' and 'chains'");
    const json& hw = j["hardware"];
    const auto family = field<std::string>(hw, "family", what);
    const auto params = hw.contains("params") ? field<std::vector<int>>(hw, "params", what) : std::vector<int>{};
    LoadedEmbedding out;
    if (family == "chimera") {
        if (params.size() != 3) throw FormatError(what + ": chimera params are [rows, cols, shore]");
        out.hardware = chimera_graph(params[0], params[1], params[2]);
    } else if (family == "pegasus") {
        if (params.size() != 1) throw FormatError(what + ": pegasus params are [m]");
        out.hardware = pegasus_graph(params[0]);
    } else if (family == "custom") {
        std::vector<std::pair<int, int>> couplers;
        for (const auto& c : field<std::vector<std::vector<int>>>(hw, "couplers", what)) {
            if (c.size() != 2) throw FormatError(what + ": couplers are pairs");
            couplers.emplace_back(c[0], c[1]);
        }
        const auto nodes = hw.contains("nodes") ? field<std::vector<int>>(hw, "nodes", what) : std::vector<int>{};
        out.hardware = custom_graph(couplers, nodes);
    } else {
        throw FormatError(what + ": unknown family '" + family + "'");
    }
    const json& chains = j["chains"];
    if (!chains.is_object()) throw FormatError(what + ": 'chains' must map logical index to qubit ids");
    out.embedding.chains.resize(chains.size());
    std::vector<char> seen(chains.size(), 0);
    for (const auto& [key, ids] : chains.items()) {
        const auto v = parse_int(key, what + " chain key");
        if (v < 0 || v >= static_cast<long long>(chains.size()) || seen[v])
            throw FormatError(what + ": chain keys must be 0..L-1");
        seen[v] = 1;
        out.embedding.chains[v] = ids.get<std::vector<int>>();
    }
    out.embedding.normalize();
    return out;
}

std::string readset_to_jsonl(const ReadSet& reads) {
    const auto& m = reads.meta;
    json meta;
    meta["label"] = m.label;
    meta["sampler"] = m.sampler;
    meta["seed"] = m.seed;
    meta["num_reads"] = m.num_reads;
    meta["num_gauges"] = m.num_gauges;
    meta["gauge_seeds"] = m.gauge_seeds;
    meta["schedule"] = {{"sweeps", m.schedule.sweeps},
                        {"beta_start", m.schedule.beta_start},
                        {"beta_end", m.schedule.beta_end}};
    meta["j_ferro"] = m.j_ferro;
    meta["version"] = kVersion;
    std::string out = json{{"meta", meta}}.dump() + "\n";
    for (const Read& r : reads.reads) {
        json line;
        line["spins"] = spins_string(r.spins);
        line["energy"] = r.energy;
        line["count"] = r.multiplicity;
        line["gauge"] = r.gauge;
        line["status"] = r.chain_break() ? "chain_break" : "sampled";
        if (!r.broken.empty()) line["broken"] = r.broken;
        out += line.dump() + "\n";
    }
    return out;
}

ReadSet readset_from_jsonl(const std::string& text) {
    ReadSet out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    bool have_meta = false;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        const std::string what = "ReadSet line " + std::to_string(number);
        const json j = parse_json(line, what);
        if (!have_meta) {
            if (!j.contains("meta")) throw FormatError(what + ": first line must be the meta header");
            const json& m = j["meta"];
            auto& meta = out.meta;
            meta.label = m.value("label", "");
            meta.sampler = m.value("sampler", "");
            meta.seed = m.value("seed", std::uint64_t{0});
            meta.num_reads = m.value("num_reads", std::uint64_t{0});
            meta.num_gauges = m.value("num_gauges", 0);
            meta.gauge_seeds = m.value("gauge_seeds", std::vector<std::uint64_t>{});
            if (m.contains("schedule")) {
                meta.schedule.sweeps = m["schedule"].value("sweeps", meta.schedule.sweeps);
                meta.schedule.beta_start = m["schedule"].value("beta_start", meta.schedule.beta_start);
                meta.schedule.beta_end = m["schedule"].value("beta_end", meta.schedule.beta_end);
            }
            meta.j_ferro = m.value("j_ferro", 0.0);
            have_meta = true;
            continue;
        }
        Read r;
        r.spins = spins_from_string(field<std::string>(j, "spins", what));
        r.energy = j.value("energy", 0.0);
        r.multiplicity = j.value("count", std::uint64_t{1});
        r.gauge = j.value("gauge", -1);
        const auto status = j.value("status", std::string("sampled"));
        if (status != "sampled" && status != "chain_break") throw FormatError(what + ": unknown status '" + status + "'");
        r.status = status == "sampled" ? ReadStatus::sampled : ReadStatus::chain_break;
        r.broken = j.value("broken", std::vector<int>{});
        out.reads.push_back(std::move(r));
    }
    if (!have_meta) throw FormatError("ReadSet has no meta header");
    return out;
}

void write_readset(const std::string& path, const ReadSet& reads) {
    const std::string body = readset_to_jsonl(reads);
    const std::string tmp = path + ".tmp";
    if (const std::filesystem::path p(path); p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    gzFile f = gzopen(tmp.c_str(), "wb9");
    if (!f) throw FormatError("cannot write " + tmp);
    std::size_t done = 0;
    while (done < body.size()) {
        const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(body.size() - done, 1U << 20));
        if (gzwrite(f, body.data() + done, chunk) != static_cast<int>(chunk)) {
            gzclose(f);
            throw FormatError("gzip write failed for " + tmp);
        }
        done += chunk;
    }
    if (gzclose(f) != Z_OK) throw FormatError("gzip close failed for " + tmp);
    std::filesystem::rename(tmp, path);
}

ReadSet read_readset(const std::string& path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (!f) throw FormatError("cannot open " + path);
    std::string body;
    char buf[1 << 16];
    for (;;) {
        const int n = gzread(f, buf, sizeof buf);
        if (n < 0) {
            gzclose(f);
            throw FormatError("gzip read failed for " + path);
        }
        if (n == 0) break;
        body.append(buf, static_cast<std::size_t>(n));
    }
    gzclose(f);
    return readset_from_jsonl(body);
}

std::string CsvTable::to_string() const {
    std::string out;
    for (const auto& c : comments) out += "# " + c + "\n";
    const auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) out += (i ? "," : "") + csv_escape(fields[i]);
        out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

CsvTable CsvTable::parse(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("#", 0) == 0) {
            t.comments.push_back(line.size() > 2 ? line.substr(2) : std::string{});
            continue;
        }
        auto fields = csv_fields(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
        } else {
            if (fields.size() != t.header.size())
                throw FormatError("CSV line " + std::to_string(number) + ": expected " +
                                  std::to_string(t.header.size()) + " fields");
            t.rows.push_back(std::move(fields));
        }
    }
    if (t.header.empty()) throw FormatError("CSV has no header");
    return t;
}

int CsvTable::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw FormatError("CSV is missing column '" + name + "'");
    return static_cast<int>(it - header.begin());
}

CsvTable results_table(const std::vector<ResultRow>& rows, const std::vector<std::string>& comments) {
    CsvTable t;
    t.comments = comments;
    t.header = {"instance", "t_a", "s_p", "t_p", "jf", "gauges", "reads", "p_success", "tts"};
    for (const auto& r : rows) {
        const auto& x = r.result;
        t.rows.push_back({x.instance, format_double(x.t_a), x.s_p ? format_double(*x.s_p) : "none",
                          format_double(x.t_p), format_double(x.j_ferro), std::to_string(r.gauges),
                          std::to_string(r.reads), format_double(x.p_success), x.tts.to_string()});
    }
    return t;
}

std::vector<ResultRow> results_from_table(const CsvTable& t) {
    const int ci = t.column("instance"), cta = t.column("t_a"), csp = t.column("s_p"), ctp = t.column("t_p"),
              cjf = t.column("jf"), cg = t.column("gauges"), cr = t.column("reads"), cp = t.column("p_success"),
              ct = t.column("tts");
    std::vector<ResultRow> out;
    for (const auto& row : t.rows) {
        ResultRow r;
        r.result.instance = row[ci];
        r.result.t_a = parse_double(row[cta]);
        if (row[csp] != "none" && !row[csp].empty()) r.result.s_p = parse_double(row[csp]);
        r.result.t_p = parse_double(row[ctp]);
        r.result.j_ferro = parse_double(row[cjf]);
        r.gauges = static_cast<int>(parse_int(row[cg], "gauges"));
        r.reads = static_cast<std::uint64_t>(parse_int(row[cr], "reads"));
        r.result.p_success = parse_double(row[cp]);
        r.result.tts = ExtendedReal::parse(row[ct]);
        out.push_back(std::move(r));
    }
    return out;
}

CsvTable summary_table(const std::vector<EnsembleSummary>& rows, const std::vector<std::string>& comments) {
    CsvTable t;
    t.comments = comments;
    t.header = {"metric", "median", "p35", "p65", "B", "seed"};
    for (const auto& s : rows)
        t.rows.push_back({s.metric, s.median.to_string(), s.p35.to_string(), s.p65.to_string(),
                          std::to_string(s.resamples), std::to_string(s.seed)});
    return t;
}

CsvTable trace_table(const SpectrumTrace& trace) {
    CsvTable t;
    const std::size_t k = trace.energies.empty() ? 0 : trace.energies.front().size();
    t.comments = {"bdmst " + std::string(kVersion) + " spectrum trace, |J_F| = " + format_double(trace.j_ferro),
                  "s_star " + format_double(trace.s_star()) + " gap_min " + format_double(trace.gap_min())};
    t.header.push_back("s");
    for (std::size_t i = 0; i < k; ++i) t.header.push_back("E" + std::to_string(i));
    t.header.insert(t.header.end(), {"gap", "PL0", "PL1", "j_ferro"});
    for (std::size_t r = 0; r < trace.s.size(); ++r) {
        std::vector<std::string> row{format_double(trace.s[r])};
        for (double e : trace.energies[r]) row.push_back(format_double(e));
        row.push_back(format_double(trace.gap[r]));
        row.push_back(format_double(trace.p_logical[r][0]));
        row.push_back(format_double(trace.p_logical[r][1]));
        row.push_back(format_double(trace.j_ferro));
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable relax_table(const RelaxResult& result) {
    CsvTable t;
    const std::size_t k = result.populations.empty() ? 0 : result.populations.front().size();
    t.comments = {"bdmst " + std::string(kVersion) + " pause relaxation",
                  "p_ground " + format_double(result.p_ground) + " leakage " + format_double(result.leakage) +
                      (result.leakage_flag ? " (above 1%)" : "")};
    t.header = {"t", "s"};
    for (std::size_t i = 0; i < k; ++i) t.header.push_back("P" + std::to_string(i));
    for (std::size_t r = 0; r < result.t.size(); ++r) {
        std::vector<std::string> row{format_double(result.t[r]), format_double(result.s[r])};
        for (double p : result.populations[r]) row.push_back(format_double(p));
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace bdmst::io
