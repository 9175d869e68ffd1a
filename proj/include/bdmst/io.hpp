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

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdmst/embedding.hpp"
#include "bdmst/hardware.hpp"
#include "bdmst/instances.hpp"
#include "bdmst/ising.hpp"
#include "bdmst/metrics.hpp"
#include "bdmst/qsim.hpp"
#include "bdmst/qubo.hpp"
#include "bdmst/samplers.hpp"

namespace bdmst::io {

class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

// Shortest text that parses back to the same double; "inf" and "-inf" for infinities.
std::string format_double(double value);
double parse_double(const std::string& text);

std::string read_file(const std::string& path);
// Writes to path + ".tmp" and renames over path.
void write_file_atomic(const std::string& path, const std::string& contents);

// {"label", "n", "edges": [[u, v], ...] 0-based, "weights", "delta", "root"}.
std::string instance_to_json(const ProblemInstance& instance);
ProblemInstance instance_from_json(const std::string& text);

// One term per line, "i j coeff" with i == j for linear terms, preceded by
// "# var <index> <kind> <params>" headers and "# offset <c>".
std::string qubo_to_text(const Qubo& qubo);
Qubo qubo_from_text(const std::string& text);
// {"num_vars", "penalty_weight", "offset", "vars": [{"index", "kind", "params"}]}.
std::string qubo_registry_json(const Qubo& qubo);

// Same layout as the QUBO text; the registry headers are optional.
std::string ising_to_text(const IsingModel& model, const VariableRegistry* registry = nullptr);
IsingModel ising_from_text(const std::string& text);

std::string gauge_to_json(const Gauge& gauge);
Gauge gauge_from_json(const std::string& text);

// {"hardware": {"family", "params", "couplers" (custom only)}, "chains": {"<logical>": [ids]}}.
std::string embedding_to_json(const Embedding& embedding, const HardwareGraph& hardware);
struct LoadedEmbedding {
    Embedding embedding;
    HardwareGraph hardware;
};
LoadedEmbedding embedding_from_json(const std::string& text);
HardwareGraph hardware_from_spec(const std::string& spec);  // "chimera:16", "chimera:16,16,4", "pegasus:6"

// Gzip-compressed JSON lines: a {"meta": ...} header, then one read per line.
void write_readset(const std::string& path, const ReadSet& reads);
ReadSet read_readset(const std::string& path);
std::string readset_to_jsonl(const ReadSet& reads);
ReadSet readset_from_jsonl(const std::string& text);

// Provenance lines start with "# ".
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
    static CsvTable parse(const std::string& text);
    int column(const std::string& name) const;  // throws FormatError when absent
};

struct ResultRow {
    RunResult result;
    int gauges = 0;
    std::uint64_t reads = 0;
};

CsvTable results_table(const std::vector<ResultRow>& rows, const std::vector<std::string>& comments = {});
std::vector<ResultRow> results_from_table(const CsvTable& table);

CsvTable summary_table(const std::vector<EnsembleSummary>& rows, const std::vector<std::string>& comments = {});

CsvTable trace_table(const SpectrumTrace& trace);
CsvTable relax_table(const RelaxResult& result);

}  // namespace bdmst::io
