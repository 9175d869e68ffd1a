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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bdmst/embedding.hpp"
#include "bdmst/hardware.hpp"
#include "bdmst/io.hpp"
#include "bdmst/metrics.hpp"
#include "bdmst/qubo.hpp"
#include "bdmst/samplers.hpp"

namespace bdmst {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::string output = "results";
    int threads = 1;

    // "ensemble" (the fixed 45-instance set), "all", or explicit "graph/weights" labels.
    std::string select = "ensemble";
    std::vector<std::string> labels;
    std::size_t ensemble_size = 45;
    int delta = 2;
    std::optional<int> root;  // empty: highest-degree vertex
    MappingOptions mapping;

    std::string hardware = "chimera:16";
    FindEmbeddingOptions embedding;

    double t_a = 1.0;
    bool no_pause = true;
    std::vector<double> s_p;
    std::vector<double> t_p{1.0};
    std::vector<double> j_ferro;

    std::string sampler = "sa";
    SaSchedule schedule;
    std::uint64_t reads = 50000;
    int gauges = 100;
    bool save_reads = false;

    ExperimentConfig();
    // Throws ConfigError naming the offending key.
    void check() const;
    // Canonical text, used for the provenance hash.
    std::string canonical() const;
};

ExperimentConfig parse_config(const std::string& yaml_text);
ExperimentConfig load_config(const std::string& path);

// start, start + step, ... up to stop inclusive, rounded to 1e-9.
std::vector<double> inclusive_range(double start, double stop, double step);

std::uint64_t fnv1a(const std::string& text);

std::vector<ProblemInstance> select_instances(const ExperimentConfig& config);

struct GridPoint {
    std::optional<double> s_p;
    double t_p = 0.0;
    double j_ferro = 0.0;

    std::string key() const;
};

// No-pause point first (when enabled), then s_p by t_p; one list per |J_F|.
std::vector<GridPoint> pause_points(const ExperimentConfig& config, double j_ferro);

struct PreparedInstance {
    ProblemInstance instance;
    Qubo qubo;
    ScaledIsing scaled;
    std::int64_t optimum = 0;
    Embedding embedding;
};

// Builds the QUBO, the scaled Ising model, the exact optimum and an embedding.
// The embedding seed is derive_seed(config.embedding.seed, fnv1a(label)).
PreparedInstance prepare_instance(const ProblemInstance& instance, const ExperimentConfig& config,
                                  const HardwareGraph& hardware);

// 100 gauges x (reads / gauges) reads at one chain strength, seeded by
// derive_seed(config.seed, fnv1a(label), round(1000 |J_F|)).
ReadSet sample_instance(const PreparedInstance& prepared, const HardwareGraph& hardware, double j_ferro,
                        const ExperimentConfig& config);

io::ResultRow result_row(const PreparedInstance& prepared, const ReadSet& reads, const GridPoint& point,
                         const ExperimentConfig& config);

struct RunReport {
    std::vector<io::ResultRow> rows;
    std::vector<std::string> errors;  // "instance,jf,message"
    int computed_units = 0;
    int resumed_units = 0;

    bool ok() const { return errors.empty(); }
};

// Work units are (instance, |J_F|); each writes units/<key>.csv atomically
// and is then recorded in manifest.json. A rerun skips recorded units.
// results.csv is assembled in canonical order at the end.
RunReport run_experiment_grid(const ExperimentConfig& config, std::ostream* log = nullptr);

struct ReportOptions {
    std::uint64_t resamples = 1000;
    std::uint64_t seed = 0;
};

struct ComparisonRow {
    GridPoint point;
    std::size_t instances = 0;
    ExtendedReal difference_of_medians;
    ExtendedReal median_of_differences;
    ExtendedReal median_ratio;
    std::size_t pos_inf = 0;  // instances with delta +inf (no-pause never succeeded)
    std::size_t neg_inf = 0;  // instances with delta -inf (pause never succeeded)
};

struct Report {
    std::vector<EnsembleSummary> summaries;
    std::vector<ComparisonRow> comparisons;
};

Report make_report(const std::vector<io::ResultRow>& rows, const ReportOptions& options = {});
io::CsvTable comparison_table(const std::vector<ComparisonRow>& rows, const ReportOptions& options);

}  // namespace bdmst
