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
#include <sstream>

#include "bdmst/io.hpp"
#include "bdmst/pipeline.hpp"
#include "doctest.h"

using namespace bdmst;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "bdmst_test_pipeline" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const char* kTiny = R"(
seed: 11
instances:
  select: m4ver1/w2
embedding:
  attempts: 2
sweep:
  s_p: [0.3]
  j_ferro: 1.5
sampler:
  sweeps: 300
reads: 100
gauges: 4
)";

ExperimentConfig tiny(const fs::path& out) {
    auto c = parse_config(kTiny);
    c.output = out.string();
    return c;
}

io::ResultRow row(const std::string& label, std::optional<double> sp, double p) {
    io::ResultRow r;
    r.result = make_run_result(label, 1.0, sp, sp ? 1.0 : 0.0, 1.5, p);
    r.gauges = 4;
    r.reads = 100;
    return r;
}

}  // namespace

TEST_CASE("config defaults") {
    const auto c = parse_config("seed: 3\n");
    CHECK(c.reads == 50000);
    CHECK(c.gauges == 100);
    CHECK(c.t_a == 1.0);
    REQUIRE(c.j_ferro.size() == 11);
    CHECK(c.j_ferro.front() == doctest::Approx(1.0));
    CHECK(c.j_ferro.back() == doctest::Approx(2.0));
    REQUIRE(c.s_p.size() == 16);
    CHECK(c.s_p.back() == doctest::Approx(0.5));
    CHECK(c.schedule.sweeps == 1000);
}

TEST_CASE("config grids and errors") {
    const auto c = parse_config("sweep:\n  s_p: {start: 0.2, stop: 0.3, step: 0.05}\n  t_p: 2\n");
    REQUIRE(c.s_p.size() == 3);
    CHECK(c.s_p[2] == doctest::Approx(0.3));
    CHECK(c.t_p == std::vector<double>{2.0});

    CHECK_THROWS_AS(parse_config("sweep:\n  s_q: [0.3]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("reads: 101\ngauges: 4\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sampler:\n  name: qpu\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("sweep:\n  s_p: [1.5]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("seed: [1\n"), ConfigError);
    try {
        parse_config("embedding:\n  bogus: 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("embedding.bogus") != std::string::npos);
    }
}

TEST_CASE("grid points and keys") {
    auto c = parse_config("sweep:\n  s_p: [0.3, 0.32]\n  t_p: [1, 10]\n");
    const auto pts = pause_points(c, 1.6);
    REQUIRE(pts.size() == 5);
    CHECK(pts[0].key() == "jf=1.6 nopause");
    CHECK(pts[1].key() == "jf=1.6 sp=0.3 tp=1");
    c.no_pause = false;
    CHECK(pause_points(c, 1.6).size() == 4);
    CHECK(inclusive_range(1.0, 2.0, 0.1).size() == 11);
}

TEST_CASE("tiny run: one row per grid point, deterministic, resumable") {
    const auto dir = fresh_dir("run");
    auto c = tiny(dir / "a");
    const auto first = run_experiment_grid(c);
    CHECK(first.ok());
    REQUIRE(first.rows.size() == 2);
    CHECK(first.computed_units == 1);
    CHECK(first.rows[0].reads == 100);
    CHECK_FALSE(first.rows[0].result.s_p.has_value());
    CHECK(first.rows[1].result.t_tot() == 2.0);
    // same reads, longer t_tot
    CHECK(first.rows[0].result.p_success == first.rows[1].result.p_success);

    const auto bytes = io::read_file((dir / "a" / "results.csv").string());
    const auto again = run_experiment_grid(c);
    CHECK(again.resumed_units == 1);
    CHECK(again.computed_units == 0);
    CHECK(io::read_file((dir / "a" / "results.csv").string()) == bytes);

    c.output = (dir / "b").string();
    run_experiment_grid(c);
    CHECK(io::read_file((dir / "b" / "results.csv").string()) == bytes);

    // a changed config must not resume into the old directory
    c.output = (dir / "a").string();
    c.seed = 12;
    CHECK_THROWS_AS(run_experiment_grid(c), ConfigError);
}

TEST_CASE("results survive a CSV round trip") {
    const auto dir = fresh_dir("csv");
    const auto run = run_experiment_grid(tiny(dir));
    const auto back = io::results_from_table(io::CsvTable::parse(io::read_file((dir / "results.csv").string())));
    REQUIRE(back.size() == run.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].result.tts == run.rows[i].result.tts);
        CHECK(back[i].result.s_p == run.rows[i].result.s_p);
    }
}

TEST_CASE("report: single row, infinities, comparisons") {
    ReportOptions o{200, 5};
    const auto one = make_report({row("a", std::nullopt, 0.5)}, o);
    REQUIRE(one.summaries.size() == 2);
    CHECK(one.summaries[0].median == one.summaries[0].p35);
    CHECK(one.summaries[0].seed == 5);
    CHECK(one.comparisons.empty());

    const std::vector<io::ResultRow> rows{row("a", std::nullopt, 0.0), row("a", 0.3, 0.2),
                                          row("b", std::nullopt, 0.1), row("b", 0.3, 0.0)};
    const auto rep = make_report(rows, o);
    REQUIRE(rep.comparisons.size() == 1);
    CHECK(rep.comparisons[0].pos_inf == 1);
    CHECK(rep.comparisons[0].neg_inf == 1);
    CHECK(rep.comparisons[0].instances == 2);
    const auto text = comparison_table(rep.comparisons, o).to_string();
    CHECK(text.find("seed 5") != std::string::npos);

    // fixed seed, fixed output
    CHECK(io::summary_table(make_report(rows, o).summaries, {}).to_string() ==
          io::summary_table(rep.summaries, {}).to_string());
}
