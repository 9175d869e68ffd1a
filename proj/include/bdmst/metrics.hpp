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

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bdmst/instances.hpp"
#include "bdmst/qubo.hpp"
#include "bdmst/samplers.hpp"

namespace bdmst {

// A double that may be +inf or -inf but never NaN. Serialized as "inf" and
// "-inf" so infinities survive CSV and JSON round trips.
class ExtendedReal {
  public:
    constexpr ExtendedReal() = default;
    ExtendedReal(double value);  // throws std::invalid_argument on NaN

    static ExtendedReal infinity();
    static ExtendedReal negative_infinity();

    double value() const { return value_; }
    bool finite() const;
    bool is_pos_inf() const;
    bool is_neg_inf() const;

    std::string to_string() const;
    static ExtendedReal parse(const std::string& text);

    friend auto operator<=>(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ <=> b.value_; }
    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) { return a.value_ == b.value_; }

  private:
    double value_ = 0.0;
};

struct SuccessCount {
    std::uint64_t hits = 0;
    std::uint64_t total = 0;

    double p() const { return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total); }
};

// Is this logical read an optimal tree? Valid decode with cost equal to the oracle.
bool read_is_optimal(const Read& read, const Qubo& qubo, const ProblemInstance& instance, std::int64_t oracle_cost);

// Reads decoding to a valid tree of oracle cost over all reads, chain
// breaks and invalid decodes included in the denominator.
SuccessCount count_success(const ReadSet& reads, const Qubo& qubo, const ProblemInstance& instance,
                           std::int64_t oracle_cost);
// Same, split by the gauge index of each read.
std::vector<SuccessCount> count_success_by_gauge(const ReadSet& reads, const Qubo& qubo,
                                                 const ProblemInstance& instance, std::int64_t oracle_cost);

double p_success(const ReadSet& reads, const Qubo& qubo, const ProblemInstance& instance, std::int64_t oracle_cost);

// log(1 - 0.99) / log(1 - p) * t_tot, +inf at p = 0. Never below t_tot: at
// least one anneal is always needed, so p >= 0.99 gives t_tot.
ExtendedReal tts(double p, double t_tot);

struct RunResult {
    std::string instance;
    double t_a = 1.0;
    std::optional<double> s_p;
    double t_p = 0.0;
    double j_ferro = 0.0;
    double p_success = 0.0;
    ExtendedReal tts;

    double t_tot() const { return t_a + t_p; }
};

RunResult make_run_result(std::string instance, double t_a, std::optional<double> s_p, double t_p, double j_ferro,
                          double p);

struct DeltaTts {
    ExtendedReal delta;
    ExtendedReal ratio;  // delta / tts_nopause
};

// a - b with equal values (infinities included) giving 0.
ExtendedReal subtract(ExtendedReal a, ExtendedReal b);

// Both infinite: 0 and 0. Only the no-pause run infinite: +inf and 1.
// Only the pause run infinite: -inf and -inf. Otherwise the plain values.
DeltaTts delta_tts(ExtendedReal tts_nopause, ExtendedReal tts_pause);

// Median with infinities ordered at the extremes. An even count averages the
// middle pair, where a pair of opposite infinities gives 0.
ExtendedReal median(std::vector<ExtendedReal> values);

// Linear interpolation on a sorted list, rank q/100 * (n - 1). Between a
// finite value and an infinity the result is the infinity.
ExtendedReal percentile(std::span<const ExtendedReal> sorted, double q);

struct EnsembleSummary {
    std::string metric;
    ExtendedReal median;
    ExtendedReal p35;
    ExtendedReal p65;
    std::uint64_t resamples = 0;
    std::uint64_t seed = 0;
};

// Resample b draws values with replacement from the stream derive_seed(seed, b)
// and records its median; the summary holds the 35/50/65 percentiles of the
// B medians.
EnsembleSummary bootstrap_percentiles(std::span<const ExtendedReal> values, std::uint64_t resamples,
                                      std::uint64_t seed, std::string metric = {});

std::vector<ExtendedReal> bootstrap_medians(std::span<const ExtendedReal> values, std::uint64_t resamples,
                                            std::uint64_t seed);

// Per-instance differences a_i - b_i, equal infinities giving 0.
std::vector<ExtendedReal> differences(std::span<const ExtendedReal> a, std::span<const ExtendedReal> b);
ExtendedReal median_of_differences(std::span<const ExtendedReal> a, std::span<const ExtendedReal> b);
ExtendedReal difference_of_medians(std::span<const ExtendedReal> a, std::span<const ExtendedReal> b);

}  // namespace bdmst
