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

#include "bdmst/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bdmst/random.hpp"

namespace bdmst {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ExtendedReal::ExtendedReal(double value) : value_(value) {
    if (std::isnan(value)) throw std::invalid_argument("extended real cannot be NaN");
}

ExtendedReal ExtendedReal::infinity() { return ExtendedReal(kInf); }
ExtendedReal ExtendedReal::negative_infinity() { return ExtendedReal(-kInf); }
bool ExtendedReal::finite() const { return std::isfinite(value_); }
bool ExtendedReal::is_pos_inf() const { return value_ == kInf; }
bool ExtendedReal::is_neg_inf() const { return value_ == -kInf; }

std::string ExtendedReal::to_string() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value_);
    return std::string(buf, end);
}

ExtendedReal ExtendedReal::parse(const std::string& text) {
    if (text == "inf" || text == "+inf") return infinity();
    if (text == "-inf") return negative_infinity();
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || end != text.data() + text.size())
        throw std::invalid_argument("not an extended real: '" + text + "'");
    return ExtendedReal(v);
}

bool read_is_optimal(const Read& read, const Qubo& qubo, const ProblemInstance& instance, std::int64_t oracle_cost) {
    if (read.chain_break()) return false;
    const auto decoded = decode(qubo, instance, spins_to_bits(read.spins));
    return decoded.valid() && decoded.tree->cost == oracle_cost;
}

SuccessCount count_success(const ReadSet& reads, const Qubo& qubo, const ProblemInstance& instance,
                           std::int64_t oracle_cost) {
    SuccessCount out;
    for (const Read& r : reads.reads) {
        out.total += r.multiplicity;
        if (read_is_optimal(r, qubo, instance, oracle_cost)) out.hits += r.multiplicity;
    }
    return out;
}

std::vector<SuccessCount> count_success_by_gauge(const ReadSet& reads, const Qubo& qubo,
                                                 const ProblemInstance& instance, std::int64_t oracle_cost) {
    std::vector<SuccessCount> out;
    for (const Read& r : reads.reads) {
        const int g = std::max(r.gauge, 0);
        if (static_cast<int>(out.size()) <= g) out.resize(g + 1);
        out[g].total += r.multiplicity;
        if (read_is_optimal(r, qubo, instance, oracle_cost)) out[g].hits += r.multiplicity;
    }
    return out;
}

double p_success(const ReadSet& reads, const Qubo& qubo, const ProblemInstance& instance, std::int64_t oracle_cost) {
    return count_success(reads, qubo, instance, oracle_cost).p();
}

ExtendedReal tts(double p, double t_tot) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p_success must lie in [0, 1]");
    if (!(t_tot > 0.0)) throw std::invalid_argument("t_tot must be positive");
    if (p == 0.0) return ExtendedReal::infinity();
    if (p >= 0.99) return t_tot;
    return std::log(1.0 - 0.99) / std::log1p(-p) * t_tot;
}

RunResult make_run_result(std::string instance, double t_a, std::optional<double> s_p, double t_p, double j_ferro,
                          double p) {
    RunResult r;
    r.instance = std::move(instance);
    r.t_a = t_a;
    r.s_p = s_p;
    r.t_p = t_p;
    r.j_ferro = j_ferro;
    r.p_success = p;
    r.tts = tts(p, r.t_tot());
    return r;
}

ExtendedReal subtract(ExtendedReal a, ExtendedReal b) {
    if (a == b) return 0.0;
    return a.value() - b.value();
}

DeltaTts delta_tts(ExtendedReal tts_nopause, ExtendedReal tts_pause) {
    const bool a = tts_nopause.is_pos_inf();
    const bool b = tts_pause.is_pos_inf();
    if (a && b) return {0.0, 0.0};
    if (a) return {ExtendedReal::infinity(), 1.0};
    if (b) return {ExtendedReal::negative_infinity(), ExtendedReal::negative_infinity()};
    const ExtendedReal delta = subtract(tts_nopause, tts_pause);
    if (delta == ExtendedReal(0.0)) return {0.0, 0.0};
    if (!tts_nopause.finite() || tts_nopause.value() == 0.0)
        throw std::invalid_argument("delta_tts needs a positive no-pause TTS");
    return {delta, delta.value() / tts_nopause.value()};
}

namespace {

ExtendedReal midpoint(ExtendedReal lo, ExtendedReal hi) {
    if (lo.is_neg_inf() && hi.is_pos_inf()) return 0.0;
    if (!lo.finite()) return lo;
    if (!hi.finite()) return hi;
    return lo.value() + (hi.value() - lo.value()) / 2.0;
}

ExtendedReal sorted_median(std::span<const ExtendedReal> sorted) {
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return midpoint(sorted[n / 2 - 1], sorted[n / 2]);
}

}  // namespace

ExtendedReal median(std::vector<ExtendedReal> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty list");
    std::sort(values.begin(), values.end());
    return sorted_median(values);
}

ExtendedReal percentile(std::span<const ExtendedReal> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("percentile of an empty list");
    if (!(q >= 0.0 && q <= 100.0)) throw std::invalid_argument("percentile must lie in [0, 100]");
    const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    const ExtendedReal a = sorted[lo];
    const ExtendedReal b = sorted[hi];
    if (frac == 0.0 || a == b) return a;
    if (!a.finite() && !b.finite()) return frac < 0.5 ? a : b;
    if (!a.finite()) return a;
    if (!b.finite()) return b;
    return a.value() + (b.value() - a.value()) * frac;
}

std::vector<ExtendedReal> bootstrap_medians(std::span<const ExtendedReal> values, std::uint64_t resamples,
                                            std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("bootstrap needs at least one value");
    if (resamples == 0) throw std::invalid_argument("bootstrap needs at least one resample");
    const std::size_t n = values.size();
    std::vector<ExtendedReal> medians(resamples);
    std::vector<ExtendedReal> sample(n);
    for (std::uint64_t b = 0; b < resamples; ++b) {
        SplitMix64 rng(derive_seed(seed, b));
        for (auto& x : sample) x = values[rng.below(n)];
        std::sort(sample.begin(), sample.end());
        medians[b] = sorted_median(sample);
    }
    return medians;
}

EnsembleSummary bootstrap_percentiles(std::span<const ExtendedReal> values, std::uint64_t resamples,
                                      std::uint64_t seed, std::string metric) {
    auto medians = bootstrap_medians(values, resamples, seed);
    std::sort(medians.begin(), medians.end());
    EnsembleSummary out;
    out.metric = std::move(metric);
    out.median = percentile(medians, 50.0);
    out.p35 = percentile(medians, 35.0);
    out.p65 = percentile(medians, 65.0);
    out.resamples = resamples;
    out.seed = seed;
    return out;
}

std::vector<ExtendedReal> differences(std::span<const ExtendedReal> a, std::span<const ExtendedReal> b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired lists differ in length");
    std::vector<ExtendedReal> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(subtract(a[i], b[i]));
    return out;
}

ExtendedReal median_of_differences(std::span<const ExtendedReal> a, std::span<const ExtendedReal> b) {
    return median(differences(a, b));
}

ExtendedReal difference_of_medians(std::span<const ExtendedReal> a, std::span<const ExtendedReal> b) {
    if (a.size() != b.size()) throw std::invalid_argument("paired lists differ in length");
    return subtract(median({a.begin(), a.end()}), median({b.begin(), b.end()}));
}

}  // namespace bdmst
