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

#include "bdmst/ising.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace bdmst {

std::vector<Spin> bits_to_spins(std::span<const std::uint8_t> bits) {
    std::vector<Spin> out(bits.size());
    std::transform(bits.begin(), bits.end(), out.begin(), bit_to_spin);
    return out;
}

std::vector<std::uint8_t> spins_to_bits(std::span<const Spin> spins) {
    std::vector<std::uint8_t> out(spins.size());
    std::transform(spins.begin(), spins.end(), out.begin(), spin_to_bit);
    return out;
}

void IsingModel::add_coupling(int a, int b, double value) {
    if (a == b) throw IsingError("coupling needs distinct spins");
    j[{std::min(a, b), std::max(a, b)}] += value;
}

double IsingModel::coupling(int a, int b) const {
    auto it = j.find({std::min(a, b), std::max(a, b)});
    return it == j.end() ? 0.0 : it->second;
}

double IsingModel::energy(std::span<const Spin> spins) const {
    if (static_cast<int>(spins.size()) != num_spins())
        throw IsingError("configuration has " + std::to_string(spins.size()) + " spins, model has " +
                         std::to_string(num_spins()));
    double e = offset;
    for (int i = 0; i < num_spins(); ++i) e += h[i] * spins[i];
    for (const auto& [key, v] : j) e += v * spins[key.first] * spins[key.second];
    return e;
}

double IsingModel::max_abs_coefficient() const {
    double m = 0.0;
    for (double v : h) m = std::max(m, std::abs(v));
    for (const auto& [key, v] : j) m = std::max(m, std::abs(v));
    return m;
}

IsingModel form_to_ising(const QuadraticForm& form, int num_vars) {
    IsingModel out(num_vars);
    out.offset = static_cast<double>(form.offset);
    for (auto [i, c] : form.linear) {
        out.h.at(i) += 0.5 * static_cast<double>(c);
        out.offset += 0.5 * static_cast<double>(c);
    }
    for (const auto& [key, c] : form.quadratic) {
        const double q = 0.25 * static_cast<double>(c);
        out.add_coupling(key.first, key.second, q);
        out.h.at(key.first) += q;
        out.h.at(key.second) += q;
        out.offset += q;
    }
    std::erase_if(out.j, [](const auto& kv) { return kv.second == 0.0; });
    return out;
}

IsingModel qubo_to_ising(const Qubo& qubo) { return form_to_ising(qubo.form, qubo.num_vars()); }

ScaledIsing scale_to_range(const IsingModel& ising, double j_max) {
    if (!(j_max > 0.0)) throw IsingError("j_max must be positive");
    const double m = ising.max_abs_coefficient();
    if (m == 0.0) throw IsingError("cannot scale an all-zero model");
    ScaledIsing out{ising, j_max / m};
    if (out.scale == 1.0) return out;
    for (double& v : out.model.h) v *= out.scale;
    for (auto& [key, v] : out.model.j) v *= out.scale;
    out.model.offset *= out.scale;
    return out;
}

bool Gauge::is_identity() const {
    return std::all_of(a.begin(), a.end(), [](Spin s) { return s > 0; });
}

Gauge identity_gauge(int n) { return {std::vector<Spin>(n, 1), 0}; }

Gauge random_gauge(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Gauge g{std::vector<Spin>(n), seed};
    for (auto& s : g.a) s = (rng() >> 63) ? Spin{1} : Spin{-1};
    return g;
}

IsingModel gauge_transform(const IsingModel& ising, const Gauge& gauge) {
    if (gauge.size() != ising.num_spins())
        throw IsingError("gauge covers " + std::to_string(gauge.size()) + " spins, model has " +
                         std::to_string(ising.num_spins()));
    IsingModel out = ising;
    for (int i = 0; i < out.num_spins(); ++i) out.h[i] *= gauge.a[i];
    for (auto& [key, v] : out.j) v *= gauge.a[key.first] * gauge.a[key.second];
    return out;
}

std::vector<Spin> ungauge(std::span<const Spin> spins, const Gauge& gauge) {
    if (static_cast<int>(spins.size()) != gauge.size()) throw IsingError("gauge size mismatch");
    std::vector<Spin> out(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) out[i] = static_cast<Spin>(spins[i] * gauge.a[i]);
    return out;
}

}  // namespace bdmst
