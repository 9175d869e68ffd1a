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
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bdmst/qubo.hpp"

namespace bdmst {

using Spin = std::int8_t;

// Spin convention throughout: bit 1 <-> spin +1, x = (1 + s) / 2.
inline Spin bit_to_spin(std::uint8_t b) { return b ? Spin{1} : Spin{-1}; }
inline std::uint8_t spin_to_bit(Spin s) { return s > 0 ? 1 : 0; }
std::vector<Spin> bits_to_spins(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> spins_to_bits(std::span<const Spin> spins);

// E(s) = sum h_i s_i + sum_{i<j} J_ij s_i s_j + offset.
struct IsingModel {
    std::vector<double> h;
    std::map<std::pair<int, int>, double> j;  // keys i < j
    double offset = 0.0;

    IsingModel() = default;
    explicit IsingModel(int num_spins) : h(num_spins, 0.0) {}

    int num_spins() const { return static_cast<int>(h.size()); }
    void add_coupling(int a, int b, double value);
    double coupling(int a, int b) const;
    double energy(std::span<const Spin> spins) const;
    double max_abs_coefficient() const;

    friend bool operator==(const IsingModel&, const IsingModel&) = default;
};

class IsingError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

IsingModel qubo_to_ising(const Qubo& qubo);
IsingModel form_to_ising(const QuadraticForm& form, int num_vars);

struct ScaledIsing {
    IsingModel model;
    // scaled = scale * original, offset included.
    double scale = 1.0;
};

// Uniform positive rescale so the largest |h| or |J| equals j_max.
ScaledIsing scale_to_range(const IsingModel& ising, double j_max = 1.0);

struct Gauge {
    std::vector<Spin> a;
    std::uint64_t seed = 0;

    int size() const { return static_cast<int>(a.size()); }
    bool is_identity() const;

    friend bool operator==(const Gauge&, const Gauge&) = default;
};

Gauge identity_gauge(int n);
Gauge random_gauge(int n, std::uint64_t seed);

IsingModel gauge_transform(const IsingModel& ising, const Gauge& gauge);
// s_i -> a_i s_i; an involution.
std::vector<Spin> ungauge(std::span<const Spin> spins, const Gauge& gauge);

}  // namespace bdmst
