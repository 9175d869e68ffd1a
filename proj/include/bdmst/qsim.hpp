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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bdmst/embedding.hpp"

namespace bdmst {

class QsimError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A(s) and B(s) tabulated on increasing s from 0 to 1, linearly interpolated.
struct ScheduleTable {
    std::vector<double> s{0.0, 1.0};
    std::vector<double> a{1.0, 0.0};
    std::vector<double> b{0.0, 1.0};

    double A(double s) const;
    double B(double s) const;
    void check() const;
};

// CSV with header "s,A,B". Throws QsimError with the line number on bad input.
ScheduleTable load_schedule_csv(const std::string& path);
ScheduleTable parse_schedule_csv(const std::string& text);

struct AnnealSchedule {
    double t_a = 1.0;  // microseconds
    std::optional<double> s_p;
    double t_p = 0.0;
    ScheduleTable table;

    double total_time() const { return t_a + (s_p ? t_p : 0.0); }
    // Ramp to s_p in s_p * t_a, hold for t_p, ramp to 1.
    double s_at(double t) const;
    double A(double s) const { return table.A(s); }
    double B(double s) const { return table.B(s); }
    void check() const;
};

inline constexpr int kMaxSimulatedQubits = 14;

// H(s) = A(s) * (-sum_i X_i) + B(s) * H_C in the computational basis, where
// basis index m has spin i = +1 iff bit i of m is set and H_C is diagonal
// with the classical energies (offset included).
class Hamiltonian {
  public:
    Hamiltonian(std::vector<double> classical, int num_qubits, double a, double b);

    int num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return classical_.size(); }
    double a() const { return a_; }
    double b() const { return b_; }
    const std::vector<double>& classical() const { return classical_; }

    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
    Eigen::SparseMatrix<double> sparse() const;
    Eigen::MatrixXd dense() const;

  private:
    std::vector<double> classical_;
    int num_qubits_;
    double a_;
    double b_;
};

// Classical energy of every basis state; throws QsimError above kMaxSimulatedQubits.
std::vector<double> classical_energies(const IsingModel& model);

Hamiltonian hamiltonian_at(const EmbeddedIsing& embedded, const AnnealSchedule& schedule, double s);

struct EigenPairs {
    std::vector<double> values;          // ascending
    std::vector<Eigen::VectorXd> vectors;  // unit norm, largest component positive
    std::vector<double> residuals;       // ||H v - E v||
};

struct EigOptions {
    // Dense diagonalization up to this dimension, Lanczos with locking above it.
    std::size_t dense_limit = 256;
    double tolerance = 1e-10;
    int krylov_size = 120;
    int max_restarts = 300;
    std::uint64_t seed = 0;
};

EigenPairs lowest_eigs(const Hamiltonian& h, int k, const EigOptions& options = {});

// Weight of a state on chain-aligned basis states.
double logical_probability(const Eigen::VectorXd& state, const EmbeddedIsing& embedded);
// Expectation of sum over chain edges of Z_p Z_q; equals 2 P_L - 1 for one chain of two qubits.
double hf_expectation(const Eigen::VectorXd& state, const EmbeddedIsing& embedded);

// Same embedding with every chain coupling set to -j_ferro.
EmbeddedIsing with_chain_strength(const EmbeddedIsing& embedded, double j_ferro);

struct SpectrumTrace {
    double j_ferro = 0.0;
    std::vector<double> s;
    std::vector<std::vector<double>> energies;   // per s, k lowest
    std::vector<double> gap;                     // E1 - E0
    std::vector<std::vector<double>> p_logical;  // per s, per level
    std::vector<std::vector<double>> hf;         // per s, per level
    std::vector<double> b;                       // B(s)

    std::size_t argmin_gap() const;
    double s_star() const { return s.at(argmin_gap()); }
    double gap_min() const { return gap.at(argmin_gap()); }
};

SpectrumTrace spectrum_trace(const EmbeddedIsing& embedded, const AnnealSchedule& schedule,
                             const std::vector<double>& s_grid, int k, const EigOptions& options = {});
std::vector<SpectrumTrace> gap_trace(const EmbeddedIsing& embedded, const std::vector<double>& j_ferro_list,
                                     const std::vector<double>& s_grid, int k,
                                     const AnnealSchedule& schedule = {}, const EigOptions& options = {});

// First-order gap at chain strength |J_F| - lambda:
// gap + B * lambda * (<H_F>_1 - <H_F>_0), i.e. gap + 2 B lambda (P_L1 - P_L0) for one two-qubit chain.
std::vector<double> perturbation_gap_shift(const SpectrumTrace& trace, double lambda);

struct LevelShift {
    double energy = 0.0;      // at |J_F|
    double predicted = 0.0;   // energy + B lambda <H_F>
    double exact = 0.0;       // at |J_F| - lambda
    double p_logical = 0.0;
    bool near_degenerate = false;  // first-order theory not applicable
    // P_L > 1/2 on a non-degenerate level, yet the level did not rise.
    bool rise_violated = false;
};

// Per level i < k. Levels closer than degeneracy_tolerance to a neighbour are flagged.
std::vector<LevelShift> energy_shift_check(const EmbeddedIsing& embedded, const AnnealSchedule& schedule, double s,
                                           double lambda, int k, double degeneracy_tolerance = 1e-6);

enum class RateScaling {
    constant,        // gamma0 throughout
    driver_squared,  // gamma0 * (A(s) / A(0))^2, freezing out as the driver vanishes
};

struct RelaxOptions {
    double temperature = 0.87;
    double gamma0 = 5.0;  // per microsecond
    int k = 8;
    int steps_per_unit_s = 200;
    RateScaling scaling = RateScaling::constant;
    double min_overlap = 0.99;
    // Halvings of a ramp step allowed before an unresolved level is an error.
    int max_refinements = 8;
};

struct RelaxResult {
    std::vector<double> t;
    std::vector<double> s;
    std::vector<std::vector<double>> populations;  // instantaneous eigenbasis, k levels
    double p_ground = 0.0;
    double leakage = 0.0;  // population lost outside the tracked levels, summed
    bool leakage_flag = false;  // leakage above 1%
    // Populations and energies at the end of the pause, when there is one.
    std::vector<double> pause_populations;
    std::vector<double> pause_energies;
};

std::vector<double> gibbs_populations(const std::vector<double>& energies, double temperature);
// Pauli master equation generator: column i holds the rates out of level i.
Eigen::MatrixXd rate_matrix(const std::vector<double>& energies, double temperature, double gamma);
std::vector<double> relax(const std::vector<double>& populations, const std::vector<double>& energies,
                          double temperature, double gamma, double duration);
double kl_divergence(const std::vector<double>& p, const std::vector<double>& q);

// Thermal relaxation among the k lowest instantaneous levels along the
// schedule, starting in the ground state at s = 0. Populations are carried
// across grid steps through squared eigenvector overlaps. A step that keeps
// less than min_overlap of some tracked level is bisected; QsimError once
// max_refinements halvings do not help.
RelaxResult pause_relax_evolve(const EmbeddedIsing& embedded, const AnnealSchedule& schedule,
                               const RelaxOptions& options = {});

// The four-qubit triangle used for the gap and pause checks: logical a, b on
// one qubit each, c on a two-qubit chain, J = +1 on every logical edge.
EmbeddedIsing toy_triangle(double j_ferro, const std::vector<double>& h = {0.6, -0.2, 0.6});

}  // namespace bdmst
