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
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bdmst/instances.hpp"

namespace bdmst {

// Binary variable families of the level-based encoding.
//   X(p, v)      p is the parent of v
//   Y(v, l)      v sits at tree level l (root is level 1)
//   Z(p, j)      j-th unary slack bit of p's child count
//   Anc(p, v, l) ancilla standing in for X(p, v) * Y(v, l)
enum class VarKind : std::uint8_t { X, Y, Z, Anc };

struct VarId {
    VarKind kind = VarKind::X;
    int a = 0;  // vertex (0-based)
    int b = 0;  // vertex (X, Anc), level (Y) or slack index (Z)
    int c = 0;  // level (Anc only)

    static VarId x(int parent, int child) { return {VarKind::X, parent, child, 0}; }
    static VarId y(int vertex, int level) { return {VarKind::Y, vertex, level, 0}; }
    static VarId z(int vertex, int slot) { return {VarKind::Z, vertex, slot, 0}; }
    static VarId anc(int parent, int child, int level) { return {VarKind::Anc, parent, child, level}; }

    friend bool operator==(const VarId&, const VarId&) = default;
    friend auto operator<=>(const VarId&, const VarId&) = default;
};

char kind_letter(VarKind kind);
// "X 1 2", "Y 3 4", ... with 1-based vertices.
std::string describe(const VarId& id);

class VariableRegistry {
  public:
    int add(const VarId& id);
    std::optional<int> find(const VarId& id) const;
    bool contains(const VarId& id) const { return index_.contains(id); }
    const VarId& at(int index) const { return vars_.at(index); }
    int size() const { return static_cast<int>(vars_.size()); }
    const std::vector<VarId>& vars() const { return vars_; }

  private:
    std::vector<VarId> vars_;
    std::map<VarId, int> index_;
};

// Integer quadratic pseudo-boolean polynomial over registry indices.
struct QuadraticForm {
    std::map<int, std::int64_t> linear;
    std::map<std::pair<int, int>, std::int64_t> quadratic;  // keys i < j
    std::int64_t offset = 0;

    void add_constant(std::int64_t c) { offset += c; }
    void add_linear(int i, std::int64_t c);
    // i == j folds into the linear term (x*x == x).
    void add_quadratic(int i, int j, std::int64_t c);
    // Adds (sum_k coeff_k * x_k + constant)^2.
    void add_square(const std::vector<std::pair<int, std::int64_t>>& terms, std::int64_t constant);
    void add_scaled(const QuadraticForm& other, std::int64_t factor);
    void prune_zeros();

    std::int64_t evaluate(std::span<const std::uint8_t> bits) const;
};

struct MappingOptions {
    // Penalty weight is max edge weight + epsilon.
    std::int64_t epsilon = 0;
    // Distance-based level pruning plus the two derived reductions that come
    // with it: no ancilla when the parent-level variable was pruned, and slack
    // capped at the number of child candidates.
    bool preprocess = true;
    // Build even when no degree-bounded spanning tree exists.
    bool allow_infeasible = false;
};

// The cost and the four penalty groups, each over the same registry.
struct MappingTerms {
    VariableRegistry registry;
    QuadraticForm cost;
    QuadraticForm one_parent;
    QuadraticForm one_level;
    QuadraticForm degree;
    QuadraticForm consistency;
};

struct Qubo {
    VariableRegistry registry;
    QuadraticForm form;
    std::int64_t penalty_weight = 0;

    int num_vars() const { return registry.size(); }
    std::int64_t energy(std::span<const std::uint8_t> bits) const { return form.evaluate(bits); }
};

class MappingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Allowed levels per vertex: {dist(root, v) + 1, ..., n} when preprocessing,
// {2, ..., n} otherwise. The root maps to {1}.
std::vector<std::vector<int>> level_preprocess(const ProblemInstance& instance, bool preprocess = true);

MappingTerms build_terms(const ProblemInstance& instance, const MappingOptions& options = {});
Qubo build_qubo(const ProblemInstance& instance, const MappingOptions& options = {});

struct VariableCounts {
    int x = 0;
    int y = 0;
    int z = 0;
    int anc = 0;
    int total = 0;
};

VariableCounts count_variables(const VariableRegistry& registry);
VariableCounts count_variables(const ProblemInstance& instance, const MappingOptions& options = {});

enum class DecodeStatus { valid_tree, broken_encoding };

struct DecodedSolution {
    DecodeStatus status = DecodeStatus::broken_encoding;
    // First violated constraint: no-parent, multiple-parents, level,
    // level-order, degree, not-tree. Empty for valid trees.
    std::string reason;
    std::optional<SpanningTree> tree;
    std::int64_t energy = 0;

    bool valid() const { return status == DecodeStatus::valid_tree; }
};

DecodedSolution decode(const Qubo& qubo, const ProblemInstance& instance,
                       std::span<const std::uint8_t> bits);

// Bits encoding a given spanning tree rooted at instance.root, with slack and
// ancilla bits set consistently. Throws MappingError if the tree cannot be
// represented (e.g. a level was pruned).
std::vector<std::uint8_t> encode_tree(const Qubo& qubo, const ProblemInstance& instance,
                                      std::span<const Edge> tree_edges);

struct QuboMinimum {
    std::int64_t energy = 0;
    std::uint64_t num_minimizers = 0;
    std::vector<std::uint64_t> minimizers;  // bit i of the mask is variable i; capped
};

// Exhaustive Gray-code minimization; up to 40 variables.
QuboMinimum brute_force_minimum(const Qubo& qubo, std::size_t keep = 4096);

std::vector<std::uint8_t> mask_to_bits(std::uint64_t mask, int num_vars);

}  // namespace bdmst
