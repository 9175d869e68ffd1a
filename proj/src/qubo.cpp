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

#include "bdmst/qubo.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>

namespace bdmst {

char kind_letter(VarKind kind) {
    switch (kind) {
        case VarKind::X: return 'X';
        case VarKind::Y: return 'Y';
        case VarKind::Z: return 'Z';
        case VarKind::Anc: return 'A';
    }
    return '?';
}

std::string describe(const VarId& id) {
    std::string out(1, kind_letter(id.kind));
    switch (id.kind) {
        case VarKind::X:
            return out + " " + std::to_string(id.a + 1) + " " + std::to_string(id.b + 1);
        case VarKind::Y:
        case VarKind::Z:
            return out + " " + std::to_string(id.a + 1) + " " + std::to_string(id.b);
        case VarKind::Anc:
            return out + " " + std::to_string(id.a + 1) + " " + std::to_string(id.b + 1) + " " +
                   std::to_string(id.c);
    }
    return out;
}

int VariableRegistry::add(const VarId& id) {
    auto [it, inserted] = index_.emplace(id, size());
    if (inserted) vars_.push_back(id);
    return it->second;
}

std::optional<int> VariableRegistry::find(const VarId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

void QuadraticForm::add_linear(int i, std::int64_t c) { linear[i] += c; }

void QuadraticForm::add_quadratic(int i, int j, std::int64_t c) {
    if (i == j) {
        add_linear(i, c);
        return;
    }
    quadratic[{std::min(i, j), std::max(i, j)}] += c;
}

void QuadraticForm::add_square(const std::vector<std::pair<int, std::int64_t>>& terms,
                               std::int64_t constant) {
    offset += constant * constant;
    for (std::size_t a = 0; a < terms.size(); ++a) {
        const auto [i, ci] = terms[a];
        add_linear(i, ci * ci + 2 * ci * constant);
        for (std::size_t b = a + 1; b < terms.size(); ++b) add_quadratic(i, terms[b].first, 2 * ci * terms[b].second);
    }
}

void QuadraticForm::add_scaled(const QuadraticForm& other, std::int64_t factor) {
    offset += factor * other.offset;
    for (auto [i, c] : other.linear) linear[i] += factor * c;
    for (auto [key, c] : other.quadratic) quadratic[key] += factor * c;
}

void QuadraticForm::prune_zeros() {
    std::erase_if(linear, [](const auto& kv) { return kv.second == 0; });
    std::erase_if(quadratic, [](const auto& kv) { return kv.second == 0; });
}

std::int64_t QuadraticForm::evaluate(std::span<const std::uint8_t> bits) const {
    std::int64_t e = offset;
    for (auto [i, c] : linear)
        if (bits[i]) e += c;
    for (auto [key, c] : quadratic)
        if (bits[key.first] && bits[key.second]) e += c;
    return e;
}

std::vector<std::vector<int>> level_preprocess(const ProblemInstance& instance, bool preprocess) {
    const int n = instance.graph.num_vertices();
    const auto dist = instance.graph.distances_from(instance.root);
    std::vector<std::vector<int>> levels(n);
    for (int v = 0; v < n; ++v) {
        if (v == instance.root) {
            levels[v] = {1};
            continue;
        }
        const int lowest = preprocess ? dist[v] + 1 : 2;
        for (int l = lowest; l <= n; ++l) levels[v].push_back(l);
    }
    return levels;
}

namespace {

bool admits_bounded_tree(const ProblemInstance& instance) {
    if (instance.graph.num_vertices() > kMaxExactVertices) return true;
    return solve_bdmst_exact(instance).feasible;
}

}  // namespace

MappingTerms build_terms(const ProblemInstance& instance, const MappingOptions& options) {
    instance.check();
    if (!options.allow_infeasible && !admits_bounded_tree(instance))
        throw MappingError(instance.label + ": no spanning tree with max degree " +
                           std::to_string(instance.degree_bound));

    const Graph& g = instance.graph;
    const int n = g.num_vertices();
    const int root = instance.root;
    const int delta = instance.degree_bound;
    const auto levels = level_preprocess(instance, options.preprocess);
    auto has_level = [&](int v, int l) {
        return std::find(levels[v].begin(), levels[v].end(), l) != levels[v].end();
    };

    MappingTerms t;
    VariableRegistry& reg = t.registry;

    // X block: ordered pairs (p, v) along edges, v never the root.
    std::vector<std::pair<int, int>> parent_child;
    for (int p = 0; p < n; ++p)
        for (int v = 0; v < n; ++v)
            if (v != root && g.has_edge(p, v)) parent_child.emplace_back(p, v);
    for (auto [p, v] : parent_child) reg.add(VarId::x(p, v));

    for (int v = 0; v < n; ++v)
        if (v != root)
            for (int l : levels[v]) reg.add(VarId::y(v, l));

    std::vector<int> slack(n, 0);
    for (int p = 0; p < n; ++p) {
        int cap = (p == root) ? delta : delta - 1;
        if (options.preprocess) {
            const int candidates = static_cast<int>(std::count_if(
                parent_child.begin(), parent_child.end(), [p](auto pc) { return pc.first == p; }));
            cap = std::min(cap, candidates);
        }
        slack[p] = cap;
        for (int j = 1; j <= cap; ++j) reg.add(VarId::z(p, j));
    }

    // Cubic consistency terms x_{p,v} y_{v,l} (1 - y_{p,l-1}) for non-root parents.
    struct Cubic {
        int p, v, l;
        bool needs_ancilla;
    };
    std::vector<Cubic> cubics;
    for (auto [p, v] : parent_child) {
        if (p == root) continue;
        for (int l : levels[v]) {
            if (l < 3) continue;
            cubics.push_back({p, v, l, has_level(p, l - 1)});
        }
    }
    for (const Cubic& c : cubics)
        if (c.needs_ancilla) reg.add(VarId::anc(c.p, c.v, c.l));

    auto idx = [&](const VarId& id) { return *reg.find(id); };

    for (auto [p, v] : parent_child) t.cost.add_linear(idx(VarId::x(p, v)), instance.weight(p, v));

    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        std::vector<std::pair<int, std::int64_t>> parents;
        for (int p : g.neighbors(v)) parents.emplace_back(idx(VarId::x(p, v)), 1);
        t.one_parent.add_square(parents, -1);

        std::vector<std::pair<int, std::int64_t>> lv;
        for (int l : levels[v]) lv.emplace_back(idx(VarId::y(v, l)), 1);
        t.one_level.add_square(lv, -1);
    }

    for (int p = 0; p < n; ++p) {
        std::vector<std::pair<int, std::int64_t>> terms;
        for (auto [pp, v] : parent_child)
            if (pp == p) terms.emplace_back(idx(VarId::x(p, v)), 1);
        for (int j = 1; j <= slack[p]; ++j) terms.emplace_back(idx(VarId::z(p, j)), -1);
        t.degree.add_square(terms, 0);
    }

    // Root edges: x_{r,v}(1 - y_{v,2}) + y_{v,2}(1 - x_{r,v}); absent variables are 0.
    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        const auto x = reg.find(VarId::x(root, v));
        const auto y = reg.find(VarId::y(v, 2));
        if (x) t.consistency.add_linear(*x, 1);
        if (y) t.consistency.add_linear(*y, 1);
        if (x && y) t.consistency.add_quadratic(*x, *y, -2);
    }

    for (const Cubic& c : cubics) {
        const int x = idx(VarId::x(c.p, c.v));
        const int y = idx(VarId::y(c.v, c.l));
        if (!c.needs_ancilla) {
            // y_{p,l-1} is identically 0.
            t.consistency.add_quadratic(x, y, 1);
            continue;
        }
        const int a = idx(VarId::anc(c.p, c.v, c.l));
        const int yp = idx(VarId::y(c.p, c.l - 1));
        // 4a - a*y' + x*y - 2a*x - 2a*y
        t.consistency.add_linear(a, 4);
        t.consistency.add_quadratic(a, yp, -1);
        t.consistency.add_quadratic(x, y, 1);
        t.consistency.add_quadratic(a, x, -2);
        t.consistency.add_quadratic(a, y, -2);
    }

    for (QuadraticForm* f : {&t.cost, &t.one_parent, &t.one_level, &t.degree, &t.consistency})
        f->prune_zeros();
    return t;
}

Qubo build_qubo(const ProblemInstance& instance, const MappingOptions& options) {
    if (options.epsilon < 0) throw MappingError("penalty epsilon must be non-negative");
    MappingTerms terms = build_terms(instance, options);
    Qubo q;
    q.penalty_weight = instance.max_weight() + options.epsilon;
    q.form.add_scaled(terms.cost, 1);
    for (const QuadraticForm* f : {&terms.one_parent, &terms.one_level, &terms.degree, &terms.consistency})
        q.form.add_scaled(*f, q.penalty_weight);
    q.form.prune_zeros();
    q.registry = std::move(terms.registry);
    return q;
}

VariableCounts count_variables(const VariableRegistry& registry) {
    VariableCounts c;
    for (const VarId& id : registry.vars()) {
        switch (id.kind) {
            case VarKind::X: ++c.x; break;
            case VarKind::Y: ++c.y; break;
            case VarKind::Z: ++c.z; break;
            case VarKind::Anc: ++c.anc; break;
        }
    }
    c.total = registry.size();
    return c;
}

VariableCounts count_variables(const ProblemInstance& instance, const MappingOptions& options) {
    return count_variables(build_terms(instance, options).registry);
}

DecodedSolution decode(const Qubo& qubo, const ProblemInstance& instance,
                       std::span<const std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != qubo.num_vars())
        throw std::invalid_argument("assignment has " + std::to_string(bits.size()) + " bits, QUBO has " +
                                    std::to_string(qubo.num_vars()) + " variables");
    DecodedSolution out;
    out.energy = qubo.energy(bits);
    const int n = instance.graph.num_vertices();
    const int root = instance.root;

    std::vector<int> parent(n, -1), level(n, 0), parent_count(n, 0), level_count(n, 0);
    level[root] = 1;
    for (int i = 0; i < qubo.num_vars(); ++i) {
        if (!bits[i]) continue;
        const VarId& id = qubo.registry.at(i);
        if (id.kind == VarKind::X) {
            ++parent_count[id.b];
            parent[id.b] = id.a;
        } else if (id.kind == VarKind::Y) {
            ++level_count[id.a];
            level[id.a] = id.b;
        }
    }
    auto fail = [&](std::string reason) {
        out.status = DecodeStatus::broken_encoding;
        out.reason = std::move(reason);
        return out;
    };
    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        if (parent_count[v] == 0) return fail("no-parent");
        if (parent_count[v] > 1) return fail("multiple-parents");
    }
    for (int v = 0; v < n; ++v)
        if (v != root && level_count[v] != 1) return fail("level");
    for (int v = 0; v < n; ++v)
        if (v != root && level[parent[v]] != level[v] - 1) return fail("level-order");

    std::vector<Edge> edges;
    for (int v = 0; v < n; ++v)
        if (v != root) edges.emplace_back(parent[v], v);
    std::sort(edges.begin(), edges.end());
    const TreeVerdict verdict = validate_tree(instance.graph, edges, instance.degree_bound);
    if (verdict.defect == TreeDefect::degree_violation) return fail("degree");
    if (!verdict) return fail("not-tree");

    out.status = DecodeStatus::valid_tree;
    out.tree = SpanningTree{edges, tree_cost(instance, edges)};
    return out;
}

std::vector<std::uint8_t> encode_tree(const Qubo& qubo, const ProblemInstance& instance,
                                      std::span<const Edge> tree_edges) {
    const int n = instance.graph.num_vertices();
    const int root = instance.root;
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : tree_edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<int> parent(n, -1), level(n, 0);
    std::vector<int> stack{root};
    level[root] = 1;
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int w : adj[u]) {
            if (w == parent[u] || level[w] != 0) continue;
            parent[w] = u;
            level[w] = level[u] + 1;
            stack.push_back(w);
        }
    }
    std::vector<int> children(n, 0);
    for (int v = 0; v < n; ++v)
        if (v != root) {
            if (parent[v] < 0) throw MappingError("edge set does not span the graph");
            ++children[parent[v]];
        }

    std::vector<std::uint8_t> bits(qubo.num_vars(), 0);
    auto set = [&](const VarId& id) {
        const auto i = qubo.registry.find(id);
        if (!i) throw MappingError("encoding needs pruned variable " + describe(id));
        bits[*i] = 1;
    };
    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        set(VarId::x(parent[v], v));
        set(VarId::y(v, level[v]));
    }
    for (int p = 0; p < n; ++p)
        for (int j = 1; j <= children[p]; ++j) set(VarId::z(p, j));
    for (int i = 0; i < qubo.num_vars(); ++i) {
        const VarId& id = qubo.registry.at(i);
        if (id.kind == VarKind::Anc)
            bits[i] = (parent[id.b] == id.a && level[id.b] == id.c) ? 1 : 0;
    }
    return bits;
}

std::vector<std::uint8_t> mask_to_bits(std::uint64_t mask, int num_vars) {
    std::vector<std::uint8_t> bits(num_vars);
    for (int i = 0; i < num_vars; ++i) bits[i] = (mask >> i) & 1U;
    return bits;
}

QuboMinimum brute_force_minimum(const Qubo& qubo, std::size_t keep) {
    const int n = qubo.num_vars();
    if (n > 40) throw std::invalid_argument("brute force limited to 40 variables");
    std::vector<std::int64_t> field(n, 0);
    std::vector<std::vector<std::pair<int, std::int64_t>>> nbrs(n);
    for (auto [i, c] : qubo.form.linear) field[i] = c;
    for (auto [key, c] : qubo.form.quadratic) {
        nbrs[key.first].emplace_back(key.second, c);
        nbrs[key.second].emplace_back(key.first, c);
    }
    QuboMinimum best;
    std::uint64_t state = 0;
    std::int64_t energy = qubo.form.offset;
    best.energy = energy;
    best.num_minimizers = 1;
    best.minimizers = {0};
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t t = 1; t < total; ++t) {
        const int i = std::countr_zero(t);
        const bool was_set = (state >> i) & 1U;
        energy += was_set ? -field[i] : field[i];
        state ^= std::uint64_t{1} << i;
        const std::int64_t sign = was_set ? -1 : 1;
        for (auto [j, c] : nbrs[i]) field[j] += sign * c;
        if (energy < best.energy) {
            best.energy = energy;
            best.num_minimizers = 1;
            best.minimizers.assign(1, state);
        } else if (energy == best.energy) {
            ++best.num_minimizers;
            if (best.minimizers.size() < keep) best.minimizers.push_back(state);
        }
    }
    return best;
}

}  // namespace bdmst
