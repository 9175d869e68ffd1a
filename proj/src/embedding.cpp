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

#include "bdmst/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "bdmst/random.hpp"

namespace bdmst {

int Embedding::physical_count() const {
    int total = 0;
    for (const auto& c : chains) total += static_cast<int>(c.size());
    return total;
}

void Embedding::normalize() {
    for (auto& c : chains) std::sort(c.begin(), c.end());
}

namespace {

EmbeddingVerdict fail(std::string reason) { return {false, std::move(reason)}; }

}  // namespace

EmbeddingVerdict validate_embedding(const Embedding& embedding, const Graph& logical,
                                    const HardwareGraph& hardware) {
    if (embedding.num_logical() != logical.num_vertices())
        return fail("embedding has " + std::to_string(embedding.num_logical()) + " vertex models, logical graph has " +
                    std::to_string(logical.num_vertices()) + " vertices");
    std::vector<int> owner(hardware.num_nodes(), -1);
    for (int v = 0; v < embedding.num_logical(); ++v) {
        const auto& chain = embedding.chains[v];
        if (chain.empty()) return fail("vertex model " + std::to_string(v) + " is empty");
        for (int id : chain) {
            const auto q = hardware.index(id);
            if (!q) return fail("qubit " + std::to_string(id) + " is not in " + hardware.name());
            if (owner[*q] >= 0)
                return fail("qubit " + std::to_string(id) + " is shared by vertex models " +
                            std::to_string(owner[*q]) + " and " + std::to_string(v));
            owner[*q] = v;
        }
    }
    const Graph& hw = hardware.graph();
    for (int v = 0; v < embedding.num_logical(); ++v) {
        const auto& chain = embedding.chains[v];
        std::vector<int> stack{*hardware.index(chain.front())};
        std::set<int> seen{stack.front()};
        while (!stack.empty()) {
            const int q = stack.back();
            stack.pop_back();
            for (int r : hw.neighbors(q))
                if (owner[r] == v && seen.insert(r).second) stack.push_back(r);
        }
        if (seen.size() != chain.size()) return fail("vertex model " + std::to_string(v) + " is disconnected");
    }
    for (const Edge& e : logical.edges()) {
        bool covered = false;
        for (int id : embedding.chains[e.u]) {
            for (int r : hw.neighbors(*hardware.index(id)))
                if (owner[r] == static_cast<int>(e.v)) covered = true;
            if (covered) break;
        }
        if (!covered)
            return fail("logical edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has no coupler");
    }
    return {true, {}};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class ChainGrower {
  public:
    ChainGrower(const Graph& logical, const Graph& hw, std::uint64_t seed)
        : logical_(logical), hw_(hw), rng_(seed), chains_(logical.num_vertices()), usage_(hw.num_vertices(), 0) {}

    bool run(const FindEmbeddingOptions& options) {
        auto order = placement_order();
        // Free overlaps for the first pass, then a fixed penalty per shared qubit.
        for (int v : order) place(v, 1.0, false);
        double alpha = options.penalty;
        int best_overlaps = overlap_count();
        int stale = 0;
        for (int round = 0; round < options.max_rounds && best_overlaps > 0; ++round) {
            if (stale >= options.patience) {
                rip_up_congestion(alpha);
                stale = 0;
            }
            std::shuffle(order.begin(), order.end(), rng_);
            for (int v : order) place(v, alpha, false);
            alpha *= options.penalty_growth;
            const int overlaps = overlap_count();
            if (overlaps < best_overlaps) {
                best_overlaps = overlaps;
                stale = 0;
            } else {
                ++stale;
            }
        }
        if (overlap_count() > 0) return false;
        for (int round = 0; round < options.tighten_rounds; ++round) {
            bool improved = false;
            std::shuffle(order.begin(), order.end(), rng_);
            for (int v : order) {
                const auto before = chains_[v];
                if (!place(v, 1.0, true) || chains_[v].size() > before.size()) {
                    set_chain(v, before);
                } else if (chains_[v].size() < before.size()) {
                    improved = true;
                }
            }
            if (!improved) break;
        }
        return true;
    }

    const std::vector<std::vector<int>>& chains() const { return chains_; }

  private:
    std::vector<int> placement_order() {
        const int n = logical_.num_vertices();
        std::vector<int> order;
        std::vector<char> seen(n, 0);
        std::vector<int> starts(n);
        std::iota(starts.begin(), starts.end(), 0);
        std::shuffle(starts.begin(), starts.end(), rng_);
        for (int s : starts) {
            if (seen[s]) continue;
            std::vector<int> queue{s};
            seen[s] = 1;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const int v = queue[head];
                order.push_back(v);
                std::vector<int> next(logical_.neighbors(v).begin(), logical_.neighbors(v).end());
                std::shuffle(next.begin(), next.end(), rng_);
                for (int u : next)
                    if (!seen[u]) {
                        seen[u] = 1;
                        queue.push_back(u);
                    }
            }
        }
        return order;
    }

    int overlap_count() const {
        return static_cast<int>(std::count_if(usage_.begin(), usage_.end(), [](int u) { return u > 1; }));
    }

    // Clears every chain touching an overlapped qubit, plus the logical
    // neighbours of those chains, and places them again in random order.
    void rip_up_congestion(double alpha) {
        std::vector<char> hit(chains_.size(), 0);
        for (int v = 0; v < static_cast<int>(chains_.size()); ++v)
            for (int q : chains_[v])
                if (usage_[q] > 1) hit[v] = 1;
        std::vector<int> victims;
        for (int v = 0; v < static_cast<int>(chains_.size()); ++v) {
            if (!hit[v]) continue;
            victims.push_back(v);
            for (int u : logical_.neighbors(v)) victims.push_back(u);
        }
        std::sort(victims.begin(), victims.end());
        victims.erase(std::unique(victims.begin(), victims.end()), victims.end());
        for (int v : victims) set_chain(v, {});
        std::shuffle(victims.begin(), victims.end(), rng_);
        for (int v : victims) place(v, alpha, false);
    }

    void set_chain(int v, std::vector<int> chain) {
        for (int q : chains_[v]) --usage_[q];
        chains_[v] = std::move(chain);
        for (int q : chains_[v]) ++usage_[q];
    }

    double weight(int q, double alpha, bool block) const {
        if (usage_[q] == 0) return 1.0;
        if (block) return kInf;
        return std::pow(alpha, usage_[q]);
    }

    void shortest_paths(const std::vector<int>& sources, std::vector<double>& dist, std::vector<int>& parent) const {
        const int n = hw_.num_vertices();
        dist.assign(n, kInf);
        parent.assign(n, -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        for (int s : sources) {
            dist[s] = 0.0;
            heap.emplace(0.0, s);
        }
        while (!heap.empty()) {
            const auto [d, q] = heap.top();
            heap.pop();
            if (d > dist[q]) continue;
            for (int r : hw_.neighbors(q)) {
                const double w = weights_[r];
                if (w == kInf) continue;
                if (d + w < dist[r]) {
                    dist[r] = d + w;
                    parent[r] = q;
                    heap.emplace(dist[r], r);
                }
            }
        }
    }

    // Re-embeds v against the chains of its already placed neighbours.
    bool place(int v, double alpha, bool block) {
        set_chain(v, {});
        std::vector<int> placed;
        for (int u : logical_.neighbors(v))
            if (!chains_[u].empty()) placed.push_back(u);

        const int n = hw_.num_vertices();
        if (placed.empty()) {
            int lowest = std::numeric_limits<int>::max();
            std::vector<int> candidates;
            for (int q = 0; q < n; ++q) {
                if (usage_[q] < lowest) {
                    lowest = usage_[q];
                    candidates.clear();
                }
                if (usage_[q] == lowest) candidates.push_back(q);
            }
            if (block && lowest > 0) return false;
            set_chain(v, {candidates[rng_() % candidates.size()]});
            return true;
        }

        weights_.resize(n);
        for (int q = 0; q < n; ++q) weights_[q] = weight(q, alpha, block);
        dist_.resize(placed.size());
        parent_.resize(placed.size());
        // Shared qubits are contested, so only the unshared part of a
        // neighbour chain counts as already reached.
        std::vector<int> sources;
        for (std::size_t i = 0; i < placed.size(); ++i) {
            const auto& target = chains_[placed[i]];
            sources.clear();
            for (int q : target)
                if (usage_[q] == 1) sources.push_back(q);
            shortest_paths(sources.empty() ? target : sources, dist_[i], parent_[i]);
        }

        // Roots stay on free qubits when possible so a boxed-in chain has to
        // grow out instead of settling on a neighbour's qubit.
        double best = kInf;
        std::vector<int> roots;
        for (bool free_only : {true, false}) {
            for (int q = 0; q < n; ++q) {
                const double w = weights_[q];
                if (w == kInf || (free_only && usage_[q] > 0)) continue;
                double cost = w;
                for (std::size_t i = 0; i < placed.size() && cost < kInf; ++i) {
                    const double d = dist_[i][q];
                    cost += d == 0.0 ? 0.0 : d - w;
                }
                if (cost < best - 1e-9) {
                    best = cost;
                    roots.clear();
                }
                if (cost <= best + 1e-9) roots.push_back(q);
            }
            if (!roots.empty()) break;
        }
        if (roots.empty()) return false;

        const int root = roots[rng_() % roots.size()];
        std::vector<int> chain{root};
        for (std::size_t i = 0; i < placed.size(); ++i) {
            for (int q = root; parent_[i][q] >= 0; q = parent_[i][q])
                if (q != root) chain.push_back(q);
        }
        std::sort(chain.begin(), chain.end());
        chain.erase(std::unique(chain.begin(), chain.end()), chain.end());
        trim(chain, placed);
        set_chain(v, std::move(chain));
        return true;
    }

    // Drops leaf qubits whose every neighbour contact is also made elsewhere.
    void trim(std::vector<int>& chain, const std::vector<int>& placed) {
        if (chain.size() < 2) return;
        const int n = hw_.num_vertices();
        member_.assign(placed.size(), std::vector<char>());
        for (std::size_t i = 0; i < placed.size(); ++i) {
            member_[i].assign(n, 0);
            for (int q : chains_[placed[i]]) member_[i][q] = 1;
        }
        in_chain_.assign(n, 0);
        for (int q : chain) in_chain_[q] = 1;
        const auto touches = [&](int q, std::size_t i) {
            if (member_[i][q]) return true;
            for (int r : hw_.neighbors(q))
                if (member_[i][r]) return true;
            return false;
        };
        std::vector<int> contacts(placed.size(), 0);
        for (int q : chain)
            for (std::size_t i = 0; i < placed.size(); ++i) contacts[i] += touches(q, i);
        // Keep at least one unshared qubit, or the chain collapses onto its
        // neighbours and the boxed-in case comes back.
        int unshared = 0;
        for (int q : chain) unshared += usage_[q] == 0;
        for (bool changed = true; changed && chain.size() > 1;) {
            changed = false;
            for (std::size_t k = 0; k < chain.size() && chain.size() > 1; ++k) {
                const int q = chain[k];
                int inner = 0;
                for (int r : hw_.neighbors(q)) inner += in_chain_[r];
                if (inner > 1 || (usage_[q] == 0 && unshared == 1)) continue;
                bool needed = false;
                for (std::size_t i = 0; i < placed.size() && !needed; ++i) needed = touches(q, i) && contacts[i] < 2;
                if (needed) continue;
                for (std::size_t i = 0; i < placed.size(); ++i) contacts[i] -= touches(q, i);
                unshared -= usage_[q] == 0;
                in_chain_[q] = 0;
                chain.erase(chain.begin() + static_cast<std::ptrdiff_t>(k));
                changed = true;
                --k;
            }
        }
    }

    const Graph& logical_;
    const Graph& hw_;
    std::mt19937_64 rng_;
    std::vector<std::vector<int>> chains_;
    std::vector<int> usage_;
    std::vector<double> weights_;
    std::vector<std::vector<char>> member_;
    std::vector<char> in_chain_;
    std::vector<std::vector<double>> dist_;
    std::vector<std::vector<int>> parent_;
};

}  // namespace

FindEmbeddingResult find_embedding(const Graph& logical, const HardwareGraph& hardware,
                                   const FindEmbeddingOptions& options) {
    if (options.attempts < 1) throw std::invalid_argument("find_embedding needs at least one attempt");
    FindEmbeddingResult result;
    for (int attempt = 0; attempt < options.attempts; ++attempt) {
        ChainGrower grower(logical, hardware.graph(), derive_seed(options.seed, attempt));
        int size = 0;
        if (grower.run(options)) {
            Embedding e;
            for (const auto& chain : grower.chains()) {
                auto& ids = e.chains.emplace_back();
                for (int q : chain) ids.push_back(hardware.id(q));
            }
            e.normalize();
            if (validate_embedding(e, logical, hardware)) {
                size = e.physical_count();
                if (!result.best || size < result.best->physical_count()) {
                    result.best = std::move(e);
                    result.best_attempt = attempt;
                }
            }
        }
        result.attempt_sizes.push_back(size);
    }
    return result;
}

Graph interaction_graph(const IsingModel& model) {
    std::vector<Edge> edges;
    for (const auto& [key, v] : model.j)
        if (v != 0.0) edges.emplace_back(key.first, key.second);
    return Graph(model.num_spins(), std::move(edges));
}

Embedding EmbeddedIsing::embedding() const {
    Embedding e;
    for (const auto& chain : chains) {
        auto& ids = e.chains.emplace_back();
        for (int p : chain) ids.push_back(qubits[p]);
    }
    e.normalize();
    return e;
}

EmbeddedIsing embed_ising(const IsingModel& logical, const Embedding& embedding, const HardwareGraph& hardware,
                          double j_ferro, const EmbedOptions& options) {
    if (!(j_ferro > 0.0)) throw EmbeddingError("chain strength |J_F| must be positive");
    if (options.enforce_hardware_range) {
        constexpr double tol = 1e-12;
        if (j_ferro > 2.0 + tol) throw EmbeddingError("chain strength |J_F| exceeds 2");
        if (logical.max_abs_coefficient() > 1.0 + tol)
            throw EmbeddingError("logical coefficients exceed [-1, 1]; scale the model first");
    }
    if (const auto verdict = validate_embedding(embedding, interaction_graph(logical), hardware); !verdict)
        throw EmbeddingError("invalid embedding: " + verdict.reason);

    EmbeddedIsing out;
    out.j_ferro = j_ferro;
    for (const auto& chain : embedding.chains) out.qubits.insert(out.qubits.end(), chain.begin(), chain.end());
    std::sort(out.qubits.begin(), out.qubits.end());
    const int num_physical = static_cast<int>(out.qubits.size());
    const auto physical_of = [&](int id) {
        return static_cast<int>(std::lower_bound(out.qubits.begin(), out.qubits.end(), id) - out.qubits.begin());
    };

    out.owner.assign(num_physical, -1);
    out.chains.resize(embedding.num_logical());
    for (int v = 0; v < embedding.num_logical(); ++v)
        for (int id : embedding.chains[v]) {
            const int p = physical_of(id);
            out.owner[p] = v;
            out.chains[v].push_back(p);
        }
    for (auto& c : out.chains) std::sort(c.begin(), c.end());

    out.ising = IsingModel(num_physical);
    out.ising.offset = logical.offset;
    for (int v = 0; v < logical.num_spins(); ++v) {
        const double share = logical.h[v] / static_cast<double>(out.chains[v].size());
        for (int p : out.chains[v]) out.ising.h[p] += share;
    }

    const Graph& hw = hardware.graph();
    for (const auto& [key, value] : logical.j) {
        if (value == 0.0) continue;
        std::pair<int, int> best{std::numeric_limits<int>::max(), std::numeric_limits<int>::max()};
        for (int p : out.chains[key.first])
            for (int r : hw.neighbors(*hardware.index(out.qubits[p]))) {
                const int id = hardware.id(r);
                const auto it = std::lower_bound(out.qubits.begin(), out.qubits.end(), id);
                if (it == out.qubits.end() || *it != id || out.owner[it - out.qubits.begin()] != key.second) continue;
                best = std::min(best, std::pair<int, int>{std::min(out.qubits[p], id), std::max(out.qubits[p], id)});
            }
        out.ising.add_coupling(physical_of(best.first), physical_of(best.second), value);
    }

    for (int v = 0; v < out.num_logical(); ++v) {
        const auto& chain = out.chains[v];
        std::vector<std::pair<int, int>> edges;
        if (options.topology == ChainTopology::all_internal) {
            for (std::size_t a = 0; a < chain.size(); ++a)
                for (std::size_t b = a + 1; b < chain.size(); ++b)
                    if (hardware.has_coupler(out.qubits[chain[a]], out.qubits[chain[b]]))
                        edges.emplace_back(chain[a], chain[b]);
        } else {
            std::vector<char> seen(num_physical, 0);
            std::vector<int> queue{chain.front()};
            seen[chain.front()] = 1;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const int p = queue[head];
                std::vector<int> next;
                for (int r : hw.neighbors(*hardware.index(out.qubits[p]))) {
                    const int id = hardware.id(r);
                    const auto it = std::lower_bound(out.qubits.begin(), out.qubits.end(), id);
                    if (it == out.qubits.end() || *it != id) continue;
                    const int q = static_cast<int>(it - out.qubits.begin());
                    if (out.owner[q] == v && !seen[q]) next.push_back(q);
                }
                std::sort(next.begin(), next.end());
                for (int q : next) {
                    if (seen[q]) continue;
                    seen[q] = 1;
                    queue.push_back(q);
                    edges.emplace_back(std::min(p, q), std::max(p, q));
                }
            }
        }
        for (auto e : edges) {
            out.ising.add_coupling(e.first, e.second, -j_ferro);
            out.chain_edges.push_back(e);
        }
    }
    std::sort(out.chain_edges.begin(), out.chain_edges.end());
    return out;
}

std::vector<Spin> embed_spins(std::span<const Spin> logical, const EmbeddedIsing& embedded) {
    if (static_cast<int>(logical.size()) != embedded.num_logical()) throw EmbeddingError("logical size mismatch");
    std::vector<Spin> out(embedded.num_physical());
    for (int p = 0; p < embedded.num_physical(); ++p) out[p] = logical[embedded.owner[p]];
    return out;
}

UnembedResult unembed_read(std::span<const Spin> physical, const EmbeddedIsing& embedded) {
    if (static_cast<int>(physical.size()) != embedded.num_physical()) throw EmbeddingError("physical size mismatch");
    UnembedResult out;
    std::vector<Spin> logical(embedded.num_logical());
    for (int v = 0; v < embedded.num_logical(); ++v) {
        const auto& chain = embedded.chains[v];
        logical[v] = physical[chain.front()];
        for (int p : chain)
            if (physical[p] != logical[v]) {
                out.broken.push_back(v);
                break;
            }
    }
    if (out.broken.empty()) out.logical = std::move(logical);
    return out;
}

EmbeddingStats embedding_stats(const Embedding& embedding) {
    EmbeddingStats s;
    s.logical_count = embedding.num_logical();
    for (const auto& c : embedding.chains) s.sizes.push_back(static_cast<int>(c.size()));
    s.physical_count = std::accumulate(s.sizes.begin(), s.sizes.end(), 0);
    if (s.sizes.empty()) return s;
    auto sorted = s.sizes;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    s.median_size = sorted.size() % 2 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    s.max_size = sorted.back();
    return s;
}

Gauge physical_gauge(const EmbeddedIsing& embedded, const Gauge& logical_gauge) {
    if (logical_gauge.size() != embedded.num_logical())
        throw EmbeddingError("gauge covers " + std::to_string(logical_gauge.size()) + " logical variables, model has " +
                             std::to_string(embedded.num_logical()));
    Gauge g{std::vector<Spin>(embedded.num_physical()), logical_gauge.seed};
    for (int p = 0; p < embedded.num_physical(); ++p) g.a[p] = logical_gauge.a[embedded.owner[p]];
    return g;
}

EmbeddedIsing partial_gauge(const EmbeddedIsing& embedded, const Gauge& logical_gauge) {
    EmbeddedIsing out = embedded;
    out.ising = gauge_transform(embedded.ising, physical_gauge(embedded, logical_gauge));
    return out;
}

}  // namespace bdmst
