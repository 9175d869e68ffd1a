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

#include "bdmst/qsim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "bdmst/hardware.hpp"
#include "bdmst/random.hpp"

namespace bdmst {

namespace {

double interpolate(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

std::string trim(std::string s) {
    const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && ws(s.back())) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && ws(s[b])) ++b;
    return s.substr(b);
}

double parse_double(const std::string& field, int line) {
    const std::string t = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw QsimError("schedule line " + std::to_string(line) + ": bad number '" + t + "'");
    return v;
}

void normalize_sign(Eigen::VectorXd& v) {
    Eigen::Index at = 0;
    v.cwiseAbs().maxCoeff(&at);
    if (v[at] < 0) v = -v;
}

}  // namespace

double ScheduleTable::A(double s) const { return interpolate(this->s, a, s); }
double ScheduleTable::B(double s) const { return interpolate(this->s, b, s); }

void ScheduleTable::check() const {
    if (s.size() < 2 || a.size() != s.size() || b.size() != s.size())
        throw QsimError("schedule table needs at least two rows of s, A, B");
    if (s.front() != 0.0 || s.back() != 1.0) throw QsimError("schedule table must span s = 0 to s = 1");
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i]) || a[i] < 0.0 || b[i] < 0.0)
            throw QsimError("schedule table has a negative or non-finite A or B at row " + std::to_string(i));
        if (i > 0 && !(s[i] > s[i - 1])) throw QsimError("schedule s values must increase");
    }
}

ScheduleTable parse_schedule_csv(const std::string& text) {
    ScheduleTable out;
    out.s.clear();
    out.a.clear();
    out.b.clear();
    std::istringstream in(text);
    std::string line;
    int number = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ls(line);
        for (std::string f; std::getline(ls, f, ',');) fields.push_back(f);
        if (fields.size() != 3)
            throw QsimError("schedule line " + std::to_string(number) + ": expected 3 fields");
        if (!header) {
            header = true;
            if (trim(fields[0]) == "s" && trim(fields[1]) == "A" && trim(fields[2]) == "B") continue;
            throw QsimError("schedule header must be s,A,B");
        }
        out.s.push_back(parse_double(fields[0], number));
        out.a.push_back(parse_double(fields[1], number));
        out.b.push_back(parse_double(fields[2], number));
    }
    out.check();
    return out;
}

ScheduleTable load_schedule_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw QsimError("cannot open schedule " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_schedule_csv(buf.str());
}

double AnnealSchedule::s_at(double t) const {
    if (t <= 0.0) return 0.0;
    if (!s_p) return std::min(1.0, t / t_a);
    const double t1 = *s_p * t_a;
    if (t <= t1) return t / t_a;
    if (t <= t1 + t_p) return *s_p;
    return std::min(1.0, *s_p + (t - t1 - t_p) / t_a);
}

void AnnealSchedule::check() const {
    if (!(t_a > 0.0) || !std::isfinite(t_a)) throw QsimError("anneal time must be positive");
    if (s_p && !(*s_p > 0.0 && *s_p < 1.0)) throw QsimError("pause point must lie strictly inside (0, 1)");
    if (!(t_p >= 0.0) || !std::isfinite(t_p)) throw QsimError("pause duration must be non-negative");
    table.check();
}

Hamiltonian::Hamiltonian(std::vector<double> classical, int num_qubits, double a, double b)
    : classical_(std::move(classical)), num_qubits_(num_qubits), a_(a), b_(b) {
    if (num_qubits < 0 || num_qubits > kMaxSimulatedQubits)
        throw QsimError("simulation supports at most " + std::to_string(kMaxSimulatedQubits) + " qubits");
    if (classical_.size() != (std::size_t{1} << num_qubits))
        throw QsimError("classical energies do not match 2^qubits");
}

void Hamiltonian::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    const std::size_t dim = dimension();
    out.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t m = 0; m < dim; ++m) {
        double flip = 0.0;
        for (int i = 0; i < num_qubits_; ++i) flip += in[static_cast<Eigen::Index>(m ^ (std::size_t{1} << i))];
        out[static_cast<Eigen::Index>(m)] = b_ * classical_[m] * in[static_cast<Eigen::Index>(m)] - a_ * flip;
    }
}

Eigen::SparseMatrix<double> Hamiltonian::sparse() const {
    const std::size_t dim = dimension();
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(dim * (num_qubits_ + 1));
    for (std::size_t m = 0; m < dim; ++m) {
        const auto r = static_cast<Eigen::Index>(m);
        entries.emplace_back(r, r, b_ * classical_[m]);
        if (a_ != 0.0)
            for (int i = 0; i < num_qubits_; ++i)
                entries.emplace_back(r, static_cast<Eigen::Index>(m ^ (std::size_t{1} << i)), -a_);
    }
    Eigen::SparseMatrix<double> out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

Eigen::MatrixXd Hamiltonian::dense() const { return Eigen::MatrixXd(sparse()); }

std::vector<double> classical_energies(const IsingModel& model) {
    const int n = model.num_spins();
    if (n > kMaxSimulatedQubits)
        throw QsimError("model has " + std::to_string(n) + " spins, simulation supports at most " +
                        std::to_string(kMaxSimulatedQubits));
    std::vector<double> out(std::size_t{1} << n);
    std::vector<Spin> spins(n);
    for (std::size_t m = 0; m < out.size(); ++m) {
        for (int i = 0; i < n; ++i) spins[i] = (m >> i) & 1U ? Spin{1} : Spin{-1};
        out[m] = model.energy(spins);
    }
    return out;
}

Hamiltonian hamiltonian_at(const EmbeddedIsing& embedded, const AnnealSchedule& schedule, double s) {
    return Hamiltonian(classical_energies(embedded.ising), embedded.num_physical(), schedule.A(s), schedule.B(s));
}

namespace {

EigenPairs dense_eigs(const Hamiltonian& h, int k) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.dense());
    if (solver.info() != Eigen::Success) throw QsimError("dense diagonalization failed");
    EigenPairs out;
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd v = solver.eigenvectors().col(i);
        normalize_sign(v);
        out.values.push_back(solver.eigenvalues()[i]);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

void orthogonalize(Eigen::VectorXd& v, const std::vector<Eigen::VectorXd>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= b.dot(v) * b;
}

// Restarted Lanczos for the lowest eigenpair orthogonal to the locked vectors.
std::pair<double, Eigen::VectorXd> lanczos_lowest(const Hamiltonian& h, const std::vector<Eigen::VectorXd>& locked,
                                                  Eigen::VectorXd start, const EigOptions& options, double scale) {
    const auto dim = static_cast<Eigen::Index>(h.dimension());
    const int m = static_cast<int>(std::min<Eigen::Index>(options.krylov_size, dim - static_cast<Eigen::Index>(locked.size())));
    Eigen::VectorXd x = std::move(start);
    Eigen::VectorXd w(dim);
    double theta = 0.0;
    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        orthogonalize(x, locked);
        x.normalize();
        std::vector<Eigen::VectorXd> q{x};
        std::vector<double> alpha, beta;
        for (int j = 0; j < m; ++j) {
            h.apply(q[j], w);
            alpha.push_back(q[j].dot(w));
            orthogonalize(w, locked);
            orthogonalize(w, q);
            const double nb = w.norm();
            if (j + 1 == m || nb < 1e-12 * scale) break;
            beta.push_back(nb);
            q.push_back(w / nb);
        }
        const auto n = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
        theta = small.eigenvalues()[0];
        x.setZero();
        for (Eigen::Index i = 0; i < n; ++i) x += small.eigenvectors()(i, 0) * q[i];
        x.normalize();
        h.apply(x, w);
        if ((w - theta * x).norm() <= options.tolerance * scale) return {theta, x};
    }
    throw QsimError("Lanczos did not converge");
}

}  // namespace

EigenPairs lowest_eigs(const Hamiltonian& h, int k, const EigOptions& options) {
    const std::size_t dim = h.dimension();
    if (k < 1 || static_cast<std::size_t>(k) > dim) throw QsimError("requested level count out of range");
    EigenPairs out;
    if (dim <= options.dense_limit) {
        out = dense_eigs(h, k);
    } else {
        const double scale = std::max(1.0, std::abs(h.a()) * h.num_qubits() +
                                               std::abs(h.b()) * std::ranges::max(h.classical(), {}, [](double v) {
                                                   return std::abs(v);
                                               }));
        SplitMix64 rng(derive_seed(options.seed, 0x6c616e63));
        std::vector<Eigen::VectorXd> locked;
        std::vector<double> values;
        // One extra level confirms nothing degenerate with the last was skipped.
        const int want = std::min<int>(k + 1, static_cast<int>(dim));
        for (int i = 0; i < want; ++i) {
            Eigen::VectorXd start(static_cast<Eigen::Index>(dim));
            for (auto& c : start) c = rng.uniform() - 0.5;
            auto [value, vec] = lanczos_lowest(h, locked, std::move(start), options, scale);
            values.push_back(value);
            locked.push_back(std::move(vec));
        }
        // Locking can return levels slightly out of order; sort the pairs.
        std::vector<int> order(values.size());
        std::iota(order.begin(), order.end(), 0);
        std::ranges::sort(order, {}, [&](int i) { return values[i]; });
        for (int i = 0; i < k; ++i) {
            Eigen::VectorXd v = locked[order[i]];
            normalize_sign(v);
            out.values.push_back(values[order[i]]);
            out.vectors.push_back(std::move(v));
        }
    }
    Eigen::VectorXd w;
    for (int i = 0; i < k; ++i) {
        h.apply(out.vectors[i], w);
        out.residuals.push_back((w - out.values[i] * out.vectors[i]).norm());
    }
    return out;
}

namespace {

std::vector<char> aligned_mask(const EmbeddedIsing& embedded) {
    const std::size_t dim = std::size_t{1} << embedded.num_physical();
    std::vector<char> out(dim, 1);
    for (std::size_t m = 0; m < dim; ++m)
        for (auto [p, q] : embedded.chain_edges)
            if (((m >> p) & 1U) != ((m >> q) & 1U)) {
                out[m] = 0;
                break;
            }
    return out;
}

double logical_probability(const Eigen::VectorXd& state, const std::vector<char>& aligned) {
    double p = 0.0;
    for (std::size_t m = 0; m < aligned.size(); ++m)
        if (aligned[m]) p += state[static_cast<Eigen::Index>(m)] * state[static_cast<Eigen::Index>(m)];
    return p / state.squaredNorm();
}

}  // namespace

double logical_probability(const Eigen::VectorXd& state, const EmbeddedIsing& embedded) {
    if (static_cast<std::size_t>(state.size()) != (std::size_t{1} << embedded.num_physical()))
        throw QsimError("state dimension does not match the embedding");
    return logical_probability(state, aligned_mask(embedded));
}

double hf_expectation(const Eigen::VectorXd& state, const EmbeddedIsing& embedded) {
    const std::size_t dim = std::size_t{1} << embedded.num_physical();
    if (static_cast<std::size_t>(state.size()) != dim) throw QsimError("state dimension does not match the embedding");
    double e = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
        const double w = state[static_cast<Eigen::Index>(m)] * state[static_cast<Eigen::Index>(m)];
        int zz = 0;
        for (auto [p, q] : embedded.chain_edges) zz += ((m >> p) & 1U) == ((m >> q) & 1U) ? 1 : -1;
        e += w * zz;
    }
    return e / state.squaredNorm();
}

EmbeddedIsing with_chain_strength(const EmbeddedIsing& embedded, double j_ferro) {
    if (!(j_ferro > 0.0)) throw QsimError("chain strength |J_F| must be positive");
    EmbeddedIsing out = embedded;
    out.j_ferro = j_ferro;
    for (auto e : out.chain_edges) out.ising.j[e] = -j_ferro;
    return out;
}

std::size_t SpectrumTrace::argmin_gap() const {
    if (gap.empty()) throw QsimError("empty spectrum trace");
    return static_cast<std::size_t>(std::ranges::min_element(gap) - gap.begin());
}

SpectrumTrace spectrum_trace(const EmbeddedIsing& embedded, const AnnealSchedule& schedule,
                             const std::vector<double>& s_grid, int k, const EigOptions& options) {
    if (k < 2) throw QsimError("a gap needs at least two levels");
    schedule.table.check();
    SpectrumTrace out;
    out.j_ferro = embedded.j_ferro;
    const auto classical = classical_energies(embedded.ising);
    const auto aligned = aligned_mask(embedded);
    for (double s : s_grid) {
        if (!(s >= 0.0 && s <= 1.0)) throw QsimError("s grid values must lie in [0, 1]");
        const Hamiltonian h(classical, embedded.num_physical(), schedule.A(s), schedule.B(s));
        const auto eig = lowest_eigs(h, k, options);
        std::vector<double> pl, hf;
        for (const auto& v : eig.vectors) {
            pl.push_back(logical_probability(v, aligned));
            hf.push_back(hf_expectation(v, embedded));
        }
        out.s.push_back(s);
        out.energies.push_back(eig.values);
        out.gap.push_back(eig.values[1] - eig.values[0]);
        out.p_logical.push_back(std::move(pl));
        out.hf.push_back(std::move(hf));
        out.b.push_back(schedule.B(s));
    }
    return out;
}

std::vector<SpectrumTrace> gap_trace(const EmbeddedIsing& embedded, const std::vector<double>& j_ferro_list,
                                     const std::vector<double>& s_grid, int k, const AnnealSchedule& schedule,
                                     const EigOptions& options) {
    std::vector<SpectrumTrace> out;
    for (double jf : j_ferro_list)
        out.push_back(spectrum_trace(with_chain_strength(embedded, jf), schedule, s_grid, k, options));
    return out;
}

std::vector<double> perturbation_gap_shift(const SpectrumTrace& trace, double lambda) {
    std::vector<double> out;
    for (std::size_t i = 0; i < trace.s.size(); ++i)
        out.push_back(trace.gap[i] + trace.b[i] * lambda * (trace.hf[i][1] - trace.hf[i][0]));
    return out;
}

std::vector<LevelShift> energy_shift_check(const EmbeddedIsing& embedded, const AnnealSchedule& schedule, double s,
                                           double lambda, int k, double degeneracy_tolerance) {
    if (!(lambda >= 0.0 && lambda < embedded.j_ferro)) throw QsimError("lambda must lie in [0, |J_F|)");
    const auto base = lowest_eigs(hamiltonian_at(embedded, schedule, s), k + 1);
    const auto moved =
        lambda == 0.0 ? base
                      : lowest_eigs(hamiltonian_at(with_chain_strength(embedded, embedded.j_ferro - lambda), schedule, s), k);
    std::vector<LevelShift> out;
    for (int i = 0; i < k; ++i) {
        LevelShift l;
        l.energy = base.values[i];
        l.predicted = l.energy + schedule.B(s) * lambda * hf_expectation(base.vectors[i], embedded);
        l.exact = moved.values[i];
        l.p_logical = logical_probability(base.vectors[i], embedded);
        const bool below = i > 0 && base.values[i] - base.values[i - 1] < degeneracy_tolerance;
        const bool above = base.values[i + 1] - base.values[i] < degeneracy_tolerance;
        l.near_degenerate = below || above;
        l.rise_violated = !l.near_degenerate && lambda > 0.0 && l.p_logical > 0.5 && !(l.exact > l.energy);
        out.push_back(l);
    }
    return out;
}

std::vector<double> gibbs_populations(const std::vector<double>& energies, double temperature) {
    if (!(temperature > 0.0)) throw QsimError("temperature must be positive");
    const double e0 = std::ranges::min(energies);
    std::vector<double> out;
    for (double e : energies) out.push_back(std::exp(-(e - e0) / temperature));
    const double z = std::accumulate(out.begin(), out.end(), 0.0);
    for (double& p : out) p /= z;
    return out;
}

Eigen::MatrixXd rate_matrix(const std::vector<double>& energies, double temperature, double gamma) {
    if (!(temperature > 0.0)) throw QsimError("temperature must be positive");
    const auto k = static_cast<Eigen::Index>(energies.size());
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            if (i != j) w(j, i) = gamma * std::min(1.0, std::exp(-(energies[j] - energies[i]) / temperature));
    for (Eigen::Index i = 0; i < k; ++i) w(i, i) = -w.col(i).sum();
    return w;
}

std::vector<double> relax(const std::vector<double>& populations, const std::vector<double>& energies,
                          double temperature, double gamma, double duration) {
    if (populations.size() != energies.size()) throw QsimError("population and energy counts differ");
    if (!(duration >= 0.0)) throw QsimError("duration must be non-negative");
    const Eigen::MatrixXd prop = (rate_matrix(energies, temperature, gamma) * duration).exp();
    const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(populations.data(), static_cast<Eigen::Index>(populations.size()));
    const Eigen::VectorXd q = prop * p;
    return {q.begin(), q.end()};
}

double kl_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw QsimError("distribution sizes differ");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        d += p[i] * std::log(p[i] / q[i]);
    }
    return d;
}

namespace {

// Groups consecutive ascending levels closer than tol.
std::vector<int> clusters(const std::vector<double>& values, double tol) {
    std::vector<int> id(values.size(), 0);
    for (std::size_t i = 1; i < values.size(); ++i) id[i] = id[i - 1] + (values[i] - values[i - 1] > tol ? 1 : 0);
    return id;
}

}  // namespace

RelaxResult pause_relax_evolve(const EmbeddedIsing& embedded, const AnnealSchedule& schedule,
                               const RelaxOptions& options) {
    schedule.check();
    if (options.k < 1) throw QsimError("need at least one tracked level");
    if (!(options.gamma0 >= 0.0)) throw QsimError("gamma0 must be non-negative");
    if (options.steps_per_unit_s < 1) throw QsimError("steps per unit s must be positive");
    const auto classical = classical_energies(embedded.ising);
    const int n = embedded.num_physical();
    const int k = std::min<int>(options.k, static_cast<int>(classical.size()));
    const double a0 = schedule.A(0.0);
    const auto gamma_at = [&](double s) {
        if (options.scaling == RateScaling::constant || a0 == 0.0) return options.gamma0;
        const double r = schedule.A(s) / a0;
        return options.gamma0 * r * r;
    };
    // Track one extra level so a cluster cut at the edge can be recognized.
    const int tracked = std::min<int>(k + 1, static_cast<int>(classical.size()));
    const auto eigs_at = [&](double s) {
        return lowest_eigs(Hamiltonian(classical, n, schedule.A(s), schedule.B(s)), tracked);
    };

    struct Step {
        double s;
        double dt;
        bool pause_end;
    };
    std::vector<Step> steps;
    const auto ramp = [&](double s0, double s1) {
        const int count = std::max(1, static_cast<int>(std::ceil((s1 - s0) * options.steps_per_unit_s - 1e-9)));
        for (int i = 1; i <= count; ++i) {
            const double a = s0 + (s1 - s0) * (i - 1) / count;
            const double b = i == count ? s1 : s0 + (s1 - s0) * i / count;
            steps.push_back({b, (b - a) * schedule.t_a, false});
        }
    };
    if (schedule.s_p) {
        ramp(0.0, *schedule.s_p);
        steps.push_back({*schedule.s_p, schedule.t_p, true});
        ramp(*schedule.s_p, 1.0);
    } else {
        ramp(0.0, 1.0);
    }

    constexpr double kClusterTol = 1e-8;
    RelaxResult out;
    auto eig = eigs_at(0.0);
    std::vector<double> p(k, 0.0);
    p[0] = 1.0;
    double t = 0.0;
    out.t.push_back(t);
    out.s.push_back(0.0);
    out.populations.push_back(p);
    // Carries populations from eig onto next; false when some level is not resolved.
    const auto transfer = [&](const EigenPairs& next, std::vector<double>& q, double& lost) {
        const auto old_cluster = clusters(eig.values, kClusterTol);
        const auto new_cluster = clusters(next.values, kClusterTol);
        q.assign(k, 0.0);
        lost = 0.0;
        Eigen::MatrixXd overlap(tracked, tracked);
        for (int j = 0; j < tracked; ++j)
            for (int i = 0; i < tracked; ++i) overlap(j, i) = std::pow(next.vectors[j].dot(eig.vectors[i]), 2);
        for (int i = 0; i < k; ++i) {
            double kept = 0.0;
            for (int j = 0; j < k; ++j) {
                q[j] += overlap(j, i) * p[i];
                kept += overlap(j, i);
            }
            lost += p[i] * std::max(0.0, 1.0 - kept);
            // Levels in the cluster straddling the cutoff have no reliable partner.
            if (old_cluster[i] == old_cluster[tracked - 1]) continue;
            std::vector<double> by_cluster(new_cluster.back() + 1, 0.0);
            for (int j = 0; j < tracked; ++j) by_cluster[new_cluster[j]] += overlap(j, i);
            if (std::ranges::max(by_cluster) >= options.min_overlap) continue;
            // A degenerate old cluster maps onto the new levels with the same indices.
            int lo = i, hi = i;
            while (lo > 0 && old_cluster[lo - 1] == old_cluster[i]) --lo;
            while (hi + 1 < tracked && old_cluster[hi + 1] == old_cluster[i]) ++hi;
            double subspace = 0.0;
            for (int c = lo; c <= hi; ++c)
                for (int j = 0; j < tracked; ++j)
                    if (new_cluster[j] >= new_cluster[lo] && new_cluster[j] <= new_cluster[hi])
                        subspace += overlap(j, c);
            if (subspace / (hi - lo + 1) < options.min_overlap) return false;
        }
        const double total = std::accumulate(q.begin(), q.end(), 0.0);
        for (double& x : q) x /= total;
        return true;
    };
    const auto settle = [&](double s, double dt) {
        const std::vector<double> levels(eig.values.begin(), eig.values.begin() + k);
        const double g = gamma_at(s);
        if (dt > 0.0 && g > 0.0) p = relax(p, levels, options.temperature, g, dt);
        t += dt;
        out.t.push_back(t);
        out.s.push_back(s);
        out.populations.push_back(p);
    };
    std::function<void(double, double, double, int)> advance = [&](double s0, double s1, double dt, int depth) {
        auto next = eigs_at(s1);
        std::vector<double> q;
        double lost = 0.0;
        if (!transfer(next, q, lost)) {
            if (depth >= options.max_refinements)
                throw QsimError("s grid too coarse near s = " + std::to_string(s1) +
                                ": a tracked level is not resolved; raise steps_per_unit_s");
            const double mid = 0.5 * (s0 + s1);
            advance(s0, mid, 0.5 * dt, depth + 1);
            advance(mid, s1, 0.5 * dt, depth + 1);
            return;
        }
        out.leakage += lost;
        p = std::move(q);
        eig = std::move(next);
        settle(s1, dt);
    };
    for (const auto& step : steps) {
        if (step.s != out.s.back())
            advance(out.s.back(), step.s, step.dt, 0);
        else
            settle(step.s, step.dt);
        if (step.pause_end) {
            out.pause_populations = p;
            out.pause_energies.assign(eig.values.begin(), eig.values.begin() + k);
        }
    }
    out.p_ground = p[0];
    out.leakage_flag = out.leakage > 0.01;
    return out;
}

EmbeddedIsing toy_triangle(double j_ferro, const std::vector<double>& h) {
    if (h.size() != 3) throw QsimError("toy triangle needs three fields");
    IsingModel logical(3);
    logical.h = h;
    logical.add_coupling(0, 1, 1.0);
    logical.add_coupling(1, 2, 1.0);
    logical.add_coupling(0, 2, 1.0);
    const auto hardware = custom_graph({{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    Embedding embedding{{{0}, {1}, {2, 3}}};
    EmbedOptions options;
    options.enforce_hardware_range = false;
    return embed_ising(logical, embedding, hardware, j_ferro, options);
}

}  // namespace bdmst
