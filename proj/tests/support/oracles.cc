// Copyright 2026 The toric-memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support/oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace toric::oracles {


Best brute(uint32_t n, const std::vector<WeightedEdge> &edges, bool perfect, bool max_card, bool minimize) {
    std::vector<std::vector<std::pair<uint32_t, int64_t>>> adj(n);
    for (const auto &e : edges) {
        adj[e.u].push_back({e.v, e.weight});
        adj[e.v].push_back({e.u, e.weight});
    }
    std::map<uint32_t, Best> memo;
    auto better = [&](const Best &a, const Best &b) {
        if (!b.feasible) {
            return a.feasible;
        }
        if (!a.feasible) {
            return false;
        }
        if (max_card && a.card != b.card) {
            return a.card > b.card;
        }
        return minimize ? a.weight < b.weight : a.weight > b.weight;
    };
    std::function<Best(uint32_t)> rec = [&](uint32_t used) -> Best {
        uint32_t i = 0;
        while (i < n && (used >> i & 1)) {
            i++;
        }
        if (i == n) {
            return {0, 0, true};
        }
        auto it = memo.find(used);
        if (it != memo.end()) {
            return it->second;
        }
        Best best;
        if (!perfect) {
            best = rec(used | (1u << i));
        }
        for (auto [j, w] : adj[i]) {
            if (used >> j & 1) {
                continue;
            }
            Best sub = rec(used | (1u << i) | (1u << j));
            if (!sub.feasible) {
                continue;
            }
            Best cand{sub.card + 1, sub.weight + w, true};
            if (better(cand, best)) {
                best = cand;
            }
        }
        memo[used] = best;
        return best;
    };
    return rec(0);
}

std::vector<WeightedEdge> random_graph(std::mt19937_64 &rng, uint32_t n, double density, int64_t max_w) {
    std::vector<WeightedEdge> edges;
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int64_t> w(0, max_w);
    for (uint32_t a = 0; a < n; a++) {
        for (uint32_t b = a + 1; b < n; b++) {
            if (u(rng) < density) {
                edges.push_back({a, b, w(rng)});
            }
        }
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    for (auto &e : edges) {
        if (u(rng) < 0.5) {
            std::swap(e.u, e.v);
        }
    }
    return edges;
}

int64_t weight_of(const std::vector<WeightedEdge> &edges, uint32_t a, uint32_t b, bool minimize) {
    int64_t best = minimize ? INT64_MAX : INT64_MIN;
    for (const auto &e : edges) {
        if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) {
            best = minimize ? std::min(best, e.weight) : std::max(best, e.weight);
        }
    }
    return best;
}

double brute_energy(const StabilizerCode &code, const std::vector<double> &onsite, const InteractionSpec &in,
                    const std::vector<uint8_t> &occ) {
    double e = 0;
    const int L = code.L();
    for (size_t p = 0; p < occ.size(); p++) {
        if (!occ[p]) {
            continue;
        }
        e += onsite[p];
        for (size_t q = 0; q < occ.size(); q++) {
            if (q == p || !occ[q]) {
                continue;
            }
            double dx = std::fabs(code.plaquettes[p].pos.x - code.plaquettes[q].pos.x);
            double dy = std::fabs(code.plaquettes[p].pos.y - code.plaquettes[q].pos.y);
            dx = std::min(dx, L - dx);
            dy = std::min(dy, L - dy);
            double r = std::hypot(dx, dy);
            e += 0.5 * in.A / std::pow(r, in.alpha);
        }
    }
    return e;
}

std::vector<uint8_t> syndrome_of(const StabilizerCode &code, const std::vector<uint8_t> &error) {
    std::vector<uint8_t> occ(code.plaquettes.size(), 0);
    for (uint32_t s = 0; s < code.num_spins; s++) {
        if (error[s]) {
            occ[code.spin_to_plaquettes[s][0]] ^= 1;
            occ[code.spin_to_plaquettes[s][1]] ^= 1;
        }
    }
    return occ;
}

double oracle_energy(const StabilizerCode &code, const std::vector<double> &J, double A, double alpha,
                     uint32_t error_mask) {
    std::vector<int> n(code.plaquettes.size(), 0);
    for (uint32_t s = 0; s < code.num_spins; s++) {
        if (error_mask >> s & 1) {
            for (uint32_t p : code.spin_to_plaquettes[s]) {
                n[p] ^= 1;
            }
        }
    }
    double e = 0.0;
    for (size_t p = 0; p < n.size(); p++) {
        e += J[p] * n[p];
        for (size_t q = 0; q < n.size(); q++) {
            if (q != p && n[p] && n[q]) {
                double r = torus_distance(code.plaquettes[p].pos, code.plaquettes[q].pos, code.L());
                e += 0.5 * A / std::pow(r, alpha);
            }
        }
    }
    return e;
}

int oracle_anyons(const StabilizerCode &code, uint32_t error_mask) {
    std::vector<int> n(code.plaquettes.size(), 0);
    for (uint32_t s = 0; s < code.num_spins; s++) {
        if (error_mask >> s & 1) {
            for (uint32_t p : code.spin_to_plaquettes[s]) {
                n[p] ^= 1;
            }
        }
    }
    int c = 0;
    for (int x : n) {
        c += x;
    }
    return c;
}

double oracle_rate(double omega, const BathSpec &bath) {
    if (bath.model == BathSpec::Model::constant_rate) {
        return bath.gamma0;
    }
    double beta = 1.0 / bath.temperature;
    if (omega == 0) {
        return 2 * bath.kappa1 / beta;
    }
    return 2 * bath.kappa1 * std::abs(omega / (1 - std::exp(-beta * omega)));
}


std::vector<OracleCase> oracle_cases() {
    BathSpec constant{BathSpec::Model::constant_rate, 1.0, 1.0, 1.0};
    BathSpec ohmic{BathSpec::Model::ohmic, 1.0, 1.0, 1.0};
    BathSpec warm{BathSpec::Model::ohmic, 1.0, 2.0, 0.5};
    using K = Simulation::SamplerKind;
    return {
        {"constant", constant, {0, 0, 0, 0}, {}, K::bucket},
        {"ohmic_uniform_J", ohmic, {1, 1, 1, 1}, {}, K::bucket},
        {"ohmic_ising_interacting", ohmic, {-1.5, 1.5, 1.5, -1.5}, {0.5, 0.0, std::nullopt}, K::bucket},
        {"ohmic_ising_interacting_tree", ohmic, {-1.5, 1.5, 1.5, -1.5}, {0.5, 0.0, std::nullopt}, K::tree},
        {"ohmic_capped", warm, {-2, -1, 0.5, -2}, {0.0, 0.0, 2}, K::bucket},
        {"ohmic_capped_tree", warm, {-2, -1, 0.5, -2}, {0.0, 0.0, 2}, K::tree},
        {"ohmic_long_range", warm, {0.3, -0.7, 0.1, 0.2}, {0.8, 1.0, std::nullopt}, K::tree},
    };
}

MasterEquation::MasterEquation(const StabilizerCode &c, const std::vector<double> &J, double A, double alpha,
                               const BathSpec &bath, std::optional<int> cap)
    : code(c) {
    const uint32_t states = 1u << code.num_spins;
    out_rate.assign(states, std::vector<double>(code.num_spins, 0.0));
    for (uint32_t e = 0; e < states; e++) {
        double before = oracle_energy(code, J, A, alpha, e);
        for (uint32_t s = 0; s < code.num_spins; s++) {
            uint32_t f = e ^ (1u << s);
            if (cap && oracle_anyons(code, f) > *cap && oracle_anyons(code, f) > oracle_anyons(code, e)) {
                continue;
            }
            out_rate[e][s] = oracle_rate(before - oracle_energy(code, J, A, alpha, f), bath);
        }
    }
    p.assign(states, 0.0);
    p[0] = 1.0;
}

std::vector<double> MasterEquation::derivative(const std::vector<double> &q) const {
    std::vector<double> d(q.size(), 0.0);
    for (uint32_t e = 0; e < q.size(); e++) {
        for (uint32_t s = 0; s < code.num_spins; s++) {
            double flow = q[e] * out_rate[e][s];
            d[e] -= flow;
            d[e ^ (1u << s)] += flow;
        }
    }
    return d;
}

void MasterEquation::advance(double dt, int steps) {
    auto add = [&](const std::vector<double> &a, double c) {
        std::vector<double> r(p);
        for (size_t i = 0; i < r.size(); i++) {
            r[i] += c * a[i];
        }
        return r;
    };
    for (int k = 0; k < steps; k++) {
        auto k1 = derivative(p);
        auto k2 = derivative(add(k1, dt / 2));
        auto k3 = derivative(add(k2, dt / 2));
        auto k4 = derivative(add(k3, dt));
        for (size_t i = 0; i < p.size(); i++) {
            p[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        }
    }
}

double MasterEquation::mean_anyons() const {
    double m = 0;
    for (uint32_t e = 0; e < p.size(); e++) {
        m += p[e] * oracle_anyons(code, e);
    }
    return m;
}

double MasterEquation::mean_errors() const {
    double m = 0;
    for (uint32_t e = 0; e < p.size(); e++) {
        m += p[e] * __builtin_popcount(e);
    }
    return m;
}

double MasterEquation::mean_z1() const {
    double m = 0;
    for (uint32_t e = 0; e < p.size(); e++) {
        int overlap = 0;
        for (uint32_t s : code.logicals[Z1]) {
            overlap += e >> s & 1;
        }
        m += p[e] * (overlap % 2 ? -1 : 1);
    }
    return m;
}

std::vector<double> gibbs_anyon_distribution(const StabilizerCode &code, const std::vector<double> &J,
                                             const InteractionSpec &interaction, double temperature) {
    std::vector<double> dist(code.plaquettes.size() + 1, 0.0);
    double Z = 0;
    for (uint32_t e = 0; e < (1u << code.num_spins); e++) {
        double w = std::exp(-oracle_energy(code, J, interaction.A, interaction.alpha, e) / temperature);
        dist[oracle_anyons(code, e)] += w;
        Z += w;
    }
    for (auto &d : dist) {
        d /= Z;
    }
    return dist;
}

}  // namespace toric::oracles
