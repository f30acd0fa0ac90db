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

#include "toric/decoder.h"

#include <algorithm>
#include <stdexcept>

#include "toric/blossom.h"

namespace toric {

Syndrome extract_syndrome(const StabilizerCode &code, const std::vector<uint8_t> &error) {
    if (error.size() != code.num_spins) {
        throw std::invalid_argument("error vector length does not match the number of spins");
    }
    std::vector<uint8_t> odd(code.plaquettes.size(), 0);
    for (uint32_t s = 0; s < code.num_spins; s++) {
        if (error[s]) {
            odd[code.spin_to_plaquettes[s][0]] ^= 1;
            odd[code.spin_to_plaquettes[s][1]] ^= 1;
        }
    }
    Syndrome out;
    for (uint32_t p = 0; p < odd.size(); p++) {
        if (odd[p]) {
            out.anyons.push_back(p);
        }
    }
    return out;
}

LogicalParities logical_parities(const StabilizerCode &code, const std::vector<uint8_t> &residual) {
    if (residual.size() != code.num_spins) {
        throw std::invalid_argument("residual length does not match the number of spins");
    }
    auto parity = [&](Logical l) {
        int odd = 0;
        for (uint32_t s : code.logicals[l]) {
            odd ^= residual[s] & 1;
        }
        return odd ? -1 : 1;
    };
    return {parity(Z1), parity(Z2)};
}

Decoder::Decoder(const StabilizerCode &code, DecoderConfig config) : code_(&code), config_(config) {
    if (config.k == 0) {
        throw std::invalid_argument("decoder k must be at least 1");
    }
    const uint32_t np = static_cast<uint32_t>(code.plaquettes.size());
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> nb(np);
    for (uint32_t p = 0; p < np; p++) {
        for (uint32_t s : code.plaquettes[p].spins) {
            const auto &pp = code.spin_to_plaquettes[s];
            uint32_t q = pp[0] == p ? pp[1] : pp[0];
            nb[p].push_back({s, q});
        }
        std::sort(nb[p].begin(), nb[p].end());
    }
    adj_start_.push_back(0);
    for (uint32_t p = 0; p < np; p++) {
        for (auto [s, q] : nb[p]) {
            adj_spin_.push_back(s);
            adj_plaquette_.push_back(q);
        }
        adj_start_.push_back(static_cast<uint32_t>(adj_spin_.size()));
    }
    z_mask_.assign(code.num_spins, 0);
    for (uint32_t s : code.logicals[Z1]) {
        z_mask_[s] ^= 1;
    }
    for (uint32_t s : code.logicals[Z2]) {
        z_mask_[s] ^= 2;
    }
    stamp_.assign(np, 0);
    dist_.assign(np, 0);
    parent_spin_.assign(np, 0);
    parent_.assign(np, 0);
    node_of_.assign(np, -1);
}

void Decoder::bfs(uint32_t source, uint32_t k, const std::vector<int32_t> &node_of, std::vector<MatchEdge> &out) {
    if (++epoch_ == 0) {
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
    const uint32_t src_node = static_cast<uint32_t>(node_of[source]);
    stamp_[source] = epoch_;
    dist_[source] = 0;
    frontier_.clear();
    frontier_.push_back(source);
    size_t head = 0;
    uint32_t found = 0;
    uint32_t level = 0;
    // Level-synchronous: the shell of the k-th find is always completed.
    while (head < frontier_.size()) {
        size_t level_end = frontier_.size();
        level++;
        for (; head < level_end; head++) {
            uint32_t p = frontier_[head];
            for (uint32_t a = adj_start_[p]; a < adj_start_[p + 1]; a++) {
                uint32_t q = adj_plaquette_[a];
                if (stamp_[q] == epoch_) {
                    continue;
                }
                stamp_[q] = epoch_;
                dist_[q] = level;
                parent_[q] = p;
                parent_spin_[q] = adj_spin_[a];
                frontier_.push_back(q);
                if (node_of[q] >= 0) {
                    found++;
                    MatchEdge e;
                    uint32_t other = static_cast<uint32_t>(node_of[q]);
                    e.i = std::min(src_node, other);
                    e.j = std::max(src_node, other);
                    e.weight = level;
                    e.path.resize(level);
                    uint32_t cur = q;
                    for (uint32_t t = level; t-- > 0;) {
                        e.path[t] = parent_spin_[cur];
                        cur = parent_[cur];
                    }
                    out.push_back(std::move(e));
                }
            }
        }
        if (found >= k) {
            break;
        }
    }
}

MatchGraph Decoder::knn_graph(const Syndrome &syndrome, uint32_t k) {
    const size_t n = syndrome.anyons.size();
    if (n % 2 != 0) {
        throw std::invalid_argument("syndrome has an odd number of anyons");
    }
    if (k == 0) {
        throw std::invalid_argument("k must be at least 1");
    }
    MatchGraph g;
    g.nodes = syndrome.anyons;
    for (size_t a = 0; a < n; a++) {
        uint32_t p = syndrome.anyons[a];
        if (p >= node_of_.size() || (a > 0 && p <= syndrome.anyons[a - 1])) {
            throw std::invalid_argument("syndrome ids must be valid and strictly increasing");
        }
    }
    for (size_t a = 0; a < n; a++) {
        node_of_[syndrome.anyons[a]] = static_cast<int32_t>(a);
    }
    std::vector<MatchEdge> all;
    all.reserve(n * (k + 2));
    for (size_t a = 0; a < n; a++) {
        bfs(syndrome.anyons[a], k, node_of_, all);
    }
    for (uint32_t p : syndrome.anyons) {
        node_of_[p] = -1;
    }
    std::stable_sort(all.begin(), all.end(), [](const MatchEdge &x, const MatchEdge &y) {
        return x.i != y.i ? x.i < y.i : x.j < y.j;
    });
    for (auto &e : all) {
        if (g.edges.empty() || g.edges.back().i != e.i || g.edges.back().j != e.j) {
            g.edges.push_back(std::move(e));
        }
    }
    return g;
}

std::optional<std::vector<uint32_t>> mwpm(const MatchGraph &graph) {
    std::vector<WeightedEdge> edges;
    edges.reserve(graph.edges.size());
    for (const auto &e : graph.edges) {
        edges.push_back({e.i, e.j, static_cast<int64_t>(e.weight)});
    }
    auto pairs = min_weight_perfect_matching(static_cast<uint32_t>(graph.nodes.size()), edges);
    if (!pairs) {
        return std::nullopt;
    }
    std::vector<uint32_t> out;
    out.reserve(pairs->size());
    for (auto [u, v] : *pairs) {
        auto it = std::lower_bound(graph.edges.begin(), graph.edges.end(), std::make_pair(u, v),
                                   [](const MatchEdge &e, const std::pair<uint32_t, uint32_t> &key) {
                                       return e.i != key.first ? e.i < key.first : e.j < key.second;
                                   });
        out.push_back(static_cast<uint32_t>(it - graph.edges.begin()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

DecodeResult Decoder::decode_full(const Syndrome &syndrome) {
    DecodeResult r;
    const uint32_t n = static_cast<uint32_t>(syndrome.anyons.size());
    uint32_t k = config_.k;
    while (true) {
        r.graph = knn_graph(syndrome, k);
        auto m = mwpm(r.graph);
        if (m) {
            r.matching = std::move(*m);
            r.k_used = k;
            break;
        }
        if (k + 1 >= n) {
            throw std::runtime_error("syndrome admits no perfect matching on this code");
        }
        k = std::min(2 * k, n - 1);
    }
    std::vector<uint32_t> spins;
    for (uint32_t id : r.matching) {
        const auto &e = r.graph.edges[id];
        r.weight += e.weight;
        spins.insert(spins.end(), e.path.begin(), e.path.end());
    }
    std::sort(spins.begin(), spins.end());
    for (size_t a = 0; a < spins.size();) {
        size_t b = a;
        while (b < spins.size() && spins[b] == spins[a]) {
            b++;
        }
        if ((b - a) % 2 == 1) {
            r.correction.spins.push_back(spins[a]);
        }
        a = b;
    }
    return r;
}

Correction Decoder::decode(const Syndrome &syndrome) {
    return decode_full(syndrome).correction;
}

LogicalParities Decoder::corrected_parities(const std::vector<uint8_t> &error) {
    uint8_t mask = 0;
    for (uint32_t s = 0; s < code_->num_spins; s++) {
        if (error[s]) {
            mask ^= z_mask_[s];
        }
    }
    auto r = decode_full(extract_syndrome(*code_, error));
    for (uint32_t id : r.matching) {
        for (uint32_t s : r.graph.edges[id].path) {
            mask ^= z_mask_[s];
        }
    }
    return {(mask & 1) ? -1 : 1, (mask & 2) ? -1 : 1};
}

Correction decode(const StabilizerCode &code, const Syndrome &syndrome, DecoderConfig config) {
    return Decoder(code, config).decode(syndrome);
}

}  // namespace toric
