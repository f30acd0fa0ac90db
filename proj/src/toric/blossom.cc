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

#include "toric/blossom.h"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace toric {

namespace {

/// Primal-dual blossom solver. Vertices are 0..n-1, blossoms n..2n-1. Edge k has endpoints
/// 2k (its first vertex) and 2k+1 (its second vertex); mate[v] stores the remote endpoint.
///
/// Labels: 0 free, 1 S (outer), 2 T (inner). Bit 4 marks blossoms visited by scan_blossom.
class Solver {
  public:
    Solver(uint32_t n, std::span<const WeightedEdge> edges, bool max_cardinality)
        : nv_(static_cast<int>(n)), ne_(static_cast<int>(edges.size())), max_cardinality_(max_cardinality) {
        eu_.resize(ne_);
        ev_.resize(ne_);
        ew_.resize(ne_);
        int64_t max_weight = 0;
        for (int k = 0; k < ne_; k++) {
            const auto &e = edges[k];
            if (e.u >= n || e.v >= n || e.u == e.v) {
                throw std::invalid_argument("matching edge endpoints must be distinct and in range");
            }
            eu_[k] = static_cast<int>(e.u);
            ev_[k] = static_cast<int>(e.v);
            // Doubling keeps every dual update integral.
            ew_[k] = 2 * e.weight;
            max_weight = std::max(max_weight, ew_[k]);
        }
        endpoint_.resize(2 * ne_);
        neighbend_.assign(nv_, {});
        for (int k = 0; k < ne_; k++) {
            endpoint_[2 * k] = eu_[k];
            endpoint_[2 * k + 1] = ev_[k];
            neighbend_[eu_[k]].push_back(2 * k + 1);
            neighbend_[ev_[k]].push_back(2 * k);
        }
        mate_.assign(nv_, -1);
        label_.assign(2 * nv_, 0);
        labelend_.assign(2 * nv_, -1);
        inblossom_.resize(nv_);
        for (int v = 0; v < nv_; v++) {
            inblossom_[v] = v;
        }
        blossomparent_.assign(2 * nv_, -1);
        blossomchilds_.assign(2 * nv_, {});
        blossombase_.assign(2 * nv_, -1);
        for (int v = 0; v < nv_; v++) {
            blossombase_[v] = v;
        }
        blossomendps_.assign(2 * nv_, {});
        bestedge_.assign(2 * nv_, -1);
        blossombestedges_.assign(2 * nv_, {});
        has_bestedges_.assign(2 * nv_, 0);
        for (int b = 2 * nv_ - 1; b >= nv_; b--) {
            unused_.push_back(b);
        }
        // Python's list.pop() takes from the end; keep the same recycling order.
        std::reverse(unused_.begin(), unused_.end());
        dualvar_.assign(2 * nv_, 0);
        for (int v = 0; v < nv_; v++) {
            dualvar_[v] = max_weight;
        }
        allowedge_.assign(ne_, 0);
        // Greedy start on edges that are tight under the initial duals. Matched vertices keep
        // the common initial dual, so every free vertex still carries the minimum dual.
        for (int k = 0; k < ne_; k++) {
            if (ew_[k] == max_weight && mate_[eu_[k]] == -1 && mate_[ev_[k]] == -1) {
                mate_[eu_[k]] = 2 * k + 1;
                mate_[ev_[k]] = 2 * k;
            }
        }
    }

    std::vector<int32_t> run() {
        if (ne_ == 0) {
            return std::vector<int32_t>(nv_, -1);
        }
        for (int stage = 0; stage < nv_; stage++) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = nv_; b < 2 * nv_; b++) {
                blossombestedges_[b].clear();
                has_bestedges_[b] = 0;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), 0);
            queue_.clear();
            for (int v = 0; v < nv_; v++) {
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) {
                    assign_label(v, 1, -1);
                }
            }
            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        int k = p / 2;
                        int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) {
                            continue;
                        }
                        int64_t kslack = 0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) {
                                allowedge_[k] = 1;
                            }
                        }
                        if (allowedge_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) {
                                bestedge_[b] = k;
                            }
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) {
                                bestedge_[w] = k;
                            }
                        }
                    }
                }
                if (augmented) {
                    break;
                }

                int deltatype = -1;
                int64_t delta = 0;
                int deltaedge = -1;
                int deltablossom = -1;
                if (!max_cardinality_) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
                }
                for (int v = 0; v < nv_; v++) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        int64_t d = slack(bestedge_[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nv_; b++) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        int64_t d = slack(bestedge_[b]) / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dualvar_[b] < delta)) {
                        delta = dualvar_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    // No further improvement possible; max-cardinality optimum reached.
                    deltatype = 1;
                    delta = std::max<int64_t>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
                }

                for (int v = 0; v < nv_; v++) {
                    int l = label_[inblossom_[v]];
                    if (l == 1) {
                        dualvar_[v] -= delta;
                    } else if (l == 2) {
                        dualvar_[v] += delta;
                    }
                }
                for (int b = nv_; b < 2 * nv_; b++) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1) {
                            dualvar_[b] += delta;
                        } else if (label_[b] == 2) {
                            dualvar_[b] -= delta;
                        }
                    }
                }

                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[deltaedge] = 1;
                    int i = eu_[deltaedge];
                    int j = ev_[deltaedge];
                    if (label_[inblossom_[i]] == 0) {
                        std::swap(i, j);
                    }
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = 1;
                    queue_.push_back(eu_[deltaedge]);
                } else if (deltatype == 4) {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) {
                break;
            }
            for (int b = nv_; b < 2 * nv_; b++) {
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
                    expand_blossom(b, true);
                }
            }
        }
        std::vector<int32_t> out(nv_, -1);
        for (int v = 0; v < nv_; v++) {
            if (mate_[v] >= 0) {
                out[v] = endpoint_[mate_[v]];
            }
        }
        return out;
    }

  private:
    int64_t slack(int k) const {
        return dualvar_[eu_[k]] + dualvar_[ev_[k]] - 2 * ew_[k];
    }

    void leaves(int b, std::vector<int> &out) const {
        if (b < nv_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[b]) {
            if (t < nv_) {
                out.push_back(t);
            } else {
                leaves(t, out);
            }
        }
    }

    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p) {
        int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            leaves(b, queue_);
        } else if (t == 2) {
            int base = blossombase_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            if (v != -1) {
                int b = inblossom_[v];
                if (label_[b] & 4) {
                    base = blossombase_[b];
                    break;
                }
                path.push_back(b);
                label_[b] = 5;
                if (labelend_[b] == -1) {
                    v = -1;
                } else {
                    v = endpoint_[labelend_[b]];
                    b = inblossom_[v];
                    v = endpoint_[labelend_[b]];
                }
            }
            if (w != -1) {
                std::swap(v, w);
            }
        }
        for (int b : path) {
            label_[b] = 1;
        }
        return base;
    }

    void add_blossom(int base, int k) {
        int v = eu_[k];
        int w = ev_[k];
        int bb = inblossom_[base];
        int bv = inblossom_[v];
        int bw = inblossom_[w];
        int b = unused_.back();
        unused_.pop_back();
        blossombase_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;
        auto &path = blossomchilds_[b];
        auto &endps = blossomendps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dualvar_[b] = 0;
        for (int leaf : leaves(b)) {
            if (label_[inblossom_[leaf]] == 2) {
                queue_.push_back(leaf);
            }
            inblossom_[leaf] = b;
        }

        std::vector<int> bestedgeto(2 * nv_, -1);
        for (int sub : path) {
            std::vector<std::vector<int>> nblists;
            if (!has_bestedges_[sub]) {
                for (int leaf : leaves(sub)) {
                    std::vector<int> lst;
                    for (int p : neighbend_[leaf]) {
                        lst.push_back(p / 2);
                    }
                    nblists.push_back(std::move(lst));
                }
            } else {
                nblists.push_back(blossombestedges_[sub]);
            }
            for (const auto &nblist : nblists) {
                for (int kk : nblist) {
                    int i = eu_[kk];
                    int j = ev_[kk];
                    if (inblossom_[j] == b) {
                        std::swap(i, j);
                    }
                    int bj = inblossom_[j];
                    if (bj != b && label_[bj] == 1 &&
                        (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
                        bestedgeto[bj] = kk;
                    }
                }
            }
            blossombestedges_[sub].clear();
            has_bestedges_[sub] = 0;
            bestedge_[sub] = -1;
        }
        auto &best = blossombestedges_[b];
        best.clear();
        for (int kk : bestedgeto) {
            if (kk != -1) {
                best.push_back(kk);
            }
        }
        has_bestedges_[b] = 1;
        bestedge_[b] = -1;
        for (int kk : best) {
            if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) {
                bestedge_[b] = kk;
            }
        }
    }

    static int wrap_index(int j, int len) {
        return ((j % len) + len) % len;
    }

    void expand_blossom(int b, bool endstage) {
        // Copy: recursive expansion may recycle and clear the child list of b.
        std::vector<int> childs = blossomchilds_[b];
        for (int s : childs) {
            blossomparent_[s] = -1;
            if (s < nv_) {
                inblossom_[s] = s;
            } else if (endstage && dualvar_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int leaf : leaves(s)) {
                    inblossom_[leaf] = s;
                }
            }
        }
        if (!endstage && label_[b] == 2) {
            const auto &ch = blossomchilds_[b];
            const auto &eps = blossomendps_[b];
            const int len = static_cast<int>(ch.size());
            int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            int j = static_cast<int>(std::find(ch.begin(), ch.end(), entrychild) - ch.begin());
            int jstep;
            int endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[eps[wrap_index(j - endptrick, len)] ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[eps[wrap_index(j - endptrick, len)] / 2] = 1;
                j += jstep;
                p = eps[wrap_index(j - endptrick, len)] ^ endptrick;
                allowedge_[p / 2] = 1;
                j += jstep;
            }
            int bv = ch[wrap_index(j, len)];
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (ch[wrap_index(j, len)] != entrychild) {
                bv = ch[wrap_index(j, len)];
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int reached = -1;
                for (int leaf : leaves(bv)) {
                    if (label_[leaf] != 0) {
                        reached = leaf;
                        break;
                    }
                }
                if (reached >= 0) {
                    label_[reached] = 0;
                    label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                    assign_label(reached, 2, labelend_[reached]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombase_[b] = -1;
        blossombestedges_[b].clear();
        has_bestedges_[b] = 0;
        bestedge_[b] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) {
            t = blossomparent_[t];
        }
        if (t >= nv_) {
            augment_blossom(t, v);
        }
        auto &ch = blossomchilds_[b];
        auto &eps = blossomendps_[b];
        const int len = static_cast<int>(ch.size());
        int i = static_cast<int>(std::find(ch.begin(), ch.end(), t) - ch.begin());
        int j = i;
        int jstep;
        int endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        while (j != 0) {
            j += jstep;
            t = ch[wrap_index(j, len)];
            int p = eps[wrap_index(j - endptrick, len)] ^ endptrick;
            if (t >= nv_) {
                augment_blossom(t, endpoint_[p]);
            }
            j += jstep;
            t = ch[wrap_index(j, len)];
            if (t >= nv_) {
                augment_blossom(t, endpoint_[p ^ 1]);
            }
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(ch.begin(), ch.begin() + i, ch.end());
        std::rotate(eps.begin(), eps.begin() + i, eps.end());
        blossombase_[b] = blossombase_[ch[0]];
    }

    void augment_matching(int k) {
        const int starts[2][2] = {{eu_[k], 2 * k + 1}, {ev_[k], 2 * k}};
        for (const auto &sp : starts) {
            int s = sp[0];
            int p = sp[1];
            while (true) {
                int bs = inblossom_[s];
                if (bs >= nv_) {
                    augment_blossom(bs, s);
                }
                mate_[s] = p;
                if (labelend_[bs] == -1) {
                    break;
                }
                int t = endpoint_[labelend_[bs]];
                int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nv_) {
                    augment_blossom(bt, j);
                }
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    int nv_;
    int ne_;
    bool max_cardinality_;
    std::vector<int> eu_, ev_;
    std::vector<int64_t> ew_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_;
    std::vector<int> label_;
    std::vector<int> labelend_;
    std::vector<int> inblossom_;
    std::vector<int> blossomparent_;
    std::vector<std::vector<int>> blossomchilds_;
    std::vector<int> blossombase_;
    std::vector<std::vector<int>> blossomendps_;
    std::vector<int> bestedge_;
    std::vector<std::vector<int>> blossombestedges_;
    std::vector<char> has_bestedges_;
    std::vector<int> unused_;
    std::vector<int64_t> dualvar_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;
};

}  // namespace

std::vector<int32_t> max_weight_matching(
    uint32_t num_nodes, std::span<const WeightedEdge> edges, bool max_cardinality) {
    return Solver(num_nodes, edges, max_cardinality).run();
}

std::optional<std::vector<std::pair<uint32_t, uint32_t>>> min_weight_perfect_matching(
    uint32_t num_nodes, std::span<const WeightedEdge> edges) {
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    if (num_nodes == 0) {
        return pairs;
    }
    if (num_nodes % 2 != 0) {
        return std::nullopt;
    }
    int64_t max_w = 0;
    for (const auto &e : edges) {
        if (e.weight < 0) {
            throw std::invalid_argument("matching weights must be non-negative");
        }
        max_w = std::max(max_w, e.weight);
    }
    std::vector<WeightedEdge> flipped(edges.begin(), edges.end());
    for (auto &e : flipped) {
        e.weight = max_w + 1 - e.weight;
    }
    auto mate = max_weight_matching(num_nodes, flipped, true);
    for (uint32_t v = 0; v < num_nodes; v++) {
        if (mate[v] < 0) {
            return std::nullopt;
        }
        if (v < static_cast<uint32_t>(mate[v])) {
            pairs.emplace_back(v, static_cast<uint32_t>(mate[v]));
        }
    }
    return pairs;
}

}  // namespace toric
