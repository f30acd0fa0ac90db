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

#include "toric/code_lattice.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "toric/rng.h"

namespace toric {

namespace {

struct SquareGeometry {
    int L;

    uint32_t cell(int x, int y) const {
        x = ((x % L) + L) % L;
        y = ((y % L) + L) % L;
        return static_cast<uint32_t>(y * L + x);
    }
    /// Bottom edge of cell (x, y).
    uint32_t h(int x, int y) const {
        return 2 * cell(x, y);
    }
    /// Left edge of cell (x, y).
    uint32_t v(int x, int y) const {
        return 2 * cell(x, y) + 1;
    }
    double wrap(double c) const {
        double r = std::fmod(c, static_cast<double>(L));
        return r < 0 ? r + L : r;
    }
    Vec2 edge_pos(uint32_t edge) const {
        uint32_t c = edge / 2;
        double x = c % L;
        double y = c / L;
        if (edge % 2 == 0) {
            return {x, wrap(y - 0.5)};
        }
        return {wrap(x - 0.5), y};
    }
    std::vector<uint32_t> plaquette(int x, int y) const {
        return {h(x, y), h(x, y + 1), v(x, y), v(x + 1, y)};
    }
    /// Star on the bottom-left corner of cell (x, y).
    std::vector<uint32_t> star(int x, int y) const {
        return {h(x, y), h(x - 1, y), v(x, y), v(x, y - 1)};
    }
    Vec2 plaquette_pos(int x, int y) const {
        return {static_cast<double>(x), static_cast<double>(y)};
    }
    Vec2 star_pos(int x, int y) const {
        return {wrap(x - 0.5), wrap(y - 0.5)};
    }
    bool is_defect(int x, int y) const {
        return ((x + y) % 2) == 0;
    }
};

std::vector<uint32_t> sorted(std::vector<uint32_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

/// Centroid of points on a torus, unwrapping every point to the minimal image of the first.
Vec2 torus_centroid(const std::vector<Vec2> &points, int L) {
    Vec2 ref = points.front();
    double sx = 0;
    double sy = 0;
    for (const auto &p : points) {
        double dx = p.x - ref.x;
        double dy = p.y - ref.y;
        dx -= L * std::round(dx / L);
        dy -= L * std::round(dy / L);
        sx += ref.x + dx;
        sy += ref.y + dy;
    }
    double cx = std::fmod(sx / points.size(), static_cast<double>(L));
    double cy = std::fmod(sy / points.size(), static_cast<double>(L));
    if (cx < 0) {
        cx += L;
    }
    if (cy < 0) {
        cy += L;
    }
    return {cx, cy};
}

std::vector<uint32_t> merge_without(const std::vector<uint32_t> &a, const std::vector<uint32_t> &b, uint32_t removed) {
    std::vector<uint32_t> out;
    for (uint32_t s : a) {
        if (s != removed) {
            out.push_back(s);
        }
    }
    for (uint32_t s : b) {
        if (s != removed) {
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void require_size(int L, bool even) {
    if (L < 2) {
        throw std::invalid_argument("lattice size L must be at least 2, got " + std::to_string(L));
    }
    if (even && L % 2 != 0) {
        throw std::invalid_argument(
            "lattice size L must be even for defect patterns, got " + std::to_string(L));
    }
}

/// Overlap parity of a support with a per-spin membership mask.
uint32_t overlap(const std::vector<uint32_t> &support, const std::vector<uint8_t> &mask) {
    uint32_t n = 0;
    for (uint32_t s : support) {
        n += mask[s];
    }
    return n;
}

std::vector<uint8_t> membership(const std::vector<uint32_t> &support, uint32_t num_spins) {
    std::vector<uint8_t> mask(num_spins, 0);
    for (uint32_t s : support) {
        if (s < num_spins) {
            mask[s] ^= 1;
        }
    }
    return mask;
}

/// Number of connected components of the graph whose nodes are stabilizers and whose edges are
/// spins shared by two of them.
size_t component_count(const std::vector<Stabilizer> &stabs, uint32_t num_spins) {
    std::vector<uint32_t> parent(stabs.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](uint32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    std::vector<int64_t> first(num_spins, -1);
    for (uint32_t k = 0; k < stabs.size(); k++) {
        for (uint32_t s : stabs[k].spins) {
            if (s >= num_spins) {
                continue;
            }
            if (first[s] < 0) {
                first[s] = k;
            } else {
                parent[find(k)] = find(static_cast<uint32_t>(first[s]));
            }
        }
    }
    size_t n = 0;
    for (uint32_t k = 0; k < stabs.size(); k++) {
        n += find(k) == k;
    }
    return n;
}

}  // namespace

double torus_distance(const Vec2 &a, const Vec2 &b, int L) {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    dx = std::fmod(dx, static_cast<double>(L));
    dy = std::fmod(dy, static_cast<double>(L));
    dx = std::min(dx, L - dx);
    dy = std::min(dy, L - dy);
    return std::sqrt(dx * dx + dy * dy);
}

void rebuild_incidence(StabilizerCode &code) {
    auto fill = [&](const std::vector<Stabilizer> &stabs, std::vector<std::array<uint32_t, 2>> &out,
                    const char *what) {
        std::vector<uint32_t> count(code.num_spins, 0);
        out.assign(code.num_spins, {0, 0});
        for (uint32_t k = 0; k < stabs.size(); k++) {
            for (uint32_t s : stabs[k].spins) {
                if (s >= code.num_spins) {
                    throw std::invalid_argument("spin index out of range in " + std::string(what));
                }
                if (count[s] < 2) {
                    out[s][count[s]] = k;
                }
                count[s]++;
            }
        }
        for (uint32_t s = 0; s < code.num_spins; s++) {
            if (count[s] != 2) {
                throw std::invalid_argument(
                    "spin " + std::to_string(s) + " is in " + std::to_string(count[s]) + " " + what +
                    " (expected 2)");
            }
        }
    };
    fill(code.plaquettes, code.spin_to_plaquettes, "plaquettes");
    fill(code.stars, code.spin_to_stars, "stars");
}

StabilizerCode build_square(int L) {
    require_size(L, false);
    SquareGeometry g{L};
    StabilizerCode code;
    code.spec = LatticeSpec{L, LatticeKind::square, 0.0, 0};
    code.num_spins = static_cast<uint32_t>(2 * L * L);
    for (int y = 0; y < L; y++) {
        for (int x = 0; x < L; x++) {
            code.plaquettes.push_back({sorted(g.plaquette(x, y)), g.plaquette_pos(x, y)});
            code.stars.push_back({sorted(g.star(x, y)), g.star_pos(x, y)});
        }
    }
    for (int i = 0; i < L; i++) {
        code.logicals[X1].push_back(g.h(0, i));
        code.logicals[Z1].push_back(g.h(i, 0));
        code.logicals[X2].push_back(g.v(i, 0));
        code.logicals[Z2].push_back(g.v(0, i));
    }
    for (auto &l : code.logicals) {
        std::sort(l.begin(), l.end());
    }
    rebuild_incidence(code);
    return code;
}

std::vector<uint32_t> defect_pattern(int L) {
    require_size(L, true);
    SquareGeometry g{L};
    std::vector<uint32_t> out;
    out.reserve(L * L / 2);
    for (int y = 0; y < L; y++) {
        for (int x = 0; x < L; x++) {
            if (g.is_defect(x, y)) {
                out.push_back(g.v(x, y));
            }
        }
    }
    return out;
}

StabilizerCode build_random(const LatticeSpec &spec) {
    require_size(spec.L, true);
    if (!(spec.p_mix >= 0.0 && spec.p_mix <= 1.0)) {
        throw std::invalid_argument("p_mix must lie in [0, 1]");
    }
    const int L = spec.L;
    SquareGeometry g{L};

    // Old edge index -> new spin index (UINT32_MAX for removed defects).
    const uint32_t num_edges = 2 * L * L;
    std::vector<uint32_t> renumber(num_edges, UINT32_MAX);
    std::vector<uint8_t> is_defect(num_edges, 0);
    for (uint32_t e : defect_pattern(L)) {
        is_defect[e] = 1;
    }
    uint32_t next = 0;
    for (uint32_t e = 0; e < num_edges; e++) {
        if (!is_defect[e]) {
            renumber[e] = next++;
        }
    }

    auto positions = [&](const std::vector<uint32_t> &edges) {
        std::vector<Vec2> out;
        for (uint32_t e : edges) {
            out.push_back(g.edge_pos(e));
        }
        return out;
    };
    auto relabel = [&](const std::vector<uint32_t> &edges) {
        std::vector<uint32_t> out;
        for (uint32_t e : edges) {
            out.push_back(renumber[e]);
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    StabilizerCode code;
    code.spec = spec;
    code.spec.kind = LatticeKind::random;
    code.num_spins = next;

    Rng rng(spec.seed);
    for (int y = 0; y < L; y++) {
        for (int x = 0; x < L; x++) {
            if (!g.is_defect(x, y)) {
                continue;
            }
            uint32_t d = g.v(x, y);
            bool six_body_plaquette = uniform01(rng) < spec.p_mix;
            auto left = g.plaquette(x - 1, y);
            auto right = g.plaquette(x, y);
            auto below = g.star(x, y);
            auto above = g.star(x, y + 1);
            if (six_body_plaquette) {
                auto merged = merge_without(left, right, d);
                code.plaquettes.push_back({relabel(merged), torus_centroid(positions(merged), L)});
                code.stars.push_back({relabel(merge_without(below, {}, d)), g.star_pos(x, y)});
                code.stars.push_back({relabel(merge_without(above, {}, d)), g.star_pos(x, y + 1)});
            } else {
                auto merged = merge_without(below, above, d);
                code.plaquettes.push_back({relabel(merge_without(left, {}, d)), g.plaquette_pos(x - 1, y)});
                code.plaquettes.push_back({relabel(merge_without(right, {}, d)), g.plaquette_pos(x, y)});
                code.stars.push_back({relabel(merged), torus_centroid(positions(merged), L)});
            }
        }
    }

    // X1 and Z1 live on horizontal edges and are untouched. X2 and Z2 zig-zag around the defects,
    // stepping one column right (Z2) or one row up (X2) and closing with horizontal edges.
    std::vector<uint32_t> x1, z1, x2, z2;
    for (int i = 0; i < L; i++) {
        x1.push_back(g.h(0, i));
        z1.push_back(g.h(i, 0));
        z2.push_back(g.is_defect(0, i) ? g.v(1, i) : g.v(0, i));
        z2.push_back(g.h(0, i));
        x2.push_back(g.is_defect(i, 0) ? g.v(i, 1) : g.v(i, 0));
        x2.push_back(g.h(i, 1));
    }
    code.logicals[X1] = relabel(x1);
    code.logicals[Z1] = relabel(z1);
    code.logicals[X2] = relabel(x2);
    code.logicals[Z2] = relabel(z2);
    rebuild_incidence(code);
    return code;
}

StabilizerCode build_code(const LatticeSpec &spec) {
    if (spec.kind == LatticeKind::square) {
        return build_square(spec.L);
    }
    return build_random(spec);
}

StabilizerCode dual(const StabilizerCode &code) {
    StabilizerCode out = code;
    out.dual = !code.dual;
    std::swap(out.plaquettes, out.stars);
    std::swap(out.spin_to_plaquettes, out.spin_to_stars);
    std::swap(out.logicals[X1], out.logicals[Z1]);
    std::swap(out.logicals[X2], out.logicals[Z2]);
    return out;
}

bool ValidationReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

const ValidationCheck &ValidationReport::check(const std::string &name) const {
    for (const auto &c : checks) {
        if (c.name == name) {
            return c;
        }
    }
    throw std::out_of_range("no validation check named " + name);
}

std::string ValidationReport::str() const {
    std::stringstream ss;
    for (const auto &c : checks) {
        ss << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) {
            ss << " (" << c.offending.size() << " offending";
            if (!c.detail.empty()) {
                ss << "; " << c.detail;
            }
            ss << ")";
        }
        ss << "\n";
    }
    return ss.str();
}

ValidationReport validate(const StabilizerCode &code) {
    ValidationReport report;
    const uint32_t n = code.num_spins;

    ValidationCheck range{"spin_indices_in_range"};
    auto check_range = [&](const std::vector<uint32_t> &support, uint32_t id) {
        for (uint32_t s : support) {
            if (s >= n) {
                range.passed = false;
                range.offending.push_back(id);
                return;
            }
        }
    };
    for (uint32_t k = 0; k < code.plaquettes.size(); k++) {
        check_range(code.plaquettes[k].spins, k);
    }
    for (uint32_t k = 0; k < code.stars.size(); k++) {
        check_range(code.stars[k].spins, k);
    }
    for (uint32_t k = 0; k < 4; k++) {
        check_range(code.logicals[k], k);
    }
    if (!range.passed) {
        range.detail = "remaining checks skipped";
        report.checks.push_back(range);
        return report;
    }
    report.checks.push_back(range);

    auto incidence = [&](const std::vector<Stabilizer> &stabs, const std::string &name) {
        ValidationCheck c{name};
        std::vector<uint32_t> count(n, 0);
        for (const auto &s : stabs) {
            for (uint32_t q : s.spins) {
                count[q]++;
            }
        }
        for (uint32_t q = 0; q < n; q++) {
            if (count[q] != 2) {
                c.passed = false;
                c.offending.push_back(q);
            }
        }
        return c;
    };
    report.checks.push_back(incidence(code.plaquettes, "spin_in_two_plaquettes"));
    report.checks.push_back(incidence(code.stars, "spin_in_two_stars"));

    // Plaquette/star commutation: walk each plaquette's spins through the star incidence lists.
    ValidationCheck commute{"plaquette_star_commutation"};
    {
        std::vector<std::vector<uint32_t>> stars_of(n);
        for (uint32_t k = 0; k < code.stars.size(); k++) {
            for (uint32_t q : code.stars[k].spins) {
                stars_of[q].push_back(k);
            }
        }
        std::vector<uint32_t> hits(code.stars.size(), 0);
        std::vector<uint32_t> touched;
        for (uint32_t p = 0; p < code.plaquettes.size(); p++) {
            touched.clear();
            for (uint32_t q : code.plaquettes[p].spins) {
                for (uint32_t s : stars_of[q]) {
                    if (hits[s]++ == 0) {
                        touched.push_back(s);
                    }
                }
            }
            bool bad = false;
            for (uint32_t s : touched) {
                bad |= (hits[s] % 2) != 0;
                hits[s] = 0;
            }
            if (bad) {
                commute.passed = false;
                commute.offending.push_back(p);
            }
        }
    }
    report.checks.push_back(commute);

    ValidationCheck logical{"logical_commutation"};
    {
        std::array<std::vector<uint8_t>, 4> masks;
        for (int k = 0; k < 4; k++) {
            masks[k] = membership(code.logicals[k], n);
        }
        // X-type logicals must commute with plaquettes, Z-type with stars.
        for (int k : {X1, X2}) {
            for (uint32_t p = 0; p < code.plaquettes.size(); p++) {
                if (overlap(code.plaquettes[p].spins, masks[k]) % 2) {
                    logical.passed = false;
                    logical.offending.push_back(k);
                    logical.detail = "X logical anticommutes with a plaquette";
                    break;
                }
            }
        }
        for (int k : {Z1, Z2}) {
            for (uint32_t s = 0; s < code.stars.size(); s++) {
                if (overlap(code.stars[s].spins, masks[k]) % 2) {
                    logical.passed = false;
                    logical.offending.push_back(k);
                    logical.detail = "Z logical anticommutes with a star";
                    break;
                }
            }
        }
        for (int i = 0; i < 2; i++) {
            for (int j = 0; j < 2; j++) {
                bool odd = overlap(code.logicals[2 * i], masks[2 * j + 1]) % 2;
                if (odd != (i == j)) {
                    logical.passed = false;
                    logical.offending.push_back(static_cast<uint32_t>(2 * i));
                    logical.detail = "wrong X/Z logical anticommutation pattern";
                }
            }
        }
    }
    report.checks.push_back(logical);

    // Every spin in exactly two stabilizers of a type makes the supports an incidence matrix of a
    // graph, whose GF(2) rank is nodes - components.
    ValidationCheck dim{"code_dimension"};
    {
        size_t cp = component_count(code.plaquettes, n);
        size_t cs = component_count(code.stars, n);
        long long rank = static_cast<long long>(code.plaquettes.size() - cp + code.stars.size() - cs);
        long long k = static_cast<long long>(n) - rank;
        long long counted = static_cast<long long>(n) -
                            (static_cast<long long>(code.plaquettes.size() + code.stars.size()) - 2);
        if (k != 2 || counted != 2) {
            dim.passed = false;
            dim.detail = "encoded qubits " + std::to_string(k) + " (counting identity gives " +
                         std::to_string(counted) + ")";
        }
    }
    report.checks.push_back(dim);
    return report;
}

std::string lattice_kind_name(LatticeKind kind) {
    return kind == LatticeKind::square ? "square" : "random";
}

LatticeKind parse_lattice_kind(const std::string &name) {
    if (name == "square") {
        return LatticeKind::square;
    }
    if (name == "random") {
        return LatticeKind::random;
    }
    throw std::invalid_argument("unknown lattice kind '" + name + "'");
}

}  // namespace toric
