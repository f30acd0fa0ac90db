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

#include "toric/analysis.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "toric/parallel.h"
#include "toric/rng.h"

namespace toric {

double mean_of(const std::vector<double> &x) {
    if (x.empty()) {
        throw std::invalid_argument("mean of an empty sample");
    }
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

double std_error_of(const std::vector<double> &x) {
    if (x.size() < 2) {
        return 0.0;
    }
    double m = mean_of(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    double n = static_cast<double>(x.size());
    return std::sqrt(ss / (n - 1) / n);
}

double percentile(std::vector<double> x, double q) {
    if (x.empty()) {
        throw std::invalid_argument("percentile of an empty sample");
    }
    std::sort(x.begin(), x.end());
    double pos = q * static_cast<double>(x.size() - 1);
    size_t lo = static_cast<size_t>(std::floor(pos));
    size_t hi = std::min(lo + 1, x.size() - 1);
    double w = pos - static_cast<double>(lo);
    return x[lo] * (1 - w) + x[hi] * w;
}

namespace {

Interval percentile_interval(const std::vector<double> &replicates, double confidence) {
    double a = 0.5 * (1 - confidence);
    return {percentile(replicates, a), percentile(replicates, 1 - a)};
}

}  // namespace

Interval bootstrap_mean_ci(const std::vector<double> &x, const BootstrapConfig &config) {
    if (x.empty()) {
        throw std::invalid_argument("bootstrap of an empty sample");
    }
    Rng rng(config.seed);
    std::vector<double> reps(config.resamples);
    for (auto &r : reps) {
        double s = 0.0;
        for (size_t i = 0; i < x.size(); i++) {
            s += x[rng() % x.size()];
        }
        r = s / static_cast<double>(x.size());
    }
    return percentile_interval(reps, config.confidence);
}

bool agree_within_joint_ci(double a, Interval ci_a, double b, Interval ci_b) {
    double hw = std::hypot(ci_a.half_width(), ci_b.half_width());
    return std::abs(a - b) <= hw;
}

void ValueCounts::add(double v, uint64_t n) {
    for (size_t i = 0; i < values.size(); i++) {
        if (values[i] == v) {
            counts[i] += n;
            return;
        }
    }
    values.push_back(v);
    counts.push_back(n);
}

uint64_t ValueCounts::total() const {
    uint64_t n = 0;
    for (uint64_t c : counts) {
        n += c;
    }
    return n;
}

double ValueCounts::mean() const {
    double s = 0.0;
    uint64_t n = 0;
    for (size_t i = 0; i < values.size(); i++) {
        s += values[i] * static_cast<double>(counts[i]);
        n += counts[i];
    }
    if (n == 0) {
        throw std::invalid_argument("mean of an empty sample");
    }
    return s / static_cast<double>(n);
}

double ValueCounts::std_error() const {
    uint64_t n = total();
    if (n < 2) {
        return 0.0;
    }
    double m = mean();
    double ss = 0.0;
    for (size_t i = 0; i < values.size(); i++) {
        ss += (values[i] - m) * (values[i] - m) * static_cast<double>(counts[i]);
    }
    double dn = static_cast<double>(n);
    return std::sqrt(ss / (dn - 1) / dn);
}

double ValueCounts::resampled_mean(Rng &rng) const {
    uint64_t n = total();
    uint64_t remaining = n;
    double remaining_p = 1.0;
    double s = 0.0;
    for (size_t i = 0; i < values.size() && remaining > 0; i++) {
        double p = static_cast<double>(counts[i]) / static_cast<double>(n);
        uint64_t draw;
        if (i + 1 == values.size() || p >= remaining_p) {
            draw = remaining;
        } else {
            std::binomial_distribution<uint64_t> b(remaining, std::min(1.0, p / remaining_p));
            draw = b(rng);
        }
        s += values[i] * static_cast<double>(draw);
        remaining -= draw;
        remaining_p -= p;
    }
    return s / static_cast<double>(n);
}

std::string logical_op_name(LogicalOp op) {
    switch (op) {
        case LogicalOp::z1:
            return "z1";
        case LogicalOp::z2:
            return "z2";
        case LogicalOp::average:
            return "average";
    }
    return "?";
}

void summarize(LogicalCurve &curve, const BootstrapConfig &config) {
    const size_t n = curve.samples.size();
    curve.mean.assign(n, 0.0);
    curve.ci_lo.assign(n, 0.0);
    curve.ci_hi.assign(n, 0.0);
    for (size_t j = 0; j < n; j++) {
        curve.mean[j] = curve.samples[j].mean();
        Rng rng(derive_seed(config.seed, 40, j));
        std::vector<double> reps(config.resamples);
        for (auto &r : reps) {
            r = curve.samples[j].resampled_mean(rng);
        }
        Interval ci = percentile_interval(reps, config.confidence);
        curve.ci_lo[j] = ci.lo;
        curve.ci_hi[j] = ci.hi;
    }
}

double pair_crossing(const std::vector<double> &grid, const std::vector<double> &y_small,
                     const std::vector<double> &y_big) {
    const size_t n = grid.size();
    if (y_small.size() != n || y_big.size() != n || n < 2) {
        throw std::invalid_argument("crossing needs two curves on a shared grid of >= 2 points");
    }
    std::vector<double> d(n);
    for (size_t j = 0; j < n; j++) {
        d[j] = y_big[j] - y_small[j];
    }
    // score(c) = sum_{j <= c} d_j - sum_{j > c} d_j. Weighting by |d| keeps long stretches where the
    // curves are statistically equal (both saturated) from outvoting the real crossing.
    std::vector<double> prefix(n + 1, 0.0);
    for (size_t j = 0; j < n; j++) {
        prefix[j + 1] = prefix[j] + d[j];
    }
    double best_score = -std::numeric_limits<double>::infinity();
    size_t best = n;
    for (size_t c = 0; c + 1 < n; c++) {
        if (!(d[c] > 0 && d[c + 1] <= 0)) {
            continue;
        }
        double score = 2 * prefix[c + 1] - prefix[n];
        if (score > best_score) {
            best_score = score;
            best = c;
        }
    }
    if (best == n) {
        throw NoCrossingError("curves do not cross from (larger above) to (larger below) on the grid [" +
                              std::to_string(grid.front()) + ", " + std::to_string(grid.back()) + "]");
    }
    double w = d[best] / (d[best] - d[best + 1]);
    return grid[best] + w * (grid[best + 1] - grid[best]);
}

double crossing_point(std::vector<const LogicalCurve *> curves) {
    if (curves.size() < 2) {
        throw std::invalid_argument("crossing needs at least two sizes");
    }
    std::sort(curves.begin(), curves.end(), [](const LogicalCurve *a, const LogicalCurve *b) { return a->L < b->L; });
    double s = 0.0;
    for (size_t i = 0; i + 1 < curves.size(); i++) {
        if (curves[i]->grid != curves[i + 1]->grid) {
            throw std::invalid_argument("curves must share their grid");
        }
        s += pair_crossing(curves[i]->grid, curves[i]->mean, curves[i + 1]->mean);
    }
    return s / static_cast<double>(curves.size() - 1);
}

namespace {

std::vector<const LogicalCurve *> pointers(const std::vector<LogicalCurve> &curves) {
    std::vector<const LogicalCurve *> out;
    for (const auto &c : curves) {
        out.push_back(&c);
    }
    return out;
}

/// One bootstrap replicate of a crossing estimate: every grid point of every curve resampled.
double replicate_crossing(const std::vector<LogicalCurve> &curves, Rng &rng) {
    std::vector<LogicalCurve> rep(curves.size());
    for (size_t i = 0; i < curves.size(); i++) {
        rep[i].grid = curves[i].grid;
        rep[i].L = curves[i].L;
        rep[i].mean.resize(curves[i].samples.size());
        for (size_t j = 0; j < curves[i].samples.size(); j++) {
            rep[i].mean[j] = curves[i].samples[j].resampled_mean(rng);
        }
    }
    return crossing_point(pointers(rep));
}

ThresholdEstimate base_estimate(const std::vector<LogicalCurve> &curves) {
    ThresholdEstimate e;
    auto ptrs = pointers(curves);
    std::sort(ptrs.begin(), ptrs.end(), [](const LogicalCurve *a, const LogicalCurve *b) { return a->L < b->L; });
    for (const auto *c : ptrs) {
        e.sizes.push_back(c->L);
    }
    for (size_t i = 0; i + 1 < ptrs.size(); i++) {
        e.pair_crossings.push_back(pair_crossing(ptrs[i]->grid, ptrs[i]->mean, ptrs[i + 1]->mean));
    }
    return e;
}

}  // namespace

ThresholdEstimate find_crossing(const std::vector<LogicalCurve> &curves, const BootstrapConfig &config) {
    ThresholdEstimate e = base_estimate(curves);
    e.f_cr = crossing_point(pointers(curves));
    e.method = "pairwise linear crossing, op=" + logical_op_name(curves.front().op);
    std::vector<double> reps;
    for (int r = 0; r < config.resamples; r++) {
        Rng rng(derive_seed(config.seed, 41, r));
        try {
            reps.push_back(replicate_crossing(curves, rng));
        } catch (const NoCrossingError &) {
            e.bootstrap_failed++;
        }
    }
    e.bootstrap_ok = static_cast<int>(reps.size());
    e.ci = reps.empty() ? Interval{e.f_cr, e.f_cr} : percentile_interval(reps, config.confidence);
    return e;
}

ThresholdEstimate find_crossing_pooled(const std::vector<std::vector<LogicalCurve>> &per_operator,
                                       const BootstrapConfig &config) {
    if (per_operator.empty()) {
        throw std::invalid_argument("no operators to pool");
    }
    ThresholdEstimate e = base_estimate(per_operator.front());
    e.pair_crossings.clear();
    double s = 0.0;
    for (const auto &curves : per_operator) {
        auto part = base_estimate(curves);
        e.pair_crossings.insert(e.pair_crossings.end(), part.pair_crossings.begin(), part.pair_crossings.end());
        s += crossing_point(pointers(curves));
    }
    e.f_cr = s / static_cast<double>(per_operator.size());
    e.method = "pairwise linear crossing, pooled over " + std::to_string(per_operator.size()) + " operators";
    std::vector<double> reps;
    for (int r = 0; r < config.resamples; r++) {
        double rs = 0.0;
        bool ok = true;
        for (size_t o = 0; o < per_operator.size() && ok; o++) {
            Rng rng(derive_seed(config.seed, 42 + o, r));
            try {
                rs += replicate_crossing(per_operator[o], rng);
            } catch (const NoCrossingError &) {
                ok = false;
            }
        }
        if (ok) {
            reps.push_back(rs / static_cast<double>(per_operator.size()));
        } else {
            e.bootstrap_failed++;
        }
    }
    e.bootstrap_ok = static_cast<int>(reps.size());
    e.ci = reps.empty() ? Interval{e.f_cr, e.f_cr} : percentile_interval(reps, config.confidence);
    return e;
}

LifetimeResult lifetime(const std::vector<double> &t, const std::vector<double> &y, double level) {
    if (t.size() != y.size() || t.empty()) {
        throw std::invalid_argument("lifetime needs matching, non-empty series");
    }
    LifetimeResult r;
    r.level = level;
    for (size_t j = 1; j < t.size(); j++) {
        if (y[j] < level && y[j - 1] >= level) {
            double w = (y[j - 1] - level) / (y[j - 1] - y[j]);
            r.tau = t[j - 1] + w * (t[j] - t[j - 1]);
            r.index = j;
            return r;
        }
    }
    r.censored = true;
    r.tau = t.back();
    r.index = t.size() - 1;
    return r;
}

LifetimeResult lifetime(const EnsembleSeries &series, double level, LogicalOp op) {
    const auto &y = op == LogicalOp::z1 ? series.z1_ec.mean : op == LogicalOp::z2 ? series.z2_ec.mean : series.z_ec.mean;
    return lifetime(series.t, y, level);
}

LifetimeRun run_lifetime(DynamicsConfig config, size_t n_traj, uint64_t master_seed, int workers, double t_min,
                         int per_decade, double t_end, double t_cap, double level) {
    while (true) {
        config.schedule = log_schedule(t_min, t_end, per_decade);
        LifetimeRun run;
        run.series = ensemble_run(config, n_traj, master_seed, workers);
        run.lifetime = lifetime(run.series, level);
        run.t_end = t_end;
        if (!run.lifetime.censored || t_end >= t_cap) {
            return run;
        }
        t_end = std::min(2 * t_end, t_cap);
    }
}

double shannon_entropy(double x) {
    if (!(x >= 0 && x <= 1)) {
        throw std::invalid_argument("entropy argument must lie in [0, 1]");
    }
    if (x == 0 || x == 1) {
        return 0.0;
    }
    return -x * std::log2(x) - (1 - x) * std::log2(1 - x);
}

double css_bound(double p_x, double p_z) {
    if (!(p_x >= 0 && p_x <= 0.5) || !(p_z >= 0 && p_z <= 0.5)) {
        throw std::invalid_argument("error probabilities must lie in [0, 0.5]");
    }
    return 1 - shannon_entropy(p_x) - shannon_entropy(p_z);
}

double bound_contour(double p_x) {
    if (!(p_x > 0 && p_x < 0.5)) {
        throw std::invalid_argument("bound contour needs 0 < p_x < 0.5");
    }
    double target = 1 - shannon_entropy(p_x);
    if (!(target > 0)) {
        throw std::invalid_argument("no contour point: H(p_x) >= 1");
    }
    double lo = 0.0;
    double hi = 0.5;
    while (hi - lo > 1e-15) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        if (shannon_entropy(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

StaticCurves static_curve(const StaticCurveSpec &spec, uint64_t seed, int workers, const BootstrapConfig &bootstrap) {
    if (spec.f_grid.empty() || spec.n_instances < 1 || spec.n_errors < 1) {
        throw std::invalid_argument("static curve needs a grid and positive sample counts");
    }
    for (size_t i = 0; i < spec.f_grid.size(); i++) {
        double f = spec.f_grid[i];
        if (!(f >= 0 && f < 0.5) || (i > 0 && !(f > spec.f_grid[i - 1]))) {
            throw std::invalid_argument("f grid must be increasing within [0, 0.5)");
        }
    }
    const size_t F = spec.f_grid.size();
    const size_t I = static_cast<size_t>(spec.n_instances);
    const bool random = spec.lattice.kind == LatticeKind::random;
    std::vector<StabilizerCode> codes(random ? I : 1);
    parallel_for(codes.size(), workers, [&](size_t i) {
        LatticeSpec ls = spec.lattice;
        if (random) {
            ls.seed = derive_seed(seed, 30, i);
        }
        StabilizerCode c = build_code(ls);
        codes[i] = spec.dual ? dual(c) : c;
    });
    struct TaskResult {
        uint64_t z1_minus = 0;
        uint64_t z2_minus = 0;
        uint64_t both_minus = 0;
    };
    std::vector<TaskResult> results(I * F);
    parallel_for(I * F, workers, [&](size_t task) {
        size_t i = task / F;
        size_t fi = task % F;
        const StabilizerCode &code = codes[random ? i : 0];
        Decoder dec(code, spec.decoder);
        Rng rng(derive_seed(seed, 31, task));
        const double f = spec.f_grid[fi];
        std::vector<uint8_t> error(code.num_spins);
        TaskResult r;
        for (int d = 0; d < spec.n_errors; d++) {
            for (auto &b : error) {
                b = uniform01(rng) < f;
            }
            auto p = dec.corrected_parities(error);
            r.z1_minus += p.z1 < 0;
            r.z2_minus += p.z2 < 0;
            r.both_minus += p.z1 < 0 && p.z2 < 0;
        }
        results[task] = r;
    });
    StaticCurves out;
    LogicalCurve *curves[3] = {&out.z1, &out.z2, &out.average};
    const LogicalOp ops[3] = {LogicalOp::z1, LogicalOp::z2, LogicalOp::average};
    for (int c = 0; c < 3; c++) {
        curves[c]->grid = spec.f_grid;
        curves[c]->L = spec.lattice.L;
        curves[c]->p_mix = spec.lattice.p_mix;
        curves[c]->dual = spec.dual;
        curves[c]->op = ops[c];
        curves[c]->samples.assign(F, {});
    }
    for (size_t fi = 0; fi < F; fi++) {
        TaskResult sum;
        for (size_t i = 0; i < I; i++) {
            const auto &r = results[i * F + fi];
            sum.z1_minus += r.z1_minus;
            sum.z2_minus += r.z2_minus;
            sum.both_minus += r.both_minus;
        }
        const uint64_t n = I * static_cast<uint64_t>(spec.n_errors);
        out.z1.samples[fi].add(1.0, n - sum.z1_minus);
        out.z1.samples[fi].add(-1.0, sum.z1_minus);
        out.z2.samples[fi].add(1.0, n - sum.z2_minus);
        out.z2.samples[fi].add(-1.0, sum.z2_minus);
        uint64_t one_minus = sum.z1_minus + sum.z2_minus - 2 * sum.both_minus;
        out.average.samples[fi].add(1.0, n - one_minus - sum.both_minus);
        out.average.samples[fi].add(0.0, one_minus);
        out.average.samples[fi].add(-1.0, sum.both_minus);
    }
    for (int c = 0; c < 3; c++) {
        BootstrapConfig b = bootstrap;
        b.seed = derive_seed(bootstrap.seed, 32, c);
        summarize(*curves[c], b);
    }
    return out;
}

namespace {

bool self_dual_family(const LatticeSpec &lattice) {
    return lattice.kind == LatticeKind::square || lattice.p_mix == 0.5;
}

}  // namespace

StaticThreshold static_threshold(const StaticThresholdSpec &spec, uint64_t seed, int workers,
                                 const BootstrapConfig &bootstrap) {
    if (spec.sizes.size() < 2) {
        throw std::invalid_argument("threshold needs at least two sizes");
    }
    StaticThreshold out;
    for (int L : spec.sizes) {
        StaticCurveSpec cs;
        cs.lattice = spec.lattice;
        cs.lattice.L = L;
        cs.dual = spec.dual;
        cs.f_grid = spec.f_grid;
        cs.n_instances = spec.n_instances;
        cs.n_errors = spec.n_errors;
        cs.decoder = spec.decoder;
        out.curves.push_back(static_curve(cs, derive_seed(seed, 50, static_cast<uint64_t>(L)), workers, bootstrap));
    }
    std::vector<LogicalCurve> z1, z2, avg;
    for (const auto &c : out.curves) {
        z1.push_back(c.z1);
        z2.push_back(c.z2);
        avg.push_back(c.average);
    }
    if (self_dual_family(spec.lattice)) {
        out.estimate = find_crossing(avg, bootstrap);
    } else {
        out.estimate = find_crossing_pooled({z1, z2}, bootstrap);
    }
    return out;
}

std::vector<PmixThresholdRow> threshold_vs_pmix(const std::vector<double> &p_mix_grid,
                                                const StaticThresholdSpec &base, uint64_t seed, int workers,
                                                const BootstrapConfig &bootstrap) {
    std::vector<ThresholdEstimate> z(p_mix_grid.size());
    std::vector<PmixThresholdRow> rows(p_mix_grid.size());
    for (size_t i = 0; i < p_mix_grid.size(); i++) {
        StaticThresholdSpec s = base;
        s.lattice.kind = LatticeKind::random;
        s.lattice.p_mix = p_mix_grid[i];
        s.dual = false;
        z[i] = static_threshold(s, derive_seed(seed, 60, i), workers, bootstrap).estimate;
        s.dual = true;
        rows[i].p_mix = p_mix_grid[i];
        rows[i].z = z[i];
        rows[i].x = static_threshold(s, derive_seed(seed, 61, i), workers, bootstrap).estimate;
    }
    for (size_t i = 0; i < p_mix_grid.size(); i++) {
        for (size_t j = 0; j < p_mix_grid.size(); j++) {
            if (std::abs(p_mix_grid[j] - (1 - p_mix_grid[i])) < 1e-12) {
                rows[i].has_mirror = true;
                rows[i].z_mirror = z[j];
            }
        }
    }
    return rows;
}

namespace {

double interpolate(const std::vector<double> &x, const std::vector<double> &y, double at) {
    if (at <= x.front()) {
        return y.front();
    }
    for (size_t j = 1; j < x.size(); j++) {
        if (at <= x[j]) {
            double w = (at - x[j - 1]) / (x[j] - x[j - 1]);
            return y[j - 1] + w * (y[j] - y[j - 1]);
        }
    }
    return y.back();
}

struct DynamicPoint {
    double tau;
    double f;
};

/// tau and f(tau) for one selection of trajectories per size.
DynamicPoint dynamic_point(const std::vector<EnsembleSeries> &series,
                           const std::vector<std::vector<size_t>> &selection, bool self_dual) {
    const size_t S = series.size();
    const auto &t = series.front().t;
    const size_t n = t.size();
    std::vector<LogicalCurve> z1(S), z2(S), avg(S);
    std::vector<double> fraction(n, 0.0);
    for (size_t s = 0; s < S; s++) {
        const auto &trajs = series[s].trajectories;
        const auto &sel = selection[s];
        for (auto *c : {&z1[s], &z2[s], &avg[s]}) {
            c->grid = t;
            c->L = static_cast<int>(s);
            c->mean.assign(n, 0.0);
        }
        std::vector<double> fr(n, 0.0);
        for (size_t idx : sel) {
            const auto &tr = trajs[idx];
            for (size_t j = 0; j < n; j++) {
                z1[s].mean[j] += tr.z1_ec[j];
                z2[s].mean[j] += tr.z2_ec[j];
                fr[j] += tr.errors[j];
            }
        }
        const double inv = 1.0 / static_cast<double>(sel.size());
        for (size_t j = 0; j < n; j++) {
            z1[s].mean[j] *= inv;
            z2[s].mean[j] *= inv;
            avg[s].mean[j] = 0.5 * (z1[s].mean[j] + z2[s].mean[j]);
            fraction[j] += fr[j] * inv / series[s].num_spins / static_cast<double>(S);
        }
    }
    auto ptrs = [](std::vector<LogicalCurve> &v) {
        std::vector<const LogicalCurve *> p;
        for (auto &c : v) {
            p.push_back(&c);
        }
        return p;
    };
    if (self_dual) {
        double tau = crossing_point(ptrs(avg));
        return {tau, interpolate(t, fraction, tau)};
    }
    double tau1 = crossing_point(ptrs(z1));
    double tau2 = crossing_point(ptrs(z2));
    return {0.5 * (tau1 + tau2), 0.5 * (interpolate(t, fraction, tau1) + interpolate(t, fraction, tau2))};
}

}  // namespace

DynamicThreshold threshold_from_dynamics(const DynamicThresholdSpec &spec, uint64_t seed, int workers,
                                         const BootstrapConfig &bootstrap) {
    if (spec.sizes.size() < 2) {
        throw std::invalid_argument("dynamic threshold needs at least two sizes");
    }
    std::vector<int> sizes = spec.sizes;
    std::sort(sizes.begin(), sizes.end());
    DynamicThreshold out;
    for (int L : sizes) {
        DynamicsConfig cfg;
        cfg.lattice = {L, LatticeKind::random, spec.p_mix, derive_seed(seed, 70, static_cast<uint64_t>(L))};
        cfg.bath = {BathSpec::Model::ohmic, 1.0, spec.temperature, spec.kappa1};
        cfg.disorder = {DisorderSpec::Kind::none, 0.0, 0.0, 1.0, 0};
        cfg.interaction = {};
        cfg.schedule = log_schedule(spec.t_min, spec.t_end, spec.per_decade);
        cfg.resample_lattice = spec.resample_lattice;
        out.series.push_back(
            ensemble_run(cfg, spec.n_traj, derive_seed(seed, 71, static_cast<uint64_t>(L)), workers, true));
    }
    const bool self_dual = spec.p_mix == 0.5;
    std::vector<std::vector<size_t>> all(sizes.size());
    for (size_t s = 0; s < sizes.size(); s++) {
        for (size_t i = 0; i < out.series[s].trajectories.size(); i++) {
            all[s].push_back(i);
        }
    }
    DynamicPoint p = dynamic_point(out.series, all, self_dual);
    out.tau = p.tau;
    out.f_cr = p.f;
    std::vector<double> taus, fs;
    for (int r = 0; r < bootstrap.resamples; r++) {
        Rng rng(derive_seed(bootstrap.seed, 72, r));
        std::vector<std::vector<size_t>> sel(sizes.size());
        for (size_t s = 0; s < sizes.size(); s++) {
            size_t n = all[s].size();
            sel[s].resize(n);
            for (auto &x : sel[s]) {
                x = rng() % n;
            }
        }
        try {
            DynamicPoint q = dynamic_point(out.series, sel, self_dual);
            taus.push_back(q.tau);
            fs.push_back(q.f);
        } catch (const NoCrossingError &) {
        }
    }
    out.bootstrap_ok = static_cast<int>(taus.size());
    out.tau_ci = taus.empty() ? Interval{out.tau, out.tau} : percentile_interval(taus, bootstrap.confidence);
    out.f_ci = fs.empty() ? Interval{out.f_cr, out.f_cr} : percentile_interval(fs, bootstrap.confidence);
    return out;
}

}  // namespace toric
