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

#ifndef TORIC_ANALYSIS_H
#define TORIC_ANALYSIS_H

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "toric/code_lattice.h"
#include "toric/kmc_engine.h"

namespace toric {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double half_width() const {
        return 0.5 * (hi - lo);
    }
    bool contains(double x) const {
        return lo <= x && x <= hi;
    }
};

struct BootstrapConfig {
    int resamples = 1000;
    double confidence = 0.95;
    uint64_t seed = 1;
};

double mean_of(const std::vector<double> &x);
double std_error_of(const std::vector<double> &x);
/// Linear-interpolation percentile (q in [0, 1]) of unsorted data.
double percentile(std::vector<double> x, double q);
/// Percentile-bootstrap confidence interval of the mean.
Interval bootstrap_mean_ci(const std::vector<double> &x, const BootstrapConfig &config);
/// Two estimates agree when their difference is within the root-sum-square of CI half-widths.
bool agree_within_joint_ci(double a, Interval ci_a, double b, Interval ci_b);

/// Sample of a bounded observable stored as value -> count (parities take few values).
struct ValueCounts {
    std::vector<double> values;
    std::vector<uint64_t> counts;

    void add(double v, uint64_t n = 1);
    uint64_t total() const;
    double mean() const;
    double std_error() const;
    /// Mean of a with-replacement resample of the same size (exact multinomial draw).
    double resampled_mean(Rng &rng) const;
};

enum class LogicalOp { z1, z2, average };
std::string logical_op_name(LogicalOp op);

struct LogicalCurve {
    /// Increasing grid of error probabilities f or of times t.
    std::vector<double> grid;
    std::vector<double> mean;
    std::vector<double> ci_lo;
    std::vector<double> ci_hi;
    std::vector<ValueCounts> samples;
    int L = 0;
    double p_mix = 0.0;
    bool dual = false;
    LogicalOp op = LogicalOp::average;
};

/// Fills mean and bootstrap CIs from `samples`.
void summarize(LogicalCurve &curve, const BootstrapConfig &config);

struct NoCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ThresholdEstimate {
    double f_cr = 0.0;
    Interval ci;
    std::vector<int> sizes;
    /// Crossing of each adjacent size pair (sorted by L).
    std::vector<double> pair_crossings;
    int bootstrap_ok = 0;
    int bootstrap_failed = 0;
    std::string method;
};

/// Crossing of two curves y_small, y_big on a shared grid: among the +/- sign changes of
/// d = y_big - y_small, the one maximizing (sum of d before) - (sum of d after), located by linear
/// interpolation. Throws NoCrossingError.
double pair_crossing(const std::vector<double> &grid, const std::vector<double> &y_small,
                     const std::vector<double> &y_big);

/// Mean of adjacent-pair crossings of size-sorted curves.
double crossing_point(std::vector<const LogicalCurve *> curves);

/// Crossing estimate with percentile-bootstrap CI from resampling every grid point.
ThresholdEstimate find_crossing(const std::vector<LogicalCurve> &curves, const BootstrapConfig &config);

/// Pools per-operator crossings: the estimate is their mean and each bootstrap replicate is
/// the mean of the per-operator replicates.
ThresholdEstimate find_crossing_pooled(const std::vector<std::vector<LogicalCurve>> &per_operator,
                                       const BootstrapConfig &config);

struct LifetimeResult {
    double tau = 0.0;
    double level = 0.9;
    bool censored = false;
    /// Sample index just after the crossing (or the last index when censored).
    size_t index = 0;
};

/// First downward crossing of `level`, interpolated linearly between samples. When the curve
/// never drops below the level the result is censored at the last time.
LifetimeResult lifetime(const std::vector<double> &t, const std::vector<double> &y, double level = 0.9);
LifetimeResult lifetime(const EnsembleSeries &series, double level = 0.9, LogicalOp op = LogicalOp::average);

struct LifetimeRun {
    LifetimeResult lifetime;
    EnsembleSeries series;
    double t_end = 0.0;
};

/// Runs the ensemble with a log grid; while the lifetime is censored, doubles t_end (same seeds,
/// so earlier samples repeat exactly) until t_cap is reached.
LifetimeRun run_lifetime(DynamicsConfig config, size_t n_traj, uint64_t master_seed, int workers, double t_min,
                         int per_decade, double t_end, double t_cap, double level = 0.9);

double shannon_entropy(double x);
double css_bound(double p_x, double p_z);
/// p_z in (0, 0.5) with css_bound(p_x, p_z) = 0.
double bound_contour(double p_x);

struct StaticCurveSpec {
    LatticeSpec lattice;
    bool dual = false;
    std::vector<double> f_grid;
    /// Independent lattice realizations (random lattices; square instances are identical).
    int n_instances = 100;
    int n_errors = 200;
    DecoderConfig decoder;
};

struct StaticCurves {
    LogicalCurve z1;
    LogicalCurve z2;
    LogicalCurve average;
};

/// i.i.d. sigma-x errors with probability f per spin, decoded; parities per grid point.
StaticCurves static_curve(const StaticCurveSpec &spec, uint64_t seed, int workers,
                          const BootstrapConfig &bootstrap = {});

struct StaticThresholdSpec {
    LatticeSpec lattice;
    bool dual = false;
    std::vector<int> sizes;
    std::vector<double> f_grid;
    int n_instances = 100;
    int n_errors = 200;
    DecoderConfig decoder;
};

struct StaticThreshold {
    ThresholdEstimate estimate;
    /// Curves per size: index 0 = z1, 1 = z2, 2 = average.
    std::vector<StaticCurves> curves;
};

/// Threshold of one lattice family. Uses the Z1/Z2 average on self-dual families (square,
/// p_mix = 0.5) and pools the separate Z1 and Z2 crossings otherwise.
StaticThreshold static_threshold(const StaticThresholdSpec &spec, uint64_t seed, int workers,
                                 const BootstrapConfig &bootstrap = {});

struct PmixThresholdRow {
    double p_mix = 0.0;
    /// Z threshold measured on the code.
    ThresholdEstimate z;
    /// X threshold measured directly on the dual code.
    ThresholdEstimate x;
    /// Z threshold at 1 - p_mix, if that point is on the grid.
    bool has_mirror = false;
    ThresholdEstimate z_mirror;
};

std::vector<PmixThresholdRow> threshold_vs_pmix(const std::vector<double> &p_mix_grid,
                                                const StaticThresholdSpec &base, uint64_t seed, int workers,
                                                const BootstrapConfig &bootstrap = {});

struct DynamicThresholdSpec {
    double p_mix = 0.5;
    /// k_B T in units of the gap J (J = 1).
    double temperature = 1.0;
    double kappa1 = 1.0;
    std::vector<int> sizes;
    size_t n_traj = 200;
    double t_min = 1e-2;
    double t_end = 100.0;
    int per_decade = 64;
    bool resample_lattice = true;
};

struct DynamicThreshold {
    double tau = 0.0;
    Interval tau_ci;
    double f_cr = 0.0;
    Interval f_ci;
    std::vector<EnsembleSeries> series;
    int bootstrap_ok = 0;
};

/// Lifetime from crossings of corrected-parity curves across sizes, then f_cr = f(tau) from
/// the size-pooled error-fraction curve. Bootstrap resamples whole trajectories.
DynamicThreshold threshold_from_dynamics(const DynamicThresholdSpec &spec, uint64_t seed, int workers,
                                         const BootstrapConfig &bootstrap = {});

}  // namespace toric

#endif
