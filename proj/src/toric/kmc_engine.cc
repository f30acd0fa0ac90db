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

#include "toric/kmc_engine.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "toric/parallel.h"

namespace toric {

Schedule log_schedule(double t_min, double t_end, int per_decade) {
    if (!(t_min > 0) || !(t_end >= t_min) || per_decade < 1) {
        throw std::invalid_argument("log schedule needs 0 < t_min <= t_end and per_decade >= 1");
    }
    Schedule s;
    s.t_end = t_end;
    s.sample_times.push_back(0.0);
    for (int j = 0;; j++) {
        double t = t_min * std::pow(10.0, static_cast<double>(j) / per_decade);
        if (t >= t_end * (1 - 1e-12)) {
            break;
        }
        s.sample_times.push_back(t);
    }
    s.sample_times.push_back(t_end);
    return s;
}

namespace {

bool would_exceed_cap(const EnergyModel &model, const Occupation &occ, uint32_t a, uint32_t b) {
    const auto &cap = model.interaction().max_anyons;
    return cap && !occ.occupied(a) && !occ.occupied(b) && occ.count() + 2 > *cap;
}

/// Per-spin rates in a binary sum tree. Sums are recomputed from the children on every
/// update, so the total never drifts.
class TreeSampler : public RateSampler {
  public:
    explicit TreeSampler(const Simulation &sim) : sim_(sim) {
        const uint32_t n = sim.model().code().num_spins;
        size_ = 1;
        while (size_ < n) {
            size_ *= 2;
        }
        tree_.assign(2 * size_, 0.0);
        rebuild();
    }

    void rebuild() override {
        const uint32_t n = sim_.model().code().num_spins;
        for (uint32_t s = 0; s < n; s++) {
            tree_[size_ + s] = sim_.spin_rate(s);
        }
        for (uint32_t i = size_ - 1; i >= 1; i--) {
            tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
        }
    }

    void after_flip(uint32_t spin, bool count_changed) override {
        const auto &model = sim_.model();
        const bool global = (model.interacting() && !model.constant_interaction()) ||
                            (count_changed && (model.interacting() || model.interaction().max_anyons));
        if (global) {
            rebuild();
            return;
        }
        const auto &code = model.code();
        for (uint32_t p : code.spin_to_plaquettes[spin]) {
            for (uint32_t s : code.plaquettes[p].spins) {
                update(s);
            }
        }
    }

    double total_rate() const override {
        return tree_[1];
    }

    uint32_t sample(Rng &rng) const override {
        double x = uniform01(rng) * tree_[1];
        uint32_t i = 1;
        while (i < size_) {
            double left = tree_[2 * i];
            if ((x < left && left > 0) || tree_[2 * i + 1] <= 0) {
                i = 2 * i;
            } else {
                x -= left;
                i = 2 * i + 1;
            }
        }
        return i - size_;
    }

    double spin_rate(uint32_t spin) const override {
        return tree_[size_ + spin];
    }

  private:
    void update(uint32_t s) {
        uint32_t i = size_ + s;
        tree_[i] = sim_.spin_rate(s);
        for (i /= 2; i >= 1; i /= 2) {
            tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
        }
    }

    const Simulation &sim_;
    uint32_t size_;
    std::vector<double> tree_;
};

/// For constant interactions and few distinct onsite values, a spin's rate depends only on
/// (value, occupation) of its two plaquettes and on N. Spins are kept in buckets by that class,
/// so a flip touches only the spins of the two toggled plaquettes.
class BucketSampler : public RateSampler {
  public:
    static constexpr size_t kMaxValues = 4;

    static bool applicable(const EnergyModel &model) {
        return model.constant_interaction() && distinct_values(model.onsite()).size() <= kMaxValues;
    }

    explicit BucketSampler(const Simulation &sim) : sim_(sim) {
        const auto &model = sim.model();
        values_ = distinct_values(model.onsite());
        num_values_ = static_cast<uint32_t>(values_.size());
        value_index_.resize(model.onsite().size());
        for (size_t p = 0; p < value_index_.size(); p++) {
            value_index_[p] = static_cast<uint32_t>(
                std::lower_bound(values_.begin(), values_.end(), model.onsite(p)) - values_.begin());
        }
        num_classes_ = 4 * num_values_ * num_values_;
        buckets_.assign(num_classes_, {});
        class_rate_.assign(num_classes_, 0.0);
        spin_class_.assign(model.code().num_spins, 0);
        spin_pos_.assign(model.code().num_spins, 0);
        rebuild();
    }

    void rebuild() override {
        for (auto &b : buckets_) {
            b.clear();
        }
        const uint32_t n = sim_.model().code().num_spins;
        for (uint32_t s = 0; s < n; s++) {
            uint32_t c = class_of(s);
            spin_class_[s] = c;
            spin_pos_[s] = static_cast<uint32_t>(buckets_[c].size());
            buckets_[c].push_back(s);
        }
        refresh_rates();
    }

    void after_flip(uint32_t spin, bool count_changed) override {
        const auto &code = sim_.model().code();
        for (uint32_t p : code.spin_to_plaquettes[spin]) {
            for (uint32_t s : code.plaquettes[p].spins) {
                move(s, class_of(s));
            }
        }
        const auto &model = sim_.model();
        if (count_changed && (model.interacting() || model.interaction().max_anyons)) {
            refresh_rates();
        } else {
            refresh_total();
        }
    }

    double total_rate() const override {
        return total_;
    }

    uint32_t sample(Rng &rng) const override {
        double x = uniform01(rng) * total_;
        uint32_t chosen = num_classes_;
        for (uint32_t c = 0; c < num_classes_; c++) {
            double w = class_rate_[c] * static_cast<double>(buckets_[c].size());
            if (w <= 0) {
                continue;
            }
            chosen = c;
            if (x < w) {
                break;
            }
            x -= w;
        }
        const auto &b = buckets_[chosen];
        return b[rng() % b.size()];
    }

    double spin_rate(uint32_t spin) const override {
        return class_rate_[spin_class_[spin]];
    }

  private:
    static std::vector<double> distinct_values(const std::vector<double> &onsite) {
        std::vector<double> v;
        for (double x : onsite) {
            if (std::find(v.begin(), v.end(), x) == v.end()) {
                v.push_back(x);
                if (v.size() > kMaxValues) {
                    break;
                }
            }
        }
        std::sort(v.begin(), v.end());
        return v;
    }

    /// Site code: occupation * V + value index. Class: unordered pair of site codes.
    uint32_t class_of(uint32_t s) const {
        const auto &pp = sim_.model().code().spin_to_plaquettes[s];
        const auto &occ = sim_.occupation();
        uint32_t ca = (occ.occupied(pp[0]) ? num_values_ : 0) + value_index_[pp[0]];
        uint32_t cb = (occ.occupied(pp[1]) ? num_values_ : 0) + value_index_[pp[1]];
        if (ca > cb) {
            std::swap(ca, cb);
        }
        return ca * 2 * num_values_ + cb;
    }

    void move(uint32_t s, uint32_t c) {
        uint32_t old = spin_class_[s];
        if (old == c) {
            return;
        }
        auto &from = buckets_[old];
        uint32_t last = from.back();
        from[spin_pos_[s]] = last;
        spin_pos_[last] = spin_pos_[s];
        from.pop_back();
        spin_class_[s] = c;
        spin_pos_[s] = static_cast<uint32_t>(buckets_[c].size());
        buckets_[c].push_back(s);
    }

    void refresh_rates() {
        const auto &model = sim_.model();
        const double A = model.interaction().A;
        const int N = sim_.occupation().count();
        const auto &cap = model.interaction().max_anyons;
        const uint32_t w = 2 * num_values_;
        for (uint32_t ca = 0; ca < w; ca++) {
            for (uint32_t cb = ca; cb < w; cb++) {
                bool na = ca >= num_values_;
                bool nb = cb >= num_values_;
                double va = values_[ca % num_values_];
                double vb = values_[cb % num_values_];
                double omega;
                bool forbidden = false;
                if (!na && !nb) {
                    omega = -(va + vb) - A * (2.0 * N + 1.0);
                    forbidden = cap && N + 2 > *cap;
                } else if (na && nb) {
                    omega = va + vb + A * (2.0 * N - 3.0);
                } else {
                    omega = na ? va - vb : vb - va;
                }
                class_rate_[ca * w + cb] = forbidden ? 0.0 : rate(omega, sim_.bath());
            }
        }
        refresh_total();
    }

    void refresh_total() {
        total_ = 0.0;
        for (uint32_t c = 0; c < num_classes_; c++) {
            total_ += class_rate_[c] * static_cast<double>(buckets_[c].size());
        }
    }

    const Simulation &sim_;
    std::vector<double> values_;
    uint32_t num_values_ = 0;
    std::vector<uint32_t> value_index_;
    uint32_t num_classes_ = 0;
    std::vector<std::vector<uint32_t>> buckets_;
    std::vector<double> class_rate_;
    std::vector<uint32_t> spin_class_;
    std::vector<uint32_t> spin_pos_;
    double total_ = 0.0;
};

}  // namespace

Simulation::Simulation(const EnergyModel &model, const BathSpec &bath, uint64_t seed, SamplerKind sampler)
    : model_(&model), bath_(bath), rng_(seed), occupation_(model), kind_(sampler) {
    validate_bath(bath);
    const auto &code = model.code();
    error_.assign(code.num_spins, 0);
    spin_z_.assign(code.num_spins, 0);
    for (uint32_t s : code.logicals[Z1]) {
        spin_z_[s] ^= 1;
    }
    for (uint32_t s : code.logicals[Z2]) {
        spin_z_[s] ^= 2;
    }
    if (kind_ == SamplerKind::automatic) {
        kind_ = BucketSampler::applicable(model) ? SamplerKind::bucket : SamplerKind::tree;
    }
    if (kind_ == SamplerKind::bucket) {
        if (!BucketSampler::applicable(model)) {
            throw std::invalid_argument("bucket sampler needs a constant interaction and few onsite values");
        }
        sampler_ = std::make_unique<BucketSampler>(*this);
    } else {
        sampler_ = std::make_unique<TreeSampler>(*this);
    }
}

Simulation::~Simulation() = default;

double Simulation::spin_rate(uint32_t spin) const {
    const auto &pp = model_->code().spin_to_plaquettes[spin];
    if (would_exceed_cap(*model_, occupation_, pp[0], pp[1])) {
        return 0.0;
    }
    return rate(flip_energy_delta(*model_, occupation_, spin), bath_);
}

double Simulation::total_rate() const {
    return sampler_->total_rate();
}

void Simulation::flip(uint32_t spin) {
    if (spin >= error_.size()) {
        throw std::invalid_argument("spin index out of range");
    }
    const int before = occupation_.count();
    error_[spin] ^= 1;
    error_count_ += error_[spin] ? 1 : -1;
    z_mask_ ^= spin_z_[spin];
    for (uint32_t p : model_->code().spin_to_plaquettes[spin]) {
        occupation_.toggle(p);
    }
    sampler_->after_flip(spin, occupation_.count() != before);
    pending_dt_ = -1.0;
    frozen_ = false;
}

double Simulation::peek_waiting_time() {
    if (pending_dt_ >= 0) {
        return pending_dt_;
    }
    double R = sampler_->total_rate();
    if (!(R > 0)) {
        frozen_ = true;
        return std::numeric_limits<double>::infinity();
    }
    pending_dt_ = exponential(rng_, R);
    return pending_dt_;
}

void Simulation::commit() {
    double dt = peek_waiting_time();
    if (std::isinf(dt)) {
        throw std::logic_error("commit() on a frozen trajectory");
    }
    uint32_t s = sampler_->sample(rng_);
    double t_new = t_ + dt;
    flip(s);
    t_ = t_new;
}

bool Simulation::step() {
    if (std::isinf(peek_waiting_time())) {
        return false;
    }
    commit();
    return true;
}

TimeSeries run_trajectory(const EnergyModel &model, const BathSpec &bath, const Schedule &schedule, uint64_t seed,
                          DecoderConfig decoder) {
    Simulation sim(model, bath, seed);
    Decoder dec(model.code(), decoder);
    TimeSeries out;
    const size_t n = schedule.sample_times.size();
    out.t.reserve(n);
    out.anyons.reserve(n);
    out.errors.reserve(n);
    out.z1.reserve(n);
    out.z2.reserve(n);
    out.z1_ec.reserve(n);
    out.z2_ec.reserve(n);
    uint64_t last_recorded = UINT64_MAX;
    LogicalParities ec;
    for (double ts : schedule.sample_times) {
        while (sim.t() + sim.peek_waiting_time() <= ts) {
            sim.commit();
            out.events++;
        }
        if (last_recorded != out.events) {
            ec = dec.corrected_parities(sim.error());
            last_recorded = out.events;
        }
        auto raw = sim.parities();
        out.t.push_back(ts);
        out.anyons.push_back(sim.anyon_count());
        out.errors.push_back(sim.error_count());
        out.z1.push_back(static_cast<int8_t>(raw.z1));
        out.z2.push_back(static_cast<int8_t>(raw.z2));
        out.z1_ec.push_back(static_cast<int8_t>(ec.z1));
        out.z2_ec.push_back(static_cast<int8_t>(ec.z2));
    }
    out.frozen = sim.frozen();
    return out;
}

TrajectorySeeds trajectory_seeds(uint64_t master_seed, uint64_t index) {
    return {derive_seed(master_seed, 11, index), derive_seed(master_seed, 12, index),
            derive_seed(master_seed, 13, index)};
}

namespace {

SeriesStat stat_of(const std::vector<TimeSeries> &trajs, size_t points,
                   const std::function<double(const TimeSeries &, size_t)> &get) {
    SeriesStat s;
    const double n = static_cast<double>(trajs.size());
    s.mean.assign(points, 0.0);
    s.sem.assign(points, 0.0);
    for (size_t j = 0; j < points; j++) {
        double sum = 0.0;
        for (const auto &tr : trajs) {
            sum += get(tr, j);
        }
        double mean = sum / n;
        double ss = 0.0;
        for (const auto &tr : trajs) {
            double d = get(tr, j) - mean;
            ss += d * d;
        }
        s.mean[j] = mean;
        s.sem[j] = trajs.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    }
    return s;
}

}  // namespace

EnsembleSeries aggregate(const std::vector<TimeSeries> &trajectories, uint32_t num_spins) {
    if (trajectories.empty()) {
        throw std::invalid_argument("aggregate needs at least one trajectory");
    }
    const size_t points = trajectories.front().size();
    for (const auto &tr : trajectories) {
        if (tr.size() != points) {
            throw std::invalid_argument("trajectories have different sample grids");
        }
    }
    EnsembleSeries e;
    e.t = trajectories.front().t;
    e.n_traj = trajectories.size();
    e.num_spins = num_spins;
    const double inv_spins = 1.0 / num_spins;
    e.anyons = stat_of(trajectories, points, [](const TimeSeries &s, size_t j) { return s.anyons[j]; });
    e.errors = stat_of(trajectories, points, [](const TimeSeries &s, size_t j) { return s.errors[j]; });
    e.fraction = stat_of(trajectories, points,
                         [inv_spins](const TimeSeries &s, size_t j) { return s.errors[j] * inv_spins; });
    e.z1 = stat_of(trajectories, points, [](const TimeSeries &s, size_t j) { return s.z1[j]; });
    e.z2 = stat_of(trajectories, points, [](const TimeSeries &s, size_t j) { return s.z2[j]; });
    e.z1_ec = stat_of(trajectories, points, [](const TimeSeries &s, size_t j) { return s.z1_ec[j]; });
    e.z2_ec = stat_of(trajectories, points, [](const TimeSeries &s, size_t j) { return s.z2_ec[j]; });
    e.z_ec = stat_of(trajectories, points,
                     [](const TimeSeries &s, size_t j) { return 0.5 * (s.z1_ec[j] + s.z2_ec[j]); });
    for (const auto &tr : trajectories) {
        e.events += tr.events;
    }
    return e;
}

EnsembleSeries ensemble_run(const DynamicsConfig &config, size_t n_traj, uint64_t master_seed, int workers,
                            bool keep_trajectories) {
    if (n_traj < 1) {
        throw std::invalid_argument("ensemble needs at least one trajectory");
    }
    validate_bath(config.bath);
    validate_disorder(config.disorder);
    validate_interaction(config.interaction);
    const bool per_traj_lattice = config.resample_lattice && config.lattice.kind == LatticeKind::random;
    auto make_code = [&](uint64_t lattice_seed) {
        LatticeSpec spec = config.lattice;
        if (per_traj_lattice) {
            spec.seed = lattice_seed;
        }
        StabilizerCode code = build_code(spec);
        return config.dual ? dual(code) : code;
    };
    StabilizerCode shared;
    if (!per_traj_lattice) {
        shared = make_code(0);
    }
    std::vector<TimeSeries> results(n_traj);
    parallel_for(n_traj, workers, [&](size_t i) {
        TrajectorySeeds seeds = trajectory_seeds(master_seed, i);
        StabilizerCode own;
        if (per_traj_lattice) {
            own = make_code(seeds.lattice);
        }
        const StabilizerCode &code = per_traj_lattice ? own : shared;
        DisorderSpec disorder = config.disorder;
        if (config.resample_disorder) {
            disorder.seed = seeds.disorder;
        }
        EnergyModel model(code, sample_onsite(code, disorder), config.interaction);
        results[i] = run_trajectory(model, config.bath, config.schedule, seeds.dynamics, config.decoder);
    });
    const uint32_t num_spins = per_traj_lattice ? make_code(trajectory_seeds(master_seed, 0).lattice).num_spins
                                                : shared.num_spins;
    EnsembleSeries e = aggregate(results, num_spins);
    if (keep_trajectories) {
        e.trajectories = std::move(results);
    }
    return e;
}

}  // namespace toric
