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

#ifndef TORIC_KMC_ENGINE_H
#define TORIC_KMC_ENGINE_H

#include <cstdint>
#include <memory>
#include <vector>

#include "toric/code_lattice.h"
#include "toric/decoder.h"
#include "toric/noise_energy.h"
#include "toric/rng.h"

namespace toric {

struct Schedule {
    /// Increasing, within [0, t_end].
    std::vector<double> sample_times;
    double t_end = 0.0;
};

/// t = 0 followed by `per_decade` log-spaced points per decade from t_min up to t_end
/// (t_end itself is always the last sample).
Schedule log_schedule(double t_min, double t_end, int per_decade);

/// Chooses one of the allowed spin flips with probability proportional to its rate.
class RateSampler {
  public:
    virtual ~RateSampler() = default;
    /// Recomputes everything from the current state.
    virtual void rebuild() = 0;
    /// Called after `spin` has been flipped; `count_changed` tells whether N changed.
    virtual void after_flip(uint32_t spin, bool count_changed) = 0;
    virtual double total_rate() const = 0;
    virtual uint32_t sample(Rng &rng) const = 0;
    virtual double spin_rate(uint32_t spin) const = 0;
};

/// One kinetic Monte Carlo trajectory of sigma-x errors on the plaquette sector.
class Simulation {
  public:
    enum class SamplerKind { automatic, tree, bucket };

    Simulation(const EnergyModel &model, const BathSpec &bath, uint64_t seed,
               SamplerKind sampler = SamplerKind::automatic);
    ~Simulation();
    Simulation(const Simulation &) = delete;
    Simulation &operator=(const Simulation &) = delete;

    /// Advances by one event. Returns false (and leaves the state untouched) when no move is
    /// allowed; the trajectory is then frozen.
    bool step();
    /// Draws the waiting time of the next event without applying it (infinity when frozen).
    double peek_waiting_time();
    /// Applies the event whose waiting time was drawn by peek_waiting_time().
    void commit();

    /// Rate of flipping `spin` in the current state (0 when forbidden by the anyon cap).
    double spin_rate(uint32_t spin) const;
    double total_rate() const;
    /// Flips `spin` outside the dynamics (state preparation, tests).
    void flip(uint32_t spin);

    double t() const {
        return t_;
    }
    const std::vector<uint8_t> &error() const {
        return error_;
    }
    const Occupation &occupation() const {
        return occupation_;
    }
    int anyon_count() const {
        return occupation_.count();
    }
    int error_count() const {
        return error_count_;
    }
    LogicalParities parities() const {
        return {(z_mask_ & 1) ? -1 : 1, (z_mask_ & 2) ? -1 : 1};
    }
    bool frozen() const {
        return frozen_;
    }
    SamplerKind sampler_kind() const {
        return kind_;
    }
    const EnergyModel &model() const {
        return *model_;
    }
    const BathSpec &bath() const {
        return bath_;
    }

  private:
    const EnergyModel *model_;
    BathSpec bath_;
    Rng rng_;
    std::vector<uint8_t> error_;
    std::vector<uint8_t> spin_z_;
    Occupation occupation_;
    int error_count_ = 0;
    uint8_t z_mask_ = 0;
    double t_ = 0.0;
    double pending_dt_ = -1.0;
    bool frozen_ = false;
    SamplerKind kind_;
    std::unique_ptr<RateSampler> sampler_;
};

/// Per-sample observables of one trajectory.
struct TimeSeries {
    std::vector<double> t;
    std::vector<int32_t> anyons;
    std::vector<int32_t> errors;
    std::vector<int8_t> z1;
    std::vector<int8_t> z2;
    std::vector<int8_t> z1_ec;
    std::vector<int8_t> z2_ec;
    /// Events performed up to t_end.
    uint64_t events = 0;
    bool frozen = false;

    size_t size() const {
        return t.size();
    }
};

/// Runs one trajectory from the error-free state. At each sample time the observables of the
/// latest state with event time <= sample time are recorded; corrected parities come from
/// decoding that state without touching it.
TimeSeries run_trajectory(const EnergyModel &model, const BathSpec &bath, const Schedule &schedule, uint64_t seed,
                          DecoderConfig decoder = {});

struct DynamicsConfig {
    LatticeSpec lattice;
    /// Simulate on the dual code (star sector).
    bool dual = false;
    BathSpec bath;
    DisorderSpec disorder;
    InteractionSpec interaction;
    Schedule schedule;
    DecoderConfig decoder;
    /// Draw a fresh disorder realization per trajectory (seeded from the master seed).
    bool resample_disorder = true;
    /// Draw a fresh random lattice per trajectory (random lattices only).
    bool resample_lattice = false;
};

struct SeriesStat {
    std::vector<double> mean;
    std::vector<double> sem;
};

/// Ensemble aggregates, pointwise over sample times.
struct EnsembleSeries {
    std::vector<double> t;
    SeriesStat anyons;
    SeriesStat errors;
    /// Error fraction: errors / num_spins.
    SeriesStat fraction;
    SeriesStat z1;
    SeriesStat z2;
    SeriesStat z1_ec;
    SeriesStat z2_ec;
    /// (z1_ec + z2_ec) / 2.
    SeriesStat z_ec;
    size_t n_traj = 0;
    uint32_t num_spins = 0;
    uint64_t events = 0;
    /// Per-trajectory data in index order (kept only when requested).
    std::vector<TimeSeries> trajectories;
};

/// Seeds used for trajectory `index`.
struct TrajectorySeeds {
    uint64_t dynamics;
    uint64_t disorder;
    uint64_t lattice;
};
TrajectorySeeds trajectory_seeds(uint64_t master_seed, uint64_t index);

/// Runs n_traj independent trajectories and averages them. Results depend only on
/// (config, master_seed), never on the worker count.
EnsembleSeries ensemble_run(const DynamicsConfig &config, size_t n_traj, uint64_t master_seed, int workers,
                            bool keep_trajectories = false);

/// Pointwise mean and standard error of trajectories sharing a schedule.
EnsembleSeries aggregate(const std::vector<TimeSeries> &trajectories, uint32_t num_spins);

}  // namespace toric

#endif
