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

#ifndef TORIC_QWALK_H
#define TORIC_QWALK_H

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "toric/analysis.h"
#include "toric/code_lattice.h"
#include "toric/noise_energy.h"

namespace toric {

/// Largest plaquette count accepted by the dense propagator.
constexpr size_t kMaxDenseWalkSize = 4608;

/// Single-anyon hopping matrix over plaquettes: h times the number of shared spins off the
/// diagonal, J_p on the diagonal.
Eigen::MatrixXd build_walk_hamiltonian(const StabilizerCode &code, double h, const std::vector<double> &onsite);

struct WalkState {
    Eigen::VectorXcd amplitudes;
    double t = 0.0;
};

/// exp(-i M t) by a dense eigendecomposition, computed once. The LAPACK result is verified on a
/// random vector; a failed check falls back to Eigen's solver with a one-time warning.
class WalkPropagator {
   public:
    /// Throws std::length_error above kMaxDenseWalkSize and std::invalid_argument for a
    /// non-symmetric M.
    explicit WalkPropagator(const Eigen::MatrixXd &M);

    size_t size() const {
        return static_cast<size_t>(eigenvalues_.size());
    }
    const Eigen::VectorXd &eigenvalues() const {
        return eigenvalues_;
    }
    const Eigen::MatrixXd &eigenvectors() const {
        return eigenvectors_;
    }

    WalkState evolve(const Eigen::VectorXcd &psi0, double t) const;
    std::vector<WalkState> evolve(uint32_t origin, const std::vector<double> &times) const;
    /// |psi_p(t)|^2 for a walker started on `origin`, one column per time.
    Eigen::MatrixXd probabilities(uint32_t origin, const std::vector<double> &times) const;

   private:
    bool decomposition_ok(const Eigen::MatrixXd &M) const;

    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
};

std::vector<WalkState> evolve(const Eigen::MatrixXd &M, uint32_t origin, const std::vector<double> &times);

double norm_of(const WalkState &state);
/// <psi|M|psi>.
double energy_of(const WalkState &state, const Eigen::MatrixXd &M);

enum class SpreadMeasure {
    /// sqrt(sum_p |psi_p|^2 d_p^2).
    rms,
    /// sqrt(<d^2> - <d>^2).
    std_dev,
};

std::string spread_measure_name(SpreadMeasure m);
SpreadMeasure parse_spread_measure(const std::string &name);

/// Spread of a distribution over plaquettes around `origin`, using torus distances between
/// plaquette positions.
double spread(const Eigen::VectorXd &probabilities, uint32_t origin, const StabilizerCode &code,
              SpreadMeasure measure = SpreadMeasure::rms);
double spread(const WalkState &state, uint32_t origin, const StabilizerCode &code,
              SpreadMeasure measure = SpreadMeasure::rms);

/// The plaquette closest to the centre of the torus (lowest index on ties).
uint32_t central_plaquette(const StabilizerCode &code);

struct WalkSpec {
    LatticeSpec lattice;
    double h = 1.0;
    /// Onsite energies. Kind none with a mean gives uniform J.
    DisorderSpec disorder;
    std::vector<double> times;
    int samples = 1;
    SpreadMeasure measure = SpreadMeasure::rms;
    uint64_t seed = 0;
};

void validate_walk(const WalkSpec &spec);

struct ExponentFit {
    double exponent = 0.0;
    /// Standard error of the least-squares slope.
    double std_error = 0.0;
    Interval ci;
    double t_lo = 0.0;
    double t_hi = 0.0;
    size_t points = 0;
};

/// Least-squares slope of log y against log t over the last decade of times not flagged in
/// `excluded` (t > 0 only).
ExponentFit fit_exponent(const std::vector<double> &t, const std::vector<double> &y,
                         const std::vector<uint8_t> &excluded);

struct SpreadSeries {
    std::vector<double> t;
    std::vector<double> mean;
    std::vector<double> sem;
    /// Set where the mean spread reached L/4; such times are left out of the fit.
    std::vector<uint8_t> boundary_warning;
    ExponentFit fit;
    int samples = 0;
    int L = 0;
    /// sigma / h of the onsite disorder.
    double disorder_ratio = 0.0;
    /// Per-sample spreads, sample-major.
    std::vector<std::vector<double>> per_sample;
};

struct RealizationSeeds {
    uint64_t lattice;
    uint64_t disorder;
};
RealizationSeeds walk_seeds(uint64_t master, uint64_t index);

/// Averages the spread over `samples` realizations of lattice and disorder. The exponent CI is
/// a bootstrap over realizations, or +-1.96 standard errors of the slope for one realization.
SpreadSeries run_walk_ensemble(const WalkSpec &spec, int workers, const BootstrapConfig &bootstrap = {});

}  // namespace toric

#endif  // TORIC_QWALK_H
