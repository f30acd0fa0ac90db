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

#ifndef TORIC_CLI_RUNNER_H
#define TORIC_CLI_RUNNER_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "toric/analysis.h"
#include "toric/code_lattice.h"
#include "toric/decoder.h"
#include "toric/noise_energy.h"
#include "toric/qwalk.h"

namespace toric {

enum class Experiment { generate_lattice, static_threshold, dynamics, walk, bound };

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string &name);

/// What a dynamics experiment produces.
enum class DynamicsMode {
    /// Ensemble time series of one configuration plus its lifetime.
    series,
    /// Lifetime for each value of a swept disorder parameter.
    lifetime_sweep,
    /// Crossing of the corrected-parity curves of several sizes (uniform J, ohmic bath).
    threshold,
};

std::string dynamics_mode_name(DynamicsMode m);
DynamicsMode parse_dynamics_mode(const std::string &name);

struct AnalysisParams {
    /// Static thresholds.
    std::vector<int> sizes;
    std::vector<double> f_grid;
    /// When non-empty, a static threshold (Z and dual X) is measured per p_mix value.
    std::vector<double> p_mix_grid;
    int n_instances = 1;
    int n_errors = 200;
    int bootstrap = 1000;
    /// Dynamics.
    DynamicsMode mode = DynamicsMode::series;
    size_t n_traj = 100;
    double t_min = 1e-3;
    double t_end = 10.0;
    /// Largest horizon the lifetime search may extend to.
    double t_cap = 1e4;
    int per_decade = 64;
    double level = 0.9;
    /// Swept parameter for lifetime sweeps: "sigma" or "polarization".
    std::string sweep = "sigma";
    std::vector<double> sweep_values;
    bool resample_lattice = false;
    /// Bound.
    std::vector<double> p_x_grid;

    bool operator==(const AnalysisParams &) const = default;
};

struct WalkParams {
    double h = 1.0;
    double t_min = 0.1;
    double t_max = 10.0;
    int per_decade = 10;
    int samples = 1;
    SpreadMeasure measure = SpreadMeasure::rms;

    bool operator==(const WalkParams &) const = default;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::bound;
    LatticeSpec lattice;
    bool dual = false;
    BathSpec bath;
    DisorderSpec disorder;
    InteractionSpec interaction;
    DecoderConfig decoder;
    AnalysisParams analysis;
    WalkParams walk;
    uint64_t master_seed = 0;
    int workers = 0;
    std::string output = "out";

    bool operator==(const ExperimentConfig &) const;
};

/// Parses a JSON document. Unknown keys and out-of-range values throw std::invalid_argument
/// naming the offending field; missing keys take their defaults.
ExperimentConfig parse_config(const std::string &text);
/// Canonical JSON (sorted keys, every field present).
std::string serialize_config(const ExperimentConfig &config);
void validate_config(const ExperimentConfig &config);

/// Hex digest identifying (config, artifact version). Embedded in every output file.
std::string manifest_hash(const ExperimentConfig &config);

std::string lattice_to_json(const StabilizerCode &code);
StabilizerCode lattice_from_json(const std::string &text);

struct RunManifest {
    std::string hash;
    std::string version;
    std::string config_json;
    /// Derived seeds by task name.
    std::map<std::string, uint64_t> seeds;
    double seconds = 0.0;
    std::vector<std::string> files;
};

/// Runs the experiment, writes its tables into config.output and a manifest.json next to them.
/// Table bytes depend only on the config, never on the worker count.
RunManifest run(const ExperimentConfig &config);

/// Decodes a syndrome (plaquette ids) on a code and writes the correction and matching.
struct DecodeReport {
    DecodeResult result;
    std::string table;
};
DecodeReport decode_report(const StabilizerCode &code, const std::vector<uint32_t> &anyons,
                           const DecoderConfig &config);

}  // namespace toric

#endif  // TORIC_CLI_RUNNER_H
