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

#ifndef TORIC_NOISE_ENERGY_H
#define TORIC_NOISE_ENERGY_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toric/code_lattice.h"

namespace toric {

/// Thermal environment of the spins. The Ohmic model uses n = 1 and an infinite cutoff frequency.
struct BathSpec {
    enum class Model { constant_rate, ohmic };
    Model model = Model::ohmic;
    /// Flip rate of the constant-rate model.
    double gamma0 = 1.0;
    /// k_B T in the chosen energy unit.
    double temperature = 1.0;
    /// Ohmic coupling constant (1/energy).
    double kappa1 = 1.0;

    bool operator==(const BathSpec &) const = default;
};

/// Distribution of the onsite anyon energies J_p.
struct DisorderSpec {
    enum class Kind { none, ising, gaussian };
    Kind kind = Kind::none;
    double sigma = 0.0;
    /// Ising polarization P = 1 - 2 eta, where eta is the fraction of sites at mean - sigma.
    double polarization = 0.0;
    /// Offset added to every site. A nonzero mean with kind = none is the uniform gap J.
    double mean = 0.0;
    uint64_t seed = 0;

    bool operator==(const DisorderSpec &) const = default;
};

struct InteractionSpec {
    /// Interaction strength; 0 disables interactions.
    double A = 0.0;
    /// Exponent of the A / r^alpha pair potential, 0 <= alpha < 2.
    double alpha = 0.0;
    /// Optional hard cap on the anyon number. Moves that would exceed it are forbidden.
    std::optional<int> max_anyons;

    bool operator==(const InteractionSpec &) const = default;
};

void validate_bath(const BathSpec &bath);
void validate_disorder(const DisorderSpec &disorder);
void validate_interaction(const InteractionSpec &interaction);

/// Samples one onsite energy per plaquette, in plaquette order, from the disorder's own seed.
std::vector<double> sample_onsite(const StabilizerCode &code, const DisorderSpec &disorder);

/// Transition rate gamma(omega) for a flip that lowers the energy by omega.
double rate(double omega, const BathSpec &bath);

/// Torus distance between two plaquettes' positions.
double torus_distance(uint32_t p, uint32_t q, const StabilizerCode &code);

/// Onsite energies and pair interactions of plaquette anyons:
///   E = sum_p J_p n_p + 1/2 sum_{p != q} A / r_pq^alpha n_p n_q.
/// Star anyons do not interact. Immutable after construction.
class EnergyModel {
  public:
    EnergyModel(const StabilizerCode &code, std::vector<double> onsite, InteractionSpec interaction);

    const StabilizerCode &code() const {
        return *code_;
    }
    const std::vector<double> &onsite() const {
        return onsite_;
    }
    double onsite(uint32_t p) const {
        return onsite_[p];
    }
    const InteractionSpec &interaction() const {
        return interaction_;
    }
    bool interacting() const {
        return interaction_.A != 0.0;
    }
    /// True when the interaction energy depends only on the total anyon number.
    bool constant_interaction() const {
        return !interacting() || interaction_.alpha == 0.0;
    }
    /// U_pq for p != q.
    double pair(uint32_t p, uint32_t q) const;

    /// Total energy of an occupation pattern, by direct double sum.
    double energy(const std::vector<uint8_t> &occupation) const;

  private:
    const StabilizerCode *code_;
    std::vector<double> onsite_;
    InteractionSpec interaction_;
    /// Row-major U_pq table; only filled when alpha > 0.
    std::vector<double> pair_table_;
};

/// Plaquette occupations n_p of one trajectory plus the interaction potential felt at each site.
class Occupation {
  public:
    explicit Occupation(const EnergyModel &model);

    bool occupied(uint32_t p) const {
        return occ_[p] != 0;
    }
    const std::vector<uint8_t> &occupation() const {
        return occ_;
    }
    int count() const {
        return count_;
    }
    void toggle(uint32_t p);
    /// sum_{q != p} U_pq n_q.
    double potential(uint32_t p) const;

  private:
    const EnergyModel *model_;
    std::vector<uint8_t> occ_;
    int count_ = 0;
    /// Maintained only for alpha > 0.
    std::vector<double> potential_;
};

/// omega = E(current) - E(after flipping `spin`). Flipping a spin toggles its two plaquettes.
/// O(1) for constant interactions, O(1) lookups into the maintained potential otherwise.
double flip_energy_delta(const EnergyModel &model, const Occupation &occupation, uint32_t spin);

std::string bath_model_name(BathSpec::Model model);
BathSpec::Model parse_bath_model(const std::string &name);
std::string disorder_kind_name(DisorderSpec::Kind kind);
DisorderSpec::Kind parse_disorder_kind(const std::string &name);

}  // namespace toric

#endif
