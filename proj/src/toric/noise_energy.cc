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

#include "toric/noise_energy.h"

#include <cmath>
#include <stdexcept>

#include "toric/rng.h"

namespace toric {

void validate_bath(const BathSpec &bath) {
    if (bath.model == BathSpec::Model::constant_rate && !(bath.gamma0 > 0)) {
        throw std::invalid_argument("bath.gamma0 must be positive");
    }
    if (bath.model == BathSpec::Model::ohmic) {
        if (!(bath.temperature > 0)) {
            throw std::invalid_argument("bath.temperature must be positive");
        }
        if (!(bath.kappa1 > 0)) {
            throw std::invalid_argument("bath.kappa1 must be positive");
        }
    }
}

void validate_disorder(const DisorderSpec &disorder) {
    if (!(disorder.sigma >= 0)) {
        throw std::invalid_argument("disorder.sigma must be non-negative");
    }
    if (!(disorder.polarization >= -1 && disorder.polarization <= 1)) {
        throw std::invalid_argument("disorder.polarization must lie in [-1, 1]");
    }
}

void validate_interaction(const InteractionSpec &interaction) {
    if (!(interaction.A >= 0)) {
        throw std::invalid_argument("interaction.A must be non-negative");
    }
    if (!(interaction.alpha >= 0 && interaction.alpha < 2)) {
        throw std::invalid_argument("interaction.alpha must lie in [0, 2)");
    }
    if (interaction.max_anyons && *interaction.max_anyons < 0) {
        throw std::invalid_argument("interaction.max_anyons must be non-negative");
    }
}

std::vector<double> sample_onsite(const StabilizerCode &code, const DisorderSpec &disorder) {
    validate_disorder(disorder);
    const size_t n = code.plaquettes.size();
    std::vector<double> out(n, disorder.mean);
    Rng rng(disorder.seed);
    switch (disorder.kind) {
        case DisorderSpec::Kind::none:
            break;
        case DisorderSpec::Kind::ising: {
            const double eta = (1.0 - disorder.polarization) / 2.0;
            for (size_t p = 0; p < n; p++) {
                out[p] += uniform01(rng) < eta ? -disorder.sigma : disorder.sigma;
            }
            break;
        }
        case DisorderSpec::Kind::gaussian: {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (size_t p = 0; p < n; p++) {
                out[p] += disorder.sigma * normal(rng);
            }
            break;
        }
    }
    return out;
}

double rate(double omega, const BathSpec &bath) {
    if (bath.model == BathSpec::Model::constant_rate) {
        return bath.gamma0;
    }
    const double beta = 1.0 / bath.temperature;
    const double x = beta * omega;
    // gamma = 2 kappa |omega / (1 - exp(-beta omega))| = (2 kappa / beta) |x / -expm1(-x)|.
    double shape;
    if (std::fabs(x) < 1e-12) {
        shape = 1.0 + x / 2.0;
    } else {
        shape = std::fabs(x / -std::expm1(-x));
    }
    return 2.0 * bath.kappa1 * shape / beta;
}

double torus_distance(uint32_t p, uint32_t q, const StabilizerCode &code) {
    return torus_distance(code.plaquettes[p].pos, code.plaquettes[q].pos, code.L());
}

EnergyModel::EnergyModel(const StabilizerCode &code, std::vector<double> onsite, InteractionSpec interaction)
    : code_(&code), onsite_(std::move(onsite)), interaction_(interaction) {
    validate_interaction(interaction_);
    const size_t n = code.plaquettes.size();
    if (onsite_.size() != n) {
        throw std::invalid_argument("onsite energy count does not match plaquette count");
    }
    if (interacting() && interaction_.alpha != 0.0) {
        pair_table_.assign(n * n, 0.0);
        for (size_t p = 0; p < n; p++) {
            for (size_t q = p + 1; q < n; q++) {
                double r = torus_distance(static_cast<uint32_t>(p), static_cast<uint32_t>(q), code);
                if (r <= 0) {
                    throw std::invalid_argument("two plaquettes share a position; pair potential undefined");
                }
                double u = interaction_.A / std::pow(r, interaction_.alpha);
                pair_table_[p * n + q] = u;
                pair_table_[q * n + p] = u;
            }
        }
    }
}

double EnergyModel::pair(uint32_t p, uint32_t q) const {
    if (!interacting() || p == q) {
        return 0.0;
    }
    if (interaction_.alpha == 0.0) {
        return interaction_.A;
    }
    return pair_table_[static_cast<size_t>(p) * onsite_.size() + q];
}

double EnergyModel::energy(const std::vector<uint8_t> &occupation) const {
    const size_t n = onsite_.size();
    double e = 0;
    for (size_t p = 0; p < n; p++) {
        if (!occupation[p]) {
            continue;
        }
        e += onsite_[p];
        for (size_t q = 0; q < n; q++) {
            if (q != p && occupation[q]) {
                e += 0.5 * pair(static_cast<uint32_t>(p), static_cast<uint32_t>(q));
            }
        }
    }
    return e;
}

Occupation::Occupation(const EnergyModel &model)
    : model_(&model), occ_(model.code().plaquettes.size(), 0) {
    if (!model.constant_interaction()) {
        potential_.assign(occ_.size(), 0.0);
    }
}

void Occupation::toggle(uint32_t p) {
    int d = occ_[p] ? -1 : 1;
    occ_[p] ^= 1;
    count_ += d;
    if (!potential_.empty()) {
        for (uint32_t q = 0; q < occ_.size(); q++) {
            if (q != p) {
                potential_[q] += d * model_->pair(p, q);
            }
        }
    }
}

double Occupation::potential(uint32_t p) const {
    if (!potential_.empty()) {
        return potential_[p];
    }
    return model_->interaction().A * (count_ - occ_[p]);
}

double flip_energy_delta(const EnergyModel &model, const Occupation &occupation, uint32_t spin) {
    const auto &ab = model.code().spin_to_plaquettes[spin];
    const uint32_t a = ab[0];
    const uint32_t b = ab[1];
    const int na = occupation.occupied(a);
    const int nb = occupation.occupied(b);
    const int da = 1 - 2 * na;
    const int db = 1 - 2 * nb;
    double delta = model.onsite(a) * da + model.onsite(b) * db;
    if (model.interacting()) {
        if (model.constant_interaction()) {
            const double A = model.interaction().A;
            const long long n0 = occupation.count();
            const long long n1 = n0 + da + db;
            delta += 0.5 * A * static_cast<double>(n1 * (n1 - 1) - n0 * (n0 - 1));
        } else {
            const double uab = model.pair(a, b);
            delta += da * (occupation.potential(a) - uab * nb);
            delta += db * (occupation.potential(b) - uab * na);
            delta += uab * ((na + da) * (nb + db) - na * nb);
        }
    }
    return -delta;
}

std::string bath_model_name(BathSpec::Model model) {
    return model == BathSpec::Model::ohmic ? "ohmic" : "constant_rate";
}

BathSpec::Model parse_bath_model(const std::string &name) {
    if (name == "ohmic") {
        return BathSpec::Model::ohmic;
    }
    if (name == "constant_rate") {
        return BathSpec::Model::constant_rate;
    }
    throw std::invalid_argument("unknown bath model '" + name + "'");
}

std::string disorder_kind_name(DisorderSpec::Kind kind) {
    switch (kind) {
        case DisorderSpec::Kind::ising:
            return "ising";
        case DisorderSpec::Kind::gaussian:
            return "gaussian";
        default:
            return "none";
    }
}

DisorderSpec::Kind parse_disorder_kind(const std::string &name) {
    if (name == "none") {
        return DisorderSpec::Kind::none;
    }
    if (name == "ising") {
        return DisorderSpec::Kind::ising;
    }
    if (name == "gaussian") {
        return DisorderSpec::Kind::gaussian;
    }
    throw std::invalid_argument("unknown disorder kind '" + name + "'");
}

}  // namespace toric
