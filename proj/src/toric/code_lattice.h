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

#ifndef TORIC_CODE_LATTICE_H
#define TORIC_CODE_LATTICE_H

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace toric {

enum class LatticeKind { square, random };

struct LatticeSpec {
    int L = 16;
    LatticeKind kind = LatticeKind::square;
    /// Probability that a defect is resolved into one 6-body plaquette. Ignored for square lattices.
    double p_mix = 0.5;
    uint64_t seed = 0;

    bool operator==(const LatticeSpec &) const = default;
};

struct Vec2 {
    double x = 0;
    double y = 0;

    bool operator==(const Vec2 &) const = default;
};

/// A plaquette or star: a sorted set of spin indices and a position in lattice units.
struct Stabilizer {
    std::vector<uint32_t> spins;
    Vec2 pos;

    bool operator==(const Stabilizer &) const = default;
};

enum Logical : int { X1 = 0, Z1 = 1, X2 = 2, Z2 = 3 };

/// A toric code on an L x L torus. Plaquettes detect sigma_x errors, stars detect sigma_z errors.
///
/// Spins of the square code are indexed row-major over unit cells: the horizontal edge of cell
/// c is spin 2c and the vertical edge is spin 2c + 1. Random codes drop the defect edges and
/// renumber the remaining spins in the same order.
struct StabilizerCode {
    LatticeSpec spec;
    /// True when plaquettes and stars have been exchanged relative to the construction.
    bool dual = false;
    uint32_t num_spins = 0;
    std::vector<Stabilizer> plaquettes;
    std::vector<Stabilizer> stars;
    std::vector<std::array<uint32_t, 2>> spin_to_plaquettes;
    std::vector<std::array<uint32_t, 2>> spin_to_stars;
    /// Supports of X1, Z1, X2, Z2 (indexed by `Logical`).
    std::array<std::vector<uint32_t>, 4> logicals;

    int L() const {
        return spec.L;
    }

    bool operator==(const StabilizerCode &) const = default;
};

/// Recomputes spin_to_plaquettes and spin_to_stars from the supports.
/// Throws std::invalid_argument if a spin is not in exactly two of each.
void rebuild_incidence(StabilizerCode &code);

StabilizerCode build_square(int L);

/// Vertical-edge spin indices (in the square-code numbering) that are removed for random lattices.
std::vector<uint32_t> defect_pattern(int L);

StabilizerCode build_random(const LatticeSpec &spec);

/// Dispatches on spec.kind.
StabilizerCode build_code(const LatticeSpec &spec);

/// Exchanges plaquettes with stars and X logicals with Z logicals.
StabilizerCode dual(const StabilizerCode &code);

struct ValidationCheck {
    std::string name;
    bool passed = true;
    std::vector<uint32_t> offending;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;

    bool ok() const;
    const ValidationCheck &check(const std::string &name) const;
    std::string str() const;
};

ValidationReport validate(const StabilizerCode &code);

/// Euclidean distance between two points under the minimal-image convention on an L x L torus.
double torus_distance(const Vec2 &a, const Vec2 &b, int L);

std::string lattice_kind_name(LatticeKind kind);
LatticeKind parse_lattice_kind(const std::string &name);

}  // namespace toric

#endif
