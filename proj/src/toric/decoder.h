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

#ifndef TORIC_DECODER_H
#define TORIC_DECODER_H

#include <cstdint>
#include <optional>
#include <vector>

#include "toric/code_lattice.h"

namespace toric {

struct DecoderConfig {
    /// Number of nearest anyons each BFS must reach before stopping.
    uint32_t k = 10;
};

struct Syndrome {
    /// Excited plaquette ids, increasing.
    std::vector<uint32_t> anyons;
};

struct MatchEdge {
    /// Node indices into MatchGraph::nodes, i < j.
    uint32_t i;
    uint32_t j;
    /// Number of spin flips on the shortest connecting string.
    uint32_t weight;
    /// Spins of one shortest connecting string.
    std::vector<uint32_t> path;
};

struct MatchGraph {
    std::vector<uint32_t> nodes;
    /// Sorted lexicographically by (i, j) with no duplicates.
    std::vector<MatchEdge> edges;
};

struct Correction {
    /// Sorted spin indices.
    std::vector<uint32_t> spins;
};

struct LogicalParities {
    int z1 = 1;
    int z2 = 1;

    bool operator==(const LogicalParities &) const = default;
};

struct DecodeResult {
    MatchGraph graph;
    /// Indices into graph.edges of the matched pairs.
    std::vector<uint32_t> matching;
    int64_t weight = 0;
    /// The k that produced a perfect matching (larger than requested after escalation).
    uint32_t k_used = 0;
    Correction correction;
};

/// Plaquettes with an odd number of flipped spins.
Syndrome extract_syndrome(const StabilizerCode &code, const std::vector<uint8_t> &error);

/// (-1)^{|residual ∩ Z_i|} for both Z logicals.
LogicalParities logical_parities(const StabilizerCode &code, const std::vector<uint8_t> &residual);

/// Matching decoder bound to one code. Holds the plaquette adjacency and BFS scratch space,
/// so one instance must not be shared between threads.
class Decoder {
  public:
    explicit Decoder(const StabilizerCode &code, DecoderConfig config = {});

    const StabilizerCode &code() const {
        return *code_;
    }
    const DecoderConfig &config() const {
        return config_;
    }

    /// Sparse pairing graph: a BFS from every anyon, each stopped after the shell that contains
    /// its k-th nearest other anyon. Throws std::invalid_argument on an odd anyon count.
    MatchGraph knn_graph(const Syndrome &syndrome, uint32_t k);

    /// Full decode with k escalation. Throws std::runtime_error when no perfect matching exists
    /// even on the complete graph.
    DecodeResult decode_full(const Syndrome &syndrome);

    Correction decode(const Syndrome &syndrome);

    /// Logical parities after (virtually) applying the correction to `error`.
    LogicalParities corrected_parities(const std::vector<uint8_t> &error);

  private:
    void bfs(uint32_t source, uint32_t k, const std::vector<int32_t> &node_of, std::vector<MatchEdge> &out);

    const StabilizerCode *code_;
    DecoderConfig config_;
    /// CSR adjacency: neighbors of plaquette p are adj_[adj_start_[p] .. adj_start_[p + 1]),
    /// each stored with the shared spin, ordered by spin.
    std::vector<uint32_t> adj_start_;
    std::vector<uint32_t> adj_plaquette_;
    std::vector<uint32_t> adj_spin_;
    /// Bit 0: spin in Z1. Bit 1: spin in Z2.
    std::vector<uint8_t> z_mask_;
    std::vector<uint32_t> stamp_;
    std::vector<uint32_t> dist_;
    std::vector<uint32_t> parent_spin_;
    std::vector<uint32_t> parent_;
    std::vector<uint32_t> frontier_;
    std::vector<int32_t> node_of_;
    uint32_t epoch_ = 0;
};

/// Minimum-weight perfect matching over the graph's edges. Returns edge indices sorted, or
/// an empty optional when none exists.
std::optional<std::vector<uint32_t>> mwpm(const MatchGraph &graph);

Correction decode(const StabilizerCode &code, const Syndrome &syndrome, DecoderConfig config = {});

}  // namespace toric

#endif
