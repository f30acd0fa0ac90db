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

#ifndef TORIC_BLOSSOM_H
#define TORIC_BLOSSOM_H

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace toric {

struct WeightedEdge {
    uint32_t u;
    uint32_t v;
    int64_t weight;
};

/// Maximum-weight matching on a general graph by Edmonds' blossom algorithm with dual
/// variables (O(n^3)). With `max_cardinality` set, the result is the heaviest among the
/// matchings of maximum cardinality. Returns mate[v] (or -1 when v is unmatched).
///
/// Edges must have u != v; parallel edges are allowed.
std::vector<int32_t> max_weight_matching(
    uint32_t num_nodes, std::span<const WeightedEdge> edges, bool max_cardinality);

/// Minimum-weight perfect matching. Returns the matched pairs (u < v, sorted by u), or nullopt
/// when the graph has no perfect matching. Ties are resolved deterministically by edge order.
std::optional<std::vector<std::pair<uint32_t, uint32_t>>> min_weight_perfect_matching(
    uint32_t num_nodes, std::span<const WeightedEdge> edges);

}  // namespace toric

#endif
