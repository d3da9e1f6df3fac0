#pragma once

#include <cstdint>

#include "trifree/graph.hpp"

namespace trifree {

// Isomorphism-invariant key for graphs with n <= 11: the smallest edge mask
// over all relabelings, found by individualisation-refinement. Equal keys
// iff isomorphic.
std::uint64_t canonical_edge_mask(const BitGraph& g);
std::uint64_t canonical_edge_mask(int n, std::uint64_t edge_mask);

}  // namespace trifree
