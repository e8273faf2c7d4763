#pragma once

#include <cstdint>

#include "cpcer/textnorm.hpp"

namespace cpcer {

struct EditDistanceResult {
  std::uint64_t distance = 0;
  std::uint64_t ref_length = 0;
  std::uint64_t hyp_length = 0;
};

enum class DistanceEngine {
  kBitParallel,  // production path
  kDpReference,  // serial reference kernel, kept for testing and benchmarks
};

// Plain O(|a|*|b|) Wagner-Fischer dynamic program with unit costs. This is
// the in-repo oracle every other distance path is checked against.
EditDistanceResult edit_distance_dp(TokenView a, TokenView b);

// Bit-parallel blocked Levenshtein distance. Guaranteed to equal
// edit_distance_dp on every input; tokens are mapped to dense pattern
// bitmask ids internally, so any Unicode alphabet works.
EditDistanceResult edit_distance_fast(TokenView a, TokenView b);

EditDistanceResult edit_distance(TokenView a, TokenView b,
                                 DistanceEngine engine = DistanceEngine::kBitParallel);

// Character error rate as a fraction: distance / ref_length. Exceeds 1.0
// when the hypothesis is much longer than the reference. Throws
// EmptyReference when the reference has no tokens.
double cer(TokenView ref, TokenView hyp, DistanceEngine engine = DistanceEngine::kBitParallel);

}  // namespace cpcer
