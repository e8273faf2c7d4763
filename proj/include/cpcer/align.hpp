#pragma once

#include <cstdint>
#include <vector>

#include "cpcer/corpus.hpp"
#include "cpcer/editdist.hpp"
#include "cpcer/report.hpp"

namespace cpcer {

// Square pairwise cost matrix over padded speaker sets:
// cell (i, j) = edit distance between reference stream i and hypothesis
// stream j.
struct CostMatrix {
  std::size_t size = 0;
  std::vector<std::uint64_t> cells;  // row-major, size*size

  std::uint64_t& at(std::size_t i, std::size_t j) { return cells[i * size + j]; }
  std::uint64_t at(std::size_t i, std::size_t j) const { return cells[i * size + j]; }
};

struct Assignment {
  std::vector<std::size_t> permutation;  // ref index -> hyp index, a bijection
  std::uint64_t total = 0;
};

struct AlignmentOutcome {
  Assignment assignment;
  std::uint64_t min_distance = 0;
  std::uint64_t total_ref_tokens = 0;  // over the original reference streams

  // min_distance / total_ref_tokens * 100; the both-empty session is 0.
  double cpcer_percent() const;
};

enum class AssignmentAlgorithm { kHungarian, kBruteForce };

struct ScoringOptions {
  DistanceEngine engine = DistanceEngine::kBitParallel;
  AssignmentAlgorithm algorithm = AssignmentAlgorithm::kHungarian;
};

// Adds blank streams (empty id, no tokens) to the smaller side until both
// sides have max(S, S-hat) speakers. Existing streams keep their order.
SessionPair pad_to_equal(const SessionPair& pair);

// All cells of the padded pair's cost matrix; cells are independent and
// computed with OpenMP. The serial variant is the reference implementation
// kept for equivalence tests and benchmarks.
CostMatrix build_cost_matrix(const SessionPair& padded, DistanceEngine engine = DistanceEngine::kBitParallel);
CostMatrix build_cost_matrix_serial(const SessionPair& padded, DistanceEngine engine = DistanceEngine::kBitParallel);

// Minimum-total-cost bijection via an O(n^3) assignment solver. Ties are
// broken toward the lexicographically smallest permutation so reports are
// reproducible byte for byte.
Assignment min_assignment(const CostMatrix& m);

// Literal enumeration of all permutations; the test oracle for
// min_assignment and the CLI's --algorithm bruteforce path. Throws
// TooManySpeakers above 8 rows.
Assignment brute_force_assignment(const CostMatrix& m);

// Full per-session pipeline: pad, build the cost matrix, pick the optimal
// speaker permutation, normalize by reference tokens. Throws EmptyReference
// when the reference is empty but hypothesis tokens exist.
AlignmentOutcome score_session(const SessionPair& pair, const ScoringOptions& opts = {});

// Scores many sessions (OpenMP over sessions when more than one) and shapes
// the outcomes into report records, in input order.
std::vector<SessionScore> score_sessions(const std::vector<SessionPair>& pairs,
                                         const ScoringOptions& opts = {});

}  // namespace cpcer
