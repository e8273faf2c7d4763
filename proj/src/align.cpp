#include "cpcer/align.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <omp.h>

namespace cpcer {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

std::uint64_t token_count(const std::vector<SpeakerStream>& streams) {
  std::uint64_t total = 0;
  for (const auto& s : streams) total += s.tokens.size();
  return total;
}

// Kuhn-Munkres with potentials, O(n^3). Rows are assigned one by one; each
// round grows an alternating tree until an unmatched column is reached.
std::uint64_t solve_lap(const std::vector<std::int64_t>& cost, std::size_t n) {
  if (n == 0) return 0;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0), minv(n + 1, 0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1, false);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      std::size_t j1 = 0;
      std::int64_t delta = kInf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t reduced = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::int64_t total = 0;
  for (std::size_t j = 1; j <= n; ++j) total += cost[(match[j] - 1) * n + (j - 1)];
  return static_cast<std::uint64_t>(total);
}

}  // namespace

double AlignmentOutcome::cpcer_percent() const {
  if (total_ref_tokens == 0) return 0.0;
  return 100.0 * static_cast<double>(min_distance) / static_cast<double>(total_ref_tokens);
}

SessionPair pad_to_equal(const SessionPair& pair) {
  SessionPair padded = pair;
  const std::size_t target = std::max(padded.ref_streams.size(), padded.hyp_streams.size());
  padded.ref_streams.resize(target);
  padded.hyp_streams.resize(target);
  return padded;
}

CostMatrix build_cost_matrix(const SessionPair& padded, DistanceEngine engine) {
  const std::size_t n = padded.ref_streams.size();
  if (n != padded.hyp_streams.size()) {
    throw std::invalid_argument("cost matrix requires a padded session pair");
  }
  CostMatrix m;
  m.size = n;
  m.cells.resize(n * n);
  const std::int64_t count = static_cast<std::int64_t>(n);
#pragma omp parallel for collapse(2) schedule(dynamic) if (!omp_in_parallel())
  for (std::int64_t i = 0; i < count; ++i) {
    for (std::int64_t j = 0; j < count; ++j) {
      m.cells[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] =
          edit_distance(padded.ref_streams[i].tokens, padded.hyp_streams[j].tokens, engine)
              .distance;
    }
  }
  return m;
}

CostMatrix build_cost_matrix_serial(const SessionPair& padded, DistanceEngine engine) {
  const std::size_t n = padded.ref_streams.size();
  if (n != padded.hyp_streams.size()) {
    throw std::invalid_argument("cost matrix requires a padded session pair");
  }
  CostMatrix m;
  m.size = n;
  m.cells.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m.at(i, j) =
          edit_distance(padded.ref_streams[i].tokens, padded.hyp_streams[j].tokens, engine)
              .distance;
    }
  }
  return m;
}

Assignment min_assignment(const CostMatrix& m) {
  const std::size_t n = m.size;
  Assignment result;
  if (n == 0) return result;

  std::vector<std::int64_t> cost(n * n);
  for (std::size_t k = 0; k < n * n; ++k) cost[k] = static_cast<std::int64_t>(m.cells[k]);
  result.total = solve_lap(cost, n);

  // Fix rows left to right, always taking the smallest column that still
  // completes to the optimal total: the lexicographically smallest optimum.
  result.permutation.assign(n, 0);
  std::vector<bool> used(n, false);
  std::vector<std::size_t> free_cols;
  std::uint64_t fixed_cost = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t rest = n - i - 1;
    std::vector<std::int64_t> sub(rest * rest);
    bool placed = false;
    for (std::size_t j = 0; j < n && !placed; ++j) {
      if (used[j]) continue;
      free_cols.clear();
      for (std::size_t c = 0; c < n; ++c) {
        if (!used[c] && c != j) free_cols.push_back(c);
      }
      for (std::size_t r = 0; r < rest; ++r) {
        for (std::size_t c = 0; c < rest; ++c) {
          sub[r * rest + c] = static_cast<std::int64_t>(m.at(i + 1 + r, free_cols[c]));
        }
      }
      const std::uint64_t completion = solve_lap(sub, rest);
      if (fixed_cost + m.at(i, j) + completion == result.total) {
        result.permutation[i] = j;
        used[j] = true;
        fixed_cost += m.at(i, j);
        placed = true;
      }
    }
    assert(placed);
  }
  return result;
}

Assignment brute_force_assignment(const CostMatrix& m) {
  const std::size_t n = m.size;
  if (n > 8) {
    throw TooManySpeakers(
        fmt::format("brute-force enumeration limited to 8 speakers, got {}", n));
  }
  Assignment result;
  if (n == 0) return result;

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  std::vector<std::size_t> best_perm;
  do {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < n; ++i) total += m.at(i, perm[i]);
    // Strict improvement keeps the first (lexicographically smallest) optimum.
    if (total < best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  result.permutation = std::move(best_perm);
  result.total = best;
  return result;
}

AlignmentOutcome score_session(const SessionPair& pair, const ScoringOptions& opts) {
  const std::uint64_t ref_tokens = token_count(pair.ref_streams);
  const std::uint64_t hyp_tokens = token_count(pair.hyp_streams);
  if (ref_tokens == 0 && hyp_tokens > 0) {
    throw EmptyReference(fmt::format(
        "session \"{}\": reference has no tokens but hypothesis does; cpCER undefined",
        pair.session_id));
  }

  const SessionPair padded = pad_to_equal(pair);
  const CostMatrix matrix = build_cost_matrix(padded, opts.engine);

  AlignmentOutcome outcome;
  outcome.assignment = opts.algorithm == AssignmentAlgorithm::kHungarian
                           ? min_assignment(matrix)
                           : brute_force_assignment(matrix);
  outcome.min_distance = outcome.assignment.total;
  outcome.total_ref_tokens = ref_tokens;
  return outcome;
}

namespace {

SessionScore to_session_score(const SessionPair& pair, const AlignmentOutcome& outcome) {
  SessionScore score;
  score.session_id = pair.session_id;
  score.oracle_speakers = pair.ref_streams.size();
  score.estimated_speakers = pair.hyp_streams.size();
  score.min_distance = outcome.min_distance;
  score.total_ref_tokens = outcome.total_ref_tokens;

  std::vector<std::size_t> unmatched_hyp_idx;
  for (std::size_t i = 0; i < outcome.assignment.permutation.size(); ++i) {
    const std::size_t j = outcome.assignment.permutation[i];
    const bool real_ref = i < pair.ref_streams.size();
    const bool real_hyp = j < pair.hyp_streams.size();
    if (real_ref && real_hyp) {
      score.matched.emplace_back(pair.ref_streams[i].speaker_id, pair.hyp_streams[j].speaker_id);
    } else if (real_ref) {
      score.unmatched_ref.push_back(pair.ref_streams[i].speaker_id);
    } else if (real_hyp) {
      unmatched_hyp_idx.push_back(j);
    }
  }
  std::sort(unmatched_hyp_idx.begin(), unmatched_hyp_idx.end());
  for (std::size_t j : unmatched_hyp_idx) {
    score.unmatched_hyp.push_back(pair.hyp_streams[j].speaker_id);
  }
  return score;
}

}  // namespace

std::vector<SessionScore> score_sessions(const std::vector<SessionPair>& pairs,
                                         const ScoringOptions& opts) {
  std::vector<SessionScore> scores(pairs.size());
  std::vector<std::exception_ptr> errors(pairs.size());
  const std::int64_t count = static_cast<std::int64_t>(pairs.size());
#pragma omp parallel for schedule(dynamic) if (pairs.size() > 1)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      scores[i] = to_session_score(pairs[i], score_session(pairs[i], opts));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return scores;
}

}  // namespace cpcer
