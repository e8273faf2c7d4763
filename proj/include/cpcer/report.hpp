#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cpcer {

// Error-rate fraction carried as an exact rational until serialization.
// Numerator/denominator are decimal strings so aggregate values (whose exact
// form can exceed 64 bits) serialize losslessly.
struct Rate {
  std::string num;
  std::string den;

  // Percent value rounded half-up to two fraction digits, e.g. "6.67".
  std::string percent() const;

  bool operator==(const Rate&) const = default;
};

struct SessionScore {
  std::string session_id;
  std::size_t oracle_speakers = 0;     // S
  std::size_t estimated_speakers = 0;  // S-hat
  std::uint64_t min_distance = 0;
  std::uint64_t total_ref_tokens = 0;
  // Optimal pairing between real speakers; speakers matched against padding
  // appear in the unmatched lists instead.
  std::vector<std::pair<std::string, std::string>> matched;
  std::vector<std::string> unmatched_ref;
  std::vector<std::string> unmatched_hyp;

  Rate cpcer() const;  // min_distance / total_ref_tokens (0/0 scores as zero)
};

struct GroupReport {
  std::string key;  // oracle speaker count as a string, or "all"
  std::size_t session_count = 0;
  Rate micro_cpcer;  // sum of distances over sum of reference tokens
  Rate macro_cpcer;  // unweighted mean of per-session rates
};

struct SpeakerCountStats {
  std::size_t sessions = 0;
  std::size_t under = 0;  // estimated < oracle
  std::size_t equal = 0;
  std::size_t over = 0;

  Rate under_rate() const;
  Rate equal_rate() const;
  Rate over_rate() const;
  // Integer display percentages (Table-style), rounded half-up.
  std::string pct_under() const;
  std::string pct_equal() const;
  std::string pct_over() const;
};

enum class ReportFormat { kJson, kTsv, kPretty };

// One report per distinct oracle speaker count (ascending) when grouping is
// on, then the "all" group last.
std::vector<GroupReport> aggregate(const std::vector<SessionScore>& scores,
                                   bool group_by_speaker_count = true);

SpeakerCountStats speaker_counting_stats(const std::vector<SessionScore>& scores);

// Deterministic serialization: same inputs, same bytes, for every format.
std::string emit_report(const std::vector<GroupReport>& groups, const SpeakerCountStats& stats,
                        const std::vector<SessionScore>& sessions, ReportFormat format,
                        bool per_session = false);

}  // namespace cpcer
