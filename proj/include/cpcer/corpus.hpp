#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cpcer/textnorm.hpp"

namespace cpcer {

// One timed, speaker-labeled utterance. Times are integer milliseconds so
// chronological sorting never depends on floating-point comparison.
struct Segment {
  std::string session_id;
  std::string speaker_id;
  std::uint64_t start_ms = 0;
  std::uint64_t end_ms = 0;
  std::string text;

  bool operator==(const Segment&) const = default;
};

// A speaker's full-session token sequence after chronological concatenation.
struct SpeakerStream {
  std::string speaker_id;
  TokenSeq tokens;
  std::size_t source_segment_count = 0;
};

// Matched reference and hypothesis stream sets for one session. Stream order
// is first appearance in the source corpus; padded streams (empty speaker_id,
// no tokens) only ever appear at the tail, added by pad_to_equal.
struct SessionPair {
  std::string session_id;
  std::vector<SpeakerStream> ref_streams;
  std::vector<SpeakerStream> hyp_streams;
};

enum class InputFormat { kTsv, kJson };

struct CorpusMeta {
  std::string source_path;
  InputFormat format = InputFormat::kTsv;
  NormalizationConfig normalization;
};

// One side (reference or hypothesis) of the evaluation data.
struct Corpus {
  std::map<std::string, std::vector<SpeakerStream>> sessions;
  CorpusMeta meta;
  std::vector<std::string> warnings;
};

struct PairingResult {
  std::vector<SessionPair> pairs;  // sorted by session_id
  std::vector<std::string> warnings;
};

// TSV records: session \t speaker \t start_ms \t end_ms \t text, LF line
// endings, UTF-8, no BOM. '#' starts a comment line; the fixed header line
// "session\tspeaker\tstart\tend\ttext" is skipped if present. Errors carry
// the 1-based line number.
std::vector<Segment> parse_segments_tsv(std::string_view bytes, std::string_view source_name = {});

// JSON array of {"session","speaker","start_ms","end_ms","text"} objects.
// Errors carry a JSON path such as "$[3].start_ms".
std::vector<Segment> parse_segments_json(std::string_view bytes, std::string_view source_name = {});

std::string emit_segments_tsv(const std::vector<Segment>& segments, bool header = true);

// Within each (session, speaker): stable sort by (start, end), normalize,
// tokenize, concatenate. Speakers keep first-appearance order.
std::map<std::string, std::vector<SpeakerStream>> concatenate_speakers(
    const std::vector<Segment>& segments, const NormalizationConfig& cfg = {});

// Drops exact duplicate records (with a warning), then concatenates.
Corpus build_corpus(const std::vector<Segment>& segments, const NormalizationConfig& cfg,
                    CorpusMeta meta);

// Sessions matched by id. A reference session with no hypothesis counterpart
// gets an empty hypothesis side (scored as deletions); hypothesis-only
// sessions are reported as warnings and excluded. Throws NoOverlap when the
// reference is non-empty and no session id is shared.
PairingResult pair_corpora(const Corpus& ref, const Corpus& hyp);

}  // namespace cpcer
