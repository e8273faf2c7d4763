#include "cpcer/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

namespace cpcer {

namespace {

constexpr std::string_view kTsvHeader = "session\tspeaker\tstart\tend\ttext";

std::uint64_t parse_ms(std::string_view field, std::string_view what, std::string_view source,
                       std::size_t line) {
  std::uint64_t value = 0;
  if (field.empty() || !std::all_of(field.begin(), field.end(),
                                    [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError(fmt::format("{} is not a non-negative base-10 integer: \"{}\"", what, field),
                     std::string(source), line);
  }
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(fmt::format("{} out of range: \"{}\"", what, field), std::string(source),
                     line);
  }
  return value;
}

void check_field_chars(std::string_view value, std::string_view what, bool may_be_empty,
                       std::string_view source, std::size_t line) {
  if (!may_be_empty && value.empty()) {
    throw ParseError(fmt::format("{} must not be empty", what), std::string(source), line);
  }
  if (value.find('\r') != std::string_view::npos) {
    throw ParseError(fmt::format("{} contains a carriage return (CRLF input?)", what),
                     std::string(source), line);
  }
  if (value.find('\t') != std::string_view::npos || value.find('\n') != std::string_view::npos) {
    throw ParseError(fmt::format("{} contains a tab or line break", what), std::string(source),
                     line);
  }
}

Segment validate_segment(Segment seg, std::string_view source, std::size_t line) {
  check_field_chars(seg.session_id, "session id", false, source, line);
  check_field_chars(seg.speaker_id, "speaker id", false, source, line);
  check_field_chars(seg.text, "text", true, source, line);
  if (seg.end_ms < seg.start_ms) {
    throw ParseError(fmt::format("end {} earlier than start {}", seg.end_ms, seg.start_ms),
                     std::string(source), line);
  }
  return seg;
}

}  // namespace

std::vector<Segment> parse_segments_tsv(std::string_view bytes, std::string_view source_name) {
  if (bytes.substr(0, 3) == "\xEF\xBB\xBF") {
    throw ParseError("UTF-8 BOM not allowed", std::string(source_name), 1);
  }

  std::vector<Segment> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool seen_record = false;
  while (pos <= bytes.size()) {
    if (pos == bytes.size()) break;
    const std::size_t eol = bytes.find('\n', pos);
    const std::string_view line =
        bytes.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? bytes.size() : eol + 1;
    ++line_no;

    if (line.empty()) continue;
    if (line.front() == '#') continue;
    if (!is_valid_utf8(line)) {
      throw InvalidEncoding("invalid UTF-8", std::string(source_name), line_no);
    }
    if (!seen_record && line == kTsvHeader) continue;

    std::vector<std::string_view> fields;
    std::size_t fpos = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', fpos);
      if (tab == std::string_view::npos) {
        fields.push_back(line.substr(fpos));
        break;
      }
      fields.push_back(line.substr(fpos, tab - fpos));
      fpos = tab + 1;
    }
    if (fields.size() != 5) {
      throw ParseError(fmt::format("expected 5 tab-separated fields, found {}", fields.size()),
                       std::string(source_name), line_no);
    }

    Segment seg;
    seg.session_id = std::string(fields[0]);
    seg.speaker_id = std::string(fields[1]);
    seg.start_ms = parse_ms(fields[2], "start", source_name, line_no);
    seg.end_ms = parse_ms(fields[3], "end", source_name, line_no);
    seg.text = std::string(fields[4]);
    out.push_back(validate_segment(std::move(seg), source_name, line_no));
    seen_record = true;
  }
  return out;
}

std::vector<Segment> parse_segments_json(std::string_view bytes, std::string_view source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("invalid JSON: {}", e.what()), std::string(source_name));
  }
  if (!doc.is_array()) {
    throw ParseError("top-level JSON value must be an array of segment objects ($)",
                     std::string(source_name));
  }

  std::vector<Segment> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& obj = doc[i];
    const auto path = [&](std::string_view key) { return fmt::format("$[{}].{}", i, key); };
    if (!obj.is_object()) {
      throw ParseError(fmt::format("$[{}] is not an object", i), std::string(source_name));
    }
    const auto require = [&](std::string_view key) -> const nlohmann::json& {
      const auto it = obj.find(key);
      if (it == obj.end()) {
        throw ParseError(fmt::format("missing key {}", path(key)), std::string(source_name));
      }
      return *it;
    };
    const auto require_string = [&](std::string_view key) {
      const auto& v = require(key);
      if (!v.is_string()) {
        throw ParseError(fmt::format("{} must be a string", path(key)), std::string(source_name));
      }
      return v.get<std::string>();
    };
    const auto require_ms = [&](std::string_view key) {
      const auto& v = require(key);
      if (!v.is_number_integer() || v.is_number_float() ||
          (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        throw ParseError(fmt::format("{} must be a non-negative integer", path(key)),
                         std::string(source_name));
      }
      return v.get<std::uint64_t>();
    };

    Segment seg;
    seg.session_id = require_string("session");
    seg.speaker_id = require_string("speaker");
    seg.start_ms = require_ms("start_ms");
    seg.end_ms = require_ms("end_ms");
    seg.text = require_string("text");
    try {
      out.push_back(validate_segment(std::move(seg), source_name, 0));
    } catch (const ParseError& e) {
      throw ParseError(fmt::format("$[{}]: {}", i, e.what()), std::string(source_name));
    }
  }
  return out;
}

std::string emit_segments_tsv(const std::vector<Segment>& segments, bool header) {
  std::string out;
  if (header) {
    out += kTsvHeader;
    out += '\n';
  }
  for (const auto& seg : segments) {
    out += fmt::format("{}\t{}\t{}\t{}\t{}\n", seg.session_id, seg.speaker_id, seg.start_ms,
                       seg.end_ms, seg.text);
  }
  return out;
}

std::map<std::string, std::vector<SpeakerStream>> concatenate_speakers(
    const std::vector<Segment>& segments, const NormalizationConfig& cfg) {
  // (session, speaker) -> segment indices, speakers in first-appearance order.
  std::map<std::string, std::vector<std::string>> speaker_order;
  std::map<std::string, std::unordered_map<std::string, std::vector<std::size_t>>> grouped;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    auto& per_speaker = grouped[seg.session_id];
    auto [it, inserted] = per_speaker.try_emplace(seg.speaker_id);
    if (inserted) speaker_order[seg.session_id].push_back(seg.speaker_id);
    it->second.push_back(i);
  }

  std::map<std::string, std::vector<SpeakerStream>> out;
  for (auto& [session_id, speakers] : speaker_order) {
    auto& streams = out[session_id];
    streams.reserve(speakers.size());
    for (const auto& speaker_id : speakers) {
      auto& indices = grouped[session_id][speaker_id];
      // Indices are already in file order; stable sort keeps that order as
      // the tie-break for identical (start, end).
      std::stable_sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
        const Segment& sa = segments[a];
        const Segment& sb = segments[b];
        if (sa.start_ms != sb.start_ms) return sa.start_ms < sb.start_ms;
        return sa.end_ms < sb.end_ms;
      });

      SpeakerStream stream;
      stream.speaker_id = speaker_id;
      stream.source_segment_count = indices.size();
      for (std::size_t idx : indices) {
        stream.tokens += tokenize(normalize(segments[idx].text, cfg));
      }
      streams.push_back(std::move(stream));
    }
  }
  return out;
}

Corpus build_corpus(const std::vector<Segment>& segments, const NormalizationConfig& cfg,
                    CorpusMeta meta) {
  std::vector<Segment> unique;
  unique.reserve(segments.size());
  std::set<std::tuple<std::string, std::string, std::uint64_t, std::uint64_t, std::string>> seen;
  std::size_t dropped = 0;
  for (const auto& seg : segments) {
    if (seen.emplace(seg.session_id, seg.speaker_id, seg.start_ms, seg.end_ms, seg.text).second) {
      unique.push_back(seg);
    } else {
      ++dropped;
    }
  }

  Corpus corpus;
  corpus.meta = std::move(meta);
  if (dropped > 0) {
    corpus.warnings.push_back(fmt::format("{}: dropped {} exact duplicate segment record(s)",
                                          corpus.meta.source_path, dropped));
  }
  corpus.sessions = concatenate_speakers(unique, cfg);
  return corpus;
}

PairingResult pair_corpora(const Corpus& ref, const Corpus& hyp) {
  if (!ref.sessions.empty() && hyp.sessions.empty()) {
    throw NoOverlap("hypothesis corpus contains no sessions");
  }

  PairingResult result;
  for (const auto& [session_id, ref_streams] : ref.sessions) {
    SessionPair pair;
    pair.session_id = session_id;
    pair.ref_streams = ref_streams;
    const auto it = hyp.sessions.find(session_id);
    if (it != hyp.sessions.end()) pair.hyp_streams = it->second;
    result.pairs.push_back(std::move(pair));
  }
  for (const auto& [session_id, streams] : hyp.sessions) {
    if (!ref.sessions.count(session_id)) {
      result.warnings.push_back(fmt::format(
          "hypothesis session \"{}\" has no reference counterpart; excluded from scoring",
          session_id));
    }
  }
  return result;
}

}  // namespace cpcer
