#include "cpcer/report.hpp"

#include <map>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>
#include <fmt/format.h>
#include <json.hpp>

namespace cpcer {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// Non-negative exact fraction; denominator 0 encodes "no reference tokens"
// and displays as zero.
struct Frac {
  BigInt num = 0;
  BigInt den = 1;

  void reduce() {
    if (den == 0) return;
    const BigInt g = gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
};

Frac add(const Frac& a, const Frac& b) {
  Frac r{a.num * b.den + b.num * a.den, a.den * b.den};
  r.reduce();
  return r;
}

Rate to_rate(const Frac& f) { return Rate{f.num.str(), f.den.str()}; }

// Percent with `digits` fraction digits, ties rounded half-up.
std::string percent_string(const BigInt& num, const BigInt& den, int digits) {
  if (den == 0) return digits == 0 ? "0" : fmt::format("{:.{}f}", 0.0, digits);
  BigInt scale = 100;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const BigInt scaled = num * scale;
  BigInt q = scaled / den;
  const BigInt r = scaled % den;
  if (2 * r >= den) ++q;
  if (digits == 0) return q.str();
  BigInt unit = 1;
  for (int i = 0; i < digits; ++i) unit *= 10;
  const BigInt whole = q / unit;
  const BigInt frac = q % unit;
  return fmt::format("{}.{:0{}}", whole.str(), frac.convert_to<std::uint64_t>(), digits);
}

std::string rate_percent(const Rate& rate, int digits) {
  return percent_string(BigInt(rate.num), BigInt(rate.den), digits);
}

}  // namespace

std::string Rate::percent() const { return rate_percent(*this, 2); }

Rate SessionScore::cpcer() const {
  return Rate{std::to_string(min_distance), std::to_string(total_ref_tokens)};
}

Rate SpeakerCountStats::under_rate() const {
  return Rate{std::to_string(under), std::to_string(sessions)};
}
Rate SpeakerCountStats::equal_rate() const {
  return Rate{std::to_string(equal), std::to_string(sessions)};
}
Rate SpeakerCountStats::over_rate() const {
  return Rate{std::to_string(over), std::to_string(sessions)};
}
std::string SpeakerCountStats::pct_under() const { return rate_percent(under_rate(), 0); }
std::string SpeakerCountStats::pct_equal() const { return rate_percent(equal_rate(), 0); }
std::string SpeakerCountStats::pct_over() const { return rate_percent(over_rate(), 0); }

std::vector<GroupReport> aggregate(const std::vector<SessionScore>& scores,
                                   bool group_by_speaker_count) {
  if (scores.empty()) return {};

  // Speaker-count groups in ascending numeric order, the "all" group last.
  std::map<std::size_t, std::vector<const SessionScore*>> groups;
  if (group_by_speaker_count) {
    for (const auto& s : scores) groups[s.oracle_speakers].push_back(&s);
  }

  std::vector<GroupReport> out;
  const auto make_report = [](std::string key, const std::vector<const SessionScore*>& members) {
    GroupReport g;
    g.key = std::move(key);
    g.session_count = members.size();
    BigInt dist_sum = 0;
    BigInt token_sum = 0;
    Frac macro_sum;
    for (const auto* s : members) {
      dist_sum += s->min_distance;
      token_sum += s->total_ref_tokens;
      const Frac session_rate = s->total_ref_tokens == 0
                                    ? Frac{0, 1}
                                    : Frac{BigInt(s->min_distance), BigInt(s->total_ref_tokens)};
      macro_sum = add(macro_sum, session_rate);
    }
    g.micro_cpcer = Rate{dist_sum.str(), token_sum.str()};
    Frac macro{macro_sum.num, macro_sum.den * static_cast<std::uint64_t>(members.size())};
    macro.reduce();
    g.macro_cpcer = to_rate(macro);
    return g;
  };

  for (const auto& [count, members] : groups) {
    out.push_back(make_report(std::to_string(count), members));
  }
  std::vector<const SessionScore*> all;
  all.reserve(scores.size());
  for (const auto& s : scores) all.push_back(&s);
  out.push_back(make_report("all", all));
  return out;
}

SpeakerCountStats speaker_counting_stats(const std::vector<SessionScore>& scores) {
  SpeakerCountStats stats;
  stats.sessions = scores.size();
  for (const auto& s : scores) {
    if (s.estimated_speakers < s.oracle_speakers) {
      ++stats.under;
    } else if (s.estimated_speakers == s.oracle_speakers) {
      ++stats.equal;
    } else {
      ++stats.over;
    }
  }
  return stats;
}

namespace {

nlohmann::ordered_json rate_json(const Rate& rate, int digits) {
  return {{"percent", rate_percent(rate, digits)}, {"num", rate.num}, {"den", rate.den}};
}

std::string group_label(const std::string& key) {
  return key == "all" ? "all" : key + "-speaker";
}

std::string emit_json(const std::vector<GroupReport>& groups, const SpeakerCountStats& stats,
                      const std::vector<SessionScore>& sessions) {
  nlohmann::ordered_json doc;
  doc["schema"] = "cpcer-report-v1";
  doc["session_count"] = sessions.size();

  auto& jgroups = doc["groups"] = nlohmann::ordered_json::array();
  for (const auto& g : groups) {
    nlohmann::ordered_json jg;
    jg["group"] = g.key;
    jg["session_count"] = g.session_count;
    jg["micro_cpcer"] = rate_json(g.micro_cpcer, 2);
    jg["macro_cpcer"] = rate_json(g.macro_cpcer, 2);
    jgroups.push_back(std::move(jg));
  }

  auto& jstats = doc["speaker_counting"];
  jstats["sessions"] = stats.sessions;
  jstats["under"] = rate_json(stats.under_rate(), 0);
  jstats["equal"] = rate_json(stats.equal_rate(), 0);
  jstats["over"] = rate_json(stats.over_rate(), 0);

  auto& jsessions = doc["sessions"] = nlohmann::ordered_json::array();
  for (const auto& s : sessions) {
    nlohmann::ordered_json js;
    js["session"] = s.session_id;
    js["oracle_speakers"] = s.oracle_speakers;
    js["estimated_speakers"] = s.estimated_speakers;
    js["min_distance"] = s.min_distance;
    js["total_ref_tokens"] = s.total_ref_tokens;
    js["cpcer"] = rate_json(s.cpcer(), 2);
    auto& jperm = js["permutation"] = nlohmann::ordered_json::object();
    for (const auto& [ref_id, hyp_id] : s.matched) jperm[ref_id] = hyp_id;
    js["unmatched_ref"] = s.unmatched_ref;
    js["unmatched_hyp"] = s.unmatched_hyp;
    jsessions.push_back(std::move(js));
  }
  return doc.dump(2) + "\n";
}

std::string emit_tsv(const std::vector<GroupReport>& groups, const SpeakerCountStats& stats,
                     const std::vector<SessionScore>& sessions, bool per_session) {
  std::string out;
  out += "# group\tkey\tsessions\tmicro_pct\tmicro_num\tmicro_den\tmacro_pct\tmacro_num\tmacro_den\n";
  for (const auto& g : groups) {
    out += fmt::format("group\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", g.key, g.session_count,
                       g.micro_cpcer.percent(), g.micro_cpcer.num, g.micro_cpcer.den,
                       g.macro_cpcer.percent(), g.macro_cpcer.num, g.macro_cpcer.den);
  }
  out += "# speakers\tsessions\tpct_under\tpct_equal\tpct_over\tn_under\tn_equal\tn_over\n";
  out += fmt::format("speakers\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n", stats.sessions, stats.pct_under(),
                     stats.pct_equal(), stats.pct_over(), stats.under, stats.equal, stats.over);
  if (per_session) {
    out += "# session\tid\toracle_speakers\testimated_speakers\tmin_distance\ttotal_ref_tokens\tcpcer_pct\n";
    for (const auto& s : sessions) {
      out += fmt::format("session\t{}\t{}\t{}\t{}\t{}\t{}\n", s.session_id, s.oracle_speakers,
                         s.estimated_speakers, s.min_distance, s.total_ref_tokens,
                         s.cpcer().percent());
    }
  }
  return out;
}

std::string emit_pretty(const std::vector<GroupReport>& groups, const SpeakerCountStats& stats,
                        const std::vector<SessionScore>& sessions, bool per_session) {
  std::string out;
  out += "cpCER summary\n";
  if (sessions.empty()) {
    out += "  (no sessions scored)\n";
    return out;
  }
  out += fmt::format("  {:<16}{:>10}{:>14}{:>14}\n", "group", "sessions", "micro cpCER",
                     "macro cpCER");
  for (const auto& g : groups) {
    out += fmt::format("  {:<16}{:>10}{:>13}%{:>13}%\n", group_label(g.key), g.session_count,
                       g.micro_cpcer.percent(), g.macro_cpcer.percent());
  }
  out += fmt::format("\nspeaker counting over {} session(s)\n", stats.sessions);
  out += fmt::format("  est < oracle {:>4}%  ({})\n", stats.pct_under(), stats.under);
  out += fmt::format("  est = oracle {:>4}%  ({})\n", stats.pct_equal(), stats.equal);
  out += fmt::format("  est > oracle {:>4}%  ({})\n", stats.pct_over(), stats.over);
  if (per_session) {
    out += fmt::format("\n  {:<24}{:>4}{:>6}{:>12}{:>12}{:>10}\n", "session", "S", "S-est",
                       "distance", "tokens", "cpCER");
    for (const auto& s : sessions) {
      out += fmt::format("  {:<24}{:>4}{:>6}{:>12}{:>12}{:>9}%\n", s.session_id,
                         s.oracle_speakers, s.estimated_speakers, s.min_distance,
                         s.total_ref_tokens, s.cpcer().percent());
    }
  }
  return out;
}

}  // namespace

std::string emit_report(const std::vector<GroupReport>& groups, const SpeakerCountStats& stats,
                        const std::vector<SessionScore>& sessions, ReportFormat format,
                        bool per_session) {
  switch (format) {
    case ReportFormat::kJson:
      return emit_json(groups, stats, sessions);
    case ReportFormat::kTsv:
      return emit_tsv(groups, stats, sessions, per_session);
    case ReportFormat::kPretty:
      return emit_pretty(groups, stats, sessions, per_session);
  }
  return {};
}

}  // namespace cpcer
