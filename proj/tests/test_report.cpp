#include <catch2/catch_amalgamated.hpp>

#include "cpcer/report.hpp"

using namespace cpcer;

namespace {

SessionScore score(std::string id, std::size_t oracle, std::size_t estimated,
                   std::uint64_t distance, std::uint64_t tokens) {
  SessionScore s;
  s.session_id = std::move(id);
  s.oracle_speakers = oracle;
  s.estimated_speakers = estimated;
  s.min_distance = distance;
  s.total_ref_tokens = tokens;
  return s;
}

}  // namespace

TEST_CASE("single session aggregates to itself", "[report]") {
  const auto groups = aggregate({score("S1", 2, 2, 5, 10)});
  REQUIRE(groups.size() == 2);  // "2" and "all"
  CHECK(groups[0].key == "2");
  CHECK(groups[1].key == "all");
  CHECK(groups[1].micro_cpcer.percent() == "50.00");
  CHECK(groups[1].macro_cpcer.percent() == "50.00");
}

TEST_CASE("micro equals macro for equal token counts", "[report]") {
  const auto groups = aggregate({score("S1", 2, 2, 1, 10), score("S2", 2, 2, 3, 10)});
  const auto& all = groups.back();
  CHECK(all.key == "all");
  CHECK(all.session_count == 2);
  CHECK(all.micro_cpcer == Rate{"4", "20"});
  CHECK(all.micro_cpcer.percent() == "20.00");
  CHECK(all.macro_cpcer.percent() == "20.00");
}

TEST_CASE("micro and macro diverge for skewed token counts", "[report]") {
  const auto groups = aggregate({score("S1", 2, 2, 1, 10), score("S2", 2, 2, 3, 90)});
  const auto& all = groups.back();
  CHECK(all.micro_cpcer == Rate{"4", "100"});
  CHECK(all.micro_cpcer.percent() == "4.00");
  // (1/10 + 1/30) / 2 = 1/15, i.e. 6.666...% -> 6.67
  CHECK(all.macro_cpcer == Rate{"1", "15"});
  CHECK(all.macro_cpcer.percent() == "6.67");
}

TEST_CASE("groups partition the sessions by oracle speaker count", "[report]") {
  const std::vector<SessionScore> scores = {
      score("A", 2, 2, 1, 100), score("B", 3, 3, 2, 100), score("C", 2, 1, 3, 100),
      score("D", 4, 4, 4, 100), score("E", 3, 3, 5, 100),
  };
  const auto groups = aggregate(scores);
  REQUIRE(groups.size() == 4);  // 2, 3, 4, all
  CHECK(groups[0].key == "2");
  CHECK(groups[0].session_count == 2);
  CHECK(groups[1].key == "3");
  CHECK(groups[1].session_count == 2);
  CHECK(groups[2].key == "4");
  CHECK(groups[2].session_count == 1);
  CHECK(groups[3].key == "all");
  CHECK(groups[3].session_count == scores.size());

  std::size_t partition_total = 0;
  for (std::size_t i = 0; i + 1 < groups.size(); ++i) partition_total += groups[i].session_count;
  CHECK(partition_total == scores.size());

  // Micro consistency: the "all" group equals recomputation from raw sums.
  std::uint64_t dist = 0, tokens = 0;
  for (const auto& s : scores) {
    dist += s.min_distance;
    tokens += s.total_ref_tokens;
  }
  CHECK(groups[3].micro_cpcer == Rate{std::to_string(dist), std::to_string(tokens)});
}

TEST_CASE("grouping can be disabled", "[report]") {
  const auto groups = aggregate({score("A", 2, 2, 1, 10), score("B", 3, 3, 1, 10)}, false);
  REQUIRE(groups.size() == 1);
  CHECK(groups[0].key == "all");
}

TEST_CASE("speaker counting stats reproduce the fixture tables", "[report]") {
  SECTION("all sessions counted exactly") {
    std::vector<SessionScore> scores;
    for (int i = 0; i < 20; ++i) scores.push_back(score("S" + std::to_string(i), 3, 3, 0, 10));
    const auto stats = speaker_counting_stats(scores);
    CHECK(stats.pct_under() == "0");
    CHECK(stats.pct_equal() == "100");
    CHECK(stats.pct_over() == "0");
  }
  SECTION("2 under, 10 equal, 8 over") {
    std::vector<SessionScore> scores;
    for (int i = 0; i < 2; ++i) scores.push_back(score("U" + std::to_string(i), 3, 2, 0, 10));
    for (int i = 0; i < 10; ++i) scores.push_back(score("E" + std::to_string(i), 3, 3, 0, 10));
    for (int i = 0; i < 8; ++i) scores.push_back(score("O" + std::to_string(i), 3, 4, 0, 10));
    const auto stats = speaker_counting_stats(scores);
    CHECK(stats.pct_under() == "10");
    CHECK(stats.pct_equal() == "50");
    CHECK(stats.pct_over() == "40");
    CHECK(stats.under_rate() == Rate{"2", "20"});
  }
  SECTION("single equal session") {
    const auto stats = speaker_counting_stats({score("S", 2, 2, 0, 10)});
    CHECK(stats.pct_under() == "0");
    CHECK(stats.pct_equal() == "100");
    CHECK(stats.pct_over() == "0");
  }
  SECTION("thirds round half-up and stay within one step of 100") {
    const auto stats = speaker_counting_stats(
        {score("A", 3, 2, 0, 1), score("B", 3, 3, 0, 1), score("C", 3, 4, 0, 1)});
    CHECK(stats.pct_under() == "33");
    CHECK(stats.pct_equal() == "33");
    CHECK(stats.pct_over() == "33");
  }
}

TEST_CASE("percent display rounds half up at two decimals", "[report]") {
  CHECK(Rate{"1", "800"}.percent() == "0.13");    // 0.125%
  CHECK(Rate{"1", "3"}.percent() == "33.33");
  CHECK(Rate{"2", "3"}.percent() == "66.67");
  CHECK(Rate{"1", "1"}.percent() == "100.00");
  CHECK(Rate{"0", "5"}.percent() == "0.00");
  CHECK(Rate{"0", "0"}.percent() == "0.00");      // empty-reference group
  CHECK(Rate{"3", "2"}.percent() == "150.00");    // above 100 is legitimate
}

TEST_CASE("reports serialize deterministically", "[report]") {
  const std::vector<SessionScore> scores = {score("S1", 2, 2, 1, 10), score("S2", 2, 3, 3, 90)};
  const auto groups = aggregate(scores);
  const auto stats = speaker_counting_stats(scores);
  for (ReportFormat format : {ReportFormat::kJson, ReportFormat::kTsv, ReportFormat::kPretty}) {
    const auto a = emit_report(groups, stats, scores, format, true);
    const auto b = emit_report(groups, stats, scores, format, true);
    CHECK(a == b);
    CHECK_FALSE(a.empty());
  }
}

TEST_CASE("json report carries the expected figures", "[report]") {
  const std::vector<SessionScore> scores = {score("S1", 2, 2, 1, 10), score("S2", 2, 2, 3, 10)};
  const auto json = emit_report(aggregate(scores), speaker_counting_stats(scores), scores,
                                ReportFormat::kJson);
  CHECK(json.find("\"micro_cpcer\"") != std::string::npos);
  CHECK(json.find("20.00") != std::string::npos);
  CHECK(json.find("\"schema\": \"cpcer-report-v1\"") != std::string::npos);
}

TEST_CASE("empty session list still emits a valid report", "[report]") {
  const auto groups = aggregate({});
  CHECK(groups.empty());
  const auto stats = speaker_counting_stats({});
  for (ReportFormat format : {ReportFormat::kJson, ReportFormat::kTsv, ReportFormat::kPretty}) {
    CHECK_FALSE(emit_report(groups, stats, {}, format).empty());
  }
  const auto json = emit_report(groups, stats, {}, ReportFormat::kJson);
  CHECK(json.find("\"session_count\": 0") != std::string::npos);
}

TEST_CASE("tsv report has one group row per group", "[report]") {
  const std::vector<SessionScore> scores = {score("S1", 2, 2, 1, 10), score("S2", 3, 3, 3, 10)};
  const auto tsv = emit_report(aggregate(scores), speaker_counting_stats(scores), scores,
                               ReportFormat::kTsv, true);
  CHECK(tsv.find("group\t2\t1\t") != std::string::npos);
  CHECK(tsv.find("group\t3\t1\t") != std::string::npos);
  CHECK(tsv.find("group\tall\t2\t") != std::string::npos);
  CHECK(tsv.find("session\tS1\t") != std::string::npos);
  CHECK(tsv.find("speakers\t2\t") != std::string::npos);
}
