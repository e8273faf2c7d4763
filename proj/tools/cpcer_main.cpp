#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <omp.h>

#include "cpcer/align.hpp"
#include "cpcer/corpus.hpp"
#include "cpcer/errors.hpp"
#include "cpcer/report.hpp"

namespace {

using namespace cpcer;

struct CliConfig {
  std::string ref_path;
  std::string hyp_path;
  std::string input_format = "tsv";
  std::string output_path = "-";
  std::string report_format = "pretty";
  std::string algorithm = "hungarian";
  NormalizationConfig normalization;
  bool per_session = false;
  bool group_by_speakers = true;
  int jobs = 0;  // 0 = all available processors
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open \"{}\" for reading", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("read failure on \"{}\"", path));
  return std::move(buf).str();
}

Corpus load_corpus(const std::string& path, const CliConfig& cfg) {
  const std::string bytes = read_file(path);
  CorpusMeta meta;
  meta.source_path = path;
  meta.normalization = cfg.normalization;
  std::vector<Segment> segments;
  if (cfg.input_format == "json") {
    meta.format = InputFormat::kJson;
    segments = parse_segments_json(bytes, path);
  } else {
    meta.format = InputFormat::kTsv;
    segments = parse_segments_tsv(bytes, path);
  }
  return build_corpus(segments, cfg.normalization, std::move(meta));
}

void write_report(const std::string& output_path, const std::string& bytes) {
  if (output_path == "-") {
    std::cout << bytes;
    std::cout.flush();
    if (!std::cout) throw IoError("write failure on stdout");
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open \"{}\" for writing", output_path));
  out << bytes;
  out.flush();
  if (!out) throw IoError(fmt::format("write failure on \"{}\"", output_path));
}

int run_score(const CliConfig& cfg) {
  const Corpus ref = load_corpus(cfg.ref_path, cfg);
  const Corpus hyp = load_corpus(cfg.hyp_path, cfg);
  PairingResult paired = pair_corpora(ref, hyp);

  for (const auto& w : ref.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& w : hyp.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& w : paired.warnings) std::cerr << "warning: " << w << "\n";

  ScoringOptions opts;
  if (cfg.algorithm == "bruteforce") {
    opts.algorithm = AssignmentAlgorithm::kBruteForce;
    for (const auto& pair : paired.pairs) {
      const std::size_t padded = std::max(pair.ref_streams.size(), pair.hyp_streams.size());
      if (padded > 8) {
        throw TooManySpeakers(
            fmt::format("session \"{}\" has {} padded speakers; --algorithm bruteforce "
                        "supports at most 8",
                        pair.session_id, padded));
      }
    }
  }

  if (cfg.jobs > 0) omp_set_num_threads(cfg.jobs);
  const std::vector<SessionScore> scores = score_sessions(paired.pairs, opts);
  const std::vector<GroupReport> groups = aggregate(scores, cfg.group_by_speakers);
  const SpeakerCountStats stats = speaker_counting_stats(scores);

  ReportFormat format = ReportFormat::kPretty;
  if (cfg.report_format == "json") format = ReportFormat::kJson;
  if (cfg.report_format == "tsv") format = ReportFormat::kTsv;
  write_report(cfg.output_path, emit_report(groups, stats, scores, format, cfg.per_session));
  return 0;
}

// Embedded oracle-equivalence suites on randomized instances (fixed seeds,
// so failures are reproducible).
int run_selftest() {
  bool ok = true;

  {
    std::mt19937_64 rng(0x1d2c3b4a5f6e7d8cULL);
    std::uniform_int_distribution<std::size_t> size_dist(1, 7);
    std::uniform_int_distribution<std::uint64_t> cost_dist(0, 10000);
    std::size_t failures = 0;
    constexpr std::size_t kMatrices = 1000;
    for (std::size_t t = 0; t < kMatrices; ++t) {
      CostMatrix m;
      m.size = size_dist(rng);
      m.cells.resize(m.size * m.size);
      for (auto& c : m.cells) c = cost_dist(rng);
      const Assignment fast = min_assignment(m);
      const Assignment exact = brute_force_assignment(m);
      if (fast.total != exact.total || fast.permutation != exact.permutation) ++failures;
    }
    std::cout << fmt::format("assignment equivalence: {}/{} instances agree\n",
                             kMatrices - failures, kMatrices);
    ok = ok && failures == 0;
  }

  {
    std::mt19937_64 rng(0x9f8e7d6c5b4a3f2eULL);
    std::uniform_int_distribution<std::size_t> len_dist(0, 256);
    std::uniform_int_distribution<int> pick(0, 1);
    std::uniform_int_distribution<char32_t> ascii(0x20, 0x7E);
    std::uniform_int_distribution<char32_t> cjk(0x4E00, 0x4E7F);
    const auto random_seq = [&] {
      TokenSeq s(len_dist(rng), U' ');
      for (auto& t : s) t = pick(rng) ? ascii(rng) : cjk(rng);
      return s;
    };
    std::size_t failures = 0;
    constexpr std::size_t kPairs = 2000;
    for (std::size_t t = 0; t < kPairs; ++t) {
      const TokenSeq a = random_seq();
      const TokenSeq b = random_seq();
      if (edit_distance_fast(a, b).distance != edit_distance_dp(a, b).distance) ++failures;
    }
    std::cout << fmt::format("edit-distance equivalence: {}/{} pairs agree\n", kPairs - failures,
                             kPairs);
    ok = ok && failures == 0;
  }

  std::cout << (ok ? "selftest passed\n" : "selftest FAILED\n");
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpCER scoring for speaker-attributed speech transcription"};
  app.set_version_flag("--version", "cpcer 1.0.0");
  app.require_subcommand(1);

  CliConfig cfg;
  CLI::App* score = app.add_subcommand(
      "score", "Score a hypothesis corpus against a reference corpus");
  score->add_option("--ref", cfg.ref_path, "Reference transcript file")->required();
  score->add_option("--hyp", cfg.hyp_path, "Hypothesis transcript file")->required();
  score->add_option("--input-format", cfg.input_format, "Transcript file format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
  score->add_option("--output,-o", cfg.output_path, "Report destination (\"-\" = stdout)")
      ->capture_default_str();
  score->add_option("--report-format", cfg.report_format, "Report serialization")
      ->check(CLI::IsMember({"json", "tsv", "pretty"}))
      ->capture_default_str();
  score->add_option("--algorithm", cfg.algorithm, "Speaker assignment algorithm")
      ->check(CLI::IsMember({"hungarian", "bruteforce"}))
      ->capture_default_str();
  score->add_flag("--per-session", cfg.per_session, "Include per-session rows in the report");
  score->add_flag("--group-by-speakers,!--no-group-by-speakers", cfg.group_by_speakers,
                  "Break groups out by oracle speaker count (default on)");
  score->add_option("--jobs,-j", cfg.jobs, "Worker threads (0 = all available processors)")
      ->check(CLI::NonNegativeNumber);
  score->add_flag("!--no-compat-norm", cfg.normalization.apply_compatibility_normalization,
                  "Disable Unicode compatibility normalization");
  score->add_flag("!--no-strip-whitespace", cfg.normalization.strip_whitespace,
                  "Keep whitespace tokens");
  score->add_flag("--strip-punctuation", cfg.normalization.strip_punctuation,
                  "Remove punctuation before scoring");
  score->add_flag("--case-fold-latin", cfg.normalization.case_fold_latin,
                  "Case-fold Latin-script letters");

  CLI::App* selftest = app.add_subcommand(
      "selftest", "Run the embedded oracle-equivalence suites and exit 0/3");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (score->parsed()) return run_score(cfg);
    if (selftest->parsed()) return run_selftest();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ScoringError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
