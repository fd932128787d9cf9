#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiretap/report.hpp"

namespace wiretap {

struct RunConfig {
  std::vector<std::string> traces;  // trace files or directories of them
  std::string psl;                  // public suffix list; empty means the implicit "*" rule only
  std::string entities;             // optional entity map
  std::vector<std::string> filters; // optional filter lists
  ChainConfig chains = ChainConfig::full();
  TimestampMs window_ms = 500;
  std::size_t min_pattern_len = 8;
  std::string output_dir = "wiretap-out";
  std::vector<ReportFormat> formats = {ReportFormat::kCsv, ReportFormat::kJsonLines, ReportFormat::kTextTable};
  std::size_t parallelism = 0;  // 0 picks the hardware concurrency
  bool strict = true;
  bool audit = false;      // write fingerprints.tsv per distinct token set
  bool timelines = true;   // write timelines.jsonl for every wiretapper verdict

  // Throws ConfigError.
  void validate() const;
};

ChainConfig chain_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const ChainConfig& c);

// Overrides fields present in a JSON config file. Relative paths are
// resolved against the file's directory. Throws ConfigError.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

// Loaded once per run and shared read-only by all workers.
struct Knowledge {
  PublicSuffixList psl;
  EntityMap entities;
  FilterRuleSet rules;

  AttributionContext context() const { return {&psl, &entities, &rules}; }
  static Knowledge load(const RunConfig& config);
};

struct LoadedTrace {
  std::string source;
  CrawlTrace trace;
};

// Expands directories (files ending in .jsonl, .ndjson or .trace, sorted by
// name). A missing path is a ConfigError. In lenient mode unreadable traces
// are skipped with a warning; no usable trace at all is a UsageError.
std::vector<LoadedTrace> load_traces(const RunConfig& config, std::vector<std::string>* warnings);

struct AnalysisRun {
  AnalysisReport report;
  std::vector<TimelineSeries> timelines;
  std::vector<std::string> warnings;
  std::size_t index_builds = 0;     // distinct token sets indexed
  std::vector<std::string> audits;  // fingerprint listings, one per distinct token set
};

// Scans and classifies every trace, `parallelism` at a time. The result does
// not depend on the degree of parallelism.
AnalysisRun analyze_traces(std::vector<LoadedTrace> traces, const Knowledge& knowledge, const RunConfig& config);

// load_traces + analyze_traces + reports written to config.output_dir.
AnalysisRun run_analyze(const RunConfig& config);

}  // namespace wiretap
