#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiretap/classifier.hpp"

namespace wiretap {

enum class ReportFormat { kCsv, kJsonLines, kTextTable };
std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view text);

struct TraceReport {
  std::string source;  // file name the trace was read from
  std::string page_url;
  std::string site;
  std::vector<LeakFinding> findings;
  std::vector<WiretapVerdict> verdicts;

  bool operator==(const TraceReport&) const = default;
};

struct AnalysisReport {
  CorpusSummary summary;
  std::vector<TraceReport> traces;

  bool operator==(const AnalysisReport&) const = default;
};

// JSON forms mirroring the in-memory types.
nlohmann::ordered_json to_json(const LeakFinding& f);
LeakFinding finding_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const WiretapVerdict& v);
WiretapVerdict verdict_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const CorpusSummary& s);
CorpusSummary summary_from_json(const nlohmann::json& j);

// File name -> content, byte-deterministic for equal inputs.
using ReportFiles = std::map<std::string, std::string>;

ReportFiles render_reports(const AnalysisReport& report, ReportFormat format);

// Inverse of the json-lines rendering ("report.jsonl").
AnalysisReport parse_json_lines_report(std::istream& in);

// Writes rendered files under dir (created when missing). Throws IoError.
std::vector<std::filesystem::path> emit_reports(const AnalysisReport& report, ReportFormat format,
                                                const std::filesystem::path& dir);
void write_files(const ReportFiles& files, const std::filesystem::path& dir,
                 std::vector<std::filesystem::path>* written = nullptr);

inline constexpr std::array<std::string_view, 4> kTimelineLanes = {"interaction", "registration", "invocation",
                                                                   "network-share"};

// Plot-ready series for one page and one script domain. Lanes follow
// kTimelineLanes; each holds sorted timestamps.
struct TimelineSeries {
  std::string page_url;
  std::string subject;
  std::array<std::vector<TimestampMs>, 4> lanes;

  bool empty() const;
  bool operator==(const TimelineSeries&) const = default;
};

// interaction: start of every interaction; registration: listeners the
// subject registered; invocation: handlers it owns; network-share: requests
// carrying leaks attributable to it. A subject with no records in the trace
// yields all lanes empty and a warning.
TimelineSeries emit_timeline(const CrawlTrace& trace, std::string_view subject_domain,
                             const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                             std::vector<std::string>* warnings = nullptr);
nlohmann::ordered_json to_json(const TimelineSeries& t);

}  // namespace wiretap
