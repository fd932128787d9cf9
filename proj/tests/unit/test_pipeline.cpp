#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "wiretap/fixtures.hpp"

namespace wiretap {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("wiretap_unit_" + name);
  fs::remove_all(p);
  return p;
}

AnalysisRun analyze_set(const FixtureSet& set, const fs::path& dir, std::size_t parallelism = 1) {
  write_fixture_set(set, dir);
  RunConfig cfg;
  apply_config_file(cfg, dir / "run.json");
  cfg.parallelism = parallelism;
  return run_analyze(cfg);
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += x + "\n";
  return s;
}

TEST(Fixtures, TruthTableMatchesManifest) {
  FixtureSet set = make_truth_table();
  auto run = analyze_set(set, scratch("truth"));
  EXPECT_EQ(check_manifest(set.manifest, run), std::vector<std::string>{}) << joined(check_manifest(set.manifest, run));
  EXPECT_EQ(run.report.summary.sites_with_wiretapper, 1u);
  std::size_t wiretappers = 0;
  for (const auto& t : run.report.traces)
    for (const auto& v : t.verdicts)
      if (v.wiretapper) {
        ++wiretappers;
        EXPECT_EQ(v.script_domain, "subject-k1r1e1.test");
        EXPECT_TRUE(v.known_tracker);
      }
  EXPECT_EQ(wiretappers, 1u);
}

TEST(Fixtures, Corpus50MatchesManifest) {
  FixtureSet set = make_corpus50();
  auto run = analyze_set(set, scratch("corpus50"));
  auto diff = check_manifest(set.manifest, run);
  EXPECT_TRUE(diff.empty()) << joined(diff);
  EXPECT_GT(run.report.summary.sites_with_wiretapper, 0u);
  EXPECT_LT(run.report.summary.sites_with_wiretapper, 50u);
}

TEST(Fixtures, TimelineLanes) {
  FixtureSet set = make_timeline_fixture();
  auto run = analyze_set(set, scratch("timeline"));
  auto diff = check_manifest(set.manifest, run);
  EXPECT_TRUE(diff.empty()) << joined(diff);
  ASSERT_EQ(run.timelines.size(), 1u);
  EXPECT_EQ(run.timelines[0].subject, "keystream.test");
  // The heartbeat at +2500 carries nothing and stays off the share lane.
  EXPECT_EQ(run.timelines[0].lanes[3].size(), 8u);
}

TEST(Fixtures, SmallChainSweep) {
  std::vector<TransformChain> chains;
  for (auto name : {"identity", "MD5", "Gzip>Base64", "LZ-string>URL-encode", "SHA3-256>Base32>ROT13", "CRC32"})
    chains.push_back(parse_chain(name));
  FixtureSet set = make_chain_sweep(chains);
  auto run = analyze_set(set, scratch("sweep"));
  auto diff = check_manifest(set.manifest, run);
  EXPECT_TRUE(diff.empty()) << joined(diff);
}

TEST(Fixtures, SweepRejectsUnsupportedChain) {
  TransformChain bad{{Algorithm::kMd5, Algorithm::kSha1}};
  EXPECT_THROW(make_chain_sweep({bad}), ConfigError);
  EXPECT_THROW(parse_chain("MD5>Rot47"), ConfigError);
  EXPECT_THROW(make_fixture("nope", 1, nullptr), ConfigError);
}

TEST(Fixtures, SeededAndDeterministic) {
  auto a = make_corpus50(7), b = make_corpus50(7), c = make_corpus50(8);
  EXPECT_EQ(a.manifest.to_json().dump(), b.manifest.to_json().dump());
  EXPECT_EQ(a.traces, b.traces);
  EXPECT_NE(a.manifest.to_json().dump(), c.manifest.to_json().dump());
  EXPECT_EQ(FixtureManifest::from_json(a.manifest.to_json()).to_json().dump(), a.manifest.to_json().dump());
}

TEST(Pipeline, ParallelismDoesNotChangeReports) {
  FixtureSet set = make_corpus50();
  auto one = analyze_set(set, scratch("par1"), 1);
  auto four = analyze_set(set, scratch("par4"), 4);
  EXPECT_EQ(one.report, four.report);
  for (auto f : {ReportFormat::kCsv, ReportFormat::kJsonLines, ReportFormat::kTextTable})
    EXPECT_EQ(render_reports(one.report, f), render_reports(four.report, f));
  EXPECT_EQ(one.index_builds, 50u);  // the mail token differs per site
}

TEST(Pipeline, IndexCacheSharesTokenSets) {
  std::vector<TransformChain> chains = {parse_chain("MD5"), parse_chain("Base64")};
  FixtureSet set = make_chain_sweep(chains);
  auto run = analyze_set(set, scratch("cache"), 2);
  EXPECT_EQ(run.index_builds, 1u);
}

TEST(Pipeline, JsonLinesRoundTrip) {
  FixtureSet set = make_corpus50();
  auto run = analyze_set(set, scratch("roundtrip"));
  std::string text = render_reports(run.report, ReportFormat::kJsonLines).at("report.jsonl");
  std::istringstream in(text);
  AnalysisReport back = parse_json_lines_report(in);
  EXPECT_EQ(back, run.report);
  EXPECT_EQ(render_reports(back, ReportFormat::kJsonLines).at("report.jsonl"), text);
}

TEST(Pipeline, ReportFilesAndHeaders) {
  FixtureSet set = make_truth_table();
  auto run = analyze_set(set, scratch("files"));
  auto csv = render_reports(run.report, ReportFormat::kCsv);
  std::vector<std::string> names;
  for (const auto& [n, c] : csv) names.push_back(n);
  EXPECT_EQ(names, (std::vector<std::string>{"data_categories.csv", "domains.csv", "event_types.csv", "findings.csv",
                                             "key_events.csv", "summary.csv", "verdicts.csv"}));
  EXPECT_EQ(csv["summary.csv"].substr(0, csv["summary.csv"].find('\n')), "metric,value");
  EXPECT_NE(csv["summary.csv"].find("pct_sites_with_wiretapper,12.50\n"), std::string::npos);
  EXPECT_EQ(csv["key_events.csv"].substr(0, csv["key_events.csv"].find('\n')),
            "event_type,sites_listener,pct_sites_listener,sites_wiretapping,pct_sites_wiretapping");
  auto text = render_reports(run.report, ReportFormat::kTextTable).at("report.txt");
  EXPECT_EQ(text.rfind("== summary ==", 0), 0u);
  for (const char* f : {"report.jsonl", "summary.csv", "report.txt", "timelines.jsonl", "warnings.txt"})
    EXPECT_TRUE(fs::exists(fs::temp_directory_path() / "wiretap_unit_files" / "out" / f)) << f;
}

TEST(Pipeline, ConfigErrors) {
  RunConfig cfg;
  EXPECT_THROW(cfg.validate(), ConfigError);  // no traces
  cfg.traces = {"/nonexistent/trace.jsonl"};
  cfg.validate();
  EXPECT_THROW(load_traces(cfg, nullptr), ConfigError);
  fs::path dir = scratch("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << R"({"window_ms": 500, "colour": "blue"})";
  EXPECT_THROW(apply_config_file(cfg, dir / "bad.json"), ConfigError);
  std::ofstream(dir / "chains.json") << R"({"chains": {"hashes": ["MD5", "Base64"]}})";
  EXPECT_THROW(apply_config_file(cfg, dir / "chains.json"), ConfigError);
  std::ofstream(dir / "depth.json") << R"({"chains": {"max_encode_depth": 3}})";
  EXPECT_THROW(apply_config_file(cfg, dir / "depth.json"), ConfigError);
}

TEST(Pipeline, NoParseableTracesIsUsageError) {
  fs::path dir = scratch("empty");
  fs::create_directories(dir / "traces");
  std::ofstream(dir / "traces" / "a.jsonl") << "not json\n";
  RunConfig cfg;
  cfg.traces = {(dir / "traces").string()};
  EXPECT_THROW(load_traces(cfg, nullptr), ParseError);
  cfg.strict = false;
  std::vector<std::string> warnings;
  EXPECT_THROW(load_traces(cfg, &warnings), UsageError);
  EXPECT_EQ(warnings.size(), 1u);
}

}  // namespace
}  // namespace wiretap

namespace wiretap {
namespace {

TEST(Fixtures, ManifestCheckCatchesTampering) {
  FixtureSet set = make_truth_table();
  auto run = analyze_set(set, scratch("tamper"));
  ASSERT_TRUE(check_manifest(set.manifest, run).empty());

  auto flip = set.manifest;
  ASSERT_EQ(flip.traces[7].verdicts.front().domain, "subject-k1r1e1.test");
  flip.traces[7].verdicts.front().flags.realtime_interception = false;
  EXPECT_FALSE(check_manifest(flip, run).empty());

  auto dropped = set.manifest;
  dropped.traces[7].findings.clear();
  EXPECT_FALSE(check_manifest(dropped, run).empty());

  auto wrong_chain = set.manifest;
  wrong_chain.traces[7].findings[0].chain = parse_chain("MD5");
  EXPECT_FALSE(check_manifest(wrong_chain, run).empty());

  auto summary = set.manifest;
  summary.summary->total_listeners += 1;
  EXPECT_FALSE(check_manifest(summary, run).empty());

  auto extra = set.manifest;
  extra.traces.pop_back();
  EXPECT_FALSE(check_manifest(extra, run).empty());
}

}  // namespace
}  // namespace wiretap
