#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wiretap/pipeline.hpp"

namespace wiretap {

// A leak the generator planted: some finding on (request, token, origin)
// must explain `chain`, and that key must carry a primary finding.
struct ExpectedFinding {
  std::size_t request_index = 0;
  std::string token_id;
  ViewOrigin origin = ViewOrigin::kUrl;
  TransformChain chain;

  bool operator==(const ExpectedFinding&) const = default;
};

struct ExpectedVerdict {
  std::string domain;
  CriteriaFlags flags;
  bool wiretapper = false;
  std::vector<std::string> key_events_used;
  std::vector<DataCategory> data_categories_shared;
  bool known_tracker = false;

  bool operator==(const ExpectedVerdict&) const = default;
};

struct ExpectedTrace {
  std::string file;
  std::string page_url;
  std::vector<ExpectedFinding> findings;
  std::vector<ExpectedVerdict> verdicts;  // every candidate domain, sorted by domain
};

struct FixtureManifest {
  std::string preset;
  std::uint64_t seed = 0;
  ChainConfig chains;
  std::vector<ExpectedTrace> traces;
  std::optional<CorpusSummary> summary;
  std::vector<TimelineSeries> timelines;

  nlohmann::ordered_json to_json() const;
  static FixtureManifest from_json(const nlohmann::json& j);
  static FixtureManifest load(const std::filesystem::path& path);
};

struct FixtureSet {
  std::vector<std::pair<std::string, CrawlTrace>> traces;  // file name, trace
  std::string psl_text;
  std::string entities_json;
  std::string filters_text;
  FixtureManifest manifest;
};

inline constexpr std::uint64_t kDefaultFixtureSeed = 20240917;

// Eight sites, one subject domain each, covering every combination of the
// three criteria. Exactly one subject is a wiretapper.
FixtureSet make_truth_table(std::uint64_t seed = kDefaultFixtureSeed);

// Fifty sites with a seeded mix of first- and third-party scripts, listeners,
// typing-time invocations and leaks. The manifest carries the summary the
// plan implies, computed from the plan alone.
FixtureSet make_corpus50(std::uint64_t seed = kDefaultFixtureSeed);

// One site per chain, the same token leaked through that chain in a request
// body. Throws ConfigError for an inadmissible chain.
FixtureSet make_chain_sweep(const std::vector<TransformChain>& chains, std::uint64_t seed = kDefaultFixtureSeed);

// One site with typing bursts, interleaved invocations and periodic shares.
FixtureSet make_timeline_fixture(std::uint64_t seed = kDefaultFixtureSeed);

// Known preset names: truth-table, corpus50, chain-sweep, timeline.
const std::vector<std::string>& fixture_presets();
FixtureSet make_fixture(std::string_view preset, std::uint64_t seed, const std::vector<TransformChain>* sweep_chains);

// Writes traces/, psl.dat, entities.json, filters.txt, manifest.json and a
// run.json config pointing analyze at them with output under out/.
void write_fixture_set(const FixtureSet& set, const std::filesystem::path& dir);

// Differences between a manifest and an analysis run; empty when they agree.
std::vector<std::string> check_manifest(const FixtureManifest& manifest, const AnalysisRun& run);

}  // namespace wiretap
