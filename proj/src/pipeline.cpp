#include "wiretap/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace wiretap {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

void RunConfig::validate() const {
  if (traces.empty()) throw ConfigError("no trace paths given");
  chains.validate();
  if (window_ms < 0) throw ConfigError("window must not be negative");
  if (min_pattern_len == 0) throw ConfigError("minimum pattern length must be positive");
  if (formats.empty()) throw ConfigError("no report format selected");
  if (output_dir.empty()) throw ConfigError("no output directory");
}

namespace {

std::vector<Algorithm> algorithms_from(const json& j, std::span<const Algorithm> all, TransformKind kind,
                                       std::string_view what) {
  if (j.is_string() && ascii_lower(j.get<std::string>()) == "all") return {all.begin(), all.end()};
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of names or \"all\"");
  std::vector<Algorithm> out;
  for (const auto& name : j) {
    if (!name.is_string()) throw ConfigError(std::string(what) + " lists a non-string");
    Algorithm a = parse_algorithm(name.get<std::string>());
    if (kind_of(a) != kind) throw ConfigError(name.get<std::string>() + " is not listed under its kind");
    out.push_back(a);
  }
  return out;
}

}  // namespace

ChainConfig chain_config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("chain config must be an object");
  ChainConfig c = ChainConfig::full();
  if (j.contains("hashes")) c.hashes = algorithms_from(j["hashes"], all_hashes(), TransformKind::kHash, "hashes");
  if (j.contains("encodings"))
    c.encodings = algorithms_from(j["encodings"], all_encodings(), TransformKind::kEncode, "encodings");
  if (j.contains("compressors"))
    c.compressors = algorithms_from(j["compressors"], all_compressors(), TransformKind::kCompress, "compressors");
  if (j.contains("max_encode_depth")) {
    if (!j["max_encode_depth"].is_number_integer()) throw ConfigError("max_encode_depth must be an integer");
    c.max_encode_depth = j["max_encode_depth"].get<int>();
  }
  c.validate();
  return c;
}

ordered_json to_json(const ChainConfig& c) {
  auto names = [](const std::vector<Algorithm>& v) {
    std::vector<std::string> out;
    for (auto a : v) out.emplace_back(name_of(a));
    return out;
  };
  ordered_json j;
  j["hashes"] = names(c.hashes);
  j["encodings"] = names(c.encodings);
  j["compressors"] = names(c.compressors);
  j["max_encode_depth"] = c.max_encode_depth;
  return j;
}

void apply_config_file(RunConfig& config, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("config file is not a JSON object: " + path.string());
  const fs::path base = path.parent_path();
  auto resolve = [&](const json& v, std::string_view key) {
    if (!v.is_string()) throw ConfigError(std::string(key) + " must be a string");
    fs::path p = v.get<std::string>();
    return (p.is_relative() && !base.empty() ? base / p : p).string();
  };
  auto resolve_list = [&](const json& v, std::string_view key) {
    std::vector<std::string> out;
    if (v.is_string()) {
      out.push_back(resolve(v, key));
      return out;
    }
    if (!v.is_array()) throw ConfigError(std::string(key) + " must be a string or an array");
    for (const auto& e : v) out.push_back(resolve(e, key));
    return out;
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "traces") config.traces = resolve_list(v, key);
      else if (key == "psl") config.psl = resolve(v, key);
      else if (key == "entities") config.entities = resolve(v, key);
      else if (key == "filters") config.filters = resolve_list(v, key);
      else if (key == "chains") config.chains = chain_config_from_json(v);
      else if (key == "window_ms") config.window_ms = v.get<TimestampMs>();
      else if (key == "min_pattern_len") config.min_pattern_len = v.get<std::size_t>();
      else if (key == "output_dir") config.output_dir = resolve(v, key);
      else if (key == "formats") {
        config.formats.clear();
        for (const auto& f : v) config.formats.push_back(parse_report_format(f.get<std::string>()));
      } else if (key == "parallelism") config.parallelism = v.get<std::size_t>();
      else if (key == "strict") config.strict = v.get<bool>();
      else if (key == "audit") config.audit = v.get<bool>();
      else if (key == "timelines") config.timelines = v.get<bool>();
      else throw ConfigError("unknown config key: " + key);
    }
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Knowledge Knowledge::load(const RunConfig& config) {
  Knowledge k;
  if (!config.psl.empty()) k.psl = PublicSuffixList::load(config.psl);
  if (!config.entities.empty()) k.entities = EntityMap::load(config.entities, k.psl);
  for (const auto& f : config.filters) k.rules.add_file(f);
  return k;
}

std::vector<LoadedTrace> load_traces(const RunConfig& config, std::vector<std::string>* warnings) {
  std::vector<fs::path> files;
  for (const auto& p : config.traces) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        auto ext = entry.path().extension().string();
        if (entry.is_regular_file() && (ext == ".jsonl" || ext == ".ndjson" || ext == ".trace"))
          found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p, ec)) {
      files.emplace_back(p);
    } else {
      throw ConfigError("trace path does not exist: " + p);
    }
  }

  std::vector<LoadedTrace> out;
  ParseOptions options;
  options.strict = config.strict;
  for (const auto& f : files) {
    try {
      ParseStats stats;
      CrawlTrace t = parse_trace_file(f.string(), &stats, options);
      if (warnings)
        for (const auto& [line, reason] : stats.rejected)
          warnings->push_back(f.filename().string() + ": rejected line " + std::to_string(line) + ": " + reason);
      out.push_back({f.filename().string(), std::move(t)});
    } catch (const ParseError& e) {
      if (config.strict) throw ParseError(e.line(), f.string() + ": " + e.what());
      if (warnings) warnings->push_back(f.filename().string() + ": skipped: " + e.what());
    } catch (const IntegrityError& e) {
      if (config.strict) throw IntegrityError(f.string() + ": " + e.what());
      if (warnings) warnings->push_back(f.filename().string() + ": skipped: " + e.what());
    }
  }
  if (out.empty()) throw UsageError("no parseable traces");
  return out;
}

namespace {

std::string token_set_key(const std::vector<HoneyToken>& tokens) {
  std::vector<std::string> parts;
  for (const auto& t : tokens)
    parts.push_back(t.token_id + '\x1f' + t.value + '\x1f' + std::string(to_string(t.category)));
  std::sort(parts.begin(), parts.end());
  std::string key;
  for (const auto& p : parts) key += p + '\x1e';
  return key;
}

// Builds each distinct index once and drops it after its last user.
class IndexCache {
 public:
  IndexCache(const std::vector<std::string>& keys, std::vector<TransformChain> chains, IndexConfig config)
      : chains_(std::move(chains)), config_(config) {
    for (const auto& k : keys) ++slots_[k].users;
  }

  std::shared_ptr<const FingerprintIndex> acquire(const std::string& key, const std::vector<HoneyToken>& tokens) {
    std::shared_future<std::shared_ptr<const FingerprintIndex>> fut;
    std::promise<std::shared_ptr<const FingerprintIndex>> promise;
    bool builder = false;
    {
      std::lock_guard lock(mu_);
      Slot& s = slots_.at(key);
      if (!s.future.valid()) {
        s.future = promise.get_future().share();
        builder = true;
        ++builds_;
      }
      fut = s.future;
    }
    if (builder) {
      try {
        promise.set_value(std::make_shared<const FingerprintIndex>(FingerprintIndex::build(tokens, chains_, config_)));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    return fut.get();
  }

  void release(const std::string& key) {
    std::lock_guard lock(mu_);
    Slot& s = slots_.at(key);
    if (--s.users == 0) s.future = {};
  }

  std::size_t builds() const { return builds_; }

 private:
  struct Slot {
    std::size_t users = 0;
    std::shared_future<std::shared_ptr<const FingerprintIndex>> future;
  };
  std::vector<TransformChain> chains_;
  IndexConfig config_;
  std::mutex mu_;
  std::map<std::string, Slot> slots_;
  std::size_t builds_ = 0;
};

struct TraceOutcome {
  std::vector<LeakFinding> findings;
  std::vector<WiretapVerdict> verdicts;
  std::vector<TimelineSeries> timelines;
  std::vector<std::string> warnings;
  std::optional<std::string> audit;
};

}  // namespace

AnalysisRun analyze_traces(std::vector<LoadedTrace> loaded, const Knowledge& knowledge, const RunConfig& config) {
  config.validate();
  std::vector<std::string> sources;
  std::vector<CrawlTrace> traces;
  for (auto& l : loaded) {
    sources.push_back(std::move(l.source));
    traces.push_back(std::move(l.trace));
  }
  CorpusView corpus = merge_traces(std::move(traces), knowledge.psl);
  const auto& all = corpus.traces();
  const AttributionContext ctx = knowledge.context();

  std::vector<std::string> keys;
  for (const auto& t : all) keys.push_back(token_set_key(t.honey_tokens));
  IndexConfig icfg;
  icfg.min_pattern_len = config.min_pattern_len;
  IndexCache cache(keys, enumerate_chains(config.chains), icfg);
  ClassifierOptions copts;
  copts.window_ms = config.window_ms;

  std::vector<TraceOutcome> outcomes(all.size());
  std::vector<bool> audit_here(all.size(), false);
  {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < all.size(); ++i) audit_here[i] = config.audit && seen.insert(keys[i]).second;
  }
  auto work = [&](std::size_t i) {
    const CrawlTrace& trace = all[i];
    TraceOutcome& out = outcomes[i];
    auto index = cache.acquire(keys[i], trace.honey_tokens);
    if (audit_here[i]) {
      std::ostringstream tsv;
      index->write_audit(tsv);
      out.audit = tsv.str();
    }
    out.findings = detect_leaks(trace, *index, &out.warnings);
    index.reset();
    cache.release(keys[i]);
    out.verdicts = classify_trace(trace, out.findings, ctx, copts);
    if (config.timelines)
      for (const auto& v : out.verdicts)
        if (v.wiretapper) out.timelines.push_back(emit_timeline(trace, v.script_domain, out.findings, ctx));
    for (auto& w : out.warnings) w = sources[i] + ": " + w;
  };

  std::size_t workers = config.parallelism == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                                 : config.parallelism;
  workers = std::min(workers, all.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < all.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < all.size();) {
          try {
            work(i);
          } catch (...) {
            std::lock_guard lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  AnalysisRun run;
  std::vector<std::vector<WiretapVerdict>> verdicts;
  for (std::size_t i = 0; i < all.size(); ++i) {
    TraceReport tr;
    tr.source = sources[i];
    tr.page_url = all[i].page_url;
    tr.site = corpus.sites()[corpus.site_of_trace(i)].domain;
    tr.findings = std::move(outcomes[i].findings);
    tr.verdicts = outcomes[i].verdicts;
    verdicts.push_back(std::move(outcomes[i].verdicts));
    run.report.traces.push_back(std::move(tr));
    for (auto& t : outcomes[i].timelines) run.timelines.push_back(std::move(t));
    for (auto& w : outcomes[i].warnings) run.warnings.push_back(std::move(w));
    if (outcomes[i].audit) run.audits.push_back(std::move(*outcomes[i].audit));
  }
  run.report.summary = corpus_summary(corpus, verdicts, ctx);
  run.index_builds = cache.builds();
  return run;
}

AnalysisRun run_analyze(const RunConfig& config) {
  config.validate();
  Knowledge knowledge = Knowledge::load(config);
  std::vector<std::string> load_warnings;
  auto traces = load_traces(config, &load_warnings);

  AnalysisRun run = analyze_traces(std::move(traces), knowledge, config);
  run.warnings.insert(run.warnings.begin(), load_warnings.begin(), load_warnings.end());

  const fs::path dir = config.output_dir;
  for (auto f : config.formats) emit_reports(run.report, f, dir);
  ReportFiles extra;
  if (config.timelines) {
    std::string lines;
    for (const auto& t : run.timelines) lines += to_json(t).dump() + '\n';
    extra["timelines.jsonl"] = lines;
  }
  for (std::size_t i = 0; i < run.audits.size(); ++i)
    extra["fingerprints-" + std::to_string(i + 1) + ".tsv"] = run.audits[i];
  std::string warn;
  for (const auto& w : run.warnings) warn += w + '\n';
  extra["warnings.txt"] = warn;
  write_files(extra, dir);
  return run;
}

}  // namespace wiretap
