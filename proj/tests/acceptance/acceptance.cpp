// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wiretap/fixtures.hpp"

using namespace wiretap;
namespace fs = std::filesystem;

namespace {

std::string data_path(const std::string& name) { return std::string(WIRETAP_TEST_DATA) + "/" + name; }

nlohmann::json load_json(const std::string& name) {
  std::ifstream in(data_path(name));
  return nlohmann::json::parse(in);
}

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n, '\0');
  for (auto& c : out) c = static_cast<char>(rng() & 0xFF);
  return out;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 10) problems.push_back(what);
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.check(false, std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "runtime %.2f s over budget %.0f s", secs, budget_s);
    o.check(false, buf);
  }
  char timing[48];
  std::snprintf(timing, sizeof timing, "%.2f s", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << o.detail << "; " << timing;
  if (budget_s > 0) std::cout << " < " << budget_s << " s";
  std::cout << "]\n";
  for (const auto& p : o.problems) std::cout << "      " << p << "\n";
  if (!o.pass) ++failures;
}

std::size_t digest_size(Algorithm a) {
  static const std::map<std::string, std::size_t> sizes = {
      {"MD5", 16},      {"SHA-1", 20},      {"SHA-224", 28},    {"SHA-256", 32},     {"SHA-384", 48},
      {"SHA-512", 64},  {"SHA3-224", 28},   {"SHA3-256", 32},   {"SHA3-384", 48},    {"SHA3-512", 64},
      {"Murmur3-32", 4}, {"Murmur3-64", 8}, {"Murmur3-128", 16}, {"CRC32", 4},       {"Adler-32", 4}};
  return sizes.at(std::string(name_of(a)));
}

void transforms(Outcome& o) {
  constexpr int kCases = 1000;
  std::mt19937_64 rng(20240917);
  std::size_t cases = 0;
  for (Algorithm a : all_algorithms()) {
    std::size_t ok = 0;
    for (int i = 0; i < kCases; ++i) {
      Bytes x = random_bytes(rng, rng() % 513);
      Bytes y = apply_transform(x, a);
      bool good = apply_transform(x, a) == y;
      if (kind_of(a) == TransformKind::kHash) {
        good = good && y.size() == digest_size(a);
        auto r = transform_renderings(x, a);
        good = good && !r.empty() && r[0].bytes == to_hex(y) && r[1].bytes == ascii_upper(to_hex(y));
      } else {
        auto back = invert_transform(y, a);
        good = good && back && *back == x;
      }
      if (good) ++ok;
    }
    cases += kCases;
    o.check(ok == kCases, std::string(name_of(a)) + ": " + std::to_string(ok) + "/" + std::to_string(kCases));
  }

  auto doc = load_json("digest_vectors.json");
  const auto& inputs = doc["inputs_hex"];
  std::size_t vectors = 0, matched = 0;
  std::set<std::string> covered;
  for (const auto& [name, expected] : doc["digests"].items()) {
    Algorithm a = parse_algorithm(name);
    covered.insert(std::string(name_of(a)));
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      ++vectors;
      if (to_hex(apply_transform(from_hex(inputs[i].get<std::string>()), a)) == expected[i].get<std::string>())
        ++matched;
      else
        o.check(false, name + " vector #" + std::to_string(i));
    }
  }
  for (Algorithm a : all_hashes())
    o.check(covered.count(std::string(name_of(a))) && inputs.size() == 10,
            std::string(name_of(a)) + " lacks 10 reference vectors");
  o.check(all_algorithms().size() == 29, "inventory has " + std::to_string(all_algorithms().size()) + " transforms");
  o.detail = std::to_string(all_algorithms().size()) + " transforms x " + std::to_string(kCases) + " cases, digest vectors " +
             std::to_string(matched) + "/" + std::to_string(vectors);
}

void grammar(Outcome& o) {
  ChainConfig full = ChainConfig::full();
  auto chains = enumerate_chains(full);
  std::size_t h = all_hashes().size(), e = all_encodings().size(), c = all_compressors().size();
  std::size_t closed_form = (c + 1) * (h + 1) * (1 + e + e * e);
  o.check(closed_form == 8176, "closed form gives " + std::to_string(closed_form));
  o.check(chains.size() == closed_form, "enumerated " + std::to_string(chains.size()));
  o.check(chain_count(full) == closed_form, "chain_count disagrees");

  std::set<std::string> names;
  std::size_t bad = 0;
  for (const auto& ch : chains) {
    names.insert(chain_name(ch));
    // compressor? hash? encoding{0,2}, in that order
    int stage = 0, encodes = 0;
    bool ok = chain_is_admissible(ch);
    for (Algorithm a : ch.steps) {
      int s = kind_of(a) == TransformKind::kCompress ? 1 : kind_of(a) == TransformKind::kHash ? 2 : 3;
      if (s < stage || (s == stage && s != 3)) ok = false;
      if (s == 3) ++encodes;
      stage = s;
    }
    if (encodes > 2 || parse_chain(chain_name(ch)) != ch) ok = false;
    if (!ok) {
      ++bad;
      o.check(false, "invariant broken by " + chain_name(ch));
    }
  }
  o.check(names.size() == chains.size(), "duplicate chains");
  o.detail = "count " + std::to_string(chains.size()) + " vs closed form " + std::to_string(closed_form) +
             ", invariant violations " + std::to_string(bad);
}

constexpr const char* kToken17 = "example_text_area";

NetworkRecord post(std::string url, Bytes body) {
  NetworkRecord r;
  r.request_url = std::move(url);
  r.method = "POST";
  r.body = std::move(body);
  return r;
}

void recall(Outcome& o) {
  HoneyToken token{"text", kToken17, DataCategory::kFormText, false};
  auto chains = enumerate_chains(ChainConfig::full());
  auto index = FingerprintIndex::build({token}, chains);
  std::size_t detected = 0;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    Bytes payload = apply_chain(token.value, chains[i]);
    auto findings = scan_request(post("https://collector.test/c", payload), i, index);
    bool hit = false;
    for (const auto& f : findings)
      hit |= f.primary && f.token_id == token.token_id && f.explains(chains[i]);
    if (hit)
      ++detected;
    else
      o.check(false, "missed " + chain_name(chains[i]));
  }
  o.check(detected == chains.size(), "");

  // Same grammar through the whole pipeline, one trace per chain.
  FixtureSet sweep = make_chain_sweep(chains);
  fs::path dir = fs::temp_directory_path() / "wiretap_acceptance_sweep";
  fs::remove_all(dir);
  write_fixture_set(sweep, dir);
  RunConfig cfg;
  apply_config_file(cfg, dir / "run.json");
  auto diff = check_manifest(sweep.manifest, run_analyze(cfg));
  for (const auto& d : diff) o.check(false, "sweep: " + d);
  o.detail = std::to_string(detected) + "/" + std::to_string(chains.size()) + " chains in-process, " +
             std::to_string(sweep.traces.size()) + "-trace sweep manifest differences " + std::to_string(diff.size());
}

void precision(Outcome& o) {
  HoneyToken token{"text", kToken17, DataCategory::kFormText, false};
  auto index = FingerprintIndex::build({token}, enumerate_chains(ChainConfig::full()));
  std::mt19937_64 rng(1717);
  std::size_t findings = 0;
  for (int i = 0; i < 10000; ++i) {
    auto f = scan_request(post("https://random.test/", random_bytes(rng, 1024)), 0, index);
    findings += f.size();
    if (!f.empty()) o.check(false, "payload #" + std::to_string(i) + " matched " + chain_name(f[0].chain));
  }
  o.check(findings == 0, "");
  o.detail = "10000 payloads x 1024 bytes, " + std::to_string(index.pattern_count()) + " patterns, " +
             std::to_string(findings) + " findings";
}

void normalization(Outcome& o) {
  HoneyToken mail{"mail", "example.email@domain.com", DataCategory::kMail, false};
  auto index = FingerprintIndex::build({mail}, {parse_chain("identity")});
  struct Case {
    std::string name;
    NetworkRecord req;
    ViewStep step;
  };
  std::vector<Case> cases;
  cases.push_back({"gzip-embedded",
                   post("https://c.test/ingest", codec::gzip_compress(R"({"form":{"email":")" + mail.value + "\"}}")),
                   ViewStep::kGzip});
  NetworkRecord get;
  get.request_url = "https://c.test/p?next=" + codec::url_encode("https://c.test/t?e=" + codec::url_encode(mail.value));
  cases.push_back({"double-url-encoded", get, ViewStep::kUrlDecoded});
  cases.push_back({"base64-segment-embedded",
                   post("https://c.test/b", R"({"v":1,"s":")" +
                                                codec::base64_encode(R"({"fields":[")" + mail.value + "\"]}") + "\"}"),
                   ViewStep::kBase64Segment});
  std::size_t passed = 0;
  for (const auto& c : cases) {
    bool raw_hit = c.req.request_url.find(mail.value) != std::string::npos || c.req.body.find(mail.value) != Bytes::npos;
    bool hit = false;
    for (const auto& f : scan_request(c.req, 0, index)) {
      bool via = std::find(f.derivation.begin(), f.derivation.end(), c.step) != f.derivation.end();
      hit |= f.primary && f.token_id == "mail" && f.chain.empty() && via;
    }
    if (c.name == "double-url-encoded") {
      std::size_t decodes = 0;
      for (const auto& v : normalize_payload(c.req))
        if (v.bytes.find(mail.value) != Bytes::npos)
          decodes = std::max<std::size_t>(decodes, std::count(v.derivation.begin(), v.derivation.end(),
                                                              ViewStep::kUrlDecoded));
      hit = hit && decodes >= 2;
    }
    if (hit && !raw_hit)
      ++passed;
    else
      o.check(false, c.name + " not detected through a payload view");
  }
  o.detail = std::to_string(passed) + "/3 fixture classes";
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("wiretap_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

AnalysisRun analyze(const fs::path& dir, std::size_t parallelism, const std::string& out = "out") {
  RunConfig cfg;
  apply_config_file(cfg, dir / "run.json");
  cfg.parallelism = parallelism;
  cfg.output_dir = (dir / out).string();
  return run_analyze(cfg);
}

void truth_table(Outcome& o) {
  FixtureSet set = make_truth_table();
  fs::path dir = scratch("truth");
  write_fixture_set(set, dir);
  AnalysisRun run = analyze(dir, 1);
  for (const auto& d : check_manifest(set.manifest, run)) o.check(false, "manifest: " + d);

  std::size_t wiretappers = 0;
  const WiretapVerdict* subject = nullptr;
  std::size_t subject_trace = 0;
  for (std::size_t t = 0; t < run.report.traces.size(); ++t)
    for (const auto& v : run.report.traces[t].verdicts)
      if (v.wiretapper) {
        ++wiretappers;
        subject = &v;
        subject_trace = t;
      }
  o.check(wiretappers == 1, "wiretappers: " + std::to_string(wiretappers));
  if (!subject) return;

  // Re-derive the verdict with each evidence slice removed.
  RunConfig cfg;
  apply_config_file(cfg, dir / "run.json");
  Knowledge k = Knowledge::load(cfg);
  const CrawlTrace& trace = set.traces[subject_trace].second;
  auto idx = FingerprintIndex::build(trace.honey_tokens, enumerate_chains(set.manifest.chains));
  auto findings = detect_leaks(trace, idx);
  auto ctx = k.context();
  Evidence full = collect_evidence(subject->script_domain, trace, findings, ctx);
  auto base = verdict_from_evidence(subject->script_domain, trace, findings, ctx, full);
  o.check(base.wiretapper && base.flags.all(), "re-derived verdict is not a wiretapper");

  int flipped = 0;
  for (int slice = 0; slice < 3; ++slice) {
    Evidence e = full;
    if (slice == 0) e.listener_ids.clear();
    if (slice == 1) e.invocations.clear();
    if (slice == 2) e.findings.clear();
    auto v = verdict_from_evidence(subject->script_domain, trace, findings, ctx, e);
    std::array<bool, 3> want = {slice != 0, slice != 1, slice != 2};
    std::array<bool, 3> got = {v.flags.installed_key_listener, v.flags.realtime_interception,
                               v.flags.third_party_exfiltration};
    if (got == want && !v.wiretapper)
      ++flipped;
    else
      o.check(false, "ablation " + std::to_string(slice) + " changed other flags");
  }
  o.detail = std::to_string(run.report.traces.size()) + " sites, " + std::to_string(wiretappers) +
             " wiretapper (" + subject->script_domain + "), ablations " + std::to_string(flipped) + "/3";
}

void attribution(Outcome& o) {
  auto psl = PublicSuffixList::load(data_path("public_suffix_list.dat"));
  std::ifstream in(data_path("test_psl.txt"));
  std::regex call(R"(^checkPublicSuffix\((null|'([^']*)'),\s*(null|'([^']*)')\);)");
  std::string line;
  std::size_t vectors = 0, ok = 0;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_search(line, m, call)) continue;
    ++vectors;
    bool good;
    if (m[1] == "null") {
      try {
        psl.registrable_domain("");
        good = false;
      } catch (const std::invalid_argument&) {
        good = true;
      }
    } else {
      auto got = psl.registrable_domain(m[2].str());
      good = m[3] == "null" ? !got.has_value() : (got && *got == m[4].str());
    }
    if (good)
      ++ok;
    else
      o.check(false, line);
  }
  o.check(vectors > 0 && ok == vectors, "");

  auto doc = load_json("filter_fixture.json");
  FilterRuleSet rules;
  std::stringstream list;
  for (const auto& r : doc["rules"]) list << r.get<std::string>() << "\n";
  rules.add_list(list);
  o.check(rules.rules().size() == 20 && doc["cases"].size() == 40, "filter fixture is not 20 rules x 40 URLs");
  std::size_t agree = 0;
  for (const auto& c : doc["cases"]) {
    bool got = is_known_tracker_url(c["url"].get<std::string>(), c["page_host"].get<std::string>(), rules, psl).blocked;
    if (got == c["blocked"].get<bool>())
      ++agree;
    else
      o.check(false, c["url"].get<std::string>() + " on " + c["page_host"].get<std::string>());
  }
  o.check(agree == doc["cases"].size(), "");
  o.detail = "suffix vectors " + std::to_string(ok) + "/" + std::to_string(vectors) + ", filter verdicts " +
             std::to_string(agree) + "/" + std::to_string(doc["cases"].size());
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[fs::relative(e.path(), root).string()] = ss.str();
  }
  return out;
}

void corpus(Outcome& o) {
  FixtureSet set = make_corpus50();
  fs::path dir = scratch("corpus50");
  write_fixture_set(set, dir);
  std::size_t n = std::max<std::size_t>(4, std::thread::hardware_concurrency());
  AnalysisRun a = analyze(dir, 1, "run-a");
  AnalysisRun b = analyze(dir, 1, "run-b");
  AnalysisRun c = analyze(dir, n, "run-n");
  auto diff = check_manifest(set.manifest, a);
  for (const auto& d : diff) o.check(false, "manifest: " + d);
  auto ta = read_tree(dir / "run-a"), tb = read_tree(dir / "run-b"), tc = read_tree(dir / "run-n");
  o.check(ta.size() >= 9, "only " + std::to_string(ta.size()) + " report files");
  o.check(ta == tb, "two runs differ");
  o.check(ta == tc, "parallelism 1 and " + std::to_string(n) + " differ");
  const auto& s = a.report.summary;
  o.detail = std::to_string(s.site_count) + " sites, " + std::to_string(s.sites_with_wiretapper) +
             " with a wiretapper, manifest differences " + std::to_string(diff.size()) + ", " +
             std::to_string(ta.size()) + " files identical across 2 runs and -j 1/" + std::to_string(n);
}

// A key logger on shop.test beacons one typed value to its own collector.
CrawlTrace leak_one(const HoneyToken& token, FieldKind field) {
  CrawlTrace t;
  t.page_url = "https://www.shop.test/";
  t.visit_start = 1000;
  t.honey_tokens.push_back(token);
  t.listener_events.push_back({ListenerKind::kRegister, "keydown", "document", "https://cdn.keys.test/k.js", {}, 1100, "L1"});
  t.interactions.push_back({InteractionKind::kFormFill, field, token.token_id, 2000, 2600});
  t.invocations.push_back({"L1", "keydown", 2100, "https://cdn.keys.test/k.js", std::nullopt});
  NetworkRecord r;
  r.request_url = "https://collect.keys.test/k?v=" + codec::url_encode(token.value);
  r.timestamp = 2700;
  r.initiator_script = "https://cdn.keys.test/k.js";
  t.requests.push_back(r);
  validate_trace(t);
  return t;
}

void data_categories(Outcome& o) {
  std::istringstream psl_text("test\n");
  auto psl = PublicSuffixList::parse(psl_text);
  EntityMap entities;
  AttributionContext ctx{&psl, &entities, nullptr};
  struct Example {
    std::string value;
    FieldKind field;
    DataCategory category;
  };
  std::vector<Example> examples = {{"example.email@domain.com", FieldKind::kEmail, DataCategory::kMail},
                                   {"098765432109", FieldKind::kPhone, DataCategory::kPhone},
                                   {"example_text_area", FieldKind::kText, DataCategory::kFormText}};
  std::string mapped;
  std::size_t ok = 0;
  for (const auto& ex : examples) {
    HoneyToken token{"typed", ex.value, ex.category, false};
    CrawlTrace t = leak_one(token, ex.field);
    auto idx = FingerprintIndex::build(t.honey_tokens, {parse_chain("identity")});
    auto verdicts = classify_trace(t, detect_leaks(t, idx), ctx);
    std::vector<DataCategory> got;
    for (const auto& v : verdicts)
      if (v.script_domain == "keys.test" && v.wiretapper) got = v.data_categories_shared;
    if (got == std::vector<DataCategory>{ex.category} && categorize_data(token) == ex.category)
      ++ok;
    else
      o.check(false, ex.value + " did not map to " + std::string(to_string(ex.category)));
    if (!mapped.empty()) mapped += ", ";
    mapped += ex.value + " -> " + (got.empty() ? std::string("none") : std::string(to_string(got[0])));
  }
  o.detail = mapped;
}

}  // namespace

int main() {
  std::cout << std::unitbuf;
  criterion("transform determinism and inverses", 30, transforms);
  criterion("chain grammar", 5, grammar);
  criterion("detector recall", 60, recall);
  criterion("detector precision", 0, precision);
  criterion("payload normalization", 0, normalization);
  criterion("classifier truth table", 0, truth_table);
  criterion("attribution", 0, attribution);
  criterion("corpus statistics", 0, corpus);
  criterion("data categories", 0, data_categories);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
