#include "wiretap/fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace wiretap {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  bool chance(unsigned permille) { return gen_() % 1000 < permille; }
  std::string hex(std::size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += digits[gen_() % 16];
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

std::string two_digits(std::size_t n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02zu", n);
  return buf;
}

Bytes render(std::string_view value, std::string_view chain) { return apply_chain(value, parse_chain(chain)); }

// Accumulates records in any order and hands back a trace sorted the way
// the parser would sort it.
class SiteBuilder {
 public:
  SiteBuilder(std::string page_url, TimestampMs t0, std::int64_t rank) {
    trace_.page_url = std::move(page_url);
    trace_.visit_start = t0;
    trace_.site_rank = rank;
  }

  TimestampMs at(TimestampMs dt) const { return trace_.visit_start + dt; }

  void token(std::string id, std::string value, DataCategory category, bool unique) {
    trace_.honey_tokens.push_back({std::move(id), std::move(value), category, unique});
  }

  std::string listen(const std::string& script, const std::string& event, TimestampMs dt,
                     std::string target = "document") {
    std::string id = "L" + std::to_string(++listeners_);
    ListenerEvent e;
    e.kind = ListenerKind::kRegister;
    e.event_type = event;
    e.target_descriptor = std::move(target);
    e.script_url = script;
    e.stack = {script + ":1:" + std::to_string(100 + listeners_)};
    e.timestamp = at(dt);
    e.listener_id = id;
    trace_.listener_events.push_back(std::move(e));
    return id;
  }

  void unlisten(const std::string& id, const std::string& script, const std::string& event, TimestampMs dt) {
    ListenerEvent e;
    e.kind = ListenerKind::kRemove;
    e.event_type = event;
    e.target_descriptor = "document";
    e.script_url = script;
    e.timestamp = at(dt);
    e.listener_id = id;
    trace_.listener_events.push_back(std::move(e));
  }

  void invoke(const std::string& id, const std::string& event, TimestampMs dt, const std::string& owner) {
    trace_.invocations.push_back({id, event, at(dt), owner, std::nullopt});
  }

  void interact(InteractionKind kind, std::optional<FieldKind> field, std::optional<std::string> token,
                TimestampMs start, TimestampMs end) {
    trace_.interactions.push_back({kind, field, std::move(token), at(start), at(end)});
  }

  std::size_t request(std::string url, std::string method, Bytes body, TimestampMs dt,
                      std::optional<std::string> initiator,
                      std::vector<std::pair<std::string, std::string>> headers = {}) {
    NetworkRecord r;
    r.request_url = std::move(url);
    r.method = std::move(method);
    r.headers = std::move(headers);
    r.body = std::move(body);
    r.timestamp = at(dt);
    if (initiator) {
      r.initiator_script = *initiator;
      r.initiator_stack = std::vector<std::string>{*initiator + ":1:1"};
    }
    trace_.requests.push_back(std::move(r));
    return trace_.requests.size() - 1;
  }

  void expect(std::size_t handle, std::string token_id, ViewOrigin origin, std::string_view chain) {
    pending_.push_back({handle, std::move(token_id), origin, parse_chain(chain)});
  }

  std::pair<CrawlTrace, std::vector<ExpectedFinding>> finish() {
    auto by_time = [](auto& list, auto key) {
      std::stable_sort(list.begin(), list.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    };
    by_time(trace_.listener_events, [](const auto& e) { return e.timestamp; });
    by_time(trace_.invocations, [](const auto& e) { return e.timestamp; });
    by_time(trace_.interactions, [](const auto& e) { return e.timestamp_start; });

    std::vector<std::size_t> order(trace_.requests.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return trace_.requests[a].timestamp < trace_.requests[b].timestamp;
    });
    std::vector<std::size_t> position(order.size());
    std::vector<NetworkRecord> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
      position[order[i]] = i;
      sorted.push_back(std::move(trace_.requests[order[i]]));
    }
    trace_.requests = std::move(sorted);
    for (auto& f : pending_) f.request_index = position[f.request_index];
    std::sort(pending_.begin(), pending_.end(), [](const ExpectedFinding& a, const ExpectedFinding& b) {
      return std::tie(a.request_index, a.token_id, a.origin) < std::tie(b.request_index, b.token_id, b.origin);
    });
    validate_trace(trace_);
    return {trace_, pending_};
  }

 private:
  CrawlTrace trace_;
  std::size_t listeners_ = 0;
  std::vector<ExpectedFinding> pending_;
};

// What the generator put on a site, per script domain. `typing` lists key
// events of handlers the domain owns that fire while the user types;
// `shared` the token categories it sends to third-party hosts.
struct ScriptPlan {
  std::string domain;
  std::string script_url;
  bool third_party = true;
  std::vector<std::string> events;
  std::vector<std::string> typing;
  std::set<DataCategory> shared;
  bool tracker = false;
};

struct SitePlan {
  std::string domain;
  std::vector<ScriptPlan> scripts;
};

bool key_event(const std::string& e) { return e == "keydown" || e == "keyup" || e == "keypress"; }

ExpectedVerdict verdict_of(const ScriptPlan& p) {
  ExpectedVerdict v;
  v.domain = p.domain;
  v.flags.installed_key_listener = std::any_of(p.events.begin(), p.events.end(), key_event);
  v.flags.realtime_interception = !p.typing.empty();
  v.flags.third_party_exfiltration = !p.shared.empty();
  v.wiretapper = v.flags.installed_key_listener && v.flags.realtime_interception && v.flags.third_party_exfiltration;
  for (const char* e : {"keydown", "keyup", "keypress"})
    if (std::find(p.typing.begin(), p.typing.end(), e) != p.typing.end()) v.key_events_used.push_back(e);
  for (DataCategory c : all_data_categories())
    if (p.shared.count(c)) v.data_categories_shared.push_back(c);
  v.known_tracker = p.tracker;
  return v;
}

// Several scripts of one domain on a site fold into one verdict.
std::vector<ExpectedVerdict> verdicts_of(const SitePlan& site) {
  std::map<std::string, ScriptPlan> merged;
  for (const auto& s : site.scripts) {
    auto [it, fresh] = merged.emplace(s.domain, s);
    if (fresh) continue;
    auto& m = it->second;
    m.events.insert(m.events.end(), s.events.begin(), s.events.end());
    m.typing.insert(m.typing.end(), s.typing.begin(), s.typing.end());
    m.shared.insert(s.shared.begin(), s.shared.end());
    m.tracker = m.tracker || s.tracker;
  }
  std::vector<ExpectedVerdict> out;
  for (const auto& [d, p] : merged) out.push_back(verdict_of(p));
  return out;
}

double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string file_name(const std::string& url) { return url.substr(url.find_last_of('/') + 1); }

std::vector<std::string> ranked(const std::map<std::string, std::size_t>& counts) {
  std::vector<std::pair<std::string, std::size_t>> v(counts.begin(), counts.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size() && i < 3; ++i) out.push_back(v[i].first);
  return out;
}

// The corpus summary implied by the plan. Sites are one trace each and are
// ordered by domain, as the corpus view orders them.
CorpusSummary summary_of(const std::vector<SitePlan>& sites) {
  const std::size_t n = sites.size();
  CorpusSummary s;
  s.site_count = n;
  s.trace_count = n;
  std::map<std::string, std::set<std::string>> event_sites, wiretap_event_sites;
  std::map<DataCategory, std::set<std::string>> category_sites;
  struct Dom {
    std::set<std::string> listener, key, wiretap;
    std::map<std::string, std::size_t> events, scripts;
    std::set<DataCategory> categories;
    bool tracker = false;
  };
  std::map<std::string, Dom> doms;

  for (const auto& site : sites) {
    std::size_t listeners = 0;
    bool key = false;
    for (const auto& p : site.scripts) {
      listeners += p.events.size();
      if (p.third_party) s.third_party_listeners += p.events.size();
      auto& d = doms[p.domain];
      d.tracker = d.tracker || p.tracker;
      for (const auto& e : p.events) {
        event_sites[e].insert(site.domain);
        d.listener.insert(site.domain);
        ++d.events[e];
        ++d.scripts[file_name(p.script_url)];
        if (key_event(e)) {
          key = true;
          d.key.insert(site.domain);
        }
      }
    }
    std::size_t wiretappers = 0;
    for (const auto& v : verdicts_of(site)) {
      doms[v.domain];
      if (!v.wiretapper) continue;
      ++wiretappers;
      doms[v.domain].wiretap.insert(site.domain);
      doms[v.domain].categories.insert(v.data_categories_shared.begin(), v.data_categories_shared.end());
      for (const auto& e : v.key_events_used) wiretap_event_sites[e].insert(site.domain);
      for (auto c : v.data_categories_shared) category_sites[c].insert(site.domain);
    }
    s.total_listeners += listeners;
    if (listeners) ++s.sites_with_listener;
    if (key) ++s.sites_with_key_listener;
    if (wiretappers) ++s.sites_with_wiretapper;
    s.wiretapper_site_pairs += wiretappers;
  }
  s.pct_sites_with_listener = percent(s.sites_with_listener, n);
  s.mean_listeners_per_site = static_cast<double>(s.total_listeners) / static_cast<double>(n);
  s.pct_third_party_listeners = percent(s.third_party_listeners, s.total_listeners);
  s.pct_sites_with_key_listener = percent(s.sites_with_key_listener, n);
  s.pct_sites_with_wiretapper = percent(s.sites_with_wiretapper, n);
  s.mean_wiretappers_per_site = static_cast<double>(s.wiretapper_site_pairs) / static_cast<double>(n);
  s.mean_wiretappers_per_flagged_site =
      s.sites_with_wiretapper ? static_cast<double>(s.wiretapper_site_pairs) / static_cast<double>(s.sites_with_wiretapper)
                              : 0.0;

  for (const auto& [e, set] : event_sites) s.event_types.push_back({e, set.size(), percent(set.size(), n)});
  std::sort(s.event_types.begin(), s.event_types.end(), [](const auto& a, const auto& b) {
    return a.sites != b.sites ? a.sites > b.sites : a.event_type < b.event_type;
  });
  for (const char* e : {"keydown", "keyup", "keypress"}) {
    std::size_t l = event_sites.count(e) ? event_sites[e].size() : 0;
    std::size_t w = wiretap_event_sites.count(e) ? wiretap_event_sites[e].size() : 0;
    s.key_events.push_back({e, l, percent(l, n), w, percent(w, n)});
  }
  for (DataCategory c : all_data_categories()) {
    std::size_t k = category_sites.count(c) ? category_sites[c].size() : 0;
    s.data_categories.push_back({c, k, percent(k, n)});
  }
  for (const auto& [name, d] : doms) {
    DomainRow r;
    r.domain = name;
    r.known_tracker = d.tracker;
    r.sites_listener = d.listener.size();
    r.pct_sites_listener = percent(r.sites_listener, n);
    r.sites_key_listener = d.key.size();
    r.pct_sites_key_listener = percent(r.sites_key_listener, n);
    r.sites_wiretapper = d.wiretap.size();
    r.pct_sites_wiretapper = percent(r.sites_wiretapper, n);
    r.top_events = ranked(d.events);
    r.scripts = ranked(d.scripts);
    for (DataCategory c : all_data_categories())
      if (d.categories.count(c)) r.data_categories.push_back(c);
    s.domains.push_back(std::move(r));
  }
  std::sort(s.domains.begin(), s.domains.end(), [](const DomainRow& a, const DomainRow& b) {
    if (a.sites_wiretapper != b.sites_wiretapper) return a.sites_wiretapper > b.sites_wiretapper;
    if (a.sites_key_listener != b.sites_key_listener) return a.sites_key_listener > b.sites_key_listener;
    if (a.sites_listener != b.sites_listener) return a.sites_listener > b.sites_listener;
    return a.domain < b.domain;
  });
  return s;
}

// Keystroke-bearing intervals shared by every generated site, relative to
// visit start: nav, email, phone, password, textarea, body, url.
struct Interval {
  TimestampMs start, end;
};
const std::vector<Interval>& typing_intervals() {
  static const std::vector<Interval> v = {{3000, 3400}, {4000, 4800},  {5500, 6200},  {6800, 7400},
                                          {8000, 9500}, {10000, 10400}, {10600, 11000}};
  return v;
}

void add_standard_interactions(SiteBuilder& b) {
  const auto& t = typing_intervals();
  b.interact(InteractionKind::kMouseMove, std::nullopt, std::nullopt, 2000, 2600);
  b.interact(InteractionKind::kNavKey, std::nullopt, std::nullopt, t[0].start, t[0].end);
  b.interact(InteractionKind::kFormFill, FieldKind::kEmail, "mail", t[1].start, t[1].end);
  b.interact(InteractionKind::kFormFill, FieldKind::kPhone, "phone", t[2].start, t[2].end);
  b.interact(InteractionKind::kFormFill, FieldKind::kPassword, "password", t[3].start, t[3].end);
  b.interact(InteractionKind::kTextareaFill, FieldKind::kText, "text", t[4].start, t[4].end);
  b.interact(InteractionKind::kBodyKeystrokes, std::nullopt, std::nullopt, t[5].start, t[5].end);
  b.interact(InteractionKind::kFormFill, FieldKind::kUrl, "url", t[6].start, t[6].end);
}

void add_standard_tokens(SiteBuilder& b, const std::string& mail) {
  b.token("mail", mail, DataCategory::kMail, true);
  b.token("phone", "098765432109", DataCategory::kPhone, false);
  b.token("password", "Xq7!pass-word#91", DataCategory::kPassword, false);
  b.token("text", "example_text_area", DataCategory::kFormText, false);
  b.token("url", "example-website.test", DataCategory::kUrl, false);
}

// Leak slots right after the matching field was filled.
constexpr TimestampMs kMailLeak = 4850, kPhoneLeak = 6250, kTextLeak = 9550, kUrlLeak = 11050;

// Registers the plan's events for one script and fires its typing handlers
// twice per keystroke interval.
std::map<std::string, std::string> install(SiteBuilder& b, const ScriptPlan& p, TimestampMs& reg_clock) {
  std::map<std::string, std::string> ids;
  for (const auto& e : p.events) {
    std::string target = key_event(e) ? "document" : "window";
    ids[e] = b.listen(p.script_url, e, reg_clock, target);
    reg_clock += 20;
  }
  TimestampMs offset = 0;
  for (const auto& e : p.typing) {
    for (const auto& iv : typing_intervals()) {
      b.invoke(ids.at(e), e, iv.start + 50 + offset, p.script_url);
      b.invoke(ids.at(e), e, iv.start + 150 + offset, p.script_url);
    }
    offset += 10;
  }
  return ids;
}

ChainConfig reduced_chains() {
  ChainConfig c;
  c.hashes = {Algorithm::kMd5, Algorithm::kSha1, Algorithm::kSha256};
  c.encodings = {parse_algorithm("Base64"), parse_algorithm("URL-encode")};
  c.compressors = {parse_algorithm("Gzip")};
  c.max_encode_depth = 2;
  return c;
}

const char* kPsl = "// public suffixes used by the generated sites\ntest\n";

std::string page_of(const std::string& domain) { return "https://www." + domain + "/"; }

void finish_site(FixtureSet& set, SiteBuilder& b, const SitePlan& plan, const std::string& file) {
  auto [trace, findings] = b.finish();
  ExpectedTrace et;
  et.file = file;
  et.page_url = trace.page_url;
  et.findings = std::move(findings);
  et.verdicts = verdicts_of(plan);
  set.traces.emplace_back(file, std::move(trace));
  set.manifest.traces.push_back(std::move(et));
}

}  // namespace

FixtureSet make_truth_table(std::uint64_t seed) {
  Rng rng(seed);
  FixtureSet set;
  set.manifest.preset = "truth-table";
  set.manifest.seed = seed;
  set.manifest.chains = reduced_chains();
  set.psl_text = kPsl;
  set.entities_json = "{}\n";
  set.filters_text = "! trackers among the subjects\n||subject-k1r1e1.test^\n";
  std::vector<SitePlan> plans;

  for (int i = 0; i < 8; ++i) {
    const bool k = i & 4, r = i & 2, e = i & 1;
    const std::string site = "truth" + std::to_string(i) + ".test";
    const std::string subject = "subject-k" + std::to_string(k) + "r" + std::to_string(r) + "e" + std::to_string(e) +
                                ".test";
    SiteBuilder b(page_of(site), 1726000000000 + i * 3600000LL, i + 1);
    const std::string mail = "truth" + std::to_string(i) + ".honey.user@inbox-mail.test";
    add_standard_tokens(b, mail);
    add_standard_interactions(b);
    b.request(page_of(site), "GET", "", 10, std::nullopt);

    SitePlan plan{site, {}};
    TimestampMs clock = 100;
    ScriptPlan app{site, "https://www." + site + "/static/app.js", false, {"load", "click"}, {}, {}, false};
    install(b, app, clock);
    plan.scripts.push_back(app);

    ScriptPlan sub{subject, "https://cdn." + subject + "/s.js", true, {}, {}, {}, i == 7};
    sub.events = {k ? "keydown" : "click"};
    if (r && k) sub.typing = {"keydown"};
    auto ids = install(b, sub, clock);
    if (k && !r) b.invoke(ids.at("keydown"), "keydown", 1200, sub.script_url);
    if (r && !k) {
      // The key listener belongs to a helper library; the handler it
      // dispatches to is the subject's.
      ScriptPlan helper{"keyhelper.test", "https://cdn.keyhelper.test/kh.js", true, {"keydown"}, {}, {}, false};
      auto hid = install(b, helper, clock);
      const std::string owner = "https://cdn." + subject + "/handler.js";
      for (const auto& iv : typing_intervals()) {
        b.invoke(hid.at("keydown"), "keydown", iv.start + 60, owner);
        b.invoke(hid.at("keydown"), "keydown", iv.start + 160, owner);
      }
      sub.typing = {"keydown"};
      plan.scripts.push_back(helper);
    }
    if (e) {
      std::size_t h = b.request("https://collect." + subject + "/p?h=" + render(mail, "SHA-256") + "&v=1", "GET", "",
                                kMailLeak, sub.script_url);
      b.expect(h, "mail", ViewOrigin::kUrl, "SHA-256");
      sub.shared = {DataCategory::kMail};
    } else {
      b.request("https://collect." + subject + "/p?ping=1&r=" + rng.hex(12), "GET", "", kMailLeak, sub.script_url);
    }
    plan.scripts.push_back(sub);
    finish_site(set, b, plan, "truth" + std::to_string(i) + ".jsonl");
    plans.push_back(plan);
  }
  std::sort(plans.begin(), plans.end(), [](const auto& a, const auto& b) { return a.domain < b.domain; });
  set.manifest.summary = summary_of(plans);
  return set;
}

FixtureSet make_corpus50(std::uint64_t seed) {
  Rng rng(seed);
  FixtureSet set;
  set.manifest.preset = "corpus50";
  set.manifest.seed = seed;
  set.manifest.chains = reduced_chains();
  set.psl_text = kPsl;
  set.filters_text =
      "! fixture tracker list\n"
      "||keylog-analytics.test^\n"
      "||adverify.test^$third-party\n"
      "@@||adverify.test/optout/\n"
      "/tagmgr/gtm.js\n"
      "##.ad-banner\n";
  ordered_json entities;
  entities["ReplayCam"] = {"replaycam.test", "replaycam-cdn.test"};
  std::vector<SitePlan> plans;

  const std::vector<std::string> first_party_events = {"load",   "click", "submit",      "resize",
                                                       "scroll", "focus", "beforeunload"};
  const std::vector<std::string> mail_chains = {"SHA-256", "MD5", "Base64", "SHA-1>Base64"};

  for (std::size_t s = 0; s < 50; ++s) {
    const std::string name = "site" + two_digits(s);
    const std::string domain = name + ".test";
    const std::string mail = name + ".honey.user@inbox-mail.test";
    SiteBuilder b(page_of(domain), 1726000000000 + static_cast<TimestampMs>(s) * 3600000, static_cast<std::int64_t>(s) + 1);
    add_standard_tokens(b, mail);
    add_standard_interactions(b);
    b.request(page_of(domain), "GET", "", 10, std::nullopt);
    SitePlan plan{domain, {}};
    TimestampMs clock = 100;
    TimestampMs leak_slot = 0;
    auto slot = [&](TimestampMs base) { return base + (leak_slot += 3); };

    if (s % 17 != 0) {
      ScriptPlan app{domain, "https://www." + domain + "/static/app.js", false, {}, {}, {}, false};
      std::vector<std::string> pool = first_party_events;
      std::size_t count = 1 + rng.below(4);
      for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = rng.below(pool.size());
        app.events.push_back(pool[j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
      }
      if (rng.chance(250)) {
        app.events.push_back("keydown");
        app.typing = {"keydown"};
      }
      install(b, app, clock);
      if (rng.chance(300)) {
        std::size_t h = b.request("https://www." + domain + "/api/signup", "POST", "{\"email\":\"" + mail + "\"}",
                                  slot(kMailLeak), app.script_url, {{"Content-Type", "application/json"}});
        b.expect(h, "mail", ViewOrigin::kBody, "identity");
      }
      plan.scripts.push_back(app);

      if (s % 10 == 3) {
        const std::string sister = name + "-static.test";
        entities[name + " Group"] = {domain, sister};
        ScriptPlan p{sister, "https://cdn." + sister + "/bundle.js", false, {"input", "keydown"}, {"keydown"}, {}, false};
        install(b, p, clock);
        std::size_t h = b.request("https://api." + sister + "/save", "POST", "email=" + render(mail, "URL-encode"),
                                  slot(kMailLeak), p.script_url,
                                  {{"Content-Type", "application/x-www-form-urlencoded"}});
        b.expect(h, "mail", ViewOrigin::kBody, "URL-encode");
        plan.scripts.push_back(p);
      }

      if (rng.chance(200)) {
        ScriptPlan p{"keylog-analytics.test", "https://cdn.keylog-analytics.test/kl.js", true,
                     {"load", "keydown", "keyup", "input"}, {"keydown", "keyup"}, {}, true};
        install(b, p, clock);
        const std::string chain = mail_chains[rng.below(mail_chains.size())];
        std::size_t h = b.request("https://collect.keylog-analytics.test/c?u=" + render(mail, chain) + "&sid=" +
                                      rng.hex(16),
                                  "GET", "", slot(kMailLeak), p.script_url);
        b.expect(h, "mail", ViewOrigin::kUrl, chain);
        h = b.request("https://collect.keylog-analytics.test/t", "POST",
                      "{\"t\":\"" + render("example_text_area", "Base64") + "\"}", slot(kTextLeak), p.script_url,
                      {{"Content-Type", "application/json"}});
        b.expect(h, "text", ViewOrigin::kBody, "Base64");
        p.shared = {DataCategory::kMail, DataCategory::kFormText};
        plan.scripts.push_back(p);
      }
      if (rng.chance(120)) {
        ScriptPlan p{"replaycam-cdn.test", "https://static.replaycam-cdn.test/rc/recorder.js", true,
                     {"keydown", "click", "input", "mousemove"}, {"keydown"}, {}, false};
        install(b, p, clock);
        std::size_t h = b.request("https://rec.replaycam.test/v1/events", "POST", "d=" + render(mail, "Gzip>Base64"),
                                  slot(kMailLeak), p.script_url);
        b.expect(h, "mail", ViewOrigin::kBody, "Gzip>Base64");
        p.shared = {DataCategory::kMail};
        plan.scripts.push_back(p);
      }
      if (rng.chance(150)) {
        ScriptPlan p{"formassist.test", "https://cdn.formassist.test/fa.js", true,
                     {"focus", "keydown", "keypress"}, {"keydown", "keypress"}, {}, false};
        install(b, p, clock);
        b.request("https://api.formassist.test/hint?f=email", "GET", "", slot(kMailLeak), p.script_url);
        plan.scripts.push_back(p);
      }
      if (rng.chance(150)) {
        ScriptPlan p{"chat-widget.test", "https://widget.chat-widget.test/loader.js", true,
                     {"load", "message", "keydown"}, {}, {}, false};
        auto ids = install(b, p, clock);
        b.invoke(ids.at("keydown"), "keydown", 1200, p.script_url);
        std::size_t h = b.request("https://api.chat-widget.test/v2/visitor?h=" + render("098765432109", "SHA-1"),
                                  "GET", "", slot(kPhoneLeak), p.script_url);
        b.expect(h, "phone", ViewOrigin::kUrl, "SHA-1");
        p.shared = {DataCategory::kPhone};
        plan.scripts.push_back(p);
      }
      if (rng.chance(350)) {
        ScriptPlan p{"adverify.test", "https://js.adverify.test/v2/av.js", true,
                     {"load", "scroll", "message", "visibilitychange"}, {}, {}, true};
        install(b, p, clock);
        b.request("https://px.adverify.test/b?e=load&r=" + rng.hex(16), "GET", "", 1500, p.script_url);
        b.request("https://px.adverify.test/optout/status", "GET", "", 2100, p.script_url);
        plan.scripts.push_back(p);
      }
      if (rng.chance(300)) {
        ScriptPlan p{"social-sdk.test", "https://connect.social-sdk.test/sdk.js", true,
                     {"message", "click", "resize"}, {}, {}, false};
        auto ids = install(b, p, clock);
        b.unlisten(ids.at("resize"), p.script_url, "resize", 9000);
        plan.scripts.push_back(p);
      }
      if (rng.chance(100)) {
        ScriptPlan p{"captcha-cdn.test", "https://www.captcha-cdn.test/api.js", true,
                     {"mousemove", "mousedown", "keydown"}, {"keydown"}, {}, false};
        install(b, p, clock);
        plan.scripts.push_back(p);
      }
      if (rng.chance(80)) {
        ScriptPlan p{"tagmgr.test", "https://cdn.tagmgr.test/tagmgr/gtm.js", true,
                     {"click", "submit", "keyup"}, {"keyup"}, {}, true};
        install(b, p, clock);
        std::size_t h = b.request("https://edge.tagmgr.test/collect?p=" + render("098765432109", "MD5") + "&v=2",
                                  "GET", "", slot(kPhoneLeak), p.script_url);
        b.expect(h, "phone", ViewOrigin::kUrl, "MD5");
        h = b.request("https://edge.tagmgr.test/collect?w=" + render("example-website.test", "Base64"), "GET", "",
                      slot(kUrlLeak), p.script_url);
        b.expect(h, "url", ViewOrigin::kUrl, "Base64");
        p.shared = {DataCategory::kPhone, DataCategory::kUrl};
        plan.scripts.push_back(p);
      }
    }
    finish_site(set, b, plan, name + ".jsonl");
    plans.push_back(plan);
  }
  set.entities_json = entities.dump(2) + "\n";
  set.manifest.summary = summary_of(plans);
  return set;
}

FixtureSet make_chain_sweep(const std::vector<TransformChain>& chains, std::uint64_t seed) {
  FixtureSet set;
  set.manifest.preset = "chain-sweep";
  set.manifest.seed = seed;
  ChainConfig cfg;
  cfg.max_encode_depth = 0;
  for (const auto& c : chains) {
    if (!chain_is_admissible(c)) throw ConfigError("unsupported chain: " + chain_name(c));
    int encodes = 0;
    for (Algorithm a : c.steps) {
      auto& bucket = kind_of(a) == TransformKind::kHash     ? cfg.hashes
                     : kind_of(a) == TransformKind::kEncode ? cfg.encodings
                                                            : cfg.compressors;
      if (std::find(bucket.begin(), bucket.end(), a) == bucket.end()) bucket.push_back(a);
      if (kind_of(a) == TransformKind::kEncode) ++encodes;
    }
    cfg.max_encode_depth = std::max(cfg.max_encode_depth, encodes);
  }
  for (auto* v : {&cfg.hashes, &cfg.encodings, &cfg.compressors}) std::sort(v->begin(), v->end());
  set.manifest.chains = cfg;
  set.psl_text = kPsl;
  set.entities_json = "{}\n";
  set.filters_text = "";

  const std::string token = "sweep.honey.user@inbox-mail.test";
  std::vector<SitePlan> plans;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sweep%05zu", i);
    const std::string domain = std::string(buf) + ".test";
    SiteBuilder b(page_of(domain), 1726000000000 + static_cast<TimestampMs>(i) * 60000, static_cast<std::int64_t>(i) + 1);
    b.token("mail", token, DataCategory::kMail, false);
    b.interact(InteractionKind::kFormFill, FieldKind::kEmail, "mail", 1000, 1600);
    b.request(page_of(domain), "GET", "", 10, std::nullopt);
    ScriptPlan p{"sweep-collector.test", "https://cdn.sweep-collector.test/s.js", true, {"load"}, {}, {}, false};
    TimestampMs clock = 100;
    install(b, p, clock);
    std::size_t h = b.request("https://sink.sweep-collector.test/in", "POST", apply_chain(token, chains[i]), 1700,
                              p.script_url, {{"Content-Type", "application/octet-stream"}});
    b.expect(h, "mail", ViewOrigin::kBody, chain_name(chains[i]));
    p.shared = {DataCategory::kMail};
    SitePlan plan{domain, {p}};
    finish_site(set, b, plan, std::string(buf) + ".jsonl");
    plans.push_back(plan);
  }
  if (!plans.empty()) set.manifest.summary = summary_of(plans);
  return set;
}

FixtureSet make_timeline_fixture(std::uint64_t seed) {
  Rng rng(seed);
  FixtureSet set;
  set.manifest.preset = "timeline";
  set.manifest.seed = seed;
  set.manifest.chains = reduced_chains();
  set.psl_text = kPsl;
  set.entities_json = "{}\n";
  set.filters_text = "";

  const std::string site = "timeline.test";
  const std::string mail = "timeline.honey.user@inbox-mail.test";
  SiteBuilder b(page_of(site), 1726500000000, 1);
  b.token("mail", mail, DataCategory::kMail, true);
  b.token("text", "example_text_area", DataCategory::kFormText, false);
  const std::vector<Interval> bursts = {{3000, 4200}, {6000, 8400}, {10000, 10600}};
  b.interact(InteractionKind::kMouseMove, std::nullopt, std::nullopt, 1000, 1500);
  b.interact(InteractionKind::kFormFill, FieldKind::kEmail, "mail", bursts[0].start, bursts[0].end);
  b.interact(InteractionKind::kTextareaFill, FieldKind::kText, "text", bursts[1].start, bursts[1].end);
  b.interact(InteractionKind::kBodyKeystrokes, std::nullopt, std::nullopt, bursts[2].start, bursts[2].end);
  b.request(page_of(site), "GET", "", 10, std::nullopt);

  TimelineSeries expected;
  expected.page_url = page_of(site);
  expected.subject = "keystream.test";
  auto abs = [&](TimestampMs dt) { return b.at(dt); };
  for (TimestampMs t : {1000, 3000, 6000, 10000}) expected.lanes[0].push_back(abs(t));

  const std::string app_url = "https://www." + site + "/static/app.js";
  const std::string ks = "https://cdn.keystream.test/ks.js";
  b.listen(app_url, "click", 400, "window");
  std::string load = b.listen(ks, "load", 500, "window");
  std::string down = b.listen(ks, "keydown", 520);
  std::string up = b.listen(ks, "keyup", 540);
  for (TimestampMs t : {500, 520, 540}) expected.lanes[1].push_back(abs(t));
  b.invoke(load, "load", 600, ks);
  expected.lanes[2].push_back(abs(600));
  for (const auto& iv : bursts)
    for (TimestampMs t = iv.start + 30; t <= iv.end; t += 150) {
      b.invoke(down, "keydown", t, ks);
      b.invoke(up, "keyup", t + 70, ks);
      expected.lanes[2].push_back(abs(t));
      expected.lanes[2].push_back(abs(t + 70));
    }
  std::sort(expected.lanes[2].begin(), expected.lanes[2].end());

  b.request("https://ingest.keystream.test/hb?r=" + rng.hex(12), "GET", "", 2500, ks);
  for (TimestampMs t = 3500; t <= 10500; t += 1000) {
    bool text = t > 8400;
    std::string body = text ? "k=" + render("example_text_area", "Base64") : "k=" + render(mail, "Base64");
    std::size_t h = b.request("https://ingest.keystream.test/s", "POST", body, t, ks);
    b.expect(h, text ? "text" : "mail", ViewOrigin::kBody, "Base64");
    expected.lanes[3].push_back(abs(t));
  }

  SitePlan plan{site,
                {{site, app_url, false, {"click"}, {}, {}, false},
                 {"keystream.test", ks, true, {"load", "keydown", "keyup"}, {"keydown", "keyup"},
                  {DataCategory::kMail, DataCategory::kFormText}, false}}};
  finish_site(set, b, plan, "timeline.jsonl");
  set.manifest.summary = summary_of({plan});
  set.manifest.timelines.push_back(expected);
  return set;
}

const std::vector<std::string>& fixture_presets() {
  static const std::vector<std::string> v = {"truth-table", "corpus50", "chain-sweep", "timeline"};
  return v;
}

FixtureSet make_fixture(std::string_view preset, std::uint64_t seed, const std::vector<TransformChain>* sweep_chains) {
  if (preset == "truth-table") return make_truth_table(seed);
  if (preset == "corpus50") return make_corpus50(seed);
  if (preset == "timeline") return make_timeline_fixture(seed);
  if (preset == "chain-sweep")
    return make_chain_sweep(sweep_chains ? *sweep_chains : enumerate_chains(ChainConfig::full()), seed);
  throw ConfigError("unknown fixture preset: " + std::string(preset));
}

// Manifest (de)serialization.

namespace {

ordered_json expected_verdict_json(const ExpectedVerdict& v) {
  ordered_json j;
  j["domain"] = v.domain;
  j["installed_key_listener"] = v.flags.installed_key_listener;
  j["realtime_interception"] = v.flags.realtime_interception;
  j["third_party_exfiltration"] = v.flags.third_party_exfiltration;
  j["wiretapper"] = v.wiretapper;
  j["key_events_used"] = v.key_events_used;
  std::vector<std::string> cats;
  for (auto c : v.data_categories_shared) cats.emplace_back(to_string(c));
  j["data_categories_shared"] = cats;
  j["known_tracker"] = v.known_tracker;
  return j;
}

ExpectedVerdict expected_verdict_from(const json& j) {
  ExpectedVerdict v;
  v.domain = j.at("domain").get<std::string>();
  v.flags.installed_key_listener = j.at("installed_key_listener").get<bool>();
  v.flags.realtime_interception = j.at("realtime_interception").get<bool>();
  v.flags.third_party_exfiltration = j.at("third_party_exfiltration").get<bool>();
  v.wiretapper = j.at("wiretapper").get<bool>();
  v.key_events_used = j.at("key_events_used").get<std::vector<std::string>>();
  for (const auto& c : j.at("data_categories_shared"))
    v.data_categories_shared.push_back(parse_data_category(c.get<std::string>()));
  v.known_tracker = j.at("known_tracker").get<bool>();
  return v;
}

}  // namespace

ordered_json FixtureManifest::to_json() const {
  ordered_json j;
  j["preset"] = preset;
  j["seed"] = seed;
  j["chains"] = wiretap::to_json(chains);
  j["traces"] = ordered_json::array();
  for (const auto& t : traces) {
    ordered_json tj;
    tj["file"] = t.file;
    tj["page_url"] = t.page_url;
    tj["findings"] = ordered_json::array();
    for (const auto& f : t.findings)
      tj["findings"].push_back({{"request_index", f.request_index},
                                {"token_id", f.token_id},
                                {"origin", to_string(f.origin)},
                                {"chain", chain_name(f.chain)}});
    tj["verdicts"] = ordered_json::array();
    for (const auto& v : t.verdicts) tj["verdicts"].push_back(expected_verdict_json(v));
    j["traces"].push_back(std::move(tj));
  }
  j["summary"] = summary ? wiretap::to_json(*summary) : ordered_json(nullptr);
  j["timelines"] = ordered_json::array();
  for (const auto& t : timelines) j["timelines"].push_back(wiretap::to_json(t));
  return j;
}

FixtureManifest FixtureManifest::from_json(const json& j) {
  FixtureManifest m;
  try {
    m.preset = j.at("preset").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.chains = chain_config_from_json(j.at("chains"));
    for (const auto& tj : j.at("traces")) {
      ExpectedTrace t;
      t.file = tj.at("file").get<std::string>();
      t.page_url = tj.at("page_url").get<std::string>();
      for (const auto& f : tj.at("findings"))
        t.findings.push_back({f.at("request_index").get<std::size_t>(), f.at("token_id").get<std::string>(),
                              parse_view_origin(f.at("origin").get<std::string>()),
                              parse_chain(f.at("chain").get<std::string>())});
      for (const auto& v : tj.at("verdicts")) t.verdicts.push_back(expected_verdict_from(v));
      m.traces.push_back(std::move(t));
    }
    if (!j.at("summary").is_null()) m.summary = summary_from_json(j.at("summary"));
    for (const auto& tl : j.at("timelines")) {
      TimelineSeries t;
      t.page_url = tl.at("page_url").get<std::string>();
      t.subject = tl.at("subject").get<std::string>();
      for (std::size_t i = 0; i < kTimelineLanes.size(); ++i)
        t.lanes[i] = tl.at("lanes").at(std::string(kTimelineLanes[i])).get<std::vector<TimestampMs>>();
      m.timelines.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

FixtureManifest FixtureManifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read manifest: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("manifest is not JSON: " + path.string());
  return from_json(j);
}

void write_fixture_set(const FixtureSet& set, const fs::path& dir) {
  ReportFiles top;
  top["psl.dat"] = set.psl_text;
  top["entities.json"] = set.entities_json;
  top["filters.txt"] = set.filters_text;
  top["manifest.json"] = set.manifest.to_json().dump(2) + "\n";
  ordered_json run;
  run["traces"] = {"traces"};
  run["psl"] = "psl.dat";
  run["entities"] = "entities.json";
  run["filters"] = {"filters.txt"};
  run["chains"] = to_json(set.manifest.chains);
  run["output_dir"] = "out";
  run["formats"] = {"csv", "json-lines", "text-table"};
  top["run.json"] = run.dump(2) + "\n";
  write_files(top, dir);

  ReportFiles traces;
  for (const auto& [file, trace] : set.traces) traces[file] = serialize_trace(trace);
  write_files(traces, dir / "traces");
}

namespace {

template <typename T>
void expect_eq(std::vector<std::string>& out, const std::string& what, const T& expected, const T& actual) {
  if (expected == actual) return;
  std::ostringstream s;
  s << what << ": expected " << expected << ", got " << actual;
  out.push_back(s.str());
}

void expect_pct(std::vector<std::string>& out, const std::string& what, double expected, double actual) {
  expect_eq(out, what, format_percent(expected), format_percent(actual));
}

std::string joined(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ";") + x;
  return s;
}

std::string joined(const std::vector<DataCategory>& v) {
  std::vector<std::string> names;
  for (auto c : v) names.emplace_back(to_string(c));
  return joined(names);
}

void compare_summary(std::vector<std::string>& out, const CorpusSummary& e, const CorpusSummary& a) {
  expect_eq(out, "site_count", e.site_count, a.site_count);
  expect_eq(out, "trace_count", e.trace_count, a.trace_count);
  expect_eq(out, "sites_with_listener", e.sites_with_listener, a.sites_with_listener);
  expect_pct(out, "pct_sites_with_listener", e.pct_sites_with_listener, a.pct_sites_with_listener);
  expect_eq(out, "total_listeners", e.total_listeners, a.total_listeners);
  expect_eq(out, "mean_listeners_per_site", e.mean_listeners_per_site, a.mean_listeners_per_site);
  expect_eq(out, "third_party_listeners", e.third_party_listeners, a.third_party_listeners);
  expect_pct(out, "pct_third_party_listeners", e.pct_third_party_listeners, a.pct_third_party_listeners);
  expect_eq(out, "sites_with_key_listener", e.sites_with_key_listener, a.sites_with_key_listener);
  expect_pct(out, "pct_sites_with_key_listener", e.pct_sites_with_key_listener, a.pct_sites_with_key_listener);
  expect_eq(out, "sites_with_wiretapper", e.sites_with_wiretapper, a.sites_with_wiretapper);
  expect_pct(out, "pct_sites_with_wiretapper", e.pct_sites_with_wiretapper, a.pct_sites_with_wiretapper);
  expect_eq(out, "wiretapper_site_pairs", e.wiretapper_site_pairs, a.wiretapper_site_pairs);
  expect_eq(out, "mean_wiretappers_per_site", e.mean_wiretappers_per_site, a.mean_wiretappers_per_site);
  expect_eq(out, "mean_wiretappers_per_flagged_site", e.mean_wiretappers_per_flagged_site,
            a.mean_wiretappers_per_flagged_site);

  expect_eq(out, "event type rows", e.event_types.size(), a.event_types.size());
  for (std::size_t i = 0; i < std::min(e.event_types.size(), a.event_types.size()); ++i) {
    const auto &x = e.event_types[i], &y = a.event_types[i];
    std::string at = "event_types[" + std::to_string(i) + "]";
    expect_eq(out, at + ".event_type", x.event_type, y.event_type);
    expect_eq(out, at + ".sites", x.sites, y.sites);
    expect_pct(out, at + ".pct_sites", x.pct_sites, y.pct_sites);
  }
  expect_eq(out, "key event rows", e.key_events.size(), a.key_events.size());
  for (std::size_t i = 0; i < std::min(e.key_events.size(), a.key_events.size()); ++i) {
    const auto &x = e.key_events[i], &y = a.key_events[i];
    std::string at = "key_events[" + x.event_type + "]";
    expect_eq(out, at + ".event_type", x.event_type, y.event_type);
    expect_eq(out, at + ".sites_listener", x.sites_listener, y.sites_listener);
    expect_pct(out, at + ".pct_sites_listener", x.pct_sites_listener, y.pct_sites_listener);
    expect_eq(out, at + ".sites_wiretapping", x.sites_wiretapping, y.sites_wiretapping);
    expect_pct(out, at + ".pct_sites_wiretapping", x.pct_sites_wiretapping, y.pct_sites_wiretapping);
  }
  expect_eq(out, "category rows", e.data_categories.size(), a.data_categories.size());
  for (std::size_t i = 0; i < std::min(e.data_categories.size(), a.data_categories.size()); ++i) {
    const auto &x = e.data_categories[i], &y = a.data_categories[i];
    std::string at = "data_categories[" + std::string(to_string(x.category)) + "]";
    expect_eq(out, at + ".category", std::string(to_string(x.category)), std::string(to_string(y.category)));
    expect_eq(out, at + ".sites", x.sites, y.sites);
    expect_pct(out, at + ".pct_sites", x.pct_sites, y.pct_sites);
  }
  expect_eq(out, "domain rows", e.domains.size(), a.domains.size());
  for (std::size_t i = 0; i < std::min(e.domains.size(), a.domains.size()); ++i) {
    const auto &x = e.domains[i], &y = a.domains[i];
    std::string at = "domains[" + std::to_string(i) + "]";
    expect_eq(out, at + ".domain", x.domain, y.domain);
    expect_eq(out, at + ".known_tracker", x.known_tracker, y.known_tracker);
    expect_eq(out, at + ".sites_listener", x.sites_listener, y.sites_listener);
    expect_pct(out, at + ".pct_sites_listener", x.pct_sites_listener, y.pct_sites_listener);
    expect_eq(out, at + ".sites_key_listener", x.sites_key_listener, y.sites_key_listener);
    expect_pct(out, at + ".pct_sites_key_listener", x.pct_sites_key_listener, y.pct_sites_key_listener);
    expect_eq(out, at + ".sites_wiretapper", x.sites_wiretapper, y.sites_wiretapper);
    expect_pct(out, at + ".pct_sites_wiretapper", x.pct_sites_wiretapper, y.pct_sites_wiretapper);
    expect_eq(out, at + ".top_events", joined(x.top_events), joined(y.top_events));
    expect_eq(out, at + ".data_categories", joined(x.data_categories), joined(y.data_categories));
    expect_eq(out, at + ".scripts", joined(x.scripts), joined(y.scripts));
  }
}

}  // namespace

std::vector<std::string> check_manifest(const FixtureManifest& manifest, const AnalysisRun& run) {
  std::vector<std::string> out;
  std::map<std::string, const TraceReport*> actual;
  for (const auto& t : run.report.traces) actual[t.source] = &t;
  std::set<std::string> seen;

  for (const auto& et : manifest.traces) {
    seen.insert(et.file);
    auto it = actual.find(et.file);
    if (it == actual.end()) {
      out.push_back(et.file + ": missing from the analysis");
      continue;
    }
    const TraceReport& tr = *it->second;
    const std::string p = et.file + ": ";
    expect_eq(out, p + "page_url", et.page_url, tr.page_url);

    using Key = std::tuple<std::size_t, std::string, ViewOrigin>;
    std::set<Key> want, got;
    for (const auto& f : et.findings) want.insert({f.request_index, f.token_id, f.origin});
    for (const auto& f : tr.findings)
      if (f.primary) got.insert({f.request_index, f.token_id, f.origin});
    for (const auto& k : want)
      if (!got.count(k))
        out.push_back(p + "no finding for request " + std::to_string(std::get<0>(k)) + " token " + std::get<1>(k) +
                      " in " + std::string(to_string(std::get<2>(k))));
    for (const auto& k : got)
      if (!want.count(k))
        out.push_back(p + "unexpected finding for request " + std::to_string(std::get<0>(k)) + " token " +
                      std::get<1>(k) + " in " + std::string(to_string(std::get<2>(k))));
    for (const auto& f : et.findings) {
      bool explained = std::any_of(tr.findings.begin(), tr.findings.end(), [&](const LeakFinding& a) {
        return a.request_index == f.request_index && a.token_id == f.token_id && a.origin == f.origin &&
               a.explains(f.chain);
      });
      if (!explained)
        out.push_back(p + "request " + std::to_string(f.request_index) + " token " + f.token_id +
                      " not explained by " + chain_name(f.chain));
    }

    std::map<std::string, const WiretapVerdict*> verdicts;
    for (const auto& v : tr.verdicts) verdicts[v.script_domain] = &v;
    for (const auto& ev : et.verdicts) {
      auto vit = verdicts.find(ev.domain);
      if (vit == verdicts.end()) {
        out.push_back(p + "no verdict for " + ev.domain);
        continue;
      }
      const WiretapVerdict& v = *vit->second;
      const std::string q = p + ev.domain + ".";
      expect_eq(out, q + "installed_key_listener", ev.flags.installed_key_listener, v.flags.installed_key_listener);
      expect_eq(out, q + "realtime_interception", ev.flags.realtime_interception, v.flags.realtime_interception);
      expect_eq(out, q + "third_party_exfiltration", ev.flags.third_party_exfiltration,
                v.flags.third_party_exfiltration);
      expect_eq(out, q + "wiretapper", ev.wiretapper, v.wiretapper);
      expect_eq(out, q + "key_events_used", joined(ev.key_events_used), joined(v.key_events_used));
      expect_eq(out, q + "data_categories_shared", joined(ev.data_categories_shared), joined(v.data_categories_shared));
      expect_eq(out, q + "known_tracker", ev.known_tracker, v.known_tracker);
      verdicts.erase(vit);
    }
    for (const auto& [d, v] : verdicts) out.push_back(p + "unexpected verdict for " + d);
  }
  for (const auto& [file, t] : actual)
    if (!seen.count(file)) out.push_back(file + ": not in the manifest");

  if (manifest.summary) compare_summary(out, *manifest.summary, run.report.summary);

  for (const auto& et : manifest.timelines) {
    auto it = std::find_if(run.timelines.begin(), run.timelines.end(), [&](const TimelineSeries& t) {
      return t.page_url == et.page_url && t.subject == et.subject;
    });
    if (it == run.timelines.end()) {
      out.push_back("timeline for " + et.subject + " on " + et.page_url + " missing");
      continue;
    }
    for (std::size_t i = 0; i < kTimelineLanes.size(); ++i)
      if (it->lanes[i] != et.lanes[i])
        out.push_back("timeline " + et.subject + " lane " + std::string(kTimelineLanes[i]) + " differs");
  }
  return out;
}

}  // namespace wiretap
