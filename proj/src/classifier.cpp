#include "wiretap/classifier.hpp"

#include <algorithm>
#include <set>

#include "wiretap/url.hpp"

namespace wiretap {

bool is_key_event(std::string_view event_type) {
  return std::find(kKeyEvents.begin(), kKeyEvents.end(), event_type) != kKeyEvents.end();
}

std::string url_domain(std::string_view url, const PublicSuffixList& psl) {
  auto parsed = parse_url(url);
  if (!parsed || parsed->host.empty()) return {};
  return psl.site_key(parsed->host);
}

std::map<std::string, std::vector<std::size_t>> correlate_invocations(const CrawlTrace& trace, TimestampMs window_ms,
                                                                      const PublicSuffixList& psl) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < trace.invocations.size(); ++i) {
    const auto& inv = trace.invocations[i];
    if (!is_key_event(inv.event_type)) continue;
    bool hit = std::any_of(trace.interactions.begin(), trace.interactions.end(), [&](const InteractionRecord& r) {
      return r.is_keystroke_bearing() && inv.timestamp >= r.timestamp_start - window_ms &&
             inv.timestamp <= r.timestamp_end + window_ms;
    });
    if (hit) out[url_domain(inv.script_url, psl)].push_back(i);
  }
  return out;
}

CriteriaFlags flags_from(const Evidence& evidence) {
  return {!evidence.listener_ids.empty(), !evidence.invocations.empty(), !evidence.findings.empty()};
}

namespace {

bool owned_by(std::string_view url, std::string_view domain, const AttributionContext& ctx) {
  std::string d = url_domain(url, *ctx.psl);
  return !d.empty() && same_party(d, domain, *ctx.entities);
}

}  // namespace

Evidence collect_evidence(std::string_view script_domain, const CrawlTrace& trace,
                          const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                          const ClassifierOptions& options) {
  Evidence ev;
  for (const auto& e : trace.listener_events)
    if (e.kind == ListenerKind::kRegister && is_key_event(e.event_type) &&
        url_domain(e.script_url, *ctx.psl) == script_domain)
      ev.listener_ids.push_back(e.listener_id);

  auto correlated = correlate_invocations(trace, options.window_ms, *ctx.psl);
  if (auto it = correlated.find(std::string(script_domain)); it != correlated.end()) ev.invocations = it->second;

  const std::string page_host = trace.page_host();
  for (std::size_t i = 0; i < findings.size(); ++i) {
    const auto& f = findings[i];
    auto host = parse_url(f.request_url);
    if (!host || host->host.empty()) continue;
    if (classify_party(page_host, host->host, *ctx.entities, *ctx.psl).value != Party::kThirdParty) continue;
    bool attributable = (f.initiator_script && owned_by(*f.initiator_script, script_domain, ctx)) ||
                        same_party(ctx.psl->site_key(host->host), script_domain, *ctx.entities);
    if (attributable) ev.findings.push_back(i);
  }
  return ev;
}

WiretapVerdict verdict_from_evidence(std::string_view script_domain, const CrawlTrace& trace,
                                     const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                                     Evidence evidence) {
  WiretapVerdict v;
  v.script_domain = std::string(script_domain);
  v.flags = flags_from(evidence);
  v.wiretapper = v.flags.all();

  std::set<std::string> used;
  for (std::size_t i : evidence.invocations) used.insert(trace.invocations[i].event_type);
  for (auto e : kKeyEvents)
    if (used.count(std::string(e))) v.key_events_used.emplace_back(e);

  std::set<DataCategory> categories;
  for (std::size_t i : evidence.findings)
    if (const HoneyToken* t = trace.find_token(findings[i].token_id)) categories.insert(categorize_data(*t));
  for (DataCategory c : all_data_categories())
    if (categories.count(c)) v.data_categories_shared.push_back(c);

  if (ctx.rules) {
    const std::string page_host = trace.page_host();
    auto consider = [&](std::string_view url) {
      if (v.known_tracker) return;
      auto d = is_known_tracker_url(url, page_host, *ctx.rules, *ctx.psl);
      if (d.blocked) {
        v.known_tracker = true;
        v.tracker_rule = d.rule->text();
      }
    };
    for (const auto& req : trace.requests) {
      bool by_domain = url_domain(req.request_url, *ctx.psl) == script_domain ||
                       (req.initiator_script && url_domain(*req.initiator_script, *ctx.psl) == script_domain);
      if (by_domain) consider(req.request_url);
    }
    for (const auto& e : trace.listener_events)
      if (url_domain(e.script_url, *ctx.psl) == script_domain) consider(e.script_url);
  }
  v.evidence = std::move(evidence);
  return v;
}

WiretapVerdict classify_script(std::string_view script_domain, const CrawlTrace& trace,
                               const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                               const ClassifierOptions& options) {
  return verdict_from_evidence(script_domain, trace, findings, ctx,
                               collect_evidence(script_domain, trace, findings, ctx, options));
}

std::vector<std::string> candidate_domains(const CrawlTrace& trace, const std::vector<LeakFinding>& findings,
                                           const PublicSuffixList& psl) {
  std::set<std::string> out;
  auto add = [&](std::string_view url) {
    std::string d = url_domain(url, psl);
    if (!d.empty()) out.insert(std::move(d));
  };
  for (const auto& e : trace.listener_events) add(e.script_url);
  for (const auto& inv : trace.invocations) add(inv.script_url);
  for (const auto& f : findings)
    if (f.initiator_script) add(*f.initiator_script);
  return {out.begin(), out.end()};
}

std::vector<WiretapVerdict> classify_trace(const CrawlTrace& trace, const std::vector<LeakFinding>& findings,
                                           const AttributionContext& ctx, const ClassifierOptions& options) {
  std::vector<WiretapVerdict> out;
  for (const auto& d : candidate_domains(trace, findings, *ctx.psl))
    out.push_back(classify_script(d, trace, findings, ctx, options));
  return out;
}

DataCategory categorize_data(const HoneyToken& token) { return token.category; }

namespace {

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

std::string script_file_name(std::string_view url) {
  auto parsed = parse_url(url);
  std::string_view path = parsed ? std::string_view(parsed->path) : url;
  auto slash = path.find_last_of('/');
  std::string name(slash == std::string_view::npos ? path : path.substr(slash + 1));
  return name.empty() ? std::string(url) : name;
}

// Keys ordered by count descending, then name; at most `limit`.
std::vector<std::string> top_keys(const std::map<std::string, std::size_t>& counts, std::size_t limit) {
  std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < items.size() && i < limit; ++i) out.push_back(items[i].first);
  return out;
}

struct DomainAccumulator {
  std::set<std::size_t> sites_listener, sites_key_listener, sites_wiretapper;
  std::map<std::string, std::size_t> events, scripts;
  std::set<DataCategory> categories;
  bool known_tracker = false;
};

}  // namespace

CorpusSummary corpus_summary(const CorpusView& corpus, const std::vector<std::vector<WiretapVerdict>>& verdicts,
                             const AttributionContext& ctx) {
  if (corpus.site_count() == 0) throw UsageError("corpus summary of an empty corpus");
  if (verdicts.size() != corpus.traces().size()) throw UsageError("verdict lists do not match corpus traces");

  const std::size_t n_sites = corpus.site_count();
  CorpusSummary s;
  s.site_count = n_sites;
  s.trace_count = corpus.traces().size();

  std::vector<std::size_t> listeners_per_site(n_sites, 0);
  std::vector<std::set<std::string>> wiretappers_per_site(n_sites);
  std::vector<bool> key_listener_site(n_sites, false);
  std::map<std::string, std::set<std::size_t>> event_sites;
  std::map<std::string, std::set<std::size_t>> key_event_wiretap_sites;
  std::map<DataCategory, std::set<std::size_t>> category_sites;
  std::map<std::string, DomainAccumulator> domains;

  for (std::size_t t = 0; t < corpus.traces().size(); ++t) {
    const CrawlTrace& trace = corpus.traces()[t];
    const std::size_t site = corpus.site_of_trace(t);
    const std::string page_host = trace.page_host();
    for (const auto& e : trace.listener_events) {
      if (e.kind != ListenerKind::kRegister) continue;
      ++listeners_per_site[site];
      ++s.total_listeners;
      event_sites[e.event_type].insert(site);
      auto script = parse_url(e.script_url);
      std::string script_host = script && !script->host.empty() ? script->host : page_host;
      if (classify_party(page_host, script_host, *ctx.entities, *ctx.psl).value == Party::kThirdParty)
        ++s.third_party_listeners;
      if (is_key_event(e.event_type)) key_listener_site[site] = true;
      std::string d = url_domain(e.script_url, *ctx.psl);
      if (d.empty()) continue;
      auto& acc = domains[d];
      acc.sites_listener.insert(site);
      if (is_key_event(e.event_type)) acc.sites_key_listener.insert(site);
      ++acc.events[e.event_type];
      ++acc.scripts[script_file_name(e.script_url)];
    }
    for (const auto& v : verdicts[t]) {
      auto& acc = domains[v.script_domain];
      acc.known_tracker = acc.known_tracker || v.known_tracker;
      if (!v.wiretapper) continue;
      acc.sites_wiretapper.insert(site);
      acc.categories.insert(v.data_categories_shared.begin(), v.data_categories_shared.end());
      wiretappers_per_site[site].insert(v.script_domain);
      for (const auto& e : v.key_events_used) key_event_wiretap_sites[e].insert(site);
      for (DataCategory c : v.data_categories_shared) category_sites[c].insert(site);
    }
  }

  for (std::size_t i = 0; i < n_sites; ++i) {
    if (listeners_per_site[i] > 0) ++s.sites_with_listener;
    if (key_listener_site[i]) ++s.sites_with_key_listener;
    if (!wiretappers_per_site[i].empty()) ++s.sites_with_wiretapper;
    s.wiretapper_site_pairs += wiretappers_per_site[i].size();
  }
  s.pct_sites_with_listener = pct(s.sites_with_listener, n_sites);
  s.mean_listeners_per_site = static_cast<double>(s.total_listeners) / static_cast<double>(n_sites);
  s.pct_third_party_listeners = pct(s.third_party_listeners, s.total_listeners);
  s.pct_sites_with_key_listener = pct(s.sites_with_key_listener, n_sites);
  s.pct_sites_with_wiretapper = pct(s.sites_with_wiretapper, n_sites);
  s.mean_wiretappers_per_site = static_cast<double>(s.wiretapper_site_pairs) / static_cast<double>(n_sites);
  s.mean_wiretappers_per_flagged_site =
      s.sites_with_wiretapper == 0
          ? 0.0
          : static_cast<double>(s.wiretapper_site_pairs) / static_cast<double>(s.sites_with_wiretapper);

  for (const auto& [event, sites] : event_sites) s.event_types.push_back({event, sites.size(), pct(sites.size(), n_sites)});
  std::stable_sort(s.event_types.begin(), s.event_types.end(),
                   [](const auto& a, const auto& b) { return a.sites > b.sites; });

  for (auto e : kKeyEvents) {
    KeyEventRow row;
    row.event_type = std::string(e);
    if (auto it = event_sites.find(row.event_type); it != event_sites.end()) row.sites_listener = it->second.size();
    if (auto it = key_event_wiretap_sites.find(row.event_type); it != key_event_wiretap_sites.end())
      row.sites_wiretapping = it->second.size();
    row.pct_sites_listener = pct(row.sites_listener, n_sites);
    row.pct_sites_wiretapping = pct(row.sites_wiretapping, n_sites);
    s.key_events.push_back(row);
  }

  for (DataCategory c : all_data_categories()) {
    std::size_t n = category_sites.count(c) ? category_sites[c].size() : 0;
    s.data_categories.push_back({c, n, pct(n, n_sites)});
  }

  for (const auto& [name, acc] : domains) {
    DomainRow row;
    row.domain = name;
    row.known_tracker = acc.known_tracker;
    row.sites_listener = acc.sites_listener.size();
    row.sites_key_listener = acc.sites_key_listener.size();
    row.sites_wiretapper = acc.sites_wiretapper.size();
    row.pct_sites_listener = pct(row.sites_listener, n_sites);
    row.pct_sites_key_listener = pct(row.sites_key_listener, n_sites);
    row.pct_sites_wiretapper = pct(row.sites_wiretapper, n_sites);
    row.top_events = top_keys(acc.events, 3);
    row.scripts = top_keys(acc.scripts, 3);
    for (DataCategory c : all_data_categories())
      if (acc.categories.count(c)) row.data_categories.push_back(c);
    s.domains.push_back(std::move(row));
  }
  std::stable_sort(s.domains.begin(), s.domains.end(), [](const DomainRow& a, const DomainRow& b) {
    return std::tie(b.sites_wiretapper, b.sites_key_listener, b.sites_listener) <
           std::tie(a.sites_wiretapper, a.sites_key_listener, a.sites_listener);
  });
  return s;
}

}  // namespace wiretap
