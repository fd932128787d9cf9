#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/filter_rules.hpp"
#include "wiretap/leak_detector.hpp"
#include "wiretap/party.hpp"
#include "wiretap/trace.hpp"

namespace wiretap {

// The only events that count toward a verdict.
inline constexpr std::array<std::string_view, 3> kKeyEvents = {"keydown", "keyup", "keypress"};
bool is_key_event(std::string_view event_type);

// Knowledge bases shared by every trace of a run.
struct AttributionContext {
  const PublicSuffixList* psl = nullptr;
  const EntityMap* entities = nullptr;
  const FilterRuleSet* rules = nullptr;  // optional; without it nothing is a known tracker
};

struct ClassifierOptions {
  TimestampMs window_ms = 500;
};

// Registrable domain of a script or request URL; the lowercased host when
// there is no registrable domain, empty when the URL has no host.
std::string url_domain(std::string_view url, const PublicSuffixList& psl);

// Key-event invocations falling within [start - window, end + window] of a
// keystroke-bearing interaction, as indices into trace.invocations, grouped
// by the registrable domain of the script owning the invoked handler.
std::map<std::string, std::vector<std::size_t>> correlate_invocations(const CrawlTrace& trace, TimestampMs window_ms,
                                                                      const PublicSuffixList& psl);

struct CriteriaFlags {
  bool installed_key_listener = false;
  bool realtime_interception = false;
  bool third_party_exfiltration = false;

  bool all() const { return installed_key_listener && realtime_interception && third_party_exfiltration; }
  bool operator==(const CriteriaFlags&) const = default;
};

// The records backing each criterion. Each flag is true exactly when its
// slice is non-empty.
struct Evidence {
  std::vector<std::string> listener_ids;      // key-event registrations by the domain
  std::vector<std::size_t> invocations;       // correlated key-event invocations
  std::vector<std::size_t> findings;          // third-party leaks attributable to the domain

  bool operator==(const Evidence&) const = default;
};

CriteriaFlags flags_from(const Evidence& evidence);

struct WiretapVerdict {
  std::string script_domain;
  CriteriaFlags flags;
  bool wiretapper = false;
  std::vector<std::string> key_events_used;  // from correlated invocations, in kKeyEvents order
  std::vector<DataCategory> data_categories_shared;
  bool known_tracker = false;
  std::optional<std::string> tracker_rule;
  Evidence evidence;

  bool operator==(const WiretapVerdict&) const = default;
};

Evidence collect_evidence(std::string_view script_domain, const CrawlTrace& trace,
                          const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                          const ClassifierOptions& options = {});

// Verdict from already collected evidence; lets callers ablate slices.
WiretapVerdict verdict_from_evidence(std::string_view script_domain, const CrawlTrace& trace,
                                     const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                                     Evidence evidence);

WiretapVerdict classify_script(std::string_view script_domain, const CrawlTrace& trace,
                               const std::vector<LeakFinding>& findings, const AttributionContext& ctx,
                               const ClassifierOptions& options = {});

// Domains that registered listeners, own invoked handlers, or initiated a
// leaking request. Sorted.
std::vector<std::string> candidate_domains(const CrawlTrace& trace, const std::vector<LeakFinding>& findings,
                                           const PublicSuffixList& psl);

// One verdict per candidate domain, in candidate order.
std::vector<WiretapVerdict> classify_trace(const CrawlTrace& trace, const std::vector<LeakFinding>& findings,
                                           const AttributionContext& ctx, const ClassifierOptions& options = {});

DataCategory categorize_data(const HoneyToken& token);

struct EventTypeRow {
  std::string event_type;
  std::size_t sites = 0;
  double pct_sites = 0;

  bool operator==(const EventTypeRow&) const = default;
};

struct KeyEventRow {
  std::string event_type;
  std::size_t sites_listener = 0;
  double pct_sites_listener = 0;
  std::size_t sites_wiretapping = 0;
  double pct_sites_wiretapping = 0;

  bool operator==(const KeyEventRow&) const = default;
};

struct CategoryRow {
  DataCategory category = DataCategory::kFormText;
  std::size_t sites = 0;
  double pct_sites = 0;

  bool operator==(const CategoryRow&) const = default;
};

struct DomainRow {
  std::string domain;
  bool known_tracker = false;
  std::size_t sites_listener = 0;       // any listener registered
  double pct_sites_listener = 0;
  std::size_t sites_key_listener = 0;   // key-event listener registered
  double pct_sites_key_listener = 0;
  std::size_t sites_wiretapper = 0;
  double pct_sites_wiretapper = 0;
  std::vector<std::string> top_events;  // most registered event types, up to 3
  std::vector<DataCategory> data_categories;
  std::vector<std::string> scripts;     // most used script file names, up to 3

  bool operator==(const DomainRow&) const = default;
};

struct CorpusSummary {
  std::size_t site_count = 0;
  std::size_t trace_count = 0;
  std::size_t sites_with_listener = 0;
  double pct_sites_with_listener = 0;
  std::size_t total_listeners = 0;
  double mean_listeners_per_site = 0;
  std::size_t third_party_listeners = 0;
  double pct_third_party_listeners = 0;
  std::size_t sites_with_key_listener = 0;
  double pct_sites_with_key_listener = 0;
  std::size_t sites_with_wiretapper = 0;
  double pct_sites_with_wiretapper = 0;
  std::size_t wiretapper_site_pairs = 0;  // sum over sites of distinct wiretapper domains
  double mean_wiretappers_per_site = 0;
  double mean_wiretappers_per_flagged_site = 0;
  std::vector<EventTypeRow> event_types;  // by pct desc, then name
  std::vector<KeyEventRow> key_events;    // kKeyEvents order
  std::vector<CategoryRow> data_categories;
  std::vector<DomainRow> domains;  // by wiretapper sites desc, key-listener sites desc, listener sites desc, name

  bool operator==(const CorpusSummary&) const = default;
};

// verdicts[i] holds the verdicts of corpus.traces()[i]. A site counts as
// using an event for wiretapping when any wiretapper verdict on it lists the
// event in key_events_used. Throws UsageError for an empty corpus.
CorpusSummary corpus_summary(const CorpusView& corpus, const std::vector<std::vector<WiretapVerdict>>& verdicts,
                             const AttributionContext& ctx);

}  // namespace wiretap
