#include <gtest/gtest.h>

#include <sstream>

#include "wiretap/classifier.hpp"

using namespace wiretap;

namespace {

PublicSuffixList small_psl() {
  std::istringstream in("com\ntest\nco.uk\n");
  return PublicSuffixList::parse(in);
}

struct World {
  PublicSuffixList psl = small_psl();
  EntityMap entities = EntityMap::parse(R"({"Acme": ["acme.test", "acme-cdn.test"]})", psl);
  FilterRuleSet rules;
  AttributionContext ctx() const { return {&psl, &entities, &rules}; }
};

const std::string kMail = "example.email@domain.com";

CrawlTrace base_trace() {
  CrawlTrace t;
  t.page_url = "https://www.shop.test/";
  t.visit_start = 0;
  t.honey_tokens = {{"mail", kMail, DataCategory::kMail, false}};
  return t;
}

ListenerEvent reg(std::string id, std::string event, std::string script, TimestampMs ts) {
  ListenerEvent e;
  e.event_type = std::move(event);
  e.target_descriptor = "document";
  e.script_url = std::move(script);
  e.timestamp = ts;
  e.listener_id = std::move(id);
  return e;
}

InteractionRecord fill(TimestampMs s, TimestampMs e) {
  return {InteractionKind::kFormFill, FieldKind::kEmail, std::string("mail"), s, e};
}

NetworkRecord get(std::string url, TimestampMs ts, std::optional<std::string> initiator) {
  NetworkRecord r;
  r.request_url = std::move(url);
  r.timestamp = ts;
  r.initiator_script = std::move(initiator);
  return r;
}

std::vector<LeakFinding> leaks(const CrawlTrace& t) {
  auto index = FingerprintIndex::build(t.honey_tokens, {parse_chain("identity"), parse_chain("SHA-256")});
  return detect_leaks(t, index);
}

// A script on tracker.test that listens to keydown, handles keystrokes while
// the user types and ships the hashed address home.
CrawlTrace wiretap_trace() {
  CrawlTrace t = base_trace();
  const std::string s = "https://cdn.tracker.test/t.js";
  t.listener_events = {reg("L1", "keydown", s, 100), reg("L2", "click", "https://www.shop.test/app.js", 120)};
  t.interactions = {fill(5000, 6000)};
  t.invocations = {{"L1", "keydown", 5200, s, std::nullopt}};
  t.requests = {get("https://collect.tracker.test/p?h=" + apply_chain(kMail, parse_chain("SHA-256")), 6100, s)};
  validate_trace(t);
  return t;
}

}  // namespace

TEST(Classifier, KeyEvents) {
  EXPECT_TRUE(is_key_event("keydown"));
  EXPECT_TRUE(is_key_event("keyup"));
  EXPECT_TRUE(is_key_event("keypress"));
  EXPECT_FALSE(is_key_event("input"));
  EXPECT_FALSE(is_key_event("KeyDown"));
}

TEST(Classifier, CorrelationWindow) {
  World w;
  CrawlTrace t = base_trace();
  const std::string s = "https://cdn.tracker.test/t.js";
  t.listener_events = {reg("L1", "keydown", s, 50), reg("L2", "input", s, 60)};
  t.interactions = {{InteractionKind::kMouseMove, std::nullopt, std::nullopt, 1000, 2000}, fill(5000, 6000)};
  t.invocations = {
      {"L1", "keydown", 100, s, std::nullopt},   // page load, before any typing
      {"L1", "keydown", 1500, s, std::nullopt},  // during a mouse move
      {"L1", "keydown", 4499, s, std::nullopt},
      {"L1", "keydown", 4500, s, std::nullopt},  // start - w, inclusive
      {"L1", "keydown", 5200, s, std::nullopt},
      {"L2", "input", 5300, s, std::nullopt},    // not a key event
      {"L1", "keydown", 6500, s, std::nullopt},  // end + w, inclusive
      {"L1", "keydown", 6501, s, std::nullopt},
  };
  auto c = correlate_invocations(t, 500, w.psl);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.at("tracker.test"), (std::vector<std::size_t>{3, 4, 6}));
  EXPECT_TRUE(correlate_invocations(t, 0, w.psl).at("tracker.test") == std::vector<std::size_t>{4});
}

TEST(Classifier, WiretapperWhenAllThreeHold) {
  World w;
  CrawlTrace t = wiretap_trace();
  auto findings = leaks(t);
  auto verdicts = classify_trace(t, findings, w.ctx());
  ASSERT_EQ(verdicts.size(), 2u);
  EXPECT_EQ(verdicts[0].script_domain, "shop.test");
  EXPECT_FALSE(verdicts[0].wiretapper);
  const auto& v = verdicts[1];
  EXPECT_EQ(v.script_domain, "tracker.test");
  EXPECT_TRUE(v.flags.all());
  EXPECT_TRUE(v.wiretapper);
  EXPECT_EQ(v.key_events_used, std::vector<std::string>{"keydown"});
  EXPECT_EQ(v.data_categories_shared, std::vector<DataCategory>{DataCategory::kMail});
  EXPECT_EQ(v.evidence.listener_ids, std::vector<std::string>{"L1"});
  EXPECT_FALSE(v.known_tracker);
}

TEST(Classifier, EachAblationFlipsOnlyItsFlag) {
  World w;
  CrawlTrace t = wiretap_trace();
  auto findings = leaks(t);
  Evidence full = collect_evidence("tracker.test", t, findings, w.ctx());
  ASSERT_TRUE(flags_from(full).all());

  Evidence a = full;
  a.listener_ids.clear();
  auto va = verdict_from_evidence("tracker.test", t, findings, w.ctx(), a);
  EXPECT_EQ(va.flags, (CriteriaFlags{false, true, true}));
  EXPECT_FALSE(va.wiretapper);

  Evidence b = full;
  b.invocations.clear();
  auto vb = verdict_from_evidence("tracker.test", t, findings, w.ctx(), b);
  EXPECT_EQ(vb.flags, (CriteriaFlags{true, false, true}));
  EXPECT_FALSE(vb.wiretapper);
  EXPECT_TRUE(vb.key_events_used.empty());

  Evidence c = full;
  c.findings.clear();
  auto vc = verdict_from_evidence("tracker.test", t, findings, w.ctx(), c);
  EXPECT_EQ(vc.flags, (CriteriaFlags{true, true, false}));
  EXPECT_FALSE(vc.wiretapper);
  EXPECT_TRUE(vc.data_categories_shared.empty());
}

TEST(Classifier, PageLoadInvocationIsNotInterception) {
  World w;
  CrawlTrace t = wiretap_trace();
  t.interactions = {fill(4000, 4800)};
  t.invocations = {{"L1", "keydown", 100, "https://cdn.tracker.test/t.js", std::nullopt}};
  auto findings = leaks(t);
  auto v = classify_script("tracker.test", t, findings, w.ctx());
  EXPECT_EQ(v.flags, (CriteriaFlags{true, false, true}));
  EXPECT_FALSE(v.wiretapper);
}

TEST(Classifier, FirstPartyAndSameEntityDestinationsAreNotExfiltration) {
  World w;
  CrawlTrace t = base_trace();
  t.page_url = "https://www.acme.test/";
  const std::string s = "https://static.acme-cdn.test/a.js";
  t.listener_events = {reg("L1", "keydown", s, 100)};
  t.interactions = {fill(5000, 6000)};
  t.invocations = {{"L1", "keydown", 5200, s, std::nullopt}};
  t.requests = {get("https://api.acme-cdn.test/save?e=" + kMail, 6100, s),
                get("https://www.acme.test/signup?e=" + kMail, 6200, s)};
  auto findings = leaks(t);
  ASSERT_EQ(findings.size(), 2u);
  auto v = classify_script("acme-cdn.test", t, findings, w.ctx());
  EXPECT_EQ(v.flags, (CriteriaFlags{true, true, false}));
  EXPECT_FALSE(v.wiretapper);
}

TEST(Classifier, AttributionByDestinationWithoutInitiator) {
  World w;
  CrawlTrace t = wiretap_trace();
  t.requests[0].initiator_script.reset();
  auto findings = leaks(t);
  auto v = classify_script("tracker.test", t, findings, w.ctx());
  EXPECT_TRUE(v.wiretapper);
  // Someone else's leak does not count for a bystander.
  auto other = classify_script("shop.test", t, findings, w.ctx());
  EXPECT_FALSE(other.flags.third_party_exfiltration);
}

TEST(Classifier, HandlerOwnerGetsTheInvocations) {
  World w;
  CrawlTrace t = base_trace();
  const std::string lib = "https://cdn.keyhelper.test/kh.js";
  const std::string owner = "https://cdn.tracker.test/handler.js";
  t.listener_events = {reg("L1", "keydown", lib, 100)};
  t.interactions = {fill(5000, 6000)};
  t.invocations = {{"L1", "keydown", 5200, owner, std::nullopt}};
  t.requests = {get("https://collect.tracker.test/p?e=" + kMail, 6100, owner)};
  auto findings = leaks(t);
  auto verdicts = classify_trace(t, findings, w.ctx());
  ASSERT_EQ(verdicts.size(), 2u);
  EXPECT_EQ(verdicts[0].script_domain, "keyhelper.test");
  EXPECT_EQ(verdicts[0].flags, (CriteriaFlags{true, false, false}));
  EXPECT_EQ(verdicts[1].script_domain, "tracker.test");
  EXPECT_EQ(verdicts[1].flags, (CriteriaFlags{false, true, true}));
}

TEST(Classifier, KnownTrackerFromFilterList) {
  World w;
  std::istringstream list("||tracker.test^$third-party\n");
  w.rules.add_list(list);
  CrawlTrace t = wiretap_trace();
  auto findings = leaks(t);
  auto v = classify_script("tracker.test", t, findings, w.ctx());
  EXPECT_TRUE(v.known_tracker);
  ASSERT_TRUE(v.tracker_rule);
  EXPECT_EQ(*v.tracker_rule, "||tracker.test^$third-party");
  EXPECT_FALSE(classify_script("shop.test", t, findings, w.ctx()).known_tracker);
}

TEST(Classifier, DataCategories) {
  HoneyToken mail{"a", "example.email@domain.com", DataCategory::kMail, false};
  HoneyToken phone{"b", "098765432109", DataCategory::kPhone, false};
  HoneyToken text{"c", "example_text_area", DataCategory::kFormText, false};
  EXPECT_EQ(categorize_data(mail), DataCategory::kMail);
  EXPECT_EQ(categorize_data(phone), DataCategory::kPhone);
  EXPECT_EQ(categorize_data(text), DataCategory::kFormText);
  EXPECT_EQ(to_string(categorize_data(text)), "form_text");
}

namespace {

CrawlTrace site_with_listeners(const std::string& host, int n) {
  CrawlTrace t;
  t.page_url = "https://" + host + "/";
  for (int i = 0; i < n; ++i)
    t.listener_events.push_back(reg("L" + std::to_string(i), i % 2 ? "click" : "keydown",
                                    "https://cdn.widget.test/w.js", 10 + i));
  return t;
}

}  // namespace

TEST(CorpusSummary, SingleSiteWithoutListeners) {
  World w;
  CorpusView corpus = merge_traces({site_with_listeners("www.a.test", 0)}, w.psl);
  auto s = corpus_summary(corpus, {{}}, w.ctx());
  EXPECT_EQ(s.site_count, 1u);
  EXPECT_EQ(s.sites_with_listener, 0u);
  EXPECT_EQ(format_percent(s.pct_sites_with_listener), "0.00");
  EXPECT_EQ(s.mean_listeners_per_site, 0.0);
  EXPECT_EQ(s.mean_wiretappers_per_flagged_site, 0.0);
}

TEST(CorpusSummary, MeansAndPercentages) {
  World w;
  CorpusView corpus =
      merge_traces({site_with_listeners("www.a.test", 10), site_with_listeners("www.b.test", 0)}, w.psl);
  auto s = corpus_summary(corpus, {{}, {}}, w.ctx());
  EXPECT_EQ(s.total_listeners, 10u);
  EXPECT_EQ(s.mean_listeners_per_site, 5.0);
  EXPECT_EQ(format_percent(s.pct_sites_with_listener), "50.00");
  EXPECT_EQ(s.third_party_listeners, 10u);
  EXPECT_EQ(format_percent(s.pct_third_party_listeners), "100.00");
  EXPECT_EQ(s.sites_with_key_listener, 1u);
  ASSERT_FALSE(s.event_types.empty());
  EXPECT_EQ(s.event_types[0].event_type, "click");  // tie on sites, then name
  EXPECT_EQ(s.domains.at(0).domain, "widget.test");
  EXPECT_EQ(s.domains.at(0).top_events, (std::vector<std::string>{"click", "keydown"}));
  EXPECT_EQ(s.domains.at(0).scripts, std::vector<std::string>{"w.js"});
}

TEST(CorpusSummary, ConditionalMeanIdentity) {
  World w;
  std::vector<CrawlTrace> traces;
  for (int i = 0; i < 8; ++i) traces.push_back(site_with_listeners("www.s" + std::to_string(i) + ".test", 1));
  CorpusView corpus = merge_traces(traces, w.psl);
  std::vector<std::vector<WiretapVerdict>> verdicts(8);
  auto tap = [](std::string d) {
    WiretapVerdict v;
    v.script_domain = std::move(d);
    v.flags = {true, true, true};
    v.wiretapper = true;
    v.key_events_used = {"keydown"};
    v.data_categories_shared = {DataCategory::kMail};
    return v;
  };
  verdicts[0] = {tap("x.test"), tap("y.test")};
  verdicts[3] = {tap("x.test")};
  verdicts[5] = {tap("z.test")};
  auto s = corpus_summary(corpus, verdicts, w.ctx());
  EXPECT_EQ(s.sites_with_wiretapper, 3u);
  EXPECT_EQ(s.wiretapper_site_pairs, 4u);
  EXPECT_DOUBLE_EQ(s.mean_wiretappers_per_site, 0.5);
  EXPECT_DOUBLE_EQ(s.mean_wiretappers_per_flagged_site, 4.0 / 3.0);
  EXPECT_NEAR(s.mean_wiretappers_per_site, s.mean_wiretappers_per_flagged_site * s.pct_sites_with_wiretapper / 100.0,
              1e-12);
  EXPECT_EQ(s.key_events[0].sites_wiretapping, 3u);
  EXPECT_EQ(s.data_categories[1].category, DataCategory::kMail);
  EXPECT_EQ(s.data_categories[1].sites, 3u);
  EXPECT_EQ(s.domains[0].domain, "x.test");
  EXPECT_EQ(s.domains[0].sites_wiretapper, 2u);
}

TEST(CorpusSummary, Misuse) {
  World w;
  EXPECT_THROW(corpus_summary(CorpusView{}, {}, w.ctx()), UsageError);
  CorpusView corpus = merge_traces({site_with_listeners("www.a.test", 1)}, w.psl);
  EXPECT_THROW(corpus_summary(corpus, {}, w.ctx()), UsageError);
}
