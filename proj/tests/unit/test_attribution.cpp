#include <gtest/gtest.h>

#include <fstream>
#include <regex>
#include <sstream>

#include "test_helpers.hpp"
#include "wiretap/filter_rules.hpp"
#include "wiretap/party.hpp"

using namespace wiretap;
using wiretap::testing::data_path;
using wiretap::testing::load_json;

namespace {

const PublicSuffixList& psl() {
  static const PublicSuffixList list = PublicSuffixList::load(data_path("public_suffix_list.dat"));
  return list;
}

FilterRuleSet rules_from(const std::vector<std::string>& lines) {
  std::stringstream ss;
  for (const auto& l : lines) ss << l << '\n';
  FilterRuleSet set;
  set.add_list(ss);
  return set;
}

}  // namespace

TEST(PublicSuffix, ReferenceVectors) {
  std::ifstream in(data_path("test_psl.txt"));
  std::regex call(R"(^checkPublicSuffix\((null|'([^']*)'),\s*(null|'([^']*)')\);)");
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_search(line, m, call)) continue;
    ++checked;
    if (m[1] == "null") {
      EXPECT_THROW(psl().registrable_domain(""), std::invalid_argument);
      continue;
    }
    auto got = psl().registrable_domain(m[2].str());
    if (m[3] == "null") {
      EXPECT_FALSE(got.has_value()) << line;
    } else {
      ASSERT_TRUE(got.has_value()) << line;
      EXPECT_EQ(*got, m[4].str()) << line;
    }
  }
  EXPECT_EQ(checked, 78);
}

TEST(PublicSuffix, Basics) {
  EXPECT_EQ(psl().registrable_domain("example.com"), "example.com");
  EXPECT_EQ(psl().registrable_domain("a.b.example.co.uk"), "example.co.uk");
  EXPECT_EQ(psl().registrable_domain("192.0.2.7"), "192.0.2.7");
  EXPECT_THROW(psl().registrable_domain(""), std::invalid_argument);
  EXPECT_EQ(psl().site_key("co.uk"), "co.uk");
  EXPECT_EQ(punycode_decode("85x722f"), "\xe9\xa3\x9f\xe7\x8b\xae");
}

TEST(Party, ClassifyExamples) {
  EntityMap none;
  EXPECT_EQ(classify_party("shop.example.com", "cdn.example.com", none, psl()),
            (PartyLabel{Party::kFirstParty, PartyBasis::kSameRegistrableDomain}));
  EXPECT_EQ(classify_party("news.test", "googletagmanager.com", none, psl()),
            (PartyLabel{Party::kThirdParty, PartyBasis::kDistinct}));
  EntityMap acme = EntityMap::parse(R"({"AcmeCo": ["a.test", "www.b.test"]})", psl());
  EXPECT_EQ(classify_party("a.test", "b.test", acme, psl()),
            (PartyLabel{Party::kFirstParty, PartyBasis::kSameEntity}));
  EXPECT_EQ(classify_party("b.test", "a.test", acme, psl()), classify_party("a.test", "b.test", acme, psl()));
  EXPECT_EQ(classify_party("a.test", "c.test", acme, psl()).value, Party::kThirdParty);
}

TEST(Party, DisconnectLayout) {
  auto map = EntityMap::parse(
      R"({"license": "x", "entities": {"Google": {"properties": ["youtube.com"], "resources": ["googletagmanager.com", "doubleclick.net"]}}})",
      psl());
  EXPECT_EQ(map.size(), 3u);
  EXPECT_EQ(map.entity_of("doubleclick.net"), "Google");
  EXPECT_TRUE(same_party("youtube.com", "googletagmanager.com", map));
  EXPECT_THROW(EntityMap::parse("[1,2]", psl()), ConfigError);
}

TEST(FilterRules, RoundTripAndSubset) {
  auto doc = load_json("filter_fixture.json");
  std::vector<std::string> lines = doc["rules"].get<std::vector<std::string>>();
  lines.push_back("! comment");
  lines.push_back("example.com##.ad");
  lines.push_back("/ads[0-9]/");
  lines.push_back("||x.test^$script");
  auto set = rules_from(lines);
  ASSERT_EQ(set.rules().size(), 20u);
  EXPECT_EQ(set.comment_count(), 1u);
  EXPECT_EQ(set.unsupported_count(), 3u);
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(set.rules()[i].text(), lines[i]);
}

TEST(FilterRules, MatchesReferenceEngine) {
  auto doc = load_json("filter_fixture.json");
  auto set = rules_from(doc["rules"].get<std::vector<std::string>>());
  ASSERT_EQ(doc["cases"].size(), 40u);
  for (const auto& c : doc["cases"]) {
    auto d = is_known_tracker_url(c["url"].get<std::string>(), c["page_host"].get<std::string>(), set, psl());
    EXPECT_EQ(d.blocked, c["blocked"].get<bool>()) << c["url"] << " on " << c["page_host"];
  }
}

TEST(FilterRules, Examples) {
  auto set = rules_from({"||tracker.test^"});
  EXPECT_TRUE(is_known_tracker_url("https://tracker.test/px.gif", "news.test", set, psl()).blocked);
  auto banner = rules_from({"/ads/banner*$third-party"});
  EXPECT_FALSE(is_known_tracker_url("https://cdn.shop.test/ads/banner1.png", "www.shop.test", banner, psl()).blocked);
  EXPECT_TRUE(is_known_tracker_url("https://cdn.other.test/ads/banner1.png", "www.shop.test", banner, psl()).blocked);
  auto exc = rules_from({"||t.test^", "@@||t.test^"});
  auto d = is_known_tracker_url("https://t.test/a", "x.test", exc, psl());
  EXPECT_FALSE(d.blocked);
  ASSERT_NE(d.rule, nullptr);
  EXPECT_TRUE(d.rule->is_exception());
}
