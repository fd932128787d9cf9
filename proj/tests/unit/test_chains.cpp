#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "wiretap/aho_corasick.hpp"
#include "wiretap/fingerprint_index.hpp"

using namespace wiretap;

namespace {

std::vector<std::string> names(const std::vector<TransformChain>& chains) {
  std::vector<std::string> out;
  for (const auto& c : chains) out.push_back(chain_name(c));
  return out;
}

}  // namespace

TEST(Chains, SmallGrammar) {
  ChainConfig c;
  c.hashes = {Algorithm::kMd5};
  c.encodings = {Algorithm::kBase64};
  c.max_encode_depth = 1;
  EXPECT_EQ(names(enumerate_chains(c)), (std::vector<std::string>{"identity", "MD5", "Base64", "MD5>Base64"}));
  EXPECT_EQ(chain_count(c), 4u);
}

TEST(Chains, FullInventoryCount) {
  ChainConfig full = ChainConfig::full();
  auto chains = enumerate_chains(full);
  EXPECT_EQ(chains.size(), 8176u);
  EXPECT_EQ(chain_count(full), 8176u);
  EXPECT_TRUE(std::is_sorted(chains.begin(), chains.end()));
  auto all = names(chains);
  EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), chains.size());
  for (const auto& ch : chains) EXPECT_TRUE(chain_is_admissible(ch));
  ChainConfig depth1 = full;
  depth1.max_encode_depth = 1;
  EXPECT_EQ(chain_count(depth1), 7u * 16u * 9u);
}

TEST(Chains, Grammar) {
  EXPECT_TRUE(chain_is_admissible(parse_chain("Gzip>SHA-256>Base64>URL-encode")));
  EXPECT_FALSE(chain_is_admissible({{Algorithm::kBase64, Algorithm::kMd5}}));
  EXPECT_FALSE(chain_is_admissible({{Algorithm::kMd5, Algorithm::kGzip}}));
  EXPECT_FALSE(chain_is_admissible({{Algorithm::kGzip, Algorithm::kZlib}}));
  EXPECT_FALSE(chain_is_admissible({{Algorithm::kBase64, Algorithm::kBase64, Algorithm::kBase64}}));
  EXPECT_THROW(parse_chain("MD5>SHA-1"), ConfigError);
  EXPECT_THROW(parse_chain("Base64>"), ConfigError);
  EXPECT_EQ(chain_name(parse_chain("identity")), "identity");
  EXPECT_EQ(chain_name(parse_chain("gzip>base64")), "Gzip>Base64");
}

TEST(Chains, ConfigValidation) {
  ChainConfig c = ChainConfig::full();
  c.max_encode_depth = 3;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ChainConfig::full();
  c.hashes.push_back(Algorithm::kBase64);
  EXPECT_THROW(c.validate(), ConfigError);
  c = ChainConfig::full();
  c.hashes.push_back(c.hashes.front());
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Chains, RenderingsBranchOnHashes) {
  auto r = chain_renderings("abc", parse_chain("CRC32>Base64"));
  std::vector<std::string> labels;
  for (const auto& x : r) labels.push_back(x.label);
  EXPECT_EQ(labels, (std::vector<std::string>{"hex", "HEX", "dec", "raw"}));
  EXPECT_EQ(apply_chain("abc", parse_chain("CRC32>Base64")), apply_chain("352441c2", parse_chain("Base64")));
}

TEST(Matcher, FindsEveryOccurrence) {
  std::vector<Bytes> patterns = {"abcd", "bcde", "he", "hers", "she"};
  std::sort(patterns.begin(), patterns.end());
  PatternMatcher m(patterns);
  auto matches = m.scan("ushers abcde");
  std::set<std::pair<std::string, std::size_t>> got;
  for (const auto& x : matches) got.insert({patterns[x.pattern], x.offset});
  std::set<std::pair<std::string, std::size_t>> want = {{"she", 1}, {"he", 2}, {"hers", 2}, {"abcd", 7}, {"bcde", 8}};
  EXPECT_EQ(got, want);
}

TEST(Matcher, AgreesWithNaiveSearch) {
  std::mt19937 rng(11);
  for (int round = 0; round < 20; ++round) {
    std::set<Bytes> set;
    while (set.size() < 40) {
      Bytes p;
      std::size_t n = 1 + rng() % 6;
      for (std::size_t i = 0; i < n; ++i) p.push_back(static_cast<char>('a' + rng() % 3));
      set.insert(p);
    }
    std::vector<Bytes> patterns(set.begin(), set.end());
    PatternMatcher m(patterns);
    Bytes text;
    for (int i = 0; i < 300; ++i) text.push_back(static_cast<char>('a' + rng() % 3));
    std::set<std::pair<std::uint32_t, std::size_t>> got, want;
    for (const auto& x : m.scan(text)) got.insert({x.pattern, x.offset});
    for (std::uint32_t p = 0; p < patterns.size(); ++p)
      for (std::size_t pos = text.find(patterns[p]); pos != Bytes::npos; pos = text.find(patterns[p], pos + 1))
        want.insert({p, pos});
    EXPECT_EQ(got, want);
  }
}

TEST(FingerprintIndex, CaseVariantsAndShortPatterns) {
  HoneyToken t{"name", "Example_Text_Area", DataCategory::kFormText, false};
  auto idx = FingerprintIndex::build({t}, {parse_chain("identity"), parse_chain("CRC32"), parse_chain("Adler-32")});
  // identity in three cases; CRC32 and Adler-32 render hex, HEX, dec and raw
  // for each case, raw digests (4 bytes) fall under the minimum length.
  auto hits = idx.lookup("example_text_area");
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0]->variant, CaseVariant::kLower);
  EXPECT_TRUE(hits[0]->chain.empty());
  EXPECT_EQ(idx.lookup("EXAMPLE_TEXT_AREA").size(), 1u);
  EXPECT_EQ(idx.lookup("Example_Text_Area").size(), 1u);
  EXPECT_GE(idx.dropped_count(), 6u);
  for (std::uint32_t p = 0; p < idx.pattern_count(); ++p) EXPECT_GE(idx.patterns()[p].size(), 8u);
}

TEST(FingerprintIndex, EquivalentChainsCollapse) {
  HoneyToken t{"mail", "example.email@domain.com", DataCategory::kMail, false};
  auto idx = FingerprintIndex::build({t}, {parse_chain("MD5"), parse_chain("MD5>Base16")});
  Bytes upper = ascii_upper(apply_chain(t.value, parse_chain("MD5")));
  auto hits = idx.lookup(upper);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(chain_name(hits[0]->chain), "MD5");
  EXPECT_TRUE(hits[0]->explains(parse_chain("MD5>Base16")));
}

TEST(FingerprintIndex, NumericPatternsAreFlagged) {
  HoneyToken t{"phone", "098765432109", DataCategory::kPhone, false};
  auto idx = FingerprintIndex::build({t}, {parse_chain("identity"), parse_chain("Base64")});
  bool saw_numeric = false, saw_other = false;
  for (std::uint32_t p = 0; p < idx.pattern_count(); ++p) {
    if (idx.patterns()[p] == "098765432109") {
      EXPECT_TRUE(idx.is_numeric(p));
      saw_numeric = true;
    } else {
      EXPECT_FALSE(idx.is_numeric(p));
      saw_other = true;
    }
  }
  EXPECT_TRUE(saw_numeric && saw_other);
}

TEST(FingerprintIndex, AuditListing) {
  HoneyToken t{"mail", "example.email@domain.com", DataCategory::kMail, false};
  auto idx = FingerprintIndex::build({t}, {parse_chain("identity")});
  std::ostringstream out;
  idx.write_audit(out);
  std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "pattern_hex\ttoken_id\tcase_variant\tchain\trendering\tequivalent_chains");
  EXPECT_NE(text.find(to_hex("example.email@domain.com")), std::string::npos);
}
