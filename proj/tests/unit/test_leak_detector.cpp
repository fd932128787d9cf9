#include <gtest/gtest.h>

#include <random>

#include "wiretap/leak_detector.hpp"

using namespace wiretap;

namespace {

HoneyToken mail_token() { return {"mail", "example.email@domain.com", DataCategory::kMail, false}; }

FingerprintIndex index_for(const std::vector<HoneyToken>& tokens, const std::vector<TransformChain>& chains) {
  return FingerprintIndex::build(tokens, chains);
}

std::vector<TransformChain> chains(std::initializer_list<const char*> names) {
  std::vector<TransformChain> out;
  for (const char* n : names) out.push_back(parse_chain(n));
  return out;
}

NetworkRecord post(std::string url, Bytes body) {
  NetworkRecord r;
  r.request_url = std::move(url);
  r.method = "POST";
  r.body = std::move(body);
  return r;
}

const LeakFinding* find(const std::vector<LeakFinding>& fs, std::string_view chain, bool primary_only = false) {
  for (const auto& f : fs)
    if (chain_name(f.chain) == chain && (!primary_only || f.primary)) return &f;
  return nullptr;
}

}  // namespace

TEST(Normalize, PlainGet) {
  NetworkRecord r;
  r.request_url = "https://t.example/c?a=1";
  auto views = normalize_payload(r);
  ASSERT_EQ(views.size(), 1u);
  EXPECT_EQ(views[0].bytes, r.request_url);
  r.request_url = "https://t.example/c?e=a%2540b";
  views = normalize_payload(r);
  ASSERT_EQ(views.size(), 3u);
  EXPECT_EQ(views[1].bytes, "https://t.example/c?e=a%40b");
  EXPECT_EQ(views[2].bytes, "https://t.example/c?e=a@b");
  EXPECT_EQ(derivation_name(views[2].derivation), "url-decoded>url-decoded");
}

TEST(Normalize, GzipMagic) {
  auto views = normalize_payload(post("https://t.example/", codec::gzip_compress("hello")));
  bool found = false;
  for (const auto& v : views) found |= v.bytes == "hello" && derivation_name(v.derivation) == "gzip-decompressed";
  EXPECT_TRUE(found);
}

TEST(Normalize, ContentEncodingBrotliAndFailureWarning) {
  auto r = post("https://t.example/", codec::brotli_compress("brotli body text"));
  r.headers.push_back({"Content-Encoding", "br"});
  auto views = normalize_payload(r);
  bool found = false;
  for (const auto& v : views) found |= v.bytes == "brotli body text";
  EXPECT_TRUE(found);

  r.body = "not brotli at all";
  std::vector<std::string> warnings;
  views = normalize_payload(r, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(views.size(), 2u);
}

TEST(Normalize, Base64SegmentInsideJson) {
  Bytes b64 = codec::base64_encode("example.email@domain.com");
  auto views = normalize_payload(post("https://t.example/", "{\"d\":\"" + b64 + "\"}"));
  bool found = false;
  for (const auto& v : views)
    found |= v.bytes == "example.email@domain.com" && derivation_name(v.derivation) == "base64-decoded-segment";
  EXPECT_TRUE(found);
}

TEST(Normalize, MisalignedBase64Run) {
  Bytes b64 = codec::base64_encode("example.email@domain.com");
  NetworkRecord r;
  r.request_url = "https://t.example/collect/v1/" + b64;
  bool found = false;
  for (const auto& v : normalize_payload(r)) found |= v.bytes.find("example.email@domain.com") != Bytes::npos;
  EXPECT_TRUE(found);
}

TEST(Scan, IdentityViaUrlDecodedView) {
  auto idx = index_for({mail_token()}, chains({"identity", "URL-encode"}));
  NetworkRecord r;
  r.request_url = "https://t.example/c?e=example.email%40domain.com";
  auto fs = scan_request(r, 0, idx);
  const LeakFinding* id = find(fs, "identity");
  ASSERT_NE(id, nullptr);
  EXPECT_EQ(derivation_name(id->derivation), "url-decoded");
  EXPECT_EQ(id->token_id, "mail");
  const LeakFinding* enc = find(fs, "URL-encode");
  ASSERT_NE(enc, nullptr);
  EXPECT_TRUE(enc->primary);
  EXPECT_FALSE(id->primary);
}

TEST(Scan, GzipBase64Chain) {
  auto token = mail_token();
  auto idx = index_for({token}, chains({"identity", "Gzip>Base64", "Base64"}));
  auto fs = scan_request(post("https://t.example/", apply_chain(token.value, parse_chain("Gzip>Base64"))), 3, idx);
  const LeakFinding* f = find(fs, "Gzip>Base64", true);
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->request_index, 3u);
  EXPECT_EQ(f->origin, ViewOrigin::kBody);
  EXPECT_TRUE(f->derivation.empty());
  EXPECT_LE(f->byte_offset + f->matched_len, apply_chain(token.value, parse_chain("Gzip>Base64")).size());
  // The container views explain the same bytes at greater depth.
  const LeakFinding* id = find(fs, "identity");
  ASSERT_NE(id, nullptr);
  EXPECT_EQ(derivation_name(id->derivation), "base64-decoded-segment>gzip-decompressed");
}

TEST(Scan, NumericBoundaryRule) {
  HoneyToken phone{"phone", "098765432109", DataCategory::kPhone, false};
  auto idx = index_for({phone}, chains({"identity"}));
  NetworkRecord r;
  r.request_url = "https://t.example/c?p=098765432109&x=1";
  EXPECT_EQ(scan_request(r, 0, idx).size(), 1u);
  r.request_url = "https://t.example/c?p=1098765432109";
  EXPECT_TRUE(scan_request(r, 0, idx).empty());
  r.request_url = "https://t.example/c?p=098765432109a";
  EXPECT_TRUE(scan_request(r, 0, idx).empty());
  r.request_url = "https://t.example/098765432109";
  EXPECT_EQ(scan_request(r, 0, idx).size(), 1u);
}

TEST(Scan, FragmentMatchesAreMarked) {
  auto idx = index_for({mail_token()}, chains({"identity"}));
  NetworkRecord r;
  r.request_url = "https://t.example/p#e=example.email@domain.com";
  auto fs = scan_request(r, 0, idx);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_TRUE(fs[0].in_fragment);
  r.request_url = "https://t.example/p?e=example.email%40domain.com#x";
  fs = scan_request(r, 0, idx);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_FALSE(fs[0].in_fragment);
}

TEST(Scan, CaseVariantsAndDedup) {
  HoneyToken pw{"pw", "ExamplePassword1!", DataCategory::kPassword, false};
  auto idx = index_for({pw}, chains({"identity", "MD5"}));
  // 3 variants x (identity + hex + HEX + raw)
  EXPECT_EQ(idx.pattern_count(), 12u);
  Bytes md5_lower = to_hex(codec::md5("examplepassword1!"));
  auto fs = scan_request(post("https://t.example/", md5_lower + "&" + md5_lower), 0, idx);
  ASSERT_EQ(fs.size(), 1u);
  EXPECT_EQ(fs[0].variant, CaseVariant::kLower);
  EXPECT_EQ(fs[0].rendering, "hex");
}

TEST(Detect, OrderedAndRequestsOnly) {
  CrawlTrace t;
  t.page_url = "https://site.test/";
  auto token = mail_token();
  t.honey_tokens.push_back(token);
  auto idx = index_for(t.honey_tokens, chains({"identity", "Base64", "SHA-256"}));
  EXPECT_TRUE(detect_leaks(t, idx).empty());
  t.requests.push_back(post("https://a.test/", apply_chain(token.value, parse_chain("SHA-256"))));
  t.requests.back().timestamp = 20;
  t.requests.push_back(post("https://b.test/", "none"));
  t.requests.back().timestamp = 5;
  t.requests.push_back(post("https://c.test/", apply_chain(token.value, parse_chain("Base64"))));
  t.requests.back().timestamp = 10;
  auto fs = detect_leaks(t, idx);
  std::vector<const LeakFinding*> primary;
  for (const auto& f : fs)
    if (f.primary) primary.push_back(&f);
  ASSERT_EQ(primary.size(), 2u);
  EXPECT_EQ(primary[0]->request_index, 2u);
  EXPECT_EQ(chain_name(primary[0]->chain), "Base64");
  EXPECT_EQ(primary[1]->request_index, 0u);
  EXPECT_EQ(chain_name(primary[1]->chain), "SHA-256");
  for (std::size_t i = 1; i < fs.size(); ++i) EXPECT_LE(fs[i - 1].timestamp, fs[i].timestamp);
  // Monotonicity: more requests never remove findings.
  t.requests.push_back(post("https://d.test/", token.value));
  auto more = detect_leaks(t, idx);
  EXPECT_EQ(more.size(), fs.size() + 1);
  for (const auto& f : fs) EXPECT_NE(std::find(more.begin(), more.end(), f), more.end());
}

TEST(Scan, RandomPayloadsAreClean) {
  HoneyToken tok{"t", "Ex4mple_Token#17x", DataCategory::kFormText, false};
  auto idx = index_for({tok}, enumerate_chains(ChainConfig::full()));
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    Bytes body(1024, '\0');
    for (auto& c : body) c = static_cast<char>(rng() & 0xFF);
    EXPECT_TRUE(scan_request(post("https://r.test/", body), 0, idx).empty());
  }
}

TEST(Scan, CoveringMatchIsPrimary) {
  HoneyToken tok{"t", "example_text_area", DataCategory::kFormText, false};
  auto idx = index_for({tok}, chains({"Murmur3-64", "Murmur3-128", "Deflate", "Gzip", "Zlib"}));
  for (const char* name : {"Murmur3-128", "Gzip", "Zlib", "Murmur3-64", "Deflate"}) {
    auto fs = scan_request(post("https://t.example/", apply_chain(tok.value, parse_chain(name))), 0, idx);
    const LeakFinding* f = find(fs, name, true);
    ASSERT_NE(f, nullptr) << name;
    EXPECT_EQ(f->byte_offset, 0u) << name;
  }
}
