#include <gtest/gtest.h>

#include <random>

#include "test_helpers.hpp"
#include "wiretap/transforms.hpp"

using namespace wiretap;
using wiretap::testing::load_json;

namespace {

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  Bytes out(n, '\0');
  for (auto& c : out) c = static_cast<char>(rng() & 0xFF);
  return out;
}

}  // namespace

TEST(Transforms, InventoryShape) {
  EXPECT_EQ(all_algorithms().size(), 29u);
  EXPECT_EQ(all_hashes().size(), 15u);
  EXPECT_EQ(all_encodings().size(), 8u);
  EXPECT_EQ(all_compressors().size(), 6u);
  for (Algorithm a : all_hashes()) EXPECT_EQ(kind_of(a), TransformKind::kHash);
  for (Algorithm a : all_encodings()) EXPECT_EQ(kind_of(a), TransformKind::kEncode);
  for (Algorithm a : all_compressors()) EXPECT_EQ(kind_of(a), TransformKind::kCompress);
}

TEST(Transforms, NamesRoundTrip) {
  for (Algorithm a : all_algorithms()) {
    EXPECT_EQ(parse_algorithm(name_of(a)), a);
    EXPECT_EQ(parse_algorithm(ascii_lower(name_of(a))), a);
  }
  EXPECT_THROW(parse_algorithm("SHA-999"), ConfigError);
  EXPECT_THROW(parse_algorithm(""), ConfigError);
}

TEST(Transforms, SimpleEncodings) {
  EXPECT_EQ(apply_transform("example", Algorithm::kRot13), "rknzcyr");
  EXPECT_EQ(apply_transform("A", Algorithm::kBase16), "41");
  EXPECT_EQ(apply_transform("A", Algorithm::kBinaryString), "01000001");
  EXPECT_EQ(apply_transform("a b@c", Algorithm::kUrlEncode), "a%20b%40c");
  EXPECT_EQ(apply_transform("<a&'\">", Algorithm::kHtmlEntity), "&lt;a&amp;&#39;&quot;&gt;");
  EXPECT_EQ(apply_transform("", Algorithm::kBase64), "");
}

TEST(Transforms, DigestsMatchReferenceVectors) {
  auto doc = load_json("digest_vectors.json");
  const auto& inputs = doc["inputs_hex"];
  ASSERT_EQ(inputs.size(), 10u);
  ASSERT_EQ(doc["digests"].size(), 15u);
  for (const auto& [name, expected] : doc["digests"].items()) {
    Algorithm a = parse_algorithm(name);
    ASSERT_EQ(kind_of(a), TransformKind::kHash) << name;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      Bytes input = from_hex(inputs[i].get<std::string>());
      EXPECT_EQ(to_hex(apply_transform(input, a)), expected[i].get<std::string>()) << name << " #" << i;
    }
  }
}

TEST(Transforms, EncodersAndCompressorsMatchGoldens) {
  auto doc = load_json("transform_goldens.json");
  const auto& inputs = doc["inputs_hex"];
  for (const auto& [name, expected] : doc["outputs_hex"].items()) {
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      Bytes input = from_hex(inputs[i].get<std::string>());
      Bytes got;
      if (name == "LZ-string/base64") {
        got = codec::lzstring_compress_base64(input);
      } else if (name == "LZ-string/utf16") {
        got = codec::lzstring_compress_utf16(input);
      } else {
        got = apply_transform(input, parse_algorithm(name));
      }
      EXPECT_EQ(to_hex(got), expected[i].get<std::string>()) << name << " #" << i;
    }
  }
}

TEST(Transforms, GzipThenBase64Example) {
  auto doc = load_json("transform_goldens.json");
  Bytes gz = apply_transform("example_text_area", Algorithm::kGzip);
  EXPECT_EQ(apply_transform(gz, Algorithm::kBase64), doc["gzip_base64_example_text_area"].get<std::string>());
}

TEST(Transforms, IntegerHashRenderings) {
  auto r = transform_renderings("abc", Algorithm::kCrc32);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].bytes, "352441c2");
  EXPECT_EQ(r[1].bytes, "352441C2");
  EXPECT_EQ(r[2].bytes, "891568578");
  EXPECT_EQ(r[3].bytes, from_hex("352441c2"));
  auto md5 = transform_renderings("abc", Algorithm::kMd5);
  EXPECT_EQ(md5.size(), 3u);
}

TEST(Transforms, EncodingInverses) {
  std::mt19937_64 rng(7);
  for (Algorithm a : all_encodings()) {
    for (int i = 0; i < 200; ++i) {
      Bytes x = random_bytes(rng, rng() % 64);
      auto back = invert_transform(apply_transform(x, a), a);
      ASSERT_TRUE(back.has_value()) << name_of(a);
      ASSERT_EQ(*back, x) << name_of(a);
    }
  }
}

TEST(Transforms, CompressionInverses) {
  std::mt19937_64 rng(11);
  for (Algorithm a : all_compressors()) {
    for (std::size_t n : {1u, 2u, 17u, 300u, 4096u}) {
      Bytes x = random_bytes(rng, n);
      auto back = invert_transform(apply_transform(x, a), a);
      ASSERT_TRUE(back.has_value()) << name_of(a) << " n=" << n;
      ASSERT_EQ(*back, x) << name_of(a);
    }
    Bytes text(3000, 'a');
    auto back = invert_transform(apply_transform(text, a), a);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, text);
  }
  Bytes x = "some latin1 \xe9\xff text";
  EXPECT_EQ(codec::lzstring_decompress_utf16(codec::lzstring_compress_utf16(x)), x);
}

TEST(Transforms, DecodersRejectGarbage) {
  EXPECT_FALSE(codec::base64_decode("abc").has_value());
  EXPECT_FALSE(codec::base16_decode("0G").has_value());
  EXPECT_FALSE(codec::base58_decode("0OIl").has_value());
  EXPECT_FALSE(codec::binary_string_decode("0102").has_value());
  EXPECT_FALSE(codec::gzip_decompress("not gzip").has_value());
  EXPECT_FALSE(codec::brotli_decompress(Bytes(10, '\xff')).has_value());
}

TEST(Transforms, LenientBase64) {
  EXPECT_EQ(codec::base64_decode_lenient("aGVsbG8"), "hello");
  EXPECT_EQ(codec::base64_decode_lenient("aGVsbG8="), "hello");
  EXPECT_EQ(codec::base64_decode_lenient("_-8"), "\xff\xef");
}
