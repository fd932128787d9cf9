#include "wiretap/transforms.hpp"

#include <algorithm>

namespace wiretap {

namespace {

struct AlgorithmInfo {
  Algorithm algorithm;
  TransformKind kind;
  std::string_view name;
};

constexpr std::array<AlgorithmInfo, kAlgorithmCount> kInfo = {{
    {Algorithm::kMd5, TransformKind::kHash, "MD5"},
    {Algorithm::kSha1, TransformKind::kHash, "SHA-1"},
    {Algorithm::kSha224, TransformKind::kHash, "SHA-224"},
    {Algorithm::kSha256, TransformKind::kHash, "SHA-256"},
    {Algorithm::kSha384, TransformKind::kHash, "SHA-384"},
    {Algorithm::kSha512, TransformKind::kHash, "SHA-512"},
    {Algorithm::kSha3_224, TransformKind::kHash, "SHA3-224"},
    {Algorithm::kSha3_256, TransformKind::kHash, "SHA3-256"},
    {Algorithm::kSha3_384, TransformKind::kHash, "SHA3-384"},
    {Algorithm::kSha3_512, TransformKind::kHash, "SHA3-512"},
    {Algorithm::kMurmur3_32, TransformKind::kHash, "Murmur3-32"},
    {Algorithm::kMurmur3_64, TransformKind::kHash, "Murmur3-64"},
    {Algorithm::kMurmur3_128, TransformKind::kHash, "Murmur3-128"},
    {Algorithm::kCrc32, TransformKind::kHash, "CRC32"},
    {Algorithm::kAdler32, TransformKind::kHash, "Adler-32"},
    {Algorithm::kBase16, TransformKind::kEncode, "Base16"},
    {Algorithm::kBase32, TransformKind::kEncode, "Base32"},
    {Algorithm::kBase58, TransformKind::kEncode, "Base58"},
    {Algorithm::kBase64, TransformKind::kEncode, "Base64"},
    {Algorithm::kUrlEncode, TransformKind::kEncode, "URL-encode"},
    {Algorithm::kRot13, TransformKind::kEncode, "ROT13"},
    {Algorithm::kHtmlEntity, TransformKind::kEncode, "HTML-entity"},
    {Algorithm::kBinaryString, TransformKind::kEncode, "binary-string"},
    {Algorithm::kDeflate, TransformKind::kCompress, "Deflate"},
    {Algorithm::kGzip, TransformKind::kCompress, "Gzip"},
    {Algorithm::kZlib, TransformKind::kCompress, "Zlib"},
    {Algorithm::kBrotli, TransformKind::kCompress, "Brotli"},
    {Algorithm::kLzString, TransformKind::kCompress, "LZ-string"},
    {Algorithm::kLzw, TransformKind::kCompress, "LZW"},
}};

constexpr auto kAll = [] {
  std::array<Algorithm, kAlgorithmCount> out{};
  for (std::size_t i = 0; i < kAlgorithmCount; ++i) out[i] = kInfo[i].algorithm;
  return out;
}();

const AlgorithmInfo& info(Algorithm a) { return kInfo[static_cast<std::size_t>(a)]; }

Bytes big_endian(std::uint64_t value, int bytes) {
  Bytes out(static_cast<std::size_t>(bytes), '\0');
  for (int i = bytes - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>(value & 0xFF);
    value >>= 8;
  }
  return out;
}

}  // namespace

std::span<const Algorithm> all_algorithms() { return kAll; }
std::span<const Algorithm> all_hashes() { return std::span<const Algorithm>(kAll).subspan(0, 15); }
std::span<const Algorithm> all_encodings() { return std::span<const Algorithm>(kAll).subspan(15, 8); }
std::span<const Algorithm> all_compressors() { return std::span<const Algorithm>(kAll).subspan(23, 6); }

TransformKind kind_of(Algorithm a) { return info(a).kind; }
std::string_view name_of(Algorithm a) { return info(a).name; }
TransformKind Transform::kind() const { return kind_of(algorithm); }
std::string_view Transform::name() const { return name_of(algorithm); }

Algorithm parse_algorithm(std::string_view name) {
  std::string wanted = ascii_lower(name);
  for (const auto& entry : kInfo)
    if (ascii_lower(entry.name) == wanted) return entry.algorithm;
  throw ConfigError("unsupported transform: " + std::string(name));
}

bool is_integer_hash(Algorithm a) {
  switch (a) {
    case Algorithm::kMurmur3_32:
    case Algorithm::kMurmur3_64:
    case Algorithm::kMurmur3_128:
    case Algorithm::kCrc32:
    case Algorithm::kAdler32:
      return true;
    default:
      return false;
  }
}

Bytes apply_transform(BytesView input, Transform t) {
  using namespace codec;
  switch (t.algorithm) {
    case Algorithm::kMd5: return md5(input);
    case Algorithm::kSha1: return sha1(input);
    case Algorithm::kSha224: return sha2(input, 224);
    case Algorithm::kSha256: return sha2(input, 256);
    case Algorithm::kSha384: return sha2(input, 384);
    case Algorithm::kSha512: return sha2(input, 512);
    case Algorithm::kSha3_224: return sha3(input, 224);
    case Algorithm::kSha3_256: return sha3(input, 256);
    case Algorithm::kSha3_384: return sha3(input, 384);
    case Algorithm::kSha3_512: return sha3(input, 512);
    case Algorithm::kMurmur3_32: return big_endian(murmur3_32(input), 4);
    case Algorithm::kMurmur3_64: return big_endian(murmur3_x64_128(input)[0], 8);
    case Algorithm::kMurmur3_128: {
      auto h = murmur3_x64_128(input);
      return big_endian(h[0], 8) + big_endian(h[1], 8);
    }
    case Algorithm::kCrc32: return big_endian(crc32(input), 4);
    case Algorithm::kAdler32: return big_endian(adler32(input), 4);
    case Algorithm::kBase16: return base16_encode(input);
    case Algorithm::kBase32: return base32_encode(input);
    case Algorithm::kBase58: return base58_encode(input);
    case Algorithm::kBase64: return base64_encode(input);
    case Algorithm::kUrlEncode: return url_encode(input);
    case Algorithm::kRot13: return rot13(input);
    case Algorithm::kHtmlEntity: return html_entity_encode(input);
    case Algorithm::kBinaryString: return binary_string_encode(input);
    case Algorithm::kDeflate: return deflate_compress(input);
    case Algorithm::kGzip: return gzip_compress(input);
    case Algorithm::kZlib: return zlib_compress(input);
    case Algorithm::kBrotli: return brotli_compress(input);
    case Algorithm::kLzString: return lzstring_compress_base64(input);
    case Algorithm::kLzw: return lzw_compress(input);
  }
  throw ConfigError("unsupported transform");
}

std::optional<Bytes> invert_transform(BytesView input, Algorithm a) {
  using namespace codec;
  switch (a) {
    case Algorithm::kBase16: return base16_decode(input);
    case Algorithm::kBase32: return base32_decode(input);
    case Algorithm::kBase58: return base58_decode(input);
    case Algorithm::kBase64: return base64_decode(input);
    case Algorithm::kUrlEncode: return url_decode(input);
    case Algorithm::kRot13: return rot13(input);
    case Algorithm::kHtmlEntity: return html_entity_decode(input);
    case Algorithm::kBinaryString: return binary_string_decode(input);
    case Algorithm::kDeflate: return deflate_decompress(input);
    case Algorithm::kGzip: return gzip_decompress(input);
    case Algorithm::kZlib: return zlib_decompress(input);
    case Algorithm::kBrotli: return brotli_decompress(input);
    case Algorithm::kLzString: return lzstring_decompress_base64(input);
    case Algorithm::kLzw: return lzw_decompress(input);
    default: return std::nullopt;
  }
}

std::vector<Rendering> transform_renderings(BytesView input, Algorithm a) {
  std::vector<Rendering> out;
  switch (kind_of(a)) {
    case TransformKind::kHash: {
      Bytes raw = apply_transform(input, a);
      out.push_back({"hex", to_hex(raw, false)});
      out.push_back({"HEX", to_hex(raw, true)});
      if (is_integer_hash(a)) {
        unsigned __int128 value = 0;
        for (unsigned char c : raw) value = (value << 8) | c;
        out.push_back({"dec", codec::uint_to_decimal(value)});
      }
      out.push_back({"raw", std::move(raw)});
      break;
    }
    case TransformKind::kCompress:
      if (a == Algorithm::kLzString) {
        out.push_back({"base64", codec::lzstring_compress_base64(input)});
        out.push_back({"utf16", codec::lzstring_compress_utf16(input)});
        break;
      }
      out.push_back({"", apply_transform(input, a)});
      break;
    case TransformKind::kEncode:
      out.push_back({"", apply_transform(input, a)});
      break;
  }
  return out;
}

}  // namespace wiretap
