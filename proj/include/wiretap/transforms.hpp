#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/common.hpp"

namespace wiretap {

enum class TransformKind { kHash, kEncode, kCompress };

// The transform inventory. Enumerator order is the canonical order used to
// sort chains: hashes, then encodings, then compressors.
enum class Algorithm : std::uint8_t {
  kMd5,
  kSha1,
  kSha224,
  kSha256,
  kSha384,
  kSha512,
  kSha3_224,
  kSha3_256,
  kSha3_384,
  kSha3_512,
  kMurmur3_32,
  kMurmur3_64,
  kMurmur3_128,
  kCrc32,
  kAdler32,
  kBase16,
  kBase32,
  kBase58,
  kBase64,
  kUrlEncode,
  kRot13,
  kHtmlEntity,
  kBinaryString,
  kDeflate,
  kGzip,
  kZlib,
  kBrotli,
  kLzString,
  kLzw,
};

inline constexpr std::size_t kAlgorithmCount = 29;

struct Transform {
  Algorithm algorithm;

  TransformKind kind() const;
  std::string_view name() const;
  auto operator<=>(const Transform&) const = default;
};

std::span<const Algorithm> all_algorithms();
std::span<const Algorithm> all_hashes();
std::span<const Algorithm> all_encodings();
std::span<const Algorithm> all_compressors();

TransformKind kind_of(Algorithm a);
std::string_view name_of(Algorithm a);
// Accepts canonical names ("SHA3-256", "URL-encode", "LZ-string", ...),
// case-insensitively. Throws ConfigError for anything else.
Algorithm parse_algorithm(std::string_view name);

// Hashes whose output is an integer (rendered additionally in decimal).
bool is_integer_hash(Algorithm a);

// Deterministic forward transform. Hashes return raw digest bytes (integers
// as big-endian bytes); LZ-string returns its base64-safe variant.
Bytes apply_transform(BytesView input, Transform t);
inline Bytes apply_transform(BytesView input, Algorithm a) { return apply_transform(input, Transform{a}); }

// Inverse of an encoding or compressor. nullopt when the input is not a valid
// encoding (or for hashes, which have no inverse).
std::optional<Bytes> invert_transform(BytesView input, Algorithm a);

// Alternate byte forms a step can put on the wire. A hash yields its raw
// digest plus lowercase and uppercase hex (and decimal for integer hashes);
// LZ-string yields its base64-safe and UTF-16-safe variants; everything else
// yields exactly one form with an empty label.
struct Rendering {
  std::string label;
  Bytes bytes;
};
std::vector<Rendering> transform_renderings(BytesView input, Algorithm a);

namespace codec {

// Encoders. Decoders return nullopt on malformed input.
std::string base16_encode(BytesView in);  // uppercase
std::optional<Bytes> base16_decode(std::string_view in);
std::string base32_encode(BytesView in);  // RFC 4648 with padding
std::optional<Bytes> base32_decode(std::string_view in);
std::string base58_encode(BytesView in);  // Bitcoin alphabet
std::optional<Bytes> base58_decode(std::string_view in);
std::string base64_encode(BytesView in);  // standard alphabet, padded
std::optional<Bytes> base64_decode(std::string_view in);
// Accepts standard and URL-safe alphabets, optional padding, and ignores a
// dangling final character. Used on base64 runs found inside payloads.
std::optional<Bytes> base64_decode_lenient(std::string_view in);
std::string url_encode(BytesView in);  // encodeURIComponent character set
std::optional<Bytes> url_decode(std::string_view in);
std::string rot13(BytesView in);
std::string html_entity_encode(BytesView in);
std::optional<Bytes> html_entity_decode(std::string_view in);
std::string binary_string_encode(BytesView in);
std::optional<Bytes> binary_string_decode(std::string_view in);

// Digests.
Bytes md5(BytesView in);
Bytes sha1(BytesView in);
Bytes sha2(BytesView in, int bits);  // 224, 256, 384, 512
Bytes sha3(BytesView in, int bits);  // 224, 256, 384, 512
std::uint32_t murmur3_32(BytesView in, std::uint32_t seed = 0);
std::array<std::uint64_t, 2> murmur3_x64_128(BytesView in, std::uint32_t seed = 0);
std::uint32_t crc32(BytesView in);
std::uint32_t adler32(BytesView in);

// Compressors with fixed parameter sets:
//   deflate: raw deflate, level 6      zlib: level 6
//   gzip:    level 9, mtime 0, OS byte 0xff
//   brotli:  quality 11, window 22
//   lz-string: input bytes read as Latin-1 code units
//   lzw:     8-bit initial dictionary, 12-bit codes big-endian, frozen at 4096
Bytes deflate_compress(BytesView in);
Bytes zlib_compress(BytesView in);
Bytes gzip_compress(BytesView in);
Bytes brotli_compress(BytesView in);
std::string lzstring_compress_base64(BytesView in);
std::string lzstring_compress_utf16(BytesView in);  // UTF-8 encoded
Bytes lzw_compress(BytesView in);

// Decompressors. max_output bounds the inflated size.
inline constexpr std::size_t kDefaultMaxInflate = 16u << 20;
std::optional<Bytes> deflate_decompress(BytesView in, std::size_t max_output = kDefaultMaxInflate);
std::optional<Bytes> zlib_decompress(BytesView in, std::size_t max_output = kDefaultMaxInflate);
std::optional<Bytes> gzip_decompress(BytesView in, std::size_t max_output = kDefaultMaxInflate);
std::optional<Bytes> brotli_decompress(BytesView in, std::size_t max_output = kDefaultMaxInflate);
std::optional<Bytes> lzstring_decompress_base64(std::string_view in);
std::optional<Bytes> lzstring_decompress_utf16(std::string_view in);
std::optional<Bytes> lzw_decompress(BytesView in);

std::string uint_to_decimal(unsigned __int128 value);

}  // namespace codec
}  // namespace wiretap
