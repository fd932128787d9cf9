#include <brotli/decode.h>
#include <brotli/encode.h>
#include <zlib.h>

#include <cstring>
#include <functional>
#include <memory>
#include <unordered_map>

#include "wiretap/transforms.hpp"

namespace wiretap::codec {

namespace {

constexpr int kDeflateLevel = 6;
constexpr int kGzipLevel = 9;
constexpr int kBrotliQuality = 11;
constexpr int kBrotliWindow = 22;

Bytes zlib_family_compress(BytesView in, int level, int window_bits, bool gzip_header) {
  z_stream zs{};
  if (deflateInit2(&zs, level, Z_DEFLATED, window_bits, 8, Z_DEFAULT_STRATEGY) != Z_OK)
    throw Error("deflateInit2 failed");
  gz_header header{};
  if (gzip_header) {
    header.os = 0xff;  // unknown
    header.time = 0;
    deflateSetHeader(&zs, &header);
  }
  Bytes out(deflateBound(&zs, static_cast<uLong>(in.size())) + 32, '\0');
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error("deflate failed");
  out.resize(zs.total_out);
  return out;
}

std::optional<Bytes> zlib_family_decompress(BytesView in, int window_bits, std::size_t max_output) {
  z_stream zs{};
  if (inflateInit2(&zs, window_bits) != Z_OK) return std::nullopt;
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
  zs.avail_in = static_cast<uInt>(in.size());
  Bytes out;
  char buffer[16384];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = reinterpret_cast<Bytef*>(buffer);
    zs.avail_out = sizeof buffer;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) break;
    out.append(buffer, sizeof buffer - zs.avail_out);
    if (out.size() > max_output) break;
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) break;  // truncated input
  }
  inflateEnd(&zs);
  if (rc != Z_STREAM_END) return std::nullopt;
  return out;
}

// --- LZ-string -----------------------------------------------------------

constexpr std::string_view kLzBase64Keys =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/=";

class BitWriter {
 public:
  BitWriter(int bits_per_char, std::function<void(int)> emit)
      : bits_per_char_(bits_per_char), emit_(std::move(emit)) {}

  void write_bit(int bit) {
    value_ = (value_ << 1) | bit;
    if (position_ == bits_per_char_ - 1) {
      position_ = 0;
      emit_(value_);
      value_ = 0;
    } else {
      ++position_;
    }
  }
  // Least significant bit first, as the reference implementation does.
  void write_value(unsigned value, int bits) {
    for (int i = 0; i < bits; ++i) {
      write_bit(static_cast<int>(value & 1));
      value >>= 1;
    }
  }
  void flush() {
    while (true) {
      value_ <<= 1;
      if (position_ == bits_per_char_ - 1) {
        emit_(value_);
        break;
      }
      ++position_;
    }
  }

 private:
  int bits_per_char_;
  std::function<void(int)> emit_;
  int value_ = 0;
  int position_ = 0;
};

void lz_compress(BytesView input, BitWriter& writer) {
  std::unordered_map<std::string, unsigned> dictionary;
  std::unordered_map<std::string, bool> to_create;
  std::string w;
  unsigned enlarge_in = 2, dict_size = 3, num_bits = 2;

  auto bump = [&] {
    if (--enlarge_in == 0) {
      enlarge_in = 1u << num_bits;
      ++num_bits;
    }
  };
  auto emit_w = [&] {
    if (to_create.count(w)) {
      // Input characters are Latin-1 code units, always below 256.
      writer.write_value(0, static_cast<int>(num_bits));
      writer.write_value(static_cast<unsigned char>(w[0]), 8);
      bump();
      to_create.erase(w);
    } else {
      writer.write_value(dictionary[w], static_cast<int>(num_bits));
    }
    bump();
  };

  for (char ch : input) {
    std::string c(1, ch);
    if (!dictionary.count(c)) {
      dictionary[c] = dict_size++;
      to_create[c] = true;
    }
    std::string wc = w + c;
    if (dictionary.count(wc)) {
      w = std::move(wc);
    } else {
      emit_w();
      dictionary[wc] = dict_size++;
      w = c;
    }
  }
  if (!w.empty()) emit_w();
  writer.write_value(2, static_cast<int>(num_bits));
  writer.flush();
}

// Decodes into UTF-16 code units; nullopt for corrupt streams.
std::optional<std::u16string> lz_decompress(std::size_t length, unsigned reset_value,
                                            const std::function<unsigned(std::size_t)>& next_value) {
  std::vector<std::u16string> dictionary;
  for (char16_t i = 0; i < 3; ++i) dictionary.emplace_back(1, i);
  unsigned enlarge_in = 4, num_bits = 3;
  std::u16string result, w, entry;

  unsigned val = next_value(0), position = reset_value;
  std::size_t index = 1;
  auto read_bits = [&](unsigned count) {
    unsigned bits = 0;
    for (unsigned power = 0; power < count; ++power) {
      unsigned resb = val & position;
      position >>= 1;
      if (position == 0) {
        position = reset_value;
        val = next_value(index++);
      }
      bits |= (resb > 0 ? 1u : 0u) << power;
    }
    return bits;
  };

  char16_t c;
  switch (read_bits(2)) {
    case 0: c = static_cast<char16_t>(read_bits(8)); break;
    case 1: c = static_cast<char16_t>(read_bits(16)); break;
    case 2: return std::u16string();
    default: return std::nullopt;
  }
  dictionary.emplace_back(1, c);
  w = std::u16string(1, c);
  result = w;

  while (true) {
    if (index > length) return std::nullopt;
    unsigned code = read_bits(num_bits);
    switch (code) {
      case 0:
        dictionary.emplace_back(1, static_cast<char16_t>(read_bits(8)));
        code = static_cast<unsigned>(dictionary.size() - 1);
        --enlarge_in;
        break;
      case 1:
        dictionary.emplace_back(1, static_cast<char16_t>(read_bits(16)));
        code = static_cast<unsigned>(dictionary.size() - 1);
        --enlarge_in;
        break;
      case 2:
        return result;
      default:
        break;
    }
    if (enlarge_in == 0) {
      enlarge_in = 1u << num_bits;
      ++num_bits;
    }
    if (code < dictionary.size() && code >= 3) {
      entry = dictionary[code];
    } else if (code == dictionary.size()) {
      entry = w + w[0];
    } else {
      return std::nullopt;
    }
    result += entry;
    dictionary.push_back(w + entry[0]);
    --enlarge_in;
    w = entry;
    if (enlarge_in == 0) {
      enlarge_in = 1u << num_bits;
      ++num_bits;
    }
  }
}

void append_utf8(std::string& out, unsigned cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Decodes UTF-8 limited to the basic multilingual plane.
std::optional<std::vector<unsigned>> utf8_to_code_points(std::string_view in) {
  std::vector<unsigned> out;
  for (std::size_t i = 0; i < in.size();) {
    auto b0 = static_cast<unsigned char>(in[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      i += 1;
    } else if ((b0 & 0xE0) == 0xC0 && i + 1 < in.size()) {
      out.push_back(((b0 & 0x1Fu) << 6) | (static_cast<unsigned char>(in[i + 1]) & 0x3Fu));
      i += 2;
    } else if ((b0 & 0xF0) == 0xE0 && i + 2 < in.size()) {
      out.push_back(((b0 & 0x0Fu) << 12) | ((static_cast<unsigned char>(in[i + 1]) & 0x3Fu) << 6) |
                    (static_cast<unsigned char>(in[i + 2]) & 0x3Fu));
      i += 3;
    } else {
      return std::nullopt;
    }
  }
  return out;
}

std::optional<Bytes> to_latin1(const std::optional<std::u16string>& text) {
  if (!text) return std::nullopt;
  Bytes out;
  out.reserve(text->size());
  for (char16_t c : *text) {
    if (c > 0xFF) return std::nullopt;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

}  // namespace

Bytes deflate_compress(BytesView in) { return zlib_family_compress(in, kDeflateLevel, -15, false); }
Bytes zlib_compress(BytesView in) { return zlib_family_compress(in, kDeflateLevel, 15, false); }
Bytes gzip_compress(BytesView in) { return zlib_family_compress(in, kGzipLevel, 31, true); }

std::optional<Bytes> deflate_decompress(BytesView in, std::size_t max_output) {
  return zlib_family_decompress(in, -15, max_output);
}
std::optional<Bytes> zlib_decompress(BytesView in, std::size_t max_output) {
  return zlib_family_decompress(in, 15, max_output);
}
std::optional<Bytes> gzip_decompress(BytesView in, std::size_t max_output) {
  if (in.size() < 18 || static_cast<unsigned char>(in[0]) != 0x1f ||
      static_cast<unsigned char>(in[1]) != 0x8b)
    return std::nullopt;
  return zlib_family_decompress(in, 31, max_output);
}

Bytes brotli_compress(BytesView in) {
  std::size_t out_size = BrotliEncoderMaxCompressedSize(in.size());
  if (out_size == 0) out_size = in.size() + 1024;
  Bytes out(out_size, '\0');
  if (!BrotliEncoderCompress(kBrotliQuality, kBrotliWindow, BROTLI_MODE_GENERIC, in.size(),
                             reinterpret_cast<const uint8_t*>(in.data()), &out_size,
                             reinterpret_cast<uint8_t*>(out.data())))
    throw Error("brotli compression failed");
  out.resize(out_size);
  return out;
}

std::optional<Bytes> brotli_decompress(BytesView in, std::size_t max_output) {
  std::unique_ptr<BrotliDecoderState, decltype(&BrotliDecoderDestroyInstance)> state(
      BrotliDecoderCreateInstance(nullptr, nullptr, nullptr), &BrotliDecoderDestroyInstance);
  if (!state) return std::nullopt;
  std::size_t avail_in = in.size();
  const auto* next_in = reinterpret_cast<const uint8_t*>(in.data());
  Bytes out;
  uint8_t buffer[16384];
  while (true) {
    std::size_t avail_out = sizeof buffer;
    uint8_t* next_out = buffer;
    auto rc = BrotliDecoderDecompressStream(state.get(), &avail_in, &next_in, &avail_out, &next_out, nullptr);
    out.append(reinterpret_cast<const char*>(buffer), sizeof buffer - avail_out);
    if (out.size() > max_output) return std::nullopt;
    if (rc == BROTLI_DECODER_RESULT_SUCCESS) return avail_in == 0 ? std::optional<Bytes>(out) : std::nullopt;
    if (rc == BROTLI_DECODER_RESULT_NEEDS_MORE_OUTPUT) continue;
    return std::nullopt;  // error or truncated input
  }
}

std::string lzstring_compress_base64(BytesView in) {
  std::string out;
  BitWriter writer(6, [&](int v) { out.push_back(kLzBase64Keys[static_cast<std::size_t>(v)]); });
  lz_compress(in, writer);
  switch (out.size() % 4) {
    case 1: out += "==="; break;
    case 2: out += "=="; break;
    case 3: out += "="; break;
    default: break;
  }
  return out;
}

std::string lzstring_compress_utf16(BytesView in) {
  std::string out;
  BitWriter writer(15, [&](int v) { append_utf8(out, static_cast<unsigned>(v) + 32); });
  lz_compress(in, writer);
  out.push_back(' ');
  return out;
}

std::optional<Bytes> lzstring_decompress_base64(std::string_view in) {
  if (in.empty()) return Bytes();
  std::vector<unsigned> values;
  values.reserve(in.size());
  for (char c : in) {
    auto pos = kLzBase64Keys.find(c);
    if (pos == std::string_view::npos) return std::nullopt;
    values.push_back(static_cast<unsigned>(pos));
  }
  return to_latin1(lz_decompress(values.size(), 32, [&](std::size_t i) {
    return i < values.size() ? values[i] : 0u;
  }));
}

std::optional<Bytes> lzstring_decompress_utf16(std::string_view in) {
  if (in.empty()) return Bytes();
  auto cps = utf8_to_code_points(in);
  if (!cps) return std::nullopt;
  for (unsigned& cp : *cps) cp = cp >= 32 ? cp - 32 : 0;
  return to_latin1(lz_decompress(cps->size(), 16384, [&](std::size_t i) {
    return i < cps->size() ? (*cps)[i] : 0u;
  }));
}

// --- LZW -----------------------------------------------------------------

Bytes lzw_compress(BytesView in) {
  constexpr unsigned kMaxCodes = 4096;
  // Dictionary keyed by (prefix code << 8 | next byte).
  std::unordered_map<std::uint32_t, std::uint16_t> dictionary;
  unsigned next_code = 256;
  Bytes out;
  std::uint32_t bit_buffer = 0;
  int bit_count = 0;
  auto emit = [&](unsigned code) {
    bit_buffer = (bit_buffer << 12) | code;
    bit_count += 12;
    while (bit_count >= 8) {
      bit_count -= 8;
      out.push_back(static_cast<char>((bit_buffer >> bit_count) & 0xFF));
    }
  };
  if (in.empty()) return out;
  unsigned w = static_cast<unsigned char>(in[0]);
  for (std::size_t i = 1; i < in.size(); ++i) {
    unsigned c = static_cast<unsigned char>(in[i]);
    std::uint32_t key = (static_cast<std::uint32_t>(w) << 8) | c;
    if (auto it = dictionary.find(key); it != dictionary.end()) {
      w = it->second;
      continue;
    }
    emit(w);
    if (next_code < kMaxCodes) dictionary.emplace(key, static_cast<std::uint16_t>(next_code++));
    w = c;
  }
  emit(w);
  if (bit_count > 0) out.push_back(static_cast<char>((bit_buffer << (8 - bit_count)) & 0xFF));
  return out;
}

std::optional<Bytes> lzw_decompress(BytesView in) {
  constexpr unsigned kMaxCodes = 4096;
  std::vector<unsigned> codes;
  std::uint32_t bit_buffer = 0;
  int bit_count = 0;
  for (unsigned char byte : in) {
    bit_buffer = (bit_buffer << 8) | byte;
    bit_count += 8;
    if (bit_count >= 12) {
      bit_count -= 12;
      codes.push_back((bit_buffer >> bit_count) & 0xFFF);
    }
  }
  if (bit_count > 0 && (bit_buffer & ((1u << bit_count) - 1)) != 0) return std::nullopt;
  if (codes.empty()) return in.empty() ? std::optional<Bytes>(Bytes()) : std::nullopt;

  std::vector<Bytes> dictionary;
  dictionary.reserve(kMaxCodes);
  for (unsigned i = 0; i < 256; ++i) dictionary.emplace_back(1, static_cast<char>(i));
  if (codes[0] >= 256) return std::nullopt;
  Bytes w = dictionary[codes[0]];
  Bytes out = w;
  for (std::size_t i = 1; i < codes.size(); ++i) {
    unsigned code = codes[i];
    Bytes entry;
    if (code < dictionary.size()) entry = dictionary[code];
    else if (code == dictionary.size() && dictionary.size() < kMaxCodes) entry = w + w[0];
    else return std::nullopt;
    out += entry;
    if (dictionary.size() < kMaxCodes) dictionary.push_back(w + entry[0]);
    w = std::move(entry);
  }
  return out;
}

}  // namespace wiretap::codec
