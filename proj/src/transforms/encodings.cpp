#include <algorithm>

#include "wiretap/transforms.hpp"

namespace wiretap::codec {

namespace {

constexpr std::string_view kBase32Alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ234567";
constexpr std::string_view kBase58Alphabet =
    "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
constexpr std::string_view kBase64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

int base64_value(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+' || c == '-') return 62;
  if (c == '/' || c == '_') return 63;
  return -1;
}

// Unreserved characters of encodeURIComponent.
bool url_unreserved(unsigned char c) {
  if (is_ascii_alnum(c)) return true;
  switch (c) {
    case '-': case '_': case '.': case '!': case '~': case '*': case '\'': case '(': case ')':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string base16_encode(BytesView in) { return to_hex(in, /*upper=*/true); }

std::optional<Bytes> base16_decode(std::string_view in) {
  if (in.size() % 2 != 0) return std::nullopt;
  Bytes out;
  out.reserve(in.size() / 2);
  for (std::size_t i = 0; i < in.size(); i += 2) {
    int hi = hex_digit(in[i]), lo = hex_digit(in[i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>((hi << 4) | lo));
  }
  return out;
}

std::string base32_encode(BytesView in) {
  std::string out;
  out.reserve((in.size() + 4) / 5 * 8);
  std::size_t i = 0;
  while (i < in.size()) {
    std::size_t chunk = std::min<std::size_t>(5, in.size() - i);
    std::uint64_t buffer = 0;
    for (std::size_t j = 0; j < 5; ++j)
      buffer = (buffer << 8) | (j < chunk ? static_cast<unsigned char>(in[i + j]) : 0u);
    static constexpr std::size_t kCharsFor[] = {0, 2, 4, 5, 7, 8};
    std::size_t chars = kCharsFor[chunk];
    for (std::size_t j = 0; j < 8; ++j) {
      if (j < chars) out.push_back(kBase32Alphabet[(buffer >> (35 - 5 * j)) & 0x1F]);
      else out.push_back('=');
    }
    i += chunk;
  }
  return out;
}

std::optional<Bytes> base32_decode(std::string_view in) {
  if (in.size() % 8 != 0) return std::nullopt;
  Bytes out;
  for (std::size_t i = 0; i < in.size(); i += 8) {
    std::uint64_t buffer = 0;
    std::size_t chars = 0;
    bool padding = false;
    for (std::size_t j = 0; j < 8; ++j) {
      char c = in[i + j];
      std::uint64_t v = 0;
      if (c == '=') {
        padding = true;
      } else {
        if (padding) return std::nullopt;
        if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
        auto pos = kBase32Alphabet.find(c);
        if (pos == std::string_view::npos) return std::nullopt;
        v = pos;
        ++chars;
      }
      buffer = (buffer << 5) | v;
    }
    if (padding && i + 8 != in.size()) return std::nullopt;
    std::size_t bytes;
    switch (chars) {
      case 8: bytes = 5; break;
      case 7: bytes = 4; break;
      case 5: bytes = 3; break;
      case 4: bytes = 2; break;
      case 2: bytes = 1; break;
      default: return std::nullopt;
    }
    for (std::size_t j = 0; j < bytes; ++j)
      out.push_back(static_cast<char>((buffer >> (32 - 8 * j)) & 0xFF));
  }
  return out;
}

std::string base58_encode(BytesView in) {
  std::size_t zeros = 0;
  while (zeros < in.size() && in[zeros] == '\0') ++zeros;
  // Base-58 digits, least significant first.
  std::vector<std::uint8_t> digits;
  digits.reserve(in.size() * 138 / 100 + 1);
  for (std::size_t i = zeros; i < in.size(); ++i) {
    unsigned carry = static_cast<unsigned char>(in[i]);
    for (auto& d : digits) {
      carry += static_cast<unsigned>(d) << 8;
      d = static_cast<std::uint8_t>(carry % 58);
      carry /= 58;
    }
    while (carry > 0) {
      digits.push_back(static_cast<std::uint8_t>(carry % 58));
      carry /= 58;
    }
  }
  std::string out(zeros, '1');
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) out.push_back(kBase58Alphabet[*it]);
  return out;
}

std::optional<Bytes> base58_decode(std::string_view in) {
  std::size_t ones = 0;
  while (ones < in.size() && in[ones] == '1') ++ones;
  std::vector<std::uint8_t> bytes;  // little-endian
  for (std::size_t i = ones; i < in.size(); ++i) {
    auto pos = kBase58Alphabet.find(in[i]);
    if (pos == std::string_view::npos) return std::nullopt;
    unsigned carry = static_cast<unsigned>(pos);
    for (auto& b : bytes) {
      carry += static_cast<unsigned>(b) * 58;
      b = static_cast<std::uint8_t>(carry & 0xFF);
      carry >>= 8;
    }
    while (carry > 0) {
      bytes.push_back(static_cast<std::uint8_t>(carry & 0xFF));
      carry >>= 8;
    }
  }
  Bytes out(ones, '\0');
  for (auto it = bytes.rbegin(); it != bytes.rend(); ++it) out.push_back(static_cast<char>(*it));
  return out;
}

std::string base64_encode(BytesView in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= in.size(); i += 3) {
    std::uint32_t v = (static_cast<unsigned char>(in[i]) << 16) |
                      (static_cast<unsigned char>(in[i + 1]) << 8) |
                      static_cast<unsigned char>(in[i + 2]);
    out.push_back(kBase64Alphabet[(v >> 18) & 0x3F]);
    out.push_back(kBase64Alphabet[(v >> 12) & 0x3F]);
    out.push_back(kBase64Alphabet[(v >> 6) & 0x3F]);
    out.push_back(kBase64Alphabet[v & 0x3F]);
  }
  std::size_t rest = in.size() - i;
  if (rest > 0) {
    std::uint32_t v = static_cast<unsigned char>(in[i]) << 16;
    if (rest == 2) v |= static_cast<unsigned char>(in[i + 1]) << 8;
    out.push_back(kBase64Alphabet[(v >> 18) & 0x3F]);
    out.push_back(kBase64Alphabet[(v >> 12) & 0x3F]);
    out.push_back(rest == 2 ? kBase64Alphabet[(v >> 6) & 0x3F] : '=');
    out.push_back('=');
  }
  return out;
}

namespace {
std::optional<Bytes> base64_decode_impl(std::string_view in, bool strict) {
  std::size_t pad = 0;
  while (!in.empty() && in.back() == '=') {
    in.remove_suffix(1);
    ++pad;
  }
  if (strict && (pad > 2 || (in.size() + pad) % 4 != 0)) return std::nullopt;
  if (!strict && in.size() % 4 == 1) in.remove_suffix(1);
  Bytes out;
  out.reserve(in.size() * 3 / 4);
  std::uint32_t buffer = 0;
  int bits = 0;
  for (char c : in) {
    int v = base64_value(c);
    if (v < 0) return std::nullopt;
    if (strict && (c == '-' || c == '_')) return std::nullopt;
    buffer = (buffer << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
    }
  }
  // Non-zero leftover bits mean a non-canonical encoding.
  if (strict && (buffer & ((1u << bits) - 1)) != 0) return std::nullopt;
  return out;
}
}  // namespace

std::optional<Bytes> base64_decode(std::string_view in) { return base64_decode_impl(in, true); }
std::optional<Bytes> base64_decode_lenient(std::string_view in) { return base64_decode_impl(in, false); }

std::string url_encode(BytesView in) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(in.size() * 3);
  for (unsigned char c : in) {
    if (url_unreserved(c)) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

std::optional<Bytes> url_decode(std::string_view in) {
  Bytes out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] != '%') {
      out.push_back(in[i]);
      continue;
    }
    if (i + 2 >= in.size()) return std::nullopt;
    int hi = hex_digit(in[i + 1]), lo = hex_digit(in[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>((hi << 4) | lo));
    i += 2;
  }
  return out;
}

std::string rot13(BytesView in) {
  std::string out(in);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>('a' + (c - 'a' + 13) % 26);
    else if (c >= 'A' && c <= 'Z') c = static_cast<char>('A' + (c - 'A' + 13) % 26);
  }
  return out;
}

// The five XML-significant characters are escaped by name (apostrophe as
// &#39;); every byte >= 0x80 becomes a decimal entity of the byte value.
std::string html_entity_encode(BytesView in) {
  std::string out;
  out.reserve(in.size());
  for (unsigned char c : in) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default:
        if (c >= 0x80) {
          out += "&#";
          out += std::to_string(c);
          out.push_back(';');
        } else {
          out.push_back(static_cast<char>(c));
        }
    }
  }
  return out;
}

std::optional<Bytes> html_entity_decode(std::string_view in) {
  Bytes out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i] != '&') {
      out.push_back(in[i]);
      continue;
    }
    auto semi = in.find(';', i);
    if (semi == std::string_view::npos) return std::nullopt;
    std::string_view entity = in.substr(i + 1, semi - i - 1);
    if (entity == "amp") out.push_back('&');
    else if (entity == "lt") out.push_back('<');
    else if (entity == "gt") out.push_back('>');
    else if (entity == "quot") out.push_back('"');
    else if (entity == "apos") out.push_back('\'');
    else if (entity.size() >= 2 && entity[0] == '#') {
      unsigned value = 0;
      for (char c : entity.substr(1)) {
        if (!is_ascii_digit(static_cast<unsigned char>(c))) return std::nullopt;
        value = value * 10 + static_cast<unsigned>(c - '0');
        if (value > 255) return std::nullopt;
      }
      out.push_back(static_cast<char>(value));
    } else {
      return std::nullopt;
    }
    i = semi;
  }
  return out;
}

std::string binary_string_encode(BytesView in) {
  std::string out;
  out.reserve(in.size() * 8);
  for (unsigned char c : in)
    for (int bit = 7; bit >= 0; --bit) out.push_back(((c >> bit) & 1) ? '1' : '0');
  return out;
}

std::optional<Bytes> binary_string_decode(std::string_view in) {
  if (in.size() % 8 != 0) return std::nullopt;
  Bytes out;
  out.reserve(in.size() / 8);
  for (std::size_t i = 0; i < in.size(); i += 8) {
    unsigned v = 0;
    for (std::size_t j = 0; j < 8; ++j) {
      char c = in[i + j];
      if (c != '0' && c != '1') return std::nullopt;
      v = (v << 1) | static_cast<unsigned>(c - '0');
    }
    out.push_back(static_cast<char>(v));
  }
  return out;
}

std::string uint_to_decimal(unsigned __int128 value) {
  if (value == 0) return "0";
  std::string out;
  while (value > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace wiretap::codec
