#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "wiretap/common.hpp"

namespace wiretap {

// Components of an absolute URL. Offsets index into the original string so
// callers can tell whether a match fell into the fragment.
struct Url {
  std::string scheme;     // lowercased
  std::string host;       // lowercased, brackets stripped for IPv6 literals
  std::string path;       // includes leading '/', may be empty
  std::string query;      // without '?'
  std::string fragment;   // without '#'
  std::size_t authority_begin = 0;  // offset of the first authority byte
  std::size_t authority_end = 0;    // one past the last authority byte
  std::optional<std::size_t> fragment_offset;  // offset of '#', if any
};

// Parses "scheme://[userinfo@]host[:port][/path][?query][#fragment]".
// Returns nullopt when the string is not an absolute URL with a host.
std::optional<Url> parse_url(std::string_view text);

// Single pass of %XX decoding. Invalid escapes are copied through unchanged.
Bytes percent_decode(BytesView text);

bool is_ip_literal(std::string_view host);

}  // namespace wiretap
