#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace wiretap {

// Public suffix list in the standard .dat text format. Rules are stored in
// their Unicode form; punycode ("xn--") labels in queried hosts are decoded
// before matching and returned unchanged.
class PublicSuffixList {
 public:
  // Empty list: only the implicit "*" rule applies.
  PublicSuffixList() = default;

  static PublicSuffixList parse(std::istream& in);
  static PublicSuffixList load(const std::string& path);

  // Public suffix of the host, or nullopt for malformed hosts.
  std::optional<std::string> public_suffix(std::string_view host) const;

  // eTLD+1. IP literals come back verbatim. nullopt when the host is itself
  // a public suffix or is malformed (leading dot, empty label).
  // Throws std::invalid_argument for an empty host.
  std::optional<std::string> registrable_domain(std::string_view host) const;

  // registrable_domain() falling back to the lowercased host.
  std::string site_key(std::string_view host) const;

  std::size_t rule_count() const { return normal_.size() + wildcard_.size() + exception_.size(); }

 private:
  // Rules keyed by their dotted text without the "*." or "!" prefix.
  std::unordered_set<std::string> normal_;
  std::unordered_set<std::string> wildcard_;  // "*.x" stored as "x"
  std::unordered_set<std::string> exception_;

  // Number of labels of the prevailing rule's suffix for the given labels.
  std::size_t suffix_label_count(const std::vector<std::string>& labels) const;
};

// RFC 3492 punycode decoding of a single label body (without "xn--").
// Returns UTF-8, or nullopt on invalid input.
std::optional<std::string> punycode_decode(std::string_view input);

}  // namespace wiretap
