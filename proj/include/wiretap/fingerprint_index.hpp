#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "wiretap/aho_corasick.hpp"
#include "wiretap/chain.hpp"
#include "wiretap/trace.hpp"

namespace wiretap {

enum class CaseVariant { kAsTyped, kLower, kUpper };
std::string_view to_string(CaseVariant v);
CaseVariant parse_case_variant(std::string_view text);

// Case variants of a token value with duplicates removed, in enum order.
std::vector<std::pair<CaseVariant, std::string>> case_variants(std::string_view value);

// One explanation of an indexed pattern. When several chains produce the
// same bytes for a token, the first chain in canonical order is kept and the
// others are listed as equivalent.
struct Fingerprint {
  std::string token_id;
  CaseVariant variant = CaseVariant::kAsTyped;
  TransformChain chain;
  std::string rendering;
  std::vector<TransformChain> equivalent_chains;

  bool explains(const TransformChain& c) const;
};

struct IndexConfig {
  std::size_t min_pattern_len = 8;
};

class FingerprintIndex {
 public:
  FingerprintIndex() = default;

  static FingerprintIndex build(const std::vector<HoneyToken>& tokens,
                                const std::vector<TransformChain>& chains,
                                const IndexConfig& config = {});

  std::size_t pattern_count() const { return matcher_.patterns().size(); }
  std::size_t fingerprint_count() const { return fingerprints_.size(); }
  // Rendered patterns shorter than min_pattern_len, not indexed.
  std::size_t dropped_count() const { return dropped_; }
  std::size_t min_pattern_len() const { return min_pattern_len_; }

  const std::vector<Bytes>& patterns() const { return matcher_.patterns(); }
  const Fingerprint& fingerprint(std::uint32_t id) const { return fingerprints_[id]; }
  std::span<const std::uint32_t> fingerprints_of(std::uint32_t pattern) const;
  // Patterns made only of ASCII digits need non-alphanumeric neighbours.
  bool is_numeric(std::uint32_t pattern) const { return numeric_[pattern] != 0; }

  // Exact lookup of a byte pattern.
  std::vector<const Fingerprint*> lookup(BytesView pattern) const;

  const PatternMatcher& matcher() const { return matcher_; }

  // Tab-separated audit listing: pattern hex, token, variant, chain, rendering.
  void write_audit(std::ostream& out) const;

 private:
  PatternMatcher matcher_;
  std::vector<Fingerprint> fingerprints_;
  std::vector<std::uint32_t> first_fp_;  // CSR over pattern ids
  std::vector<std::uint32_t> fp_ids_;
  std::vector<std::uint8_t> numeric_;
  std::size_t dropped_ = 0;
  std::size_t min_pattern_len_ = 8;
};

}  // namespace wiretap
