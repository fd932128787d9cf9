#pragma once

#include <cstdint>
#include <vector>

#include "wiretap/common.hpp"

namespace wiretap {

// Aho-Corasick matcher built over the distinguishing prefix of each pattern:
// the shortest prefix that no other pattern shares. The automaton stays
// small when patterns are long; a prefix hit is confirmed by comparing the
// remaining bytes. Scanning is linear in the text plus the verified tails.
class PatternMatcher {
 public:
  struct Match {
    std::uint32_t pattern;  // index into patterns()
    std::size_t offset;     // start of the occurrence in the text
  };

  PatternMatcher() = default;
  // Patterns must be non-empty, strictly increasing in byte order.
  explicit PatternMatcher(std::vector<Bytes> patterns);

  const std::vector<Bytes>& patterns() const { return patterns_; }
  std::size_t node_count() const { return fail_.size(); }

  // All occurrences, in the order their distinguishing prefixes complete.
  std::vector<Match> scan(BytesView text) const;

 private:
  static constexpr std::uint32_t kNone = 0xFFFFFFFFu;

  std::uint32_t child(std::uint32_t node, unsigned char label) const;

  std::vector<Bytes> patterns_;
  std::vector<std::uint32_t> prefix_len_;
  // CSR edges: children of node n are edge_label_/edge_node_[first_edge_[n] .. first_edge_[n + 1]).
  std::vector<std::uint32_t> first_edge_;
  std::vector<unsigned char> edge_label_;
  std::vector<std::uint32_t> edge_node_;
  std::vector<std::uint32_t> fail_;
  std::vector<std::uint32_t> output_;  // pattern ending at node, or kNone
  std::vector<std::uint32_t> dict_;    // nearest proper suffix node with an output, or kNone
};

}  // namespace wiretap
