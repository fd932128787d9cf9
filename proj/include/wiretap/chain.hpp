#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wiretap/transforms.hpp"

namespace wiretap {

// Ordered composition of transforms: [compress] [hash] [encode [encode]].
// The empty chain is the identity.
struct TransformChain {
  std::vector<Algorithm> steps;

  bool empty() const { return steps.empty(); }
  std::size_t size() const { return steps.size(); }
  bool operator==(const TransformChain&) const = default;
};

// Canonical order: shorter chains first, then lexicographic over steps.
bool operator<(const TransformChain& a, const TransformChain& b);

// "identity" or step names joined with '>', e.g. "Gzip>Base64".
std::string chain_name(const TransformChain& chain);
// Inverse of chain_name. Throws ConfigError on unknown names or bad grammar.
TransformChain parse_chain(std::string_view text);

// Grammar check: at most one compressor, first; at most one hash, after any
// compressor; at most two encodings, last. Length <= 4.
bool chain_is_admissible(const TransformChain& chain);

struct ChainConfig {
  std::vector<Algorithm> hashes;
  std::vector<Algorithm> encodings;
  std::vector<Algorithm> compressors;
  int max_encode_depth = 2;

  // Entire inventory at encode depth 2.
  static ChainConfig full();
  // Throws ConfigError on depth outside {0,1,2}, duplicates, or an algorithm
  // listed under the wrong kind.
  void validate() const;
};

// Every admissible chain over the configured subsets, identity first, in
// canonical order without duplicates.
std::vector<TransformChain> enumerate_chains(const ChainConfig& config);

// Number of chains enumerate_chains would return.
std::size_t chain_count(const ChainConfig& config);

// Every byte form the chain can produce for an input. Hash steps branch into
// their renderings and LZ-string into its two variants; labels join the
// branch taken at each step with '/', empty when nothing branched.
std::vector<Rendering> chain_renderings(BytesView input, const TransformChain& chain);

// The canonical form: hashes rendered as lowercase hex, LZ-string in its
// base64-safe variant.
Bytes apply_chain(BytesView input, const TransformChain& chain);

}  // namespace wiretap
