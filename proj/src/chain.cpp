#include "wiretap/chain.hpp"

#include <algorithm>
#include <set>

namespace wiretap {

bool operator<(const TransformChain& a, const TransformChain& b) {
  if (a.steps.size() != b.steps.size()) return a.steps.size() < b.steps.size();
  return a.steps < b.steps;
}

std::string chain_name(const TransformChain& chain) {
  if (chain.empty()) return "identity";
  std::string out;
  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    if (i) out += '>';
    out += name_of(chain.steps[i]);
  }
  return out;
}

TransformChain parse_chain(std::string_view text) {
  TransformChain chain;
  if (text == "identity" || text.empty()) return chain;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('>', start);
    if (end == std::string_view::npos) end = text.size();
    chain.steps.push_back(parse_algorithm(text.substr(start, end - start)));
    start = end + 1;
  }
  if (!chain_is_admissible(chain)) throw ConfigError("chain violates grammar: " + std::string(text));
  return chain;
}

bool chain_is_admissible(const TransformChain& chain) {
  if (chain.steps.size() > 4) return false;
  // Phases must be non-decreasing: compress(0) < hash(1) < encode(2).
  int phase = -1;
  int compressors = 0, hashes = 0, encodings = 0;
  for (Algorithm a : chain.steps) {
    int p = 0;
    switch (kind_of(a)) {
      case TransformKind::kCompress: p = 0; ++compressors; break;
      case TransformKind::kHash: p = 1; ++hashes; break;
      case TransformKind::kEncode: p = 2; ++encodings; break;
    }
    if (p < phase) return false;
    phase = p;
  }
  return compressors <= 1 && hashes <= 1 && encodings <= 2;
}

ChainConfig ChainConfig::full() {
  ChainConfig c;
  auto h = all_hashes(), e = all_encodings(), z = all_compressors();
  c.hashes.assign(h.begin(), h.end());
  c.encodings.assign(e.begin(), e.end());
  c.compressors.assign(z.begin(), z.end());
  c.max_encode_depth = 2;
  return c;
}

void ChainConfig::validate() const {
  if (max_encode_depth < 0 || max_encode_depth > 2)
    throw ConfigError("encode depth must be 0, 1 or 2");
  auto check = [](const std::vector<Algorithm>& list, TransformKind kind, const char* what) {
    std::set<Algorithm> seen;
    for (Algorithm a : list) {
      if (kind_of(a) != kind) throw ConfigError(std::string(name_of(a)) + " is not a " + what);
      if (!seen.insert(a).second) throw ConfigError("duplicate transform " + std::string(name_of(a)));
    }
  };
  check(hashes, TransformKind::kHash, "hash");
  check(encodings, TransformKind::kEncode, "encoding");
  check(compressors, TransformKind::kCompress, "compressor");
}

std::vector<TransformChain> enumerate_chains(const ChainConfig& config) {
  config.validate();
  std::vector<std::vector<Algorithm>> encode_tails{{}};
  if (config.max_encode_depth >= 1)
    for (Algorithm e : config.encodings) encode_tails.push_back({e});
  if (config.max_encode_depth >= 2)
    for (Algorithm e1 : config.encodings)
      for (Algorithm e2 : config.encodings) encode_tails.push_back({e1, e2});

  std::vector<std::optional<Algorithm>> compress_heads{std::nullopt};
  for (Algorithm z : config.compressors) compress_heads.emplace_back(z);
  std::vector<std::optional<Algorithm>> hash_mids{std::nullopt};
  for (Algorithm h : config.hashes) hash_mids.emplace_back(h);

  std::vector<TransformChain> out;
  out.reserve(compress_heads.size() * hash_mids.size() * encode_tails.size());
  for (const auto& z : compress_heads)
    for (const auto& h : hash_mids)
      for (const auto& tail : encode_tails) {
        TransformChain c;
        if (z) c.steps.push_back(*z);
        if (h) c.steps.push_back(*h);
        c.steps.insert(c.steps.end(), tail.begin(), tail.end());
        out.push_back(std::move(c));
      }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t chain_count(const ChainConfig& config) {
  std::size_t e = config.encodings.size();
  std::size_t tails = 1;
  if (config.max_encode_depth >= 1) tails += e;
  if (config.max_encode_depth >= 2) tails += e * e;
  return (1 + config.compressors.size()) * (1 + config.hashes.size()) * tails;
}

std::vector<Rendering> chain_renderings(BytesView input, const TransformChain& chain) {
  std::vector<Rendering> current{{"", Bytes(input)}};
  for (Algorithm a : chain.steps) {
    std::vector<Rendering> next;
    for (const auto& r : current) {
      for (auto& step : transform_renderings(r.bytes, a)) {
        std::string label = r.label;
        if (!step.label.empty()) label += (label.empty() ? "" : "/") + step.label;
        next.push_back({std::move(label), std::move(step.bytes)});
      }
    }
    current = std::move(next);
  }
  return current;
}

Bytes apply_chain(BytesView input, const TransformChain& chain) {
  Bytes value(input);
  for (Algorithm a : chain.steps) value = std::move(transform_renderings(value, a).front().bytes);
  return value;
}

}  // namespace wiretap
