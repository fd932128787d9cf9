#include "wiretap/fingerprint_index.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace wiretap {

std::string_view to_string(CaseVariant v) {
  switch (v) {
    case CaseVariant::kAsTyped: return "as_typed";
    case CaseVariant::kLower: return "lower";
    case CaseVariant::kUpper: return "upper";
  }
  return "as_typed";
}

CaseVariant parse_case_variant(std::string_view text) {
  if (text == "as_typed") return CaseVariant::kAsTyped;
  if (text == "lower") return CaseVariant::kLower;
  if (text == "upper") return CaseVariant::kUpper;
  throw ConfigError("unknown case variant: " + std::string(text));
}

std::vector<std::pair<CaseVariant, std::string>> case_variants(std::string_view value) {
  std::vector<std::pair<CaseVariant, std::string>> out;
  auto add = [&](CaseVariant v, std::string s) {
    for (const auto& [_, existing] : out)
      if (existing == s) return;
    out.emplace_back(v, std::move(s));
  };
  add(CaseVariant::kAsTyped, std::string(value));
  add(CaseVariant::kLower, ascii_lower(value));
  add(CaseVariant::kUpper, ascii_upper(value));
  return out;
}

bool Fingerprint::explains(const TransformChain& c) const {
  return chain == c || std::find(equivalent_chains.begin(), equivalent_chains.end(), c) != equivalent_chains.end();
}

FingerprintIndex FingerprintIndex::build(const std::vector<HoneyToken>& tokens,
                                         const std::vector<TransformChain>& chains,
                                         const IndexConfig& config) {
  FingerprintIndex index;
  index.min_pattern_len_ = std::max<std::size_t>(config.min_pattern_len, 1);

  std::vector<const TransformChain*> ordered;
  for (const auto& c : chains) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return *a < *b; });
  ordered.erase(std::unique(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return *a == *b; }),
                ordered.end());

  std::vector<std::pair<Bytes, std::uint32_t>> entries;
  for (const auto& token : tokens) {
    auto variants = case_variants(token.value);
    // Renderings of every chain prefix, per variant.
    std::vector<std::map<std::vector<Algorithm>, std::vector<Rendering>>> memo(variants.size());
    for (std::size_t v = 0; v < variants.size(); ++v) memo[v][{}] = {{"", variants[v].second}};

    std::unordered_map<Bytes, std::uint32_t> seen;
    for (const TransformChain* chain : ordered) {
      for (std::size_t v = 0; v < variants.size(); ++v) {
        auto& cache = memo[v];
        std::vector<Algorithm> prefix;
        const std::vector<Rendering>* current = &cache.at(prefix);
        std::vector<Rendering> last;
        for (std::size_t s = 0; s < chain->steps.size(); ++s) {
          Algorithm a = chain->steps[s];
          prefix.push_back(a);
          auto it = cache.find(prefix);
          if (it != cache.end()) {
            current = &it->second;
            continue;
          }
          std::vector<Rendering> next;
          for (const auto& r : *current)
            for (auto& step : transform_renderings(r.bytes, a)) {
              std::string label = r.label;
              if (!step.label.empty()) label += (label.empty() ? "" : "/") + step.label;
              next.push_back({std::move(label), std::move(step.bytes)});
            }
          // A second encoding ends every chain it appears in; nothing extends it.
          bool terminal = s >= 1 && kind_of(a) == TransformKind::kEncode &&
                          kind_of(chain->steps[s - 1]) == TransformKind::kEncode;
          if (terminal) {
            last = std::move(next);
            current = &last;
          } else {
            current = &cache.emplace(prefix, std::move(next)).first->second;
          }
        }
        for (const auto& r : *current) {
          if (r.bytes.size() < index.min_pattern_len_) {
            ++index.dropped_;
            continue;
          }
          auto [it, inserted] = seen.try_emplace(r.bytes, static_cast<std::uint32_t>(index.fingerprints_.size()));
          if (inserted) {
            index.fingerprints_.push_back({token.token_id, variants[v].first, *chain, r.label, {}});
          } else {
            Fingerprint& fp = index.fingerprints_[it->second];
            if (!fp.explains(*chain)) fp.equivalent_chains.push_back(*chain);
          }
        }
      }
    }
    while (!seen.empty()) {
      auto node = seen.extract(seen.begin());
      entries.emplace_back(std::move(node.key()), node.mapped());
    }
  }

  std::sort(entries.begin(), entries.end());
  std::vector<Bytes> patterns;
  index.first_fp_.push_back(0);
  for (auto& [bytes, id] : entries) {
    if (patterns.empty() || patterns.back() != bytes) {
      if (!patterns.empty()) index.first_fp_.push_back(static_cast<std::uint32_t>(index.fp_ids_.size()));
      index.numeric_.push_back(std::all_of(bytes.begin(), bytes.end(),
                                           [](unsigned char c) { return is_ascii_digit(c); }));
      patterns.push_back(std::move(bytes));
    }
    index.fp_ids_.push_back(id);
  }
  index.first_fp_.push_back(static_cast<std::uint32_t>(index.fp_ids_.size()));
  if (patterns.empty()) index.first_fp_.assign(1, 0);
  index.matcher_ = PatternMatcher(std::move(patterns));
  return index;
}

std::span<const std::uint32_t> FingerprintIndex::fingerprints_of(std::uint32_t pattern) const {
  return std::span<const std::uint32_t>(fp_ids_).subspan(first_fp_[pattern], first_fp_[pattern + 1] - first_fp_[pattern]);
}

std::vector<const Fingerprint*> FingerprintIndex::lookup(BytesView pattern) const {
  std::vector<const Fingerprint*> out;
  const auto& pats = patterns();
  auto it = std::lower_bound(pats.begin(), pats.end(), pattern,
                             [](const Bytes& a, BytesView b) { return BytesView(a) < b; });
  if (it == pats.end() || *it != pattern) return out;
  for (std::uint32_t id : fingerprints_of(static_cast<std::uint32_t>(it - pats.begin())))
    out.push_back(&fingerprints_[id]);
  return out;
}

void FingerprintIndex::write_audit(std::ostream& out) const {
  out << "pattern_hex\ttoken_id\tcase_variant\tchain\trendering\tequivalent_chains\n";
  for (std::uint32_t p = 0; p < pattern_count(); ++p) {
    std::string hex = to_hex(patterns()[p]);
    for (std::uint32_t id : fingerprints_of(p)) {
      const Fingerprint& fp = fingerprints_[id];
      out << hex << '\t' << fp.token_id << '\t' << to_string(fp.variant) << '\t' << chain_name(fp.chain) << '\t'
          << fp.rendering << '\t';
      for (std::size_t i = 0; i < fp.equivalent_chains.size(); ++i)
        out << (i ? "," : "") << chain_name(fp.equivalent_chains[i]);
      out << '\n';
    }
  }
}

}  // namespace wiretap
