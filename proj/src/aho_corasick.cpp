#include "wiretap/aho_corasick.hpp"

#include <algorithm>
#include <cstring>

namespace wiretap {

namespace {

std::size_t common_prefix(BytesView a, BytesView b) {
  std::size_t n = std::min(a.size(), b.size());
  std::size_t i = 0;
  while (i < n && a[i] == b[i]) ++i;
  return i;
}

}  // namespace

PatternMatcher::PatternMatcher(std::vector<Bytes> patterns) : patterns_(std::move(patterns)) {
  const std::size_t n = patterns_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (patterns_[i].empty()) throw std::invalid_argument("empty pattern");
    if (i && !(patterns_[i - 1] < patterns_[i])) throw std::invalid_argument("patterns not sorted and unique");
  }

  std::vector<std::uint32_t> lcp_next(n, 0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    lcp_next[i] = static_cast<std::uint32_t>(common_prefix(patterns_[i], patterns_[i + 1]));
  prefix_len_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lcp = std::max<std::size_t>(i ? lcp_next[i - 1] : 0, lcp_next[i]);
    prefix_len_[i] = static_cast<std::uint32_t>(std::min(patterns_[i].size(), lcp + 1));
  }

  // Trie over the prefixes. Sorted insertion creates nodes in preorder with
  // siblings in label order.
  std::vector<std::uint32_t> parent{kNone};
  std::vector<unsigned char> label{0};
  output_.assign(1, kNone);
  std::vector<std::uint32_t> path{0};
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t shared = 0;
    if (i) {
      shared = std::min<std::size_t>({lcp_next[i - 1], prefix_len_[i - 1], prefix_len_[i]});
    }
    path.resize(shared + 1);
    for (std::size_t d = shared; d < prefix_len_[i]; ++d) {
      auto id = static_cast<std::uint32_t>(parent.size());
      parent.push_back(path.back());
      label.push_back(static_cast<unsigned char>(patterns_[i][d]));
      output_.push_back(kNone);
      path.push_back(id);
    }
    output_[path.back()] = static_cast<std::uint32_t>(i);
  }

  const std::size_t nodes = parent.size();
  first_edge_.assign(nodes + 1, 0);
  for (std::size_t v = 1; v < nodes; ++v) ++first_edge_[parent[v] + 1];
  for (std::size_t v = 0; v < nodes; ++v) first_edge_[v + 1] += first_edge_[v];
  edge_label_.resize(nodes - 1);
  edge_node_.resize(nodes - 1);
  std::vector<std::uint32_t> fill(first_edge_.begin(), first_edge_.end() - 1);
  for (std::size_t v = 1; v < nodes; ++v) {
    std::uint32_t slot = fill[parent[v]]++;
    edge_label_[slot] = label[v];
    edge_node_[slot] = static_cast<std::uint32_t>(v);
  }

  fail_.assign(nodes, 0);
  dict_.assign(nodes, kNone);
  std::vector<std::uint32_t> queue;
  queue.reserve(nodes);
  for (std::uint32_t e = first_edge_[0]; e < first_edge_[1]; ++e) queue.push_back(edge_node_[e]);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t v = queue[head];
    for (std::uint32_t e = first_edge_[v]; e < first_edge_[v + 1]; ++e) {
      std::uint32_t u = edge_node_[e];
      unsigned char c = edge_label_[e];
      std::uint32_t f = fail_[v];
      std::uint32_t next = kNone;
      while (true) {
        next = child(f, c);
        if (next != kNone || f == 0) break;
        f = fail_[f];
      }
      fail_[u] = (next != kNone && next != u) ? next : 0;
      std::uint32_t fu = fail_[u];
      dict_[u] = output_[fu] != kNone ? fu : dict_[fu];
      queue.push_back(u);
    }
  }
}

std::uint32_t PatternMatcher::child(std::uint32_t node, unsigned char c) const {
  auto begin = edge_label_.begin() + first_edge_[node];
  auto end = edge_label_.begin() + first_edge_[node + 1];
  auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return kNone;
  return edge_node_[static_cast<std::size_t>(it - edge_label_.begin())];
}

std::vector<PatternMatcher::Match> PatternMatcher::scan(BytesView text) const {
  std::vector<Match> out;
  if (patterns_.empty()) return out;
  std::uint32_t state = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    std::uint32_t next;
    while ((next = child(state, c)) == kNone && state != 0) state = fail_[state];
    state = next == kNone ? 0 : next;
    for (std::uint32_t v = output_[state] != kNone ? state : dict_[state]; v != kNone; v = dict_[v]) {
      std::uint32_t p = output_[v];
      std::size_t start = i + 1 - prefix_len_[p];
      const Bytes& pat = patterns_[p];
      if (start + pat.size() > text.size()) continue;
      if (std::memcmp(text.data() + start + prefix_len_[p], pat.data() + prefix_len_[p],
                      pat.size() - prefix_len_[p]) != 0)
        continue;
      out.push_back({p, start});
    }
  }
  return out;
}

}  // namespace wiretap
