#include "wiretap/public_suffix.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "wiretap/common.hpp"
#include "wiretap/url.hpp"

namespace wiretap {

namespace {

std::vector<std::string> split_labels(std::string_view host) {
  std::vector<std::string> labels;
  std::size_t start = 0;
  while (true) {
    auto dot = host.find('.', start);
    labels.emplace_back(host.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return labels;
}

std::string join_labels(const std::vector<std::string>& labels, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < labels.size(); ++i) {
    if (i > from) out.push_back('.');
    out += labels[i];
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::optional<std::string> punycode_decode(std::string_view input) {
  constexpr std::uint32_t kBase = 36, kTMin = 1, kTMax = 26, kSkew = 38, kDamp = 700;
  constexpr std::uint32_t kInitialBias = 72, kInitialN = 128;

  std::vector<char32_t> output;
  auto delim = input.rfind('-');
  std::size_t pos = 0;
  if (delim != std::string_view::npos) {
    for (std::size_t i = 0; i < delim; ++i) {
      if (static_cast<unsigned char>(input[i]) >= 0x80) return std::nullopt;
      output.push_back(static_cast<unsigned char>(input[i]));
    }
    pos = delim + 1;
  }

  auto adapt = [&](std::uint32_t delta, std::uint32_t num_points, bool first) {
    delta = first ? delta / kDamp : delta / 2;
    delta += delta / num_points;
    std::uint32_t k = 0;
    while (delta > ((kBase - kTMin) * kTMax) / 2) {
      delta /= kBase - kTMin;
      k += kBase;
    }
    return k + (kBase - kTMin + 1) * delta / (delta + kSkew);
  };

  std::uint32_t n = kInitialN, bias = kInitialBias, i = 0;
  bool first = true;
  while (pos < input.size()) {
    std::uint32_t old_i = i, w = 1;
    for (std::uint32_t k = kBase;; k += kBase) {
      if (pos >= input.size()) return std::nullopt;
      char c = input[pos++];
      std::uint32_t digit;
      if (c >= '0' && c <= '9') digit = static_cast<std::uint32_t>(c - '0' + 26);
      else if (c >= 'a' && c <= 'z') digit = static_cast<std::uint32_t>(c - 'a');
      else if (c >= 'A' && c <= 'Z') digit = static_cast<std::uint32_t>(c - 'A');
      else return std::nullopt;
      if (digit > (0xFFFFFFFFu - i) / w) return std::nullopt;
      i += digit * w;
      std::uint32_t t = k <= bias ? kTMin : (k >= bias + kTMax ? kTMax : k - bias);
      if (digit < t) break;
      if (w > 0xFFFFFFFFu / (kBase - t)) return std::nullopt;
      w *= kBase - t;
    }
    auto count = static_cast<std::uint32_t>(output.size() + 1);
    bias = adapt(i - old_i, count, first);
    first = false;
    if (i / count > 0x10FFFF - n) return std::nullopt;
    n += i / count;
    i %= count;
    output.insert(output.begin() + i, static_cast<char32_t>(n));
    ++i;
  }

  std::string utf8;
  for (char32_t cp : output) append_utf8(utf8, cp);
  return utf8;
}

PublicSuffixList PublicSuffixList::parse(std::istream& in) {
  PublicSuffixList psl;
  std::string line;
  while (std::getline(in, line)) {
    // A rule ends at the first whitespace.
    auto end = line.find_first_of(" \t\r");
    std::string_view rule(line.data(), end == std::string::npos ? line.size() : end);
    if (rule.empty() || rule.starts_with("//")) continue;
    std::string text = ascii_lower(rule);
    if (text.starts_with("!")) {
      psl.exception_.insert(text.substr(1));
    } else if (text.starts_with("*.")) {
      psl.wildcard_.insert(text.substr(2));
    } else {
      psl.normal_.insert(text);
    }
  }
  return psl;
}

PublicSuffixList PublicSuffixList::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open public suffix list: " + path);
  return parse(in);
}

std::size_t PublicSuffixList::suffix_label_count(const std::vector<std::string>& labels) const {
  const std::size_t n = labels.size();
  std::size_t best = 1;  // implicit "*" rule
  for (std::size_t i = 0; i < n; ++i) {
    std::string candidate = join_labels(labels, i);
    if (exception_.count(candidate)) return n - i - 1;
    if (normal_.count(candidate)) best = std::max(best, n - i);
    if (i + 1 < n && wildcard_.count(join_labels(labels, i + 1))) best = std::max(best, n - i);
  }
  return best;
}

std::optional<std::string> PublicSuffixList::public_suffix(std::string_view host) const {
  if (host.empty()) throw std::invalid_argument("empty host");
  std::string lowered = ascii_lower(host);
  if (lowered.front() == '.') return std::nullopt;
  auto labels = split_labels(lowered);
  for (const auto& l : labels)
    if (l.empty()) return std::nullopt;
  std::vector<std::string> match_labels = labels;
  for (auto& label : match_labels) {
    if (label.starts_with("xn--")) {
      if (auto decoded = punycode_decode(std::string_view(label).substr(4))) label = *decoded;
    }
  }
  std::size_t count = suffix_label_count(match_labels);
  return join_labels(labels, labels.size() - count);
}

std::optional<std::string> PublicSuffixList::registrable_domain(std::string_view host) const {
  if (host.empty()) throw std::invalid_argument("empty host");
  if (is_ip_literal(host)) return std::string(host);
  auto suffix = public_suffix(host);
  if (!suffix) return std::nullopt;
  std::string lowered = ascii_lower(host);
  if (lowered.size() == suffix->size()) return std::nullopt;
  // One more label to the left of the suffix.
  std::string_view head(lowered.data(), lowered.size() - suffix->size() - 1);
  auto dot = head.rfind('.');
  std::size_t start = dot == std::string_view::npos ? 0 : dot + 1;
  return lowered.substr(start);
}

std::string PublicSuffixList::site_key(std::string_view host) const {
  if (host.empty()) return {};
  if (auto d = registrable_domain(host)) return *d;
  return ascii_lower(host);
}

}  // namespace wiretap
