#include "wiretap/filter_rules.hpp"

#include <fstream>

#include "wiretap/url.hpp"

namespace wiretap {

namespace {

constexpr char kStar = '*';
constexpr char kSep = '^';

bool is_separator(unsigned char c) {
  if (c >= 0x80) return false;
  return !(is_ascii_alnum(c) || c == '_' || c == '-' || c == '.' || c == '%');
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

// Domain variants with at least two labels, longest first.
std::vector<std::string> domain_variants(std::string_view host) {
  auto labels = split(host, '.');
  std::vector<std::string> out;
  if (labels.size() == 1) {
    out.emplace_back(host);
    return out;
  }
  for (std::size_t keep = labels.size(); keep >= 2; --keep) {
    std::string d;
    for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
      if (!d.empty()) d += '.';
      d += labels[i];
    }
    out.push_back(std::move(d));
  }
  return out;
}

// Offsets where a "||" anchored pattern may begin: the start, after a
// leading "scheme:", after "//", and after any dot inside the authority.
std::vector<std::size_t> domain_anchor_starts(std::string_view url) {
  std::vector<std::size_t> starts{0};
  std::vector<std::size_t> bases{0};
  std::size_t colon = url.find(':');
  if (colon != std::string_view::npos && colon > 0 &&
      url.substr(0, colon).find_first_of("/?#") == std::string_view::npos) {
    starts.push_back(colon + 1);
    bases.push_back(colon + 1);
  }
  for (std::size_t base : bases) {
    if (url.substr(base, 2) != "//") continue;
    std::size_t host = base + 2;
    starts.push_back(host);
    for (std::size_t k = host; k < url.size(); ++k) {
      char c = url[k];
      if (c == '/' || c == '?' || c == '#') break;
      if (c == '.') starts.push_back(k + 1);
    }
  }
  return starts;
}

}  // namespace

std::optional<FilterRule> FilterRule::parse(std::string_view line) {
  std::string_view text = trim(line);
  if (text.empty() || text.front() == '!' || text.starts_with("[Adblock")) return std::nullopt;
  if (text.find("##") != std::string_view::npos || text.find("#@#") != std::string_view::npos ||
      text.find("#?#") != std::string_view::npos || text.find("#$#") != std::string_view::npos)
    return std::nullopt;

  FilterRule rule;
  if (text.starts_with("@@")) {
    rule.exception_ = true;
    text.remove_prefix(2);
  }
  std::string_view options;
  if (auto dollar = text.find('$'); dollar != std::string_view::npos) {
    options = text.substr(dollar + 1);
    text = text.substr(0, dollar);
  }
  if (text.size() > 1 && text.front() == '/' && text.back() == '/') return std::nullopt;
  rule.pattern_ = std::string(text);

  bool has_options = trim(line).find('$') != std::string_view::npos;
  if (has_options) {
    for (std::string_view opt : split(options, ',')) {
      if (opt == "third-party") {
        rule.third_party_ = true;
        rule.option_order_.push_back(OptionKind::kThirdParty);
      } else if (opt == "~third-party") {
        rule.third_party_ = false;
        rule.option_order_.push_back(OptionKind::kThirdParty);
      } else if (opt == "match-case") {
        rule.match_case_ = true;
        rule.option_order_.push_back(OptionKind::kMatchCase);
      } else if (opt.starts_with("domain=")) {
        for (std::string_view d : split(opt.substr(7), '|')) {
          bool applies = true;
          if (d.starts_with("~")) {
            applies = false;
            d.remove_prefix(1);
          }
          if (d.empty()) return std::nullopt;
          rule.domains_.emplace_back(ascii_lower(d), applies);
        }
        rule.option_order_.push_back(OptionKind::kDomain);
      } else {
        return std::nullopt;
      }
    }
  }

  std::string_view body = text;
  if (body.starts_with("||") && body.size() > 2) {
    rule.anchor_ = Anchor::kDomain;
    body.remove_prefix(2);
  } else if (body.starts_with("|")) {
    rule.anchor_ = Anchor::kStart;
    body.remove_prefix(1);
  }
  if (!body.empty() && body.back() == '|') {
    rule.end_anchor_ = true;
    body.remove_suffix(1);
  }
  rule.body_ = rule.match_case_ ? std::string(body) : ascii_lower(body);

  std::size_t best = 0, run_start = 0;
  for (std::size_t i = 0; i <= rule.body_.size(); ++i) {
    if (i == rule.body_.size() || rule.body_[i] == kStar || rule.body_[i] == kSep) {
      if (i - run_start > best) {
        best = i - run_start;
        rule.literal_ = rule.body_.substr(run_start, best);
      }
      run_start = i + 1;
    }
  }
  return rule;
}

std::string FilterRule::text() const {
  std::string out = exception_ ? "@@" + pattern_ : pattern_;
  for (std::size_t i = 0; i < option_order_.size(); ++i) {
    out += i ? ',' : '$';
    switch (option_order_[i]) {
      case OptionKind::kThirdParty:
        out += *third_party_ ? "third-party" : "~third-party";
        break;
      case OptionKind::kMatchCase:
        out += "match-case";
        break;
      case OptionKind::kDomain:
        out += "domain=";
        for (std::size_t d = 0; d < domains_.size(); ++d) {
          if (d) out += '|';
          if (!domains_[d].second) out += '~';
          out += domains_[d].first;
        }
        break;
    }
  }
  return out;
}

bool FilterRule::options_match(const FilterContext& ctx) const {
  if (third_party_ && *third_party_ != ctx.third_party) return false;
  if (domains_.empty()) return true;
  for (const auto& variant : domain_variants(ascii_lower(ctx.page_host)))
    for (const auto& [domain, applies] : domains_)
      if (domain == variant) return applies;
  for (const auto& entry : domains_)
    if (entry.second) return false;
  return true;
}

bool FilterRule::url_matches(std::string_view raw_url) const {
  std::string url = match_case_ ? std::string(raw_url) : ascii_lower(raw_url);
  if (!literal_.empty() && url.find(literal_) == std::string::npos) return false;

  // ok[t * (n + 1) + s]: body_[t..] matches url[s..].
  const std::size_t T = body_.size(), n = url.size();
  std::vector<char> ok((T + 1) * (n + 1), 0);
  auto at = [&](std::size_t t, std::size_t s) -> char& { return ok[t * (n + 1) + s]; };
  for (std::size_t s = 0; s <= n; ++s) at(T, s) = end_anchor_ ? (s == n) : 1;
  for (std::size_t t = T; t-- > 0;) {
    char p = body_[t];
    for (std::size_t s = n + 1; s-- > 0;) {
      bool v = false;
      if (p == kStar) {
        v = at(t + 1, s) || (s < n && at(t, s + 1));
      } else if (p == kSep) {
        v = s < n ? (is_separator(static_cast<unsigned char>(url[s])) && at(t + 1, s + 1)) : at(t + 1, s);
      } else {
        v = s < n && url[s] == p && at(t + 1, s + 1);
      }
      at(t, s) = v;
    }
  }
  switch (anchor_) {
    case Anchor::kStart:
      return at(0, 0);
    case Anchor::kDomain:
      for (std::size_t s : domain_anchor_starts(url))
        if (at(0, s)) return true;
      return false;
    case Anchor::kNone:
      for (std::size_t s = 0; s <= n; ++s)
        if (at(0, s)) return true;
      return false;
  }
  return false;
}

void FilterRuleSet::add_list(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    std::string_view text = trim(line);
    if (text.empty() || text.front() == '!' || text.starts_with("[Adblock")) {
      ++comments_;
      continue;
    }
    if (auto rule = FilterRule::parse(text)) {
      rules_.push_back(std::move(*rule));
    } else {
      ++unsupported_;
    }
  }
}

void FilterRuleSet::add_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read filter list: " + path);
  add_list(in);
}

FilterRuleSet::Decision FilterRuleSet::evaluate(std::string_view url, const FilterContext& ctx) const {
  const FilterRule* block = nullptr;
  for (const auto& rule : rules_) {
    if (!rule.is_exception() && block) continue;
    if (!rule.matches(url, ctx)) continue;
    if (rule.is_exception()) return {false, &rule};
    block = &rule;
  }
  return {block != nullptr, block};
}

FilterRuleSet::Decision is_known_tracker_url(std::string_view url, std::string_view page_host,
                                             const FilterRuleSet& rules, const PublicSuffixList& psl) {
  auto parsed = parse_url(url);
  FilterContext ctx{std::string(page_host), false};
  if (parsed && !parsed->host.empty() && !page_host.empty())
    ctx.third_party = psl.site_key(parsed->host) != psl.site_key(page_host);
  return rules.evaluate(url, ctx);
}

FilterRuleSet::Decision is_known_tracker(const NetworkRecord& req, std::string_view page_host,
                                         const FilterRuleSet& rules, const PublicSuffixList& psl) {
  return is_known_tracker_url(req.request_url, page_host, rules, psl);
}

}  // namespace wiretap
