#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/public_suffix.hpp"
#include "wiretap/trace.hpp"

namespace wiretap {

// Request context a rule's options are evaluated against.
struct FilterContext {
  std::string page_host;
  bool third_party = false;
};

// One network rule in adblock syntax. Supported: "||" domain anchors, "|"
// start and end anchors, "*" wildcards, the "^" separator class, the
// options third-party, ~third-party, domain=a|~b and match-case, and "@@"
// exceptions.
class FilterRule {
 public:
  // nullopt for comments, cosmetic rules, regex rules and rules carrying
  // other options.
  static std::optional<FilterRule> parse(std::string_view line);

  bool is_exception() const { return exception_; }
  const std::string& pattern() const { return pattern_; }
  // Canonical text rebuilt from the parsed form; equals the source line.
  std::string text() const;

  bool options_match(const FilterContext& ctx) const;
  bool url_matches(std::string_view url) const;
  bool matches(std::string_view url, const FilterContext& ctx) const {
    return options_match(ctx) && url_matches(url);
  }

 private:
  enum class Anchor { kNone, kStart, kDomain };
  enum class OptionKind { kThirdParty, kDomain, kMatchCase };

  bool exception_ = false;
  std::string pattern_;  // text between "@@" and "$"
  Anchor anchor_ = Anchor::kNone;
  bool end_anchor_ = false;
  std::string body_;     // pattern without anchors, lowercased unless match-case
  std::string literal_;  // longest run without '*' or '^', for prefiltering
  std::vector<OptionKind> option_order_;
  std::optional<bool> third_party_;
  std::vector<std::pair<std::string, bool>> domains_;  // (domain, applies)
  bool match_case_ = false;
};

class FilterRuleSet {
 public:
  struct Decision {
    bool blocked = false;
    const FilterRule* rule = nullptr;  // deciding rule: exception or block
  };

  FilterRuleSet() = default;
  void add_list(std::istream& in);
  void add_file(const std::string& path);  // ConfigError when unreadable

  const std::vector<FilterRule>& rules() const { return rules_; }
  std::size_t comment_count() const { return comments_; }
  // Non-comment lines outside the supported subset.
  std::size_t unsupported_count() const { return unsupported_; }

  // Exceptions dominate; otherwise the first matching block rule decides.
  Decision evaluate(std::string_view url, const FilterContext& ctx) const;

 private:
  std::vector<FilterRule> rules_;
  std::size_t comments_ = 0;
  std::size_t unsupported_ = 0;
};

// Label a request as tracking. The party context is decided by registrable
// domain of the request host versus the page host.
FilterRuleSet::Decision is_known_tracker(const NetworkRecord& req, std::string_view page_host,
                                         const FilterRuleSet& rules, const PublicSuffixList& psl);
FilterRuleSet::Decision is_known_tracker_url(std::string_view url, std::string_view page_host,
                                             const FilterRuleSet& rules, const PublicSuffixList& psl);

}  // namespace wiretap
