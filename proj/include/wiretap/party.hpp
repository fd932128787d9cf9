#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "wiretap/common.hpp"
#include "wiretap/public_suffix.hpp"

namespace wiretap {

// Registrable domain -> owning entity.
class EntityMap {
 public:
  EntityMap() = default;

  // Accepts the Disconnect entities layout
  //   {"entities": {"Name": {"properties": [...], "resources": [...]}}}
  // or a flat object {"Name": ["domain", ...]}. Domains are reduced to their
  // registrable domain. Throws ConfigError on anything else.
  static EntityMap parse(std::string_view json_text, const PublicSuffixList& psl);
  static EntityMap load(const std::string& path, const PublicSuffixList& psl);

  void add(const std::string& registrable_domain, const std::string& entity);
  std::optional<std::string> entity_of(std::string_view registrable_domain) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

enum class Party { kFirstParty, kThirdParty };
enum class PartyBasis { kSameRegistrableDomain, kSameEntity, kDistinct };

struct PartyLabel {
  Party value = Party::kThirdParty;
  PartyBasis basis = PartyBasis::kDistinct;
  bool operator==(const PartyLabel&) const = default;
};

std::string_view to_string(Party p);
std::string_view to_string(PartyBasis b);

PartyLabel classify_party(std::string_view page_host, std::string_view origin_host, const EntityMap& entities,
                          const PublicSuffixList& psl);

// True when both registrable domains are equal or owned by the same entity.
bool same_party(std::string_view domain_a, std::string_view domain_b, const EntityMap& entities);

}  // namespace wiretap
