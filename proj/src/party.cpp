#include "wiretap/party.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wiretap {

EntityMap EntityMap::parse(std::string_view json_text, const PublicSuffixList& psl) {
  auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("entity map is not a JSON object");
  const nlohmann::json* entities = &doc;
  bool disconnect = doc.contains("entities") && doc["entities"].is_object();
  if (disconnect) entities = &doc["entities"];

  EntityMap map;
  auto add_list = [&](const std::string& entity, const nlohmann::json& list) {
    if (!list.is_array()) throw ConfigError("entity '" + entity + "' must list domains in an array");
    for (const auto& d : list) {
      if (!d.is_string() || d.get<std::string>().empty())
        throw ConfigError("entity '" + entity + "' lists a non-string domain");
      map.add(psl.site_key(d.get<std::string>()), entity);
    }
  };
  for (const auto& [entity, body] : entities->items()) {
    if (disconnect) {
      if (!body.is_object()) throw ConfigError("entity '" + entity + "' must be an object");
      for (const char* key : {"properties", "resources"})
        if (body.contains(key)) add_list(entity, body[key]);
    } else {
      add_list(entity, body);
    }
  }
  return map;
}

EntityMap EntityMap::load(const std::string& path, const PublicSuffixList& psl) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read entity map: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), psl);
}

void EntityMap::add(const std::string& registrable_domain, const std::string& entity) {
  entries_.emplace(ascii_lower(registrable_domain), entity);
}

std::optional<std::string> EntityMap::entity_of(std::string_view registrable_domain) const {
  auto it = entries_.find(registrable_domain);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(Party p) { return p == Party::kFirstParty ? "first_party" : "third_party"; }

std::string_view to_string(PartyBasis b) {
  switch (b) {
    case PartyBasis::kSameRegistrableDomain: return "same_registrable_domain";
    case PartyBasis::kSameEntity: return "same_entity";
    case PartyBasis::kDistinct: return "distinct";
  }
  return "distinct";
}

bool same_party(std::string_view domain_a, std::string_view domain_b, const EntityMap& entities) {
  if (domain_a == domain_b) return true;
  auto ea = entities.entity_of(domain_a);
  auto eb = entities.entity_of(domain_b);
  return ea && eb && *ea == *eb;
}

PartyLabel classify_party(std::string_view page_host, std::string_view origin_host, const EntityMap& entities,
                          const PublicSuffixList& psl) {
  std::string page = psl.site_key(page_host);
  std::string origin = psl.site_key(origin_host);
  if (page == origin) return {Party::kFirstParty, PartyBasis::kSameRegistrableDomain};
  if (same_party(page, origin, entities)) return {Party::kFirstParty, PartyBasis::kSameEntity};
  return {Party::kThirdParty, PartyBasis::kDistinct};
}

}  // namespace wiretap
