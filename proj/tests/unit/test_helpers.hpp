#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace wiretap::testing {

inline std::string data_path(const std::string& name) { return std::string(WIRETAP_TEST_DATA) + "/" + name; }

inline nlohmann::json load_json(const std::string& name) {
  std::ifstream in(data_path(name));
  return nlohmann::json::parse(in);
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace wiretap::testing
