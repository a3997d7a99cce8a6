#pragma once

#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace lizard::io {

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
  return out;
}

struct Check {
  std::string name;
  nlohmann::ordered_json value;
  bool pass = true;
};

struct RunReport {
  std::vector<std::string> command;
  std::string input_digest;
  std::vector<std::string> outputs;
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["input_digest"] = input_digest;
    j["outputs"] = outputs;
    auto cs = nlohmann::ordered_json::array();
    for (const auto& c : checks)
      cs.push_back({{"name", c.name}, {"value", c.value}, {"pass", c.pass}});
    j["checks"] = cs;
    j["ok"] = ok();
    return j;
  }
};

}  // namespace lizard::io
