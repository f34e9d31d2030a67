#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "archivesafe/bytes.hpp"

namespace archivesafe::testing {

inline const nlohmann::json& golden() {
  static const nlohmann::json doc = [] {
    std::ifstream in(std::string(ARCHIVESAFE_FIXTURE_DIR) + "/golden.json");
    if (!in) throw std::runtime_error("golden.json fixture not found");
    return nlohmann::json::parse(in);
  }();
  return doc;
}

inline Bytes hex(const nlohmann::json& v) {
  auto b = from_hex(v.get<std::string>());
  if (!b) throw std::runtime_error("bad hex in fixture");
  return *b;
}

template <typename Tag>
Block128<Tag> block(const nlohmann::json& v) {
  return *block_from_bytes<Tag>(hex(v));
}

}  // namespace archivesafe::testing
