//
// Copyright 2026 The joinrisk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Service configuration: JSON key-value file plus JOINRISK_* environment
// overrides.

#ifndef JOINRISK_CONFIG_HPP_
#define JOINRISK_CONFIG_HPP_

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "joinrisk/catalog.hpp"
#include "joinrisk/corpus.hpp"
#include "joinrisk/disclosure.hpp"
#include "joinrisk/embedding.hpp"
#include "joinrisk/pairrisk.hpp"
#include "joinrisk/vulnerability.hpp"

namespace joinrisk {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string cache_dir;  // empty: no on-disk artifact cache
  std::size_t record_cap = kDefaultRecordCap;
  bool truncate = false;
  double alpha = kDefaultAlpha;
  std::size_t vulnerable_threshold = kDefaultVulnerableThreshold;
  NmiNormalization nmi_mode = NmiNormalization::kSqrt;
  std::string catalog_url = std::string(kDefaultCatalogUrl);
  std::vector<double> weight_candidates = DefaultWeightCandidates();
  std::uint64_t seed = 0;  // default projection seed
  std::string vectors_path;  // optional external word vectors
};

namespace internal {

inline bool ParseBool(const std::string& key, std::string_view v) {
  const std::string s = NormalizeValue(v);
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::kInvalidArgument, key + ": expected a boolean, got '" + s + "'");
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    T out;
    if constexpr (std::is_floating_point_v<T>) {
      out = static_cast<T>(std::stod(v, &used));
    } else {
      out = static_cast<T>(std::stoull(v, &used));
    }
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, key + ": expected a number, got '" + v + "'");
  }
}

inline std::vector<double> ParseWeights(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto part = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(ParseNumber<double>(key, part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Applies one textual setting; keys match the JSON field names.
inline void ApplySetting(ServiceConfig& c, const std::string& key, const std::string& v) {
  if (key == "host") c.host = v;
  else if (key == "port") c.port = ParseNumber<int>(key, v);
  else if (key == "cache_dir") c.cache_dir = v;
  else if (key == "record_cap") c.record_cap = ParseNumber<std::size_t>(key, v);
  else if (key == "truncate") c.truncate = ParseBool(key, v);
  else if (key == "alpha") c.alpha = ParseNumber<double>(key, v);
  else if (key == "vulnerable_threshold") c.vulnerable_threshold = ParseNumber<std::size_t>(key, v);
  else if (key == "nmi_mode") c.nmi_mode = ParseNmiNormalization(v);
  else if (key == "catalog_url") c.catalog_url = v;
  else if (key == "weight_candidates") c.weight_candidates = ParseWeights(key, v);
  else if (key == "seed") c.seed = ParseNumber<std::uint64_t>(key, v);
  else if (key == "vectors_path") c.vectors_path = v;
  else throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
}

}  // namespace internal

inline const std::vector<std::string>& ConfigKeys() {
  static const std::vector<std::string> keys = {
      "host",  "port",     "cache_dir",   "record_cap",        "truncate", "alpha",
      "vulnerable_threshold", "nmi_mode", "catalog_url", "weight_candidates", "seed",
      "vectors_path"};
  return keys;
}

inline void ApplyConfigJson(ServiceConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (const auto& w : value) text += (text.empty() ? "" : ",") + w.dump();
    } else {
      text = value.dump();
    }
    internal::ApplySetting(c, key, text);
  }
}

inline ServiceConfig LoadConfigFile(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParseError, "invalid JSON in " + path.string());
  ServiceConfig c;
  ApplyConfigJson(c, j);
  return c;
}

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

inline std::optional<std::string> ProcessEnv(const std::string& name) {
  if (const char* v = std::getenv(name.c_str())) return std::string(v);
  return std::nullopt;
}

// JOINRISK_PORT, JOINRISK_CACHE_DIR, ... override file values.
inline void ApplyEnvOverrides(ServiceConfig& c, const EnvLookup& env = ProcessEnv) {
  for (const auto& key : ConfigKeys()) {
    std::string name = "JOINRISK_";
    for (char ch : key) name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    if (auto v = env(name)) internal::ApplySetting(c, key, *v);
  }
}

inline nlohmann::json ConfigToJson(const ServiceConfig& c) {
  return {{"host", c.host},
          {"port", c.port},
          {"cache_dir", c.cache_dir},
          {"record_cap", c.record_cap},
          {"truncate", c.truncate},
          {"alpha", c.alpha},
          {"vulnerable_threshold", c.vulnerable_threshold},
          {"nmi_mode", NmiNormalizationName(c.nmi_mode)},
          {"catalog_url", c.catalog_url},
          {"weight_candidates", c.weight_candidates},
          {"seed", c.seed},
          {"vectors_path", c.vectors_path}};
}

inline EmbeddingProvider MakeProvider(const ServiceConfig& c) {
  if (c.vectors_path.empty()) return EmbeddingProvider::HashedTrigrams();
  return EmbeddingProvider::FromVectorFile(c.vectors_path);
}

}  // namespace joinrisk

#endif  // JOINRISK_CONFIG_HPP_
