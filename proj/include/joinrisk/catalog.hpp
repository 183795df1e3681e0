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

// Socrata catalog client: portal discovery with a pluggable transport, a
// record/replay fixture directory for offline use, and a timestamped cache.

#ifndef JOINRISK_CATALOG_HPP_
#define JOINRISK_CATALOG_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "joinrisk/corpus.hpp"
#include "joinrisk/error.hpp"
#include "joinrisk/util.hpp"

namespace joinrisk {

inline constexpr std::string_view kDefaultCatalogUrl =
    "http://api.us.socrata.com/api/catalog/v1/domains";

// ---------------------------------------------------------------------------
// Transport
// ---------------------------------------------------------------------------

struct HttpResponse {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws NetworkError when no response could be obtained.
  virtual HttpResponse Get(const std::string& url) = 0;
};

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string target;  // path?query, at least "/"
};

inline UrlParts SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "not an absolute URL: '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttpTransport final : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(30))
      : timeout_(timeout) {}

  HttpResponse Get(const std::string& url) override {
    const auto parts = SplitUrl(url);
    httplib::Client client(parts.origin);
    if (!client.is_valid()) {
      throw Error(ErrorCode::kNetworkError, "unsupported URL '" + url + "'");
    }
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    auto res = client.Get(parts.target);
    if (!res) {
      throw Error(ErrorCode::kNetworkError,
                  "GET " + url + " failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }

 private:
  std::chrono::seconds timeout_;
};

// File name for a recorded response. Long URLs keep a readable prefix and a
// hash suffix.
inline std::string FixtureName(const std::string& url) {
  std::string s;
  auto body = url.substr(url.find("://") == std::string::npos ? 0 : url.find("://") + 3);
  for (char c : body) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
    s.push_back(keep ? c : '_');
  }
  if (s.size() > 120) s = s.substr(0, 100) + "_" + HexDigest(Hash64(url));
  return s + ".json";
}

// Replays responses from a directory; with a live transport attached, misses
// are fetched and recorded.
class FixtureTransport final : public Transport {
 public:
  explicit FixtureTransport(std::filesystem::path dir,
                            std::shared_ptr<Transport> record_from = nullptr)
      : dir_(std::move(dir)), live_(std::move(record_from)) {}

  HttpResponse Get(const std::string& url) override {
    const auto path = dir_ / FixtureName(url);
    if (std::filesystem::exists(path)) return {200, ReadFile(path)};
    if (!live_) {
      throw Error(ErrorCode::kNetworkError, "no recorded response for " + url);
    }
    auto res = live_->Get(url);
    if (res.status == 200) {
      std::lock_guard lock(mu_);
      std::filesystem::create_directories(dir_);
      std::ofstream(path, std::ios::binary) << res.body;
    }
    return res;
  }

 private:
  std::filesystem::path dir_;
  std::shared_ptr<Transport> live_;
  std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

struct CatalogDataset {
  std::string id;
  std::string name;
  std::string permalink;
  std::vector<std::string> columns;
  std::set<std::string> tags;
};

struct PortalDescriptor {
  std::string domain;
  std::size_t listed_count = 0;    // as reported by the domains endpoint
  std::size_t official_count = 0;  // official datasets actually found
  std::vector<CatalogDataset> datasets;
};

namespace internal {

inline nlohmann::json ParseBody(const HttpResponse& res, const std::string& url) {
  if (res.status != 200) {
    throw Error(ErrorCode::kNetworkError,
                "GET " + url + " returned HTTP " + std::to_string(res.status));
  }
  auto j = nlohmann::json::parse(res.body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("results") ||
      !j["results"].is_array()) {
    throw Error(ErrorCode::kMalformedResponse, "unexpected catalog payload from " + url);
  }
  return j;
}

inline std::string UrlEncode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

// Provenance may sit on the result or on its resource block.
inline std::string ProvenanceOf(const nlohmann::json& r) {
  if (r.contains("provenance") && r["provenance"].is_string()) return r["provenance"];
  if (r.contains("resource") && r["resource"].contains("provenance") &&
      r["resource"]["provenance"].is_string()) {
    return r["resource"]["provenance"];
  }
  return "";
}

inline std::optional<CatalogDataset> ParseCatalogResult(const nlohmann::json& r) {
  if (!r.is_object() || !r.contains("resource") || !r["resource"].is_object()) {
    throw Error(ErrorCode::kMalformedResponse, "catalog result without resource");
  }
  const auto& res = r["resource"];
  if (res.value("type", "dataset") != "dataset") return std::nullopt;
  if (NormalizeValue(ProvenanceOf(r)) != "official") return std::nullopt;
  CatalogDataset d;
  d.id = res.value("id", "");
  d.name = res.value("name", d.id);
  d.permalink = r.value("permalink", "");
  if (res.contains("columns_name") && res["columns_name"].is_array()) {
    for (const auto& c : res["columns_name"]) {
      if (c.is_string()) d.columns.push_back(c);
    }
  }
  for (const char* key : {"domain_tags", "tags"}) {
    const auto& holder = r.contains("classification") ? r["classification"] : r;
    if (holder.contains(key) && holder[key].is_array()) {
      for (const auto& t : holder[key]) {
        if (t.is_string()) d.tags.insert(NormalizeValue(t.get<std::string>()));
      }
    }
  }
  return d;
}

}  // namespace internal

struct CatalogOptions {
  std::string base_url = std::string(kDefaultCatalogUrl);
  std::size_t min_resources = 2;
  std::size_t page_size = 1000;
};

// Lists portals from the domains endpoint, then pages through each portal's
// catalog and keeps those with at least min_resources official datasets.
inline std::vector<PortalDescriptor> FetchCatalog(Transport& transport,
                                                  const CatalogOptions& options = {}) {
  const auto domains_json = internal::ParseBody(transport.Get(options.base_url), options.base_url);
  std::string root = options.base_url;
  if (const auto q = root.find('?'); q != std::string::npos) root.resize(q);
  if (root.ends_with("/domains")) root.resize(root.size() - 8);

  std::vector<PortalDescriptor> out;
  for (const auto& entry : domains_json["results"]) {
    if (!entry.is_object() || !entry.contains("domain") || !entry["domain"].is_string()) {
      throw Error(ErrorCode::kMalformedResponse, "domain entry without a name");
    }
    PortalDescriptor portal;
    portal.domain = entry["domain"];
    portal.listed_count = entry.value("count", std::size_t{0});
    if (portal.listed_count < options.min_resources) continue;

    for (std::size_t offset = 0;; offset += options.page_size) {
      const std::string url = root + "?domains=" + internal::UrlEncode(portal.domain) +
                              "&only=dataset&provenance=official&limit=" +
                              std::to_string(options.page_size) +
                              "&offset=" + std::to_string(offset);
      const auto page = internal::ParseBody(transport.Get(url), url);
      for (const auto& r : page["results"]) {
        if (auto d = internal::ParseCatalogResult(r)) portal.datasets.push_back(std::move(*d));
      }
      if (page["results"].size() < options.page_size) break;
    }
    portal.official_count = portal.datasets.size();
    if (portal.official_count >= options.min_resources) out.push_back(std::move(portal));
  }
  return out;
}

inline nlohmann::json PortalsToJson(const std::vector<PortalDescriptor>& portals) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : portals) {
    nlohmann::json ds = nlohmann::json::array();
    for (const auto& d : p.datasets) {
      ds.push_back({{"id", d.id},
                    {"name", d.name},
                    {"permalink", d.permalink},
                    {"columns", d.columns},
                    {"tags", d.tags}});
    }
    out.push_back({{"domain", p.domain},
                   {"listed_count", p.listed_count},
                   {"official_count", p.official_count},
                   {"datasets", std::move(ds)}});
  }
  return out;
}

// Timestamped catalog results on disk. Writes are serialized.
class CatalogCache {
 public:
  explicit CatalogCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  std::filesystem::path Store(const std::vector<PortalDescriptor>& portals,
                              const CatalogOptions& options) {
    const auto now = std::chrono::system_clock::now();
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count();
    nlohmann::json doc = {{"fetched_at_ms", ms},
                          {"base_url", options.base_url},
                          {"min_resources", options.min_resources},
                          {"portals", PortalsToJson(portals)}};
    std::lock_guard lock(mu_);
    std::filesystem::create_directories(dir_);
    auto path = dir_ / ("catalog-" + std::to_string(ms) + ".json");
    for (int n = 1; std::filesystem::exists(path); ++n) {
      path = dir_ / ("catalog-" + std::to_string(ms) + "-" + std::to_string(n) + ".json");
    }
    const auto tmp = path.string() + ".tmp";
    std::ofstream(tmp, std::ios::binary) << doc.dump(2);
    std::filesystem::rename(tmp, path);
    return path;
  }

 private:
  std::filesystem::path dir_;
  std::mutex mu_;
};

// Permalinks of the form https://host/d/abcd-1234 resolve to the CSV export;
// any other URL is fetched as-is.
inline std::string CsvUrlForPermalink(const std::string& permalink) {
  const auto pos = permalink.find("/d/");
  if (pos == std::string::npos) return permalink;
  std::string id = permalink.substr(pos + 3);
  if (const auto end = id.find_first_of("/?#"); end != std::string::npos) id.resize(end);
  return permalink.substr(0, pos) + "/api/views/" + id + "/rows.csv?accessType=DOWNLOAD";
}

}  // namespace joinrisk

#endif  // JOINRISK_CATALOG_HPP_
