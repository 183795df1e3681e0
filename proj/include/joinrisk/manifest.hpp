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

// Corpus manifests: a JSON array of
// {id, name, portal, tags[], granularity, path | permalink}.

#ifndef JOINRISK_MANIFEST_HPP_
#define JOINRISK_MANIFEST_HPP_

#include <filesystem>
#include <future>
#include <string>
#include <vector>

#include "json.hpp"

#include "joinrisk/catalog.hpp"
#include "joinrisk/corpus.hpp"
#include "joinrisk/error.hpp"

namespace joinrisk {

struct ManifestEntry {
  MetaOverrides meta;  // id and source always set
};

inline std::vector<ManifestEntry> ParseManifest(std::string_view text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_array()) {
    throw Error(ErrorCode::kParseError, "manifest must be a JSON array");
  }
  std::vector<ManifestEntry> out;
  std::set<std::string> ids;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("id") || !e["id"].is_string()) {
      throw Error(ErrorCode::kParseError, "manifest entry without a string id");
    }
    ManifestEntry m;
    const std::string id = e["id"];
    if (!ids.insert(id).second) {
      throw Error(ErrorCode::kParseError, "duplicate manifest id '" + id + "'");
    }
    m.meta.id = id;
    m.meta.name = e.value("name", id);
    m.meta.portal = e.value("portal", "");
    std::set<std::string> tags;
    if (e.contains("tags")) {
      if (!e["tags"].is_array()) throw Error(ErrorCode::kParseError, "tags must be an array");
      for (const auto& t : e["tags"]) tags.insert(NormalizeValue(t.get<std::string>()));
    }
    m.meta.tags = std::move(tags);
    if (!e.contains("granularity")) {
      throw Error(ErrorCode::kParseError, "entry '" + id + "' needs a granularity label");
    }
    try {
      m.meta.granularity = ParseGranularity(e["granularity"].get<std::string>());
    } catch (const Error& err) {
      throw Error(ErrorCode::kParseError, "entry '" + id + "': " + err.detail());
    }
    const bool has_path = e.contains("path");
    const bool has_link = e.contains("permalink");
    if (has_path == has_link) {
      throw Error(ErrorCode::kParseError,
                  "entry '" + id + "' needs exactly one of path or permalink");
    }
    if (has_path) {
      m.meta.source = LocalFile{e["path"].get<std::string>()};
    } else {
      m.meta.source = Remote{e["permalink"].get<std::string>()};
    }
    out.push_back(std::move(m));
  }
  return out;
}

struct LoadOptions {
  IngestOptions ingest;
  // Needed only for permalink entries.
  Transport* transport = nullptr;
};

// Ingests every entry; relative paths resolve against base_dir but are kept
// as written in the metadata so snapshots do not depend on the checkout.
inline Corpus LoadCorpus(const std::vector<ManifestEntry>& entries,
                         const std::filesystem::path& base_dir,
                         const LoadOptions& options = {}) {
  std::vector<std::future<DatasetTable>> jobs;
  for (const auto& entry : entries) {
    if (const auto* remote = std::get_if<Remote>(&*entry.meta.source)) {
      if (!options.transport) {
        throw Error(ErrorCode::kNetworkError,
                    "entry '" + *entry.meta.id + "' is remote but no transport is configured");
      }
      const std::string url = CsvUrlForPermalink(remote->permalink);
      auto res = options.transport->Get(url);
      if (res.status != 200) {
        throw Error(ErrorCode::kNetworkError,
                    "GET " + url + " returned HTTP " + std::to_string(res.status));
      }
      jobs.push_back(std::async(std::launch::deferred, [&entry, &options, body = std::move(res.body)] {
        return IngestCsvText(body, entry.meta, options.ingest);
      }));
      continue;
    }
    std::filesystem::path path = std::get<LocalFile>(*entry.meta.source).path;
    if (path.is_relative()) path = base_dir / path;
    jobs.push_back(std::async(std::launch::async, [&entry, &options, path] {
      try {
        return IngestCsv(path, entry.meta, options.ingest);
      } catch (const Error& e) {
        throw Error(e.code(), "'" + *entry.meta.id + "': " + e.detail());
      }
    }));
  }
  std::vector<DatasetTable> tables;
  tables.reserve(jobs.size());
  for (auto& j : jobs) tables.push_back(j.get());
  return Corpus(std::move(tables));
}

inline Corpus LoadManifest(const std::filesystem::path& manifest,
                           const LoadOptions& options = {}) {
  return LoadCorpus(ParseManifest(ReadFile(manifest)), manifest.parent_path(), options);
}

}  // namespace joinrisk

#endif  // JOINRISK_MANIFEST_HPP_
