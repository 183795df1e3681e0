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

// JSON encodings of corpus metadata, table snapshots and every derived
// artifact. Non-finite doubles encode as null.

#ifndef JOINRISK_SERIALIZE_HPP_
#define JOINRISK_SERIALIZE_HPP_

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "joinrisk/corpus.hpp"
#include "joinrisk/disclosure.hpp"
#include "joinrisk/grouping.hpp"
#include "joinrisk/pairrisk.hpp"
#include "joinrisk/util.hpp"
#include "joinrisk/vulnerability.hpp"

namespace joinrisk {

using Json = nlohmann::json;

namespace internal {

inline Json Number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

template <typename T>
T Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kMalformedResponse, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedResponse,
                std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

inline void to_json(Json& j, const DatasetMeta& m) {
  j = Json{{"id", m.id},
           {"name", m.name},
           {"portal", m.portal},
           {"tags", m.tags},
           {"granularity", GranularityName(m.granularity)},
           {"attribute_names", m.attribute_names},
           {"attributes", NormalizedAttributes(m)},
           {"row_count", m.row_count},
           {"truncated", m.truncated}};
  if (const auto* f = std::get_if<LocalFile>(&m.source)) {
    j["path"] = f->path;
  } else {
    j["permalink"] = std::get<Remote>(m.source).permalink;
  }
}

inline void from_json(const Json& j, DatasetMeta& m) {
  using internal::Field;
  m.id = Field<std::string>(j, "id");
  m.name = j.value("name", m.id);
  m.portal = j.value("portal", "");
  m.tags.clear();
  for (const auto& t : j.value("tags", std::vector<std::string>{})) {
    m.tags.insert(NormalizeValue(t));
  }
  m.granularity = ParseGranularity(j.value("granularity", "individual"));
  m.attribute_names = j.value("attribute_names", std::vector<std::string>{});
  m.row_count = j.value("row_count", std::size_t{0});
  m.truncated = j.value("truncated", false);
  if (j.contains("permalink")) {
    m.source = Remote{Field<std::string>(j, "permalink")};
  } else {
    m.source = LocalFile{j.value("path", "")};
  }
}

inline Json CellToJson(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

inline Cell CellFromJson(const Json& j) {
  if (j.is_null()) return Missing{};
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw Error(ErrorCode::kMalformedResponse, "cell must be null, number or string");
}

inline void to_json(Json& j, const DatasetTable& t) {
  Json cols = Json::array();
  for (const auto& c : t.columns) {
    Json cells = Json::array();
    for (const auto& cell : c.cells) cells.push_back(CellToJson(cell));
    cols.push_back({{"name", c.name},
                    {"kind", c.kind == ColumnKind::kNumeric ? "numeric" : "categorical"},
                    {"cells", std::move(cells)}});
  }
  j = Json{{"meta", t.meta}, {"columns", std::move(cols)}};
}

inline void from_json(const Json& j, DatasetTable& t) {
  t.meta = internal::Field<DatasetMeta>(j, "meta");
  t.columns.clear();
  for (const auto& c : internal::Field<Json>(j, "columns")) {
    Column col;
    col.name = internal::Field<std::string>(c, "name");
    col.kind = internal::Field<std::string>(c, "kind") == "numeric" ? ColumnKind::kNumeric
                                                                    : ColumnKind::kCategorical;
    for (const auto& cell : internal::Field<Json>(c, "cells")) {
      col.cells.push_back(CellFromJson(cell));
    }
    if (col.cells.size() != t.meta.row_count) {
      throw Error(ErrorCode::kMalformedResponse,
                  "column '" + col.name + "' length differs from row_count");
    }
    t.columns.push_back(std::move(col));
  }
}

// Snapshot encoding; the id is a content hash of the tables.
inline Json SnapshotToJson(const Corpus& corpus) {
  Json tables = Json::array();
  for (const auto& t : corpus.tables()) tables.push_back(t);
  return Json{{"format", 1}, {"tables", std::move(tables)}};
}

inline Corpus SnapshotFromJson(const Json& j) {
  std::vector<DatasetTable> tables;
  for (const auto& t : internal::Field<Json>(j, "tables")) {
    tables.push_back(t.get<DatasetTable>());
  }
  return Corpus(std::move(tables));
}

inline std::string SnapshotId(const Corpus& corpus) {
  return HexDigest(Hash64(SnapshotToJson(corpus).dump()));
}

// ---------------------------------------------------------------------------
// Grouping
// ---------------------------------------------------------------------------

inline Json QualityToJson(const std::optional<ClusteringQuality>& q) {
  if (!q) return nullptr;
  return Json{{"calinski_harabasz", internal::Number(q->calinski_harabasz)},
              {"silhouette", internal::Number(q->silhouette)},
              {"davies_bouldin", internal::Number(q->davies_bouldin)}};
}

inline Json PointToJson(const Point2& p) { return Json::array({p.x, p.y}); }

inline void to_json(Json& j, const JoinableGroup& g) {
  Json coords = Json::array();
  for (const auto& p : g.coords) coords.push_back(PointToJson(p));
  Json freq = Json::object();
  for (const auto& f : g.attribute_frequencies) freq[f.attribute] = f.count;
  Json priv = Json::object();
  for (const auto& f : g.privacy_frequencies) priv[f.attribute] = f.count;
  Json bars = Json::array();
  for (const auto& f : g.frequency_bars) {
    bars.push_back({{"attribute", f.attribute}, {"count", f.count}, {"is_privacy", f.is_privacy}});
  }
  Json markers = Json::array();
  for (const auto& m : g.markers) {
    markers.push_back(
        {{"coords", PointToJson(m.position)}, {"count", m.members.size()}, {"members", m.members}});
  }
  j = Json{{"id", g.group_id},
           {"rank", g.rank},
           {"members", g.members},
           {"coords", std::move(coords)},
           {"attribute_frequencies", std::move(freq)},
           {"privacy_frequencies", std::move(priv)},
           {"frequency_bars", std::move(bars)},
           {"markers", std::move(markers)},
           {"privacy_coverage", g.privacy_coverage},
           {"quality", QualityToJson(g.quality)}};
}

inline void to_json(Json& j, const GroupingResult& r) {
  Json candidates = Json::array();
  for (const auto& c : r.candidates) {
    candidates.push_back({{"weight", c.weight},
                          {"cluster_count", c.cluster_count},
                          {"eps", c.eps},
                          {"quality", QualityToJson(c.quality)}});
  }
  j = Json{{"weight_chosen", r.weight_chosen},
           {"quality", QualityToJson(r.quality)},
           {"candidates", std::move(candidates)},
           {"groups", r.groups},
           {"noise", r.noise},
           {"dictionary_version", r.dictionary_version}};
}

// ---------------------------------------------------------------------------
// Vulnerability
// ---------------------------------------------------------------------------

inline void to_json(Json& j, const RecordPoint& p) {
  j = Json{{"a", p.attribute}, {"v", p.value}, {"c", p.count}};
}

inline void to_json(Json& j, const VulnerabilityProfile& p) {
  j = Json{{"dataset_id", p.dataset_id},
           {"record_points", p.record_points},
           {"vulnerable", p.vulnerable},
           {"min_count", p.min_count ? Json(*p.min_count) : Json(nullptr)}};
}

inline void to_json(Json& j, const RelevantPartner& p) {
  j = Json{{"dataset_id", p.dataset_id},
           {"score", p.relevance.score},
           {"matched", p.relevance.matched}};
}

// ---------------------------------------------------------------------------
// Pair risk
// ---------------------------------------------------------------------------

inline void to_json(Json& j, const SharedAttribute& s) {
  j = Json{{"name", s.name},
           {"H", s.entropy},
           {"H_a", s.entropy_a},
           {"H_b", s.entropy_b},
           {"is_privacy", s.is_privacy}};
}

inline Json PairToJson(const PairRisk& r,
                       const std::optional<std::vector<std::string>>& last_used_key = {}) {
  return Json{{"a", r.dataset_a},
              {"b", r.dataset_b},
              {"shared", r.shared},
              {"p", r.p},
              {"c", r.c},
              {"alpha", r.alpha},
              {"risk", r.risk},
              {"normalized_risk", r.normalized_risk},
              {"mean_entropy", r.mean_entropy},
              {"suggested_key", r.suggested_key},
              {"last_used_key", last_used_key ? Json(*last_used_key) : Json(nullptr)}};
}

inline void to_json(Json& j, const PairRisk& r) { j = PairToJson(r); }

inline void to_json(Json& j, const AlphaSweepPoint& p) {
  j = Json{{"alpha", p.alpha},
           {"privacy_pairs", p.privacy_pairs},
           {"other_pairs", p.other_pairs},
           {"separation", p.separation},
           {"min_privacy_risk", internal::Number(p.min_privacy_risk)},
           {"max_other_risk", internal::Number(p.max_other_risk)},
           {"separated", p.separated}};
}

// ---------------------------------------------------------------------------
// Disclosure
// ---------------------------------------------------------------------------

inline void to_json(Json& j, const StackEntry& e) {
  j = Json{{"category", e.category}, {"count", e.count}};
}

inline void to_json(Json& j, const JoinOutcome& o) {
  Json matches = Json::array();
  for (const auto& m : o.matches) {
    matches.push_back(
        {{"key_values", m.key_values}, {"row_a", m.row_index_a}, {"row_b", m.row_index_b}});
  }
  Json stacks = Json::array();
  for (const auto& s : o.stacks) {
    stacks.push_back({{"attribute", s.attribute}, {"numeric", s.numeric}, {"entries", s.entries}});
  }
  Json ribbons = Json::array();
  for (const auto& set : o.ribbons) {
    Json list = Json::array();
    for (const auto& r : set.ribbons) {
      list.push_back({{"from", r.from_category},
                      {"to", r.to_category},
                      {"count", r.count},
                      {"match_indices", r.match_indices}});
    }
    ribbons.push_back({{"from_attribute", set.from_attribute},
                       {"to_attribute", set.to_attribute},
                       {"ribbons", std::move(list)}});
  }
  j = Json{{"a", o.dataset_a},
           {"b", o.dataset_b},
           {"key", o.key.attributes},
           {"match_count", o.match_count},
           {"distinct_key_count", o.distinct_key_count},
           {"matches", std::move(matches)},
           {"stacks", std::move(stacks)},
           {"ribbons", std::move(ribbons)}};
}

inline void to_json(Json& j, const FeatureSuggestion& f) {
  j = Json{{"attribute", f.attribute},
           {"source", f.source == Side::kA ? "A" : "B"},
           {"nmi", f.nmi},
           {"distribution", f.distribution}};
}

inline void to_json(Json& j, const FeatureSuggestions& s) {
  j = Json{{"from_a", s.from_a}, {"from_b", s.from_b}};
}

inline void to_json(Json& j, const MatchDetail& d) {
  auto row = [](const std::vector<std::pair<std::string, std::string>>& cells) {
    Json out = Json::array();
    for (const auto& [name, value] : cells) out.push_back({{"name", name}, {"value", value}});
    return out;
  };
  j = Json{{"index", d.index},
           {"key_values", d.match.key_values},
           {"row_index_a", d.match.row_index_a},
           {"row_index_b", d.match.row_index_b},
           {"row_a", row(d.row_a)},
           {"row_b", row(d.row_b)}};
}

}  // namespace joinrisk

#endif  // JOINRISK_SERIALIZE_HPP_
