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

// Record points, low-count ("vulnerable") distributions, vulnerability
// ranking and the relevance score between a vulnerable dataset and a
// candidate join partner.

#ifndef JOINRISK_VULNERABILITY_HPP_
#define JOINRISK_VULNERABILITY_HPP_

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "joinrisk/corpus.hpp"
#include "joinrisk/error.hpp"

namespace joinrisk {

inline constexpr std::size_t kDefaultVulnerableThreshold = 4;

// [attribute, value, count]: `count` rows carry `value` for `attribute`.
struct RecordPoint {
  std::string attribute;
  std::string value;
  std::size_t count = 0;

  bool operator==(const RecordPoint&) const = default;
};

// Record points of one column: one per distinct non-missing label.
inline std::vector<RecordPoint> ColumnRecordPoints(const Column& column) {
  const CellLabeler label(column);
  std::map<std::string, std::size_t> counts;
  for (const auto& cell : column.cells) {
    if (auto v = label(cell)) ++counts[*v];
  }
  std::vector<RecordPoint> out;
  out.reserve(counts.size());
  for (auto& [value, count] : counts) out.push_back({column.name, value, count});
  return out;
}

// Record points over the table's columns that belong to the dictionary, in
// column order.
inline std::vector<RecordPoint> RecordPoints(const DatasetTable& table,
                                             const PrivacyDictionary& dictionary) {
  std::vector<RecordPoint> out;
  bool any = false;
  for (const auto& column : table.columns) {
    if (!dictionary.Contains(column.name)) continue;
    any = true;
    auto points = ColumnRecordPoints(column);
    out.insert(out.end(), points.begin(), points.end());
  }
  if (!any) {
    throw Error(ErrorCode::kNoPrivacyAttributes,
                "dataset '" + table.meta.id + "' has no privacy attributes");
  }
  return out;
}

struct VulnerabilityProfile {
  std::string dataset_id;
  std::vector<RecordPoint> record_points;
  std::vector<RecordPoint> vulnerable;
  std::optional<std::size_t> min_count;  // unset when nothing is vulnerable
};

inline VulnerabilityProfile BuildProfile(
    const DatasetTable& table, const PrivacyDictionary& dictionary,
    std::size_t threshold = kDefaultVulnerableThreshold) {
  VulnerabilityProfile p;
  p.dataset_id = table.meta.id;
  p.record_points = RecordPoints(table, dictionary);
  for (const auto& rp : p.record_points) {
    if (rp.count > threshold) continue;
    p.vulnerable.push_back(rp);
    p.min_count = p.min_count ? std::min(*p.min_count, rp.count) : rp.count;
  }
  return p;
}

// More vulnerable points first, then the rarest point, then id.
inline std::vector<VulnerabilityProfile> RankVulnerable(
    std::vector<VulnerabilityProfile> profiles) {
  std::sort(profiles.begin(), profiles.end(),
            [](const VulnerabilityProfile& a, const VulnerabilityProfile& b) {
              if (a.vulnerable.size() != b.vulnerable.size()) {
                return a.vulnerable.size() > b.vulnerable.size();
              }
              const auto ma = a.min_count.value_or(std::numeric_limits<std::size_t>::max());
              const auto mb = b.min_count.value_or(std::numeric_limits<std::size_t>::max());
              if (ma != mb) return ma < mb;
              return a.dataset_id < b.dataset_id;
            });
  return profiles;
}

struct RelevanceResult {
  double score = 0.0;
  std::vector<RecordPoint> matched;  // the points of V_A found in B
};

// |V_A ∩ R_B| / |V_A|, matching on (attribute, value) only.
inline RelevanceResult RelevanceScore(const std::vector<RecordPoint>& vulnerable_a,
                                      const DatasetTable& b) {
  if (vulnerable_a.empty()) {
    throw Error(ErrorCode::kEmptyVulnerableSet, "no vulnerable record points");
  }
  std::set<std::string> wanted;
  for (const auto& rp : vulnerable_a) wanted.insert(NormalizeAttribute(rp.attribute));
  std::set<std::pair<std::string, std::string>> present;
  for (const auto& column : b.columns) {
    if (!wanted.contains(column.name)) continue;
    for (const auto& rp : ColumnRecordPoints(column)) {
      present.emplace(rp.attribute, rp.value);
    }
  }
  RelevanceResult r;
  for (const auto& rp : vulnerable_a) {
    if (present.contains({NormalizeAttribute(rp.attribute), NormalizeValue(rp.value)})) {
      r.matched.push_back(rp);
    }
  }
  r.score = static_cast<double>(r.matched.size()) /
            static_cast<double>(vulnerable_a.size());
  return r;
}

struct RelevantPartner {
  std::string dataset_id;
  RelevanceResult relevance;
};

// Candidates ordered by relevance (desc), then id. The vulnerable dataset
// itself is skipped.
inline std::vector<RelevantPartner> RankRelevance(
    const VulnerabilityProfile& vulnerable,
    const std::vector<const DatasetTable*>& candidates) {
  std::vector<RelevantPartner> out;
  for (const auto* t : candidates) {
    if (t->meta.id == vulnerable.dataset_id) continue;
    out.push_back({t->meta.id, RelevanceScore(vulnerable.vulnerable, *t)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.relevance.score != b.relevance.score) {
      return a.relevance.score > b.relevance.score;
    }
    return a.dataset_id < b.dataset_id;
  });
  return out;
}

}  // namespace joinrisk

#endif  // JOINRISK_VULNERABILITY_HPP_
