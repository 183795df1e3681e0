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

// End-to-end audit: group the corpus, rank every pair by joinability risk,
// then join the top pairs on their suggested key and on all shared
// attributes.

#ifndef JOINRISK_AUDIT_HPP_
#define JOINRISK_AUDIT_HPP_

#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "joinrisk/disclosure.hpp"
#include "joinrisk/grouping.hpp"
#include "joinrisk/pairrisk.hpp"
#include "joinrisk/serialize.hpp"

namespace joinrisk {

struct AuditOptions {
  std::size_t top_pairs = 10;
  PairRiskOptions pair;
  GroupingConfig grouping;
  JoinOptions join;
  NmiNormalization nmi = NmiNormalization::kSqrt;
};

struct JoinSummary {
  std::vector<std::string> key;
  std::size_t match_count = 0;
  std::size_t distinct_key_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> rows;  // (row_a, row_b)
};

struct AuditEntry {
  std::size_t rank = 0;
  PairRisk pair;
  std::optional<int> shared_group;  // both datasets in this group
  std::optional<JoinSummary> suggested_join;
  std::optional<JoinSummary> full_join;
  std::optional<FeatureSuggestions> suggestions;
};

struct AuditReport {
  std::optional<GroupingResult> grouping;
  std::size_t pair_count = 0;
  std::vector<AuditEntry> entries;
};

inline JoinSummary Summarize(const JoinOutcome& o) {
  JoinSummary s;
  s.key = o.key.attributes;
  s.match_count = o.match_count;
  s.distinct_key_count = o.distinct_key_count;
  for (const auto& m : o.matches) s.rows.emplace_back(m.row_index_a, m.row_index_b);
  return s;
}

inline std::optional<int> SharedGroup(const GroupingResult& g, const std::string& a,
                                      const std::string& b) {
  for (const auto& group : g.groups) {
    const auto has = [&](const std::string& id) {
      return std::find(group.members.begin(), group.members.end(), id) != group.members.end();
    };
    if (has(a) && has(b)) return group.group_id;
  }
  return std::nullopt;
}

inline AuditReport RunAudit(const Corpus& corpus, const PrivacyDictionary& dictionary,
                            const EmbeddingProvider& provider, const AuditOptions& options = {},
                            std::stop_token stop = {}) {
  std::vector<const DatasetTable*> tables;
  for (const auto& t : corpus.tables()) tables.push_back(&t);
  if (tables.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "audit needs at least two datasets");
  }
  AuditReport report;
  if (tables.size() >= 3) {
    std::vector<const DatasetMeta*> metas;
    for (const auto* t : tables) metas.push_back(&t->meta);
    report.grouping = BuildGroups(metas, dictionary, provider, options.grouping, stop);
  }
  auto pairs = RankPairs(tables, dictionary, options.pair);
  report.pair_count = pairs.size();
  const std::size_t n = std::min(options.top_pairs, pairs.size());
  for (std::size_t i = 0; i < n; ++i) {
    AuditEntry e;
    e.rank = i + 1;
    e.pair = std::move(pairs[i]);
    if (report.grouping) {
      e.shared_group = SharedGroup(*report.grouping, e.pair.dataset_a, e.pair.dataset_b);
    }
    if (!e.pair.suggested_key.empty()) {
      const auto& a = corpus.Get(e.pair.dataset_a);
      const auto& b = corpus.Get(e.pair.dataset_b);
      const auto suggested = Join(a, b, {e.pair.suggested_key}, options.join, stop);
      e.suggested_join = Summarize(suggested);
      if (suggested.match_count >= 2) {
        e.suggestions = SuggestFeatures(suggested, a, b, options.nmi);
      }
      JoinKey full;
      for (const auto& s : e.pair.shared) full.attributes.push_back(s.name);
      e.full_join = Summarize(Join(a, b, full, options.join, stop));
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

inline void to_json(Json& j, const JoinSummary& s) {
  Json rows = Json::array();
  for (const auto& [a, b] : s.rows) rows.push_back(Json::array({a, b}));
  j = Json{{"key", s.key},
           {"match_count", s.match_count},
           {"distinct_key_count", s.distinct_key_count},
           {"rows", std::move(rows)}};
}

inline void to_json(Json& j, const AuditReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json x = PairToJson(e.pair);
    x["rank"] = e.rank;
    x["shared_group"] = e.shared_group ? Json(*e.shared_group) : Json(nullptr);
    x["suggested_join"] = e.suggested_join ? Json(*e.suggested_join) : Json(nullptr);
    x["full_join"] = e.full_join ? Json(*e.full_join) : Json(nullptr);
    x["suggestions"] = e.suggestions ? Json(*e.suggestions) : Json(nullptr);
    entries.push_back(std::move(x));
  }
  j = Json{{"grouping", r.grouping ? Json(*r.grouping) : Json(nullptr)},
           {"pair_count", r.pair_count},
           {"top_pairs", std::move(entries)}};
}

}  // namespace joinrisk

#endif  // JOINRISK_AUDIT_HPP_
