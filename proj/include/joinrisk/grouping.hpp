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

// Joinable groups: vectorize schemas for each weight candidate, project with
// t-SNE, cluster with DBSCAN, keep the candidate with the best
// Calinski-Harabasz score and summarize each group's attributes.

#ifndef JOINRISK_GROUPING_HPP_
#define JOINRISK_GROUPING_HPP_

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "joinrisk/cluster_quality.hpp"
#include "joinrisk/corpus.hpp"
#include "joinrisk/dbscan.hpp"
#include "joinrisk/embedding.hpp"
#include "joinrisk/error.hpp"
#include "joinrisk/tsne.hpp"

namespace joinrisk {

inline constexpr double kOverlapTolerance = 1e-6;

struct GroupingConfig {
  std::vector<double> weight_candidates = DefaultWeightCandidates();
  ProjectionConfig projection;
  ClusteringConfig clustering;
};

struct AttributeCount {
  std::string attribute;
  std::size_t count = 0;
  bool is_privacy = false;

  bool operator==(const AttributeCount&) const = default;
};

// Coincident points drawn as one dot with a multiplicity count.
struct Marker {
  Point2 position;
  std::vector<std::string> members;
};

struct JoinableGroup {
  int group_id = 0;
  std::vector<std::string> members;
  std::vector<Point2> coords;  // parallel to members
  // Attributes present in at least two members (word cloud).
  std::vector<AttributeCount> attribute_frequencies;
  // Dictionary attributes present in at least one member.
  std::vector<AttributeCount> privacy_frequencies;
  // Bar-chart order: privacy attributes first, then the word-cloud terms.
  std::vector<AttributeCount> frequency_bars;
  std::vector<Marker> markers;
  std::size_t privacy_coverage = 0;
  std::optional<ClusteringQuality> quality;
  std::size_t rank = 0;  // 1 = most vulnerable
};

struct CandidateOutcome {
  double weight = 0.0;
  int cluster_count = 0;
  double eps = 0.0;
  std::optional<ClusteringQuality> quality;
};

struct GroupingResult {
  double weight_chosen = 0.0;
  std::optional<ClusteringQuality> quality;
  std::vector<CandidateOutcome> candidates;
  std::vector<JoinableGroup> groups;  // in rank order
  std::vector<std::string> noise;
  std::vector<std::string> dataset_ids;  // projection order
  std::vector<Point2> coords;            // parallel to dataset_ids
  std::uint64_t dictionary_version = 0;
};

// Greedy merge in input order: a point joins the first marker within
// kOverlapTolerance of that marker's anchor.
inline std::vector<Marker> MergeOverlapping(const std::vector<std::string>& ids,
                                            const std::vector<Point2>& coords) {
  std::vector<Marker> markers;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto it = std::find_if(markers.begin(), markers.end(), [&](const Marker& m) {
      return Distance(m.position, coords[i]) < kOverlapTolerance;
    });
    if (it == markers.end()) {
      markers.push_back({coords[i], {ids[i]}});
    } else {
      it->members.push_back(ids[i]);
    }
  }
  return markers;
}

// Fills the frequency fields of a group from its members' schemas.
inline void SummarizeAttributes(JoinableGroup& group,
                                const std::vector<const DatasetMeta*>& members,
                                const PrivacyDictionary& dictionary) {
  std::map<std::string, std::size_t> counts;
  for (const auto* meta : members) {
    const auto attrs = NormalizedAttributes(*meta);
    for (const auto& a : std::set<std::string>(attrs.begin(), attrs.end())) ++counts[a];
  }
  group.attribute_frequencies.clear();
  group.privacy_frequencies.clear();
  group.privacy_coverage = 0;
  for (const auto& [attr, n] : counts) {
    const bool privacy = dictionary.Contains(attr);
    if (n >= 2) group.attribute_frequencies.push_back({attr, n, privacy});
    if (privacy) {
      group.privacy_frequencies.push_back({attr, n, true});
      if (2 * n >= members.size()) ++group.privacy_coverage;
    }
  }
  std::stable_sort(group.attribute_frequencies.begin(), group.attribute_frequencies.end(),
                   [](const auto& x, const auto& y) { return x.count > y.count; });
  std::stable_sort(group.privacy_frequencies.begin(), group.privacy_frequencies.end(),
                   [&](const auto& x, const auto& y) {
                     if (x.count != y.count) return x.count > y.count;
                     return dictionary.IndexOf(x.attribute) < dictionary.IndexOf(y.attribute);
                   });
  group.frequency_bars = group.privacy_frequencies;
  for (const auto& f : group.attribute_frequencies) {
    if (!f.is_privacy) group.frequency_bars.push_back(f);
  }
}

// Privacy coverage desc, then size desc, then group id asc. Ranks are 1-based.
inline void RankGroups(std::vector<JoinableGroup>& groups) {
  std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) {
    if (x.privacy_coverage != y.privacy_coverage) {
      return x.privacy_coverage > y.privacy_coverage;
    }
    if (x.members.size() != y.members.size()) return x.members.size() > y.members.size();
    return x.group_id < y.group_id;
  });
  for (std::size_t i = 0; i < groups.size(); ++i) groups[i].rank = i + 1;
}

struct CandidateRun {
  CandidateOutcome outcome;
  Projection projection;
  Labeling labels;
};

inline CandidateRun RunCandidate(const std::vector<const DatasetMeta*>& metas,
                                 const EmbeddingProvider& provider,
                                 const PrivacyDictionary& dictionary, double weight,
                                 const GroupingConfig& cfg, std::stop_token stop) {
  std::vector<DatasetVector> vectors;
  vectors.reserve(metas.size());
  for (const auto* m : metas) {
    vectors.push_back(MakeDatasetVector(*m, provider, weight, dictionary));
  }
  CandidateRun run;
  run.outcome.weight = weight;
  run.projection = Project2D(PairwiseDistances(vectors), cfg.projection, stop);
  auto resolved = RunClustering(run.projection.points, cfg.clustering);
  run.labels = std::move(resolved.labels);
  run.outcome.eps = resolved.eps;
  run.outcome.cluster_count = ClusterCount(run.labels);
  if (run.outcome.cluster_count >= 2) {
    run.outcome.quality = EvaluateClustering(run.projection.points, run.labels);
  }
  return run;
}

inline GroupingResult BuildGroups(const std::vector<const DatasetMeta*>& metas,
                                  const PrivacyDictionary& dictionary,
                                  const EmbeddingProvider& provider,
                                  const GroupingConfig& cfg = {},
                                  std::stop_token stop = {}) {
  if (metas.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "grouping needs at least 3 datasets");
  }
  if (cfg.weight_candidates.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no weight candidates");
  }
  std::vector<CandidateRun> runs;
  for (double w : cfg.weight_candidates) {
    if (w < 0.0) throw Error(ErrorCode::kInvalidArgument, "weights must be >= 0");
    runs.push_back(RunCandidate(metas, provider, dictionary, w, cfg, stop));
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& q = runs[i].outcome.quality;
    if (!q) continue;
    if (!best || q->calinski_harabasz > runs[*best].outcome.quality->calinski_harabasz) {
      best = i;
    }
  }

  GroupingResult result;
  result.dictionary_version = dictionary.version();
  for (const auto& r : runs) result.candidates.push_back(r.outcome);
  for (const auto* m : metas) result.dataset_ids.push_back(m->id);

  const CandidateRun& chosen = runs[best.value_or(0)];
  result.weight_chosen = chosen.outcome.weight;
  result.coords = chosen.projection.points;

  std::vector<std::vector<std::size_t>> clusters;
  if (best) {
    result.quality = chosen.outcome.quality;
    clusters.resize(static_cast<std::size_t>(chosen.outcome.cluster_count));
    for (std::size_t i = 0; i < metas.size(); ++i) {
      if (chosen.labels[i] == kNoise) {
        result.noise.push_back(metas[i]->id);
      } else {
        clusters[static_cast<std::size_t>(chosen.labels[i])].push_back(i);
      }
    }
  } else {
    clusters.emplace_back();
    for (std::size_t i = 0; i < metas.size(); ++i) clusters.back().push_back(i);
  }

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    JoinableGroup g;
    g.group_id = static_cast<int>(c);
    std::vector<const DatasetMeta*> members;
    for (std::size_t i : clusters[c]) {
      g.members.push_back(metas[i]->id);
      g.coords.push_back(result.coords[i]);
      members.push_back(metas[i]);
    }
    SummarizeAttributes(g, members, dictionary);
    g.markers = MergeOverlapping(g.members, g.coords);
    g.quality = result.quality;
    result.groups.push_back(std::move(g));
  }
  RankGroups(result.groups);
  return result;
}

inline GroupingResult BuildGroups(const std::vector<DatasetMeta>& corpus,
                                  const PrivacyDictionary& dictionary,
                                  const EmbeddingProvider& provider,
                                  const GroupingConfig& cfg = {},
                                  std::stop_token stop = {}) {
  std::vector<const DatasetMeta*> metas;
  for (const auto& m : corpus) metas.push_back(&m);
  return BuildGroups(metas, dictionary, provider, cfg, stop);
}

}  // namespace joinrisk

#endif  // JOINRISK_GROUPING_HPP_
