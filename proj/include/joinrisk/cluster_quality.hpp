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

// Internal clustering validity indices over a labeled 2-D point set. Noise
// points are excluded from every score.

#ifndef JOINRISK_CLUSTER_QUALITY_HPP_
#define JOINRISK_CLUSTER_QUALITY_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "joinrisk/dbscan.hpp"
#include "joinrisk/error.hpp"
#include "joinrisk/tsne.hpp"

namespace joinrisk {

struct ClusteringQuality {
  double calinski_harabasz = 0.0;
  double silhouette = 0.0;
  double davies_bouldin = 0.0;
};

namespace internal {

struct ClusterStats {
  std::vector<std::vector<std::size_t>> members;
  std::vector<Point2> centroids;
  Point2 overall;
  std::size_t m = 0;
};

inline ClusterStats Summarize(const std::vector<Point2>& points,
                              const Labeling& labels) {
  if (points.size() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument, "points/labels size mismatch");
  }
  ClusterStats s;
  const int k = ClusterCount(labels);
  s.members.resize(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kNoise) s.members[static_cast<std::size_t>(labels[i])].push_back(i);
  }
  std::erase_if(s.members, [](const auto& m) { return m.empty(); });
  if (s.members.size() < 2) {
    throw Error(ErrorCode::kInsufficientClusters,
                "need at least 2 non-noise clusters, got " +
                    std::to_string(s.members.size()));
  }
  for (const auto& cluster : s.members) {
    Point2 c;
    for (std::size_t i : cluster) {
      c.x += points[i].x;
      c.y += points[i].y;
      s.overall.x += points[i].x;
      s.overall.y += points[i].y;
    }
    c.x /= static_cast<double>(cluster.size());
    c.y /= static_cast<double>(cluster.size());
    s.centroids.push_back(c);
    s.m += cluster.size();
  }
  s.overall.x /= static_cast<double>(s.m);
  s.overall.y /= static_cast<double>(s.m);
  return s;
}

inline double SquaredDistance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace internal

// [tr(B) / (k - 1)] / [tr(W) / (m - k)]. Zero within-cluster dispersion with
// distinct centroids scores +infinity.
inline double CalinskiHarabasz(const std::vector<Point2>& points,
                               const Labeling& labels) {
  const auto s = internal::Summarize(points, labels);
  const double k = static_cast<double>(s.members.size());
  const double m = static_cast<double>(s.m);
  double between = 0.0;
  double within = 0.0;
  for (std::size_t c = 0; c < s.members.size(); ++c) {
    between += static_cast<double>(s.members[c].size()) *
               internal::SquaredDistance(s.centroids[c], s.overall);
    for (std::size_t i : s.members[c]) {
      within += internal::SquaredDistance(points[i], s.centroids[c]);
    }
  }
  if (within == 0.0) {
    return between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return (between / (k - 1.0)) / (within / (m - k));
}

// Mean of (b - a) / max(a, b); members of singleton clusters score 0.
inline double Silhouette(const std::vector<Point2>& points, const Labeling& labels) {
  const auto s = internal::Summarize(points, labels);
  double total = 0.0;
  for (std::size_t c = 0; c < s.members.size(); ++c) {
    for (std::size_t i : s.members[c]) {
      if (s.members[c].size() == 1) continue;
      double a = 0.0;
      for (std::size_t j : s.members[c]) {
        if (j != i) a += Distance(points[i], points[j]);
      }
      a /= static_cast<double>(s.members[c].size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t o = 0; o < s.members.size(); ++o) {
        if (o == c) continue;
        double mean = 0.0;
        for (std::size_t j : s.members[o]) mean += Distance(points[i], points[j]);
        b = std::min(b, mean / static_cast<double>(s.members[o].size()));
      }
      const double denom = std::max(a, b);
      total += denom == 0.0 ? 0.0 : (b - a) / denom;
    }
  }
  return total / static_cast<double>(s.m);
}

// Mean over clusters of max_{j != i} (s_i + s_j) / d(c_i, c_j), where s is the
// mean member-to-centroid distance. Coincident centroids contribute 0.
inline double DaviesBouldin(const std::vector<Point2>& points,
                            const Labeling& labels) {
  const auto s = internal::Summarize(points, labels);
  const std::size_t k = s.members.size();
  std::vector<double> scatter(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i : s.members[c]) scatter[c] += Distance(points[i], s.centroids[c]);
    scatter[c] /= static_cast<double>(s.members[c].size());
  }
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double d = Distance(s.centroids[i], s.centroids[j]);
      if (d == 0.0) continue;
      worst = std::max(worst, (scatter[i] + scatter[j]) / d);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

inline ClusteringQuality EvaluateClustering(const std::vector<Point2>& points,
                                            const Labeling& labels) {
  return {CalinskiHarabasz(points, labels), Silhouette(points, labels),
          DaviesBouldin(points, labels)};
}

// Resolves the eps setting. An explicit eps runs DBSCAN once; AutoSweep runs
// it for each quantile of the nonzero pairwise distances and keeps the
// labeling with the highest Calinski-Harabasz score (ties: smallest eps).
// Labelings with fewer than two clusters only win when nothing better exists.
struct ResolvedClustering {
  Labeling labels;
  double eps = 0.0;
};

inline ResolvedClustering RunClustering(const std::vector<Point2>& points,
                                        const ClusteringConfig& cfg) {
  if (const double* eps = std::get_if<double>(&cfg.eps)) {
    return {Dbscan(points, *eps, cfg.min_pts), *eps};
  }
  const auto& sweep = std::get<AutoSweep>(cfg.eps);
  std::vector<double> dists;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double d = Distance(points[i], points[j]);
      if (d > 0.0) dists.push_back(d);
    }
  }
  if (dists.empty()) {
    // Every point coincides: any positive eps gives one cluster.
    return {Dbscan(points, 1.0, cfg.min_pts), 1.0};
  }
  std::sort(dists.begin(), dists.end());
  std::vector<double> grid;
  for (double q : sweep.quantiles) {
    // Linear interpolation between order statistics.
    const double pos = q * static_cast<double>(dists.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, dists.size() - 1);
    const double eps = dists[lo] + (dists[hi] - dists[lo]) * (pos - static_cast<double>(lo));
    if (eps > 0.0) grid.push_back(eps);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  ResolvedClustering best;
  double best_score = -std::numeric_limits<double>::infinity();
  bool have = false;
  for (double eps : grid) {
    Labeling labels = Dbscan(points, eps, cfg.min_pts);
    double score = -std::numeric_limits<double>::infinity();
    if (ClusterCount(labels) >= 2) score = CalinskiHarabasz(points, labels);
    if (!have || score > best_score) {
      best = {std::move(labels), eps};
      best_score = score;
      have = true;
    }
  }
  return best;
}

}  // namespace joinrisk

#endif  // JOINRISK_CLUSTER_QUALITY_HPP_
