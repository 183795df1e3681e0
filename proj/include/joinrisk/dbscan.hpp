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

// DBSCAN over 2-D points with a uniform-grid neighbor index, and an
// eps sweep that keeps the labeling with the best Calinski-Harabasz score.

#ifndef JOINRISK_DBSCAN_HPP_
#define JOINRISK_DBSCAN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "joinrisk/error.hpp"
#include "joinrisk/tsne.hpp"

namespace joinrisk {

inline constexpr int kNoise = -1;

// Cluster id per point; kNoise for noise. Ids are dense, 0-based, numbered
// in order of each cluster's lowest-index core point.
using Labeling = std::vector<int>;

inline int ClusterCount(const Labeling& labels) {
  int k = 0;
  for (int l : labels) k = std::max(k, l + 1);
  return k;
}

struct AutoSweep {
  // Quantiles of the nonzero pairwise 2-D distances.
  std::vector<double> quantiles = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
};

struct ClusteringConfig {
  int min_pts = 2;
  std::variant<double, AutoSweep> eps = AutoSweep{};
};

namespace internal {

class GridIndex {
 public:
  GridIndex(const std::vector<Point2>& points, double cell)
      : points_(points), cell_(cell) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      cells_[Key(points[i])].push_back(i);
    }
  }

  // Indices within eps of point i (inclusive, self included), ascending.
  std::vector<std::size_t> Neighbors(std::size_t i, double eps) const {
    std::vector<std::size_t> out;
    const auto [cx, cy] = Key(points_[i]);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find({cx + dx, cy + dy});
        if (it == cells_.end()) continue;
        for (std::size_t j : it->second) {
          if (Distance(points_[i], points_[j]) <= eps) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::pair<std::int64_t, std::int64_t> Key(const Point2& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
            static_cast<std::int64_t>(std::floor(p.y / cell_))};
  }

  const std::vector<Point2>& points_;
  double cell_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> cells_;
};

}  // namespace internal

// Core point: at least min_pts points (itself included) within eps.
inline Labeling Dbscan(const std::vector<Point2>& points, double eps, int min_pts) {
  if (!(eps > 0.0)) throw Error(ErrorCode::kInvalidArgument, "eps must be > 0");
  if (min_pts < 2) throw Error(ErrorCode::kInvalidArgument, "min_pts must be >= 2");
  const std::size_t n = points.size();
  Labeling labels(n, kNoise);
  if (n == 0) return labels;

  internal::GridIndex index(points, eps);
  std::vector<std::vector<std::size_t>> neighbors(n);
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) {
    neighbors[i] = index.Neighbors(i, eps);
    core[i] = neighbors[i].size() >= static_cast<std::size_t>(min_pts);
  }

  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || labels[i] != kNoise) continue;
    const int id = next++;
    labels[i] = id;
    std::deque<std::size_t> frontier{i};
    while (!frontier.empty()) {
      const std::size_t p = frontier.front();
      frontier.pop_front();
      for (std::size_t q : neighbors[p]) {
        if (labels[q] != kNoise) continue;
        labels[q] = id;
        if (core[q]) frontier.push_back(q);
      }
    }
  }
  return labels;
}

}  // namespace joinrisk

#endif  // JOINRISK_DBSCAN_HPP_
