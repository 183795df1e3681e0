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

#include "joinrisk/cluster_quality.hpp"

#include <cmath>
#include <map>
#include <random>

#include "gtest/gtest.h"

namespace joinrisk {
namespace {

const std::vector<Point2> kFourPoints = {{0, 0}, {0, 1}, {10, 0}, {10, 1}};
const Labeling kTwoClusters = {0, 0, 1, 1};

// Hand values for {(0,0),(0,1)} vs {(10,0),(10,1)}:
//   centroids (0,.5), (10,.5); grand mean (5,.5)
//   tr(B) = 4 * 25 = 100, tr(W) = 4 * .25 = 1  ->  CH = (100/1) / (1/2) = 200
//   a = 1, b = (10 + sqrt(101)) / 2 for every point  ->  s = 1 - 1/b
//   scatter = .5 per cluster, centroid gap 10  ->  DB = (.5 + .5) / 10 = .1
TEST(ClusterQualityTest, HandComputedFixture) {
  const auto q = EvaluateClustering(kFourPoints, kTwoClusters);
  EXPECT_NEAR(q.calinski_harabasz, 200.0, 1e-9);
  const double b = (10.0 + std::sqrt(101.0)) / 2.0;
  EXPECT_NEAR(q.silhouette, 1.0 - 1.0 / b, 1e-9);
  EXPECT_NEAR(q.silhouette, 0.9002487577582194, 1e-9);
  EXPECT_NEAR(q.davies_bouldin, 0.1, 1e-9);
}

TEST(ClusterQualityTest, DoublingSeparationRaisesCh) {
  const std::vector<Point2> far = {{0, 0}, {0, 1}, {20, 0}, {20, 1}};
  const double base = CalinskiHarabasz(kFourPoints, kTwoClusters);
  const double doubled = CalinskiHarabasz(far, kTwoClusters);
  EXPECT_GT(doubled, base);
  EXPECT_NEAR(doubled, 800.0, 1e-9);
}

// Brute-force CH from first principles (sums of squared distances).
double BruteCh(const std::vector<Point2>& pts, const Labeling& labels) {
  std::map<int, std::vector<Point2>> groups;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (labels[i] != kNoise) groups[labels[i]].push_back(pts[i]);
  }
  double gx = 0, gy = 0, m = 0;
  for (auto& [_, g] : groups) {
    for (auto& p : g) {
      gx += p.x;
      gy += p.y;
      ++m;
    }
  }
  gx /= m;
  gy /= m;
  double b = 0, w = 0;
  for (auto& [_, g] : groups) {
    double cx = 0, cy = 0;
    for (auto& p : g) {
      cx += p.x / g.size();
      cy += p.y / g.size();
    }
    b += g.size() * ((cx - gx) * (cx - gx) + (cy - gy) * (cy - gy));
    for (auto& p : g) w += (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy);
  }
  const double k = static_cast<double>(groups.size());
  return (b / (k - 1)) / (w / (m - k));
}

TEST(ClusterQualityTest, DuplicatingPointsFollowsFormula) {
  std::vector<Point2> doubled = kFourPoints;
  doubled.insert(doubled.end(), kFourPoints.begin(), kFourPoints.end());
  Labeling labels = kTwoClusters;
  labels.insert(labels.end(), kTwoClusters.begin(), kTwoClusters.end());
  // tr(B) and tr(W) double, m - k goes from 2 to 6: (200/1)/(2/6) = 600.
  EXPECT_NEAR(CalinskiHarabasz(doubled, labels), 600.0, 1e-9);
  EXPECT_NEAR(CalinskiHarabasz(doubled, labels), BruteCh(doubled, labels), 1e-9);
}

TEST(ClusterQualityTest, MatchesBruteForceOnRandomLabelings) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point2> pts;
    Labeling labels;
    for (int i = 0; i < 40; ++i) {
      pts.push_back({g(rng), g(rng)});
      labels.push_back(i % 7 == 0 ? kNoise : i % 3);
    }
    EXPECT_NEAR(CalinskiHarabasz(pts, labels), BruteCh(pts, labels), 1e-9);
    const double s = Silhouette(pts, labels);
    EXPECT_GE(s, -1.0);
    EXPECT_LE(s, 1.0);
    EXPECT_GE(DaviesBouldin(pts, labels), 0.0);
  }
}

TEST(ClusterQualityTest, SilhouetteApproachesOneWithSeparation) {
  double prev = -1.0;
  for (double gap : {10.0, 100.0, 1000.0, 1e5}) {
    const std::vector<Point2> pts = {{0, 0}, {0, 0.01}, {gap, 0}, {gap, 0.01}};
    const double s = Silhouette(pts, kTwoClusters);
    EXPECT_GT(s, prev);
    prev = s;
  }
  EXPECT_GT(prev, 0.999999);
}

TEST(ClusterQualityTest, NoiseIsExcluded) {
  auto pts = kFourPoints;
  pts.push_back({500, 500});
  Labeling labels = kTwoClusters;
  labels.push_back(kNoise);
  const auto q = EvaluateClustering(pts, labels);
  EXPECT_NEAR(q.calinski_harabasz, 200.0, 1e-9);
  EXPECT_NEAR(q.davies_bouldin, 0.1, 1e-9);
}

TEST(ClusterQualityTest, InsufficientClusters) {
  try {
    EvaluateClustering(kFourPoints, {0, 0, 0, kNoise});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientClusters);
  }
}

TEST(ClusterQualityTest, CoincidentMembersScoreInfiniteCh) {
  const std::vector<Point2> pts = {{0, 0}, {0, 0}, {5, 5}, {5, 5}};
  EXPECT_TRUE(std::isinf(CalinskiHarabasz(pts, kTwoClusters)));
}

TEST(RunClusteringTest, SweepPicksBestChAndSmallestEpsOnTies) {
  std::vector<Point2> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({0.1 * i, 0});
  for (int i = 0; i < 5; ++i) pts.push_back({50 + 0.1 * i, 0});
  const auto r = RunClustering(pts, {});
  EXPECT_EQ(ClusterCount(r.labels), 2);
  // Every eps between the within-blob spacing and the gap gives the same
  // labeling; the smallest such grid value wins.
  for (double eps : {0.1, 0.2, 0.3, 0.4}) {
    if (eps < r.eps) {
      EXPECT_NE(ClusterCount(Dbscan(pts, eps, 2)), 2);
    }
  }
}

TEST(RunClusteringTest, ExplicitEps) {
  const auto r = RunClustering(kFourPoints, {.min_pts = 2, .eps = 1.0});
  EXPECT_EQ(r.labels, kTwoClusters);
  EXPECT_EQ(r.eps, 1.0);
}

}  // namespace
}  // namespace joinrisk
