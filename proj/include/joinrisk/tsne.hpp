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

// Exact t-SNE over a precomputed distance matrix.

#ifndef JOINRISK_TSNE_HPP_
#define JOINRISK_TSNE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stop_token>
#include <vector>

#include "joinrisk/embedding.hpp"
#include "joinrisk/error.hpp"

namespace joinrisk {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

inline double Distance(const Point2& a, const Point2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct ProjectionConfig {
  // Unset means min(30, max(2, (n - 1) / 3)).
  std::optional<double> perplexity;
  int iterations = 1000;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double learning_rate = 200.0;
  std::uint64_t seed = 0;

  double PerplexityFor(std::size_t n) const {
    if (perplexity) return *perplexity;
    return std::min(30.0, std::max(2.0, (static_cast<double>(n) - 1.0) / 3.0));
  }
};

struct Projection {
  std::vector<Point2> points;
  // All input distances were zero; points are the origin.
  bool degenerate = false;
};

namespace internal {

// Row-wise Gaussian affinities with a bandwidth matched to the perplexity
// by bisection on the precision, then symmetrized and normalized.
inline std::vector<double> JointProbabilities(const DistanceMatrix& d,
                                              double perplexity) {
  const std::size_t n = d.size();
  const double target = std::log(perplexity);
  std::vector<double> p(n * n, 0.0);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) dmin = std::min(dmin, d(i, j));
    }
    double beta = 1.0;
    double beta_lo = -std::numeric_limits<double>::infinity();
    double beta_hi = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 200; ++step) {
      double sum = 0.0;
      double weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
          row[j] = 0.0;
          continue;
        }
        const double shifted = d(i, j) - dmin;
        row[j] = std::exp(-beta * shifted);
        sum += row[j];
        weighted += shifted * row[j];
      }
      // H = ln(sum) + beta * E[shifted distance]
      const double entropy = std::log(sum) + beta * weighted / sum;
      for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
      const double diff = entropy - target;
      if (std::abs(diff) < 1e-10) break;
      if (diff > 0) {
        beta_lo = beta;
        beta = std::isinf(beta_hi) ? beta * 2.0 : (beta + beta_hi) / 2.0;
      } else {
        beta_hi = beta;
        beta = std::isinf(beta_lo) ? beta / 2.0 : (beta + beta_lo) / 2.0;
      }
    }
    for (std::size_t j = 0; j < n; ++j) p[i * n + j] = row[j];
  }
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double v = i == j ? 0.0 : std::max((p[i * n + j] + p[j * n + i]) / denom,
                                               1e-12);
      p[i * n + j] = v;
      p[j * n + i] = v;
    }
  }
  return p;
}

}  // namespace internal

// Deterministic for a given seed. Checks `stop` between iterations and
// throws Cancelled when a stop is requested.
inline Projection Project2D(const DistanceMatrix& distances,
                            const ProjectionConfig& cfg = {},
                            std::stop_token stop = {}) {
  const std::size_t n = distances.size();
  if (n < 3) {
    throw Error(ErrorCode::kInvalidArgument, "projection needs at least 3 points");
  }
  const double perplexity = cfg.PerplexityFor(n);
  if (!(perplexity > 0.0) || perplexity >= static_cast<double>(n)) {
    throw Error(ErrorCode::kInvalidArgument,
                "perplexity must be in (0, n); got " + FormatNumber(perplexity));
  }
  if (cfg.iterations < 250) {
    throw Error(ErrorCode::kInvalidArgument, "iterations must be >= 250");
  }
  bool all_zero = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (distances(i, i) != 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "distance diagonal must be zero");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distances(i, j) != distances(j, i) || distances(i, j) < 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "distances must be symmetric and non-negative");
      }
      if (distances(i, j) != 0.0) all_zero = false;
    }
  }
  if (all_zero) return {std::vector<Point2>(n), true};

  const auto p = internal::JointProbabilities(distances, perplexity);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1e-4);
  std::vector<double> y(n * 2);
  for (double& v : y) v = normal(rng);

  std::vector<double> update(n * 2, 0.0);
  std::vector<double> gains(n * 2, 1.0);
  std::vector<double> grad(n * 2);
  std::vector<double> num(n * n);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    if (stop.stop_requested()) {
      throw Error(ErrorCode::kCancelled, "projection cancelled");
    }
    const bool early = iter < cfg.exaggeration_iterations;
    const double exaggeration = early ? cfg.early_exaggeration : 1.0;
    const double momentum = early ? 0.5 : 0.8;

    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num[i * n + i] = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = y[2 * i] - y[2 * j];
        const double dy = y[2 * i + 1] - y[2 * j + 1];
        const double q = 1.0 / (1.0 + dx * dx + dy * dy);
        num[i * n + j] = q;
        num[j * n + i] = q;
        z += 2.0 * q;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0;
      double gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double q = num[i * n + j];
        const double mult = (exaggeration * p[i * n + j] - q / z) * q;
        gx += mult * (y[2 * i] - y[2 * j]);
        gy += mult * (y[2 * i + 1] - y[2 * j + 1]);
      }
      grad[2 * i] = 4.0 * gx;
      grad[2 * i + 1] = 4.0 * gy;
    }
    for (std::size_t k = 0; k < n * 2; ++k) {
      const bool same_sign = (grad[k] > 0.0) == (update[k] > 0.0);
      gains[k] = same_sign ? std::max(gains[k] * 0.8, 0.01) : gains[k] + 0.2;
      update[k] = momentum * update[k] - cfg.learning_rate * gains[k] * grad[k];
      y[k] += update[k];
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += y[2 * i];
      my += y[2 * i + 1];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[2 * i] -= mx;
      y[2 * i + 1] -= my;
    }
  }

  Projection out;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.points.push_back({y[2 * i], y[2 * i + 1]});
  return out;
}

}  // namespace joinrisk

#endif  // JOINRISK_TSNE_HPP_
