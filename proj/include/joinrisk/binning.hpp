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

// Four-bin equal-width discretization shared by record points, entropy,
// joins and the parallel-sets histograms, so that a numeric (attribute,
// label) pair means the same thing in every module.

#ifndef JOINRISK_BINNING_HPP_
#define JOINRISK_BINNING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "joinrisk/error.hpp"
#include "joinrisk/util.hpp"

namespace joinrisk {

inline constexpr std::size_t kNumericBinCount = 4;

// Equal-width bins over [lo, hi]: half-open [e_i, e_{i+1}) except the last,
// which is closed. A degenerate range (lo == hi) has a single bin.
class NumericBins {
 public:
  NumericBins(double lo, double hi) : lo_(lo), hi_(hi) {
    if (lo == hi) {
      edges_ = {lo, hi};
    } else {
      const double width = (hi - lo) / static_cast<double>(kNumericBinCount);
      edges_.reserve(kNumericBinCount + 1);
      for (std::size_t i = 0; i < kNumericBinCount; ++i) {
        edges_.push_back(lo + width * static_cast<double>(i));
      }
      edges_.push_back(hi);
    }
    labels_.reserve(edges_.size() - 1);
    for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
      labels_.push_back(FormatNumber(edges_[i]) + "–" +
                        FormatNumber(edges_[i + 1]));
    }
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Values outside [lo, hi] clamp to the first/last bin.
  std::size_t IndexOf(double value) const {
    std::size_t idx = 0;
    for (std::size_t i = 1; i + 1 < edges_.size(); ++i) {
      if (value >= edges_[i]) idx = i;
    }
    return idx;
  }

  const std::string& LabelOf(double value) const {
    return labels_[IndexOf(value)];
  }

 private:
  double lo_;
  double hi_;
  std::vector<double> edges_;
  std::vector<std::string> labels_;
};

// Bins over the union range of both value lists; non-finite values ignored.
inline NumericBins ComputeNumericBins(std::span<const double> values_a,
                                      std::span<const double> values_b = {}) {
  bool any = false;
  double lo = 0.0;
  double hi = 0.0;
  for (auto values : {values_a, values_b}) {
    for (double v : values) {
      if (!std::isfinite(v)) continue;
      if (!any) {
        lo = hi = v;
        any = true;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  if (!any) throw Error(ErrorCode::kNoFiniteValues, "no finite values to bin");
  return NumericBins(lo, hi);
}

}  // namespace joinrisk

#endif  // JOINRISK_BINNING_HPP_
