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

// Shared-attribute entropy, the joinability risk score, pair ranking and
// join-key suggestion.

#ifndef JOINRISK_PAIRRISK_HPP_
#define JOINRISK_PAIRRISK_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "joinrisk/corpus.hpp"
#include "joinrisk/error.hpp"

namespace joinrisk {

inline constexpr double kDefaultAlpha = 50.0;
inline constexpr double kRiskCeiling = 182.0;
inline constexpr double kRiskScaleMax = 5.0;

// Shannon entropy (nats) of a frequency table.
template <typename Counts>
double EntropyFromCounts(const Counts& counts) {
  double total = 0.0;
  for (const auto& [_, c] : counts) total += static_cast<double>(c);
  if (total == 0.0) return 0.0;
  double h = 0.0;
  for (const auto& [_, c] : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log(p);
  }
  return h;
}

// Entropy over a column's categories (numbers via the four-bin labels),
// missing cells excluded.
inline double ColumnEntropy(const Column& column) {
  const CellLabeler label(column);
  std::map<std::string, std::size_t> counts;
  for (const auto& cell : column.cells) {
    if (auto v = label(cell)) ++counts[*v];
  }
  return EntropyFromCounts(counts);
}

struct SharedAttribute {
  std::string name;
  double entropy_a = 0.0;
  double entropy_b = 0.0;
  double entropy = 0.0;  // max(entropy_a, entropy_b)
  bool is_privacy = false;
};

// Attributes present in both tables, highest entropy first (ties by name).
inline std::vector<SharedAttribute> SharedAttributes(
    const DatasetTable& a, const DatasetTable& b,
    const PrivacyDictionary& dictionary) {
  std::vector<SharedAttribute> out;
  for (const auto& ca : a.columns) {
    const Column* cb = b.FindColumn(ca.name);
    if (cb == nullptr) continue;
    SharedAttribute s;
    s.name = ca.name;
    s.entropy_a = ColumnEntropy(ca);
    s.entropy_b = ColumnEntropy(*cb);
    s.entropy = std::max(s.entropy_a, s.entropy_b);
    s.is_privacy = dictionary.Contains(ca.name);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.entropy != y.entropy) return x.entropy > y.entropy;
    return x.name < y.name;
  });
  return out;
}

// alpha * p + (c - p)
inline double RiskScore(std::size_t p, std::size_t c, double alpha = kDefaultAlpha) {
  if (p > c) {
    throw Error(ErrorCode::kInvalidCounts,
                "privacy count " + std::to_string(p) + " exceeds shared count " +
                    std::to_string(c));
  }
  return alpha * static_cast<double>(p) + static_cast<double>(c - p);
}

// Maps [0, ceiling] onto [0, 5]; anything above the ceiling saturates.
inline double NormalizeRisk(double risk, double ceiling = kRiskCeiling) {
  return std::min(std::max(risk, 0.0), ceiling) / ceiling * kRiskScaleMax;
}

struct PairRiskOptions {
  double alpha = kDefaultAlpha;
  double risk_ceiling = kRiskCeiling;
  std::size_t key_min_size = 2;
};

struct PairRisk {
  std::string dataset_a;
  std::string dataset_b;
  std::vector<SharedAttribute> shared;
  std::size_t p = 0;
  std::size_t c = 0;
  double alpha = kDefaultAlpha;
  double risk = 0.0;
  double normalized_risk = 0.0;
  double mean_entropy = 0.0;
  std::vector<std::string> suggested_key;
};

// All shared privacy attributes in dictionary order; when there are fewer
// than `min_size`, the highest-entropy non-privacy attributes fill the key up
// to min(min_size, c).
inline std::vector<std::string> SuggestJoinKey(
    const std::vector<SharedAttribute>& shared,
    const PrivacyDictionary& dictionary, std::size_t min_size = 2) {
  if (shared.empty()) {
    throw Error(ErrorCode::kNoSharedAttributes, "pair shares no attributes");
  }
  std::vector<const SharedAttribute*> privacy;
  std::vector<const SharedAttribute*> rest;
  for (const auto& s : shared) (s.is_privacy ? privacy : rest).push_back(&s);
  std::stable_sort(privacy.begin(), privacy.end(), [&](auto* x, auto* y) {
    return dictionary.IndexOf(x->name) < dictionary.IndexOf(y->name);
  });
  std::stable_sort(rest.begin(), rest.end(), [](auto* x, auto* y) {
    if (x->entropy != y->entropy) return x->entropy > y->entropy;
    return x->name < y->name;
  });
  std::vector<std::string> key;
  for (const auto* s : privacy) key.push_back(s->name);
  const std::size_t target = std::min(min_size, shared.size());
  for (const auto* s : rest) {
    if (key.size() >= target) break;
    key.push_back(s->name);
  }
  return key;
}

inline PairRisk ScorePair(const DatasetTable& a, const DatasetTable& b,
                          const PrivacyDictionary& dictionary,
                          const PairRiskOptions& options = {}) {
  PairRisk r;
  r.dataset_a = a.meta.id;
  r.dataset_b = b.meta.id;
  r.shared = SharedAttributes(a, b, dictionary);
  r.c = r.shared.size();
  for (const auto& s : r.shared) {
    if (s.is_privacy) ++r.p;
    r.mean_entropy += s.entropy;
  }
  if (r.c > 0) r.mean_entropy /= static_cast<double>(r.c);
  r.alpha = options.alpha;
  r.risk = RiskScore(r.p, r.c, options.alpha);
  r.normalized_risk = NormalizeRisk(r.risk, options.risk_ceiling);
  if (!r.shared.empty()) {
    r.suggested_key = SuggestJoinKey(r.shared, dictionary, options.key_min_size);
  }
  return r;
}

// Risk desc, then mean shared-attribute entropy desc, then ids asc.
inline bool PairOutranks(const PairRisk& x, const PairRisk& y) {
  if (x.risk != y.risk) return x.risk > y.risk;
  if (x.mean_entropy != y.mean_entropy) return x.mean_entropy > y.mean_entropy;
  if (x.dataset_a != y.dataset_a) return x.dataset_a < y.dataset_a;
  return x.dataset_b < y.dataset_b;
}

// Every unordered pair of candidates, ranked. Within a pair, dataset_a is the
// one listed first in `candidates`.
inline std::vector<PairRisk> RankPairs(
    const std::vector<const DatasetTable*>& candidates,
    const PrivacyDictionary& dictionary, const PairRiskOptions& options = {}) {
  if (candidates.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two datasets");
  }
  std::vector<PairRisk> out;
  out.reserve(candidates.size() * (candidates.size() - 1) / 2);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      out.push_back(ScorePair(*candidates[i], *candidates[j], dictionary, options));
    }
  }
  std::sort(out.begin(), out.end(), PairOutranks);
  return out;
}

// One step of the alpha experiment: how well privacy-sharing pairs (p >= 1)
// separate from the rest (p == 0) under a given alpha.
struct AlphaSweepPoint {
  double alpha = 0.0;
  std::size_t privacy_pairs = 0;
  std::size_t other_pairs = 0;
  // Fraction of (privacy, other) combinations where the privacy pair
  // scores strictly higher. 1.0 when either side is empty.
  double separation = 1.0;
  double min_privacy_risk = 0.0;
  double max_other_risk = 0.0;
  bool separated = true;
};

struct PairCounts {
  std::size_t p = 0;
  std::size_t c = 0;
};

inline std::vector<AlphaSweepPoint> AlphaSweep(const std::vector<PairCounts>& pairs,
                                               double from, double to,
                                               double step = 1.0) {
  if (!(step > 0.0) || to < from) {
    throw Error(ErrorCode::kInvalidArgument, "invalid alpha range");
  }
  std::vector<AlphaSweepPoint> out;
  const auto steps = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9));
  for (std::size_t s = 0; s <= steps; ++s) {
    const double alpha = from + step * static_cast<double>(s);
    std::vector<double> privacy;
    std::vector<double> other;
    for (const auto& pc : pairs) {
      (pc.p > 0 ? privacy : other).push_back(RiskScore(pc.p, pc.c, alpha));
    }
    AlphaSweepPoint pt;
    pt.alpha = alpha;
    pt.privacy_pairs = privacy.size();
    pt.other_pairs = other.size();
    if (!privacy.empty() && !other.empty()) {
      std::sort(other.begin(), other.end());
      std::size_t wins = 0;
      for (double r : privacy) {
        wins += static_cast<std::size_t>(
            std::lower_bound(other.begin(), other.end(), r) - other.begin());
      }
      pt.separation = static_cast<double>(wins) /
                      (static_cast<double>(privacy.size()) * static_cast<double>(other.size()));
      pt.min_privacy_risk = *std::min_element(privacy.begin(), privacy.end());
      pt.max_other_risk = other.back();
      pt.separated = pt.min_privacy_risk > pt.max_other_risk;
    } else {
      if (!privacy.empty()) pt.min_privacy_risk = *std::min_element(privacy.begin(), privacy.end());
      if (!other.empty()) pt.max_other_risk = *std::max_element(other.begin(), other.end());
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace joinrisk

#endif  // JOINRISK_PAIRRISK_HPP_
