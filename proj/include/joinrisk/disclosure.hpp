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

// Equi-join of a dataset pair on a key, the parallel-sets model of the
// matching records, and normalized-mutual-information feature suggestions.

#ifndef JOINRISK_DISCLOSURE_HPP_
#define JOINRISK_DISCLOSURE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stop_token>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "joinrisk/binning.hpp"
#include "joinrisk/corpus.hpp"
#include "joinrisk/error.hpp"
#include "joinrisk/pairrisk.hpp"
#include "joinrisk/util.hpp"

namespace joinrisk {

inline constexpr std::size_t kMaxSuggestions = 5;
inline constexpr std::string_view kMissingLabel = "(missing)";

struct JoinKey {
  std::vector<std::string> attributes;
};

// How numeric key columns are compared: by shared four-bin label, or by the
// exact number (for id-like columns).
enum class NumericJoinMode { kBinned, kRaw };

enum class NmiNormalization { kSqrt, kMin, kMax, kArithmetic };

inline std::string_view NmiNormalizationName(NmiNormalization m) {
  switch (m) {
    case NmiNormalization::kSqrt: return "sqrt";
    case NmiNormalization::kMin: return "min";
    case NmiNormalization::kMax: return "max";
    case NmiNormalization::kArithmetic: return "arithmetic";
  }
  return "sqrt";
}

inline NmiNormalization ParseNmiNormalization(std::string_view name) {
  if (name == "sqrt") return NmiNormalization::kSqrt;
  if (name == "min") return NmiNormalization::kMin;
  if (name == "max") return NmiNormalization::kMax;
  if (name == "arithmetic" || name == "arithmetic-mean") return NmiNormalization::kArithmetic;
  throw Error(ErrorCode::kInvalidArgument, "unknown NMI mode '" + std::string(name) + "'");
}

struct JoinOptions {
  NumericJoinMode numeric_mode = NumericJoinMode::kBinned;
};

struct MatchedRecord {
  std::vector<std::string> key_values;
  std::size_t row_index_a = 0;
  std::size_t row_index_b = 0;
};

struct StackEntry {
  std::string category;
  std::size_t count = 0;
};

struct Stack {
  std::string attribute;
  bool numeric = false;
  std::vector<StackEntry> entries;  // count desc, then category
};

struct Ribbon {
  std::string from_category;
  std::string to_category;
  std::size_t count = 0;
  std::vector<std::size_t> match_indices;
};

// Ribbons between key attributes `from` and `from + 1`.
struct RibbonSet {
  std::string from_attribute;
  std::string to_attribute;
  std::vector<Ribbon> ribbons;  // count desc, then categories
};

struct JoinOutcome {
  std::string dataset_a;
  std::string dataset_b;
  JoinKey key;
  std::vector<MatchedRecord> matches;  // row_index_a asc, then row_index_b asc
  std::size_t match_count = 0;
  std::size_t distinct_key_count = 0;
  std::vector<Stack> stacks;
  std::vector<RibbonSet> ribbons;
};

namespace internal {

using Labeler = std::function<std::optional<std::string>(const Cell&)>;

inline std::pair<Labeler, Labeler> KeyLabelers(const Column& a, const Column& b,
                                               NumericJoinMode mode) {
  auto text_or_number = [](const Cell& c) -> std::optional<std::string> {
    if (const auto* s = std::get_if<std::string>(&c)) return NormalizeValue(*s);
    if (const auto* d = std::get_if<double>(&c)) return FormatNumber(*d);
    return std::nullopt;
  };
  if (mode == NumericJoinMode::kBinned && a.kind == ColumnKind::kNumeric &&
      b.kind == ColumnKind::kNumeric) {
    const auto va = a.NumericValues();
    const auto vb = b.NumericValues();
    if (!va.empty() || !vb.empty()) {
      auto bins = std::make_shared<NumericBins>(ComputeNumericBins(va, vb));
      Labeler binned = [bins, text_or_number](const Cell& c) -> std::optional<std::string> {
        if (const auto* d = std::get_if<double>(&c)) return bins->LabelOf(*d);
        return text_or_number(c);
      };
      return {binned, binned};
    }
  }
  return {text_or_number, text_or_number};
}

struct KeyTupleHash {
  std::size_t operator()(const std::vector<std::string>& key) const {
    std::uint64_t h = 0;
    for (const auto& k : key) h = Hash64(k, h);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace internal

inline void ValidateJoinKey(const DatasetTable& a, const DatasetTable& b,
                            const JoinKey& key) {
  if (key.attributes.empty()) throw Error(ErrorCode::kEmptyKey, "join key is empty");
  std::set<std::string> seen;
  for (const auto& raw : key.attributes) {
    const std::string name = NormalizeAttribute(raw);
    if (!seen.insert(name).second) {
      throw Error(ErrorCode::kInvalidKey, "attribute '" + name + "' repeated in key");
    }
    if (a.FindColumn(name) == nullptr) {
      throw Error(ErrorCode::kInvalidKey,
                  "attribute '" + name + "' not in dataset '" + a.meta.id + "'");
    }
    if (b.FindColumn(name) == nullptr) {
      throw Error(ErrorCode::kInvalidKey,
                  "attribute '" + name + "' not in dataset '" + b.meta.id + "'");
    }
  }
}

// Inner equi-join. Rows with a missing value in any key attribute take no
// part. Every duplicate combination is kept.
inline JoinOutcome Join(const DatasetTable& a, const DatasetTable& b,
                        const JoinKey& key, const JoinOptions& options = {},
                        std::stop_token stop = {}) {
  ValidateJoinKey(a, b, key);
  JoinOutcome out;
  out.dataset_a = a.meta.id;
  out.dataset_b = b.meta.id;
  for (const auto& raw : key.attributes) out.key.attributes.push_back(NormalizeAttribute(raw));

  const std::size_t width = out.key.attributes.size();
  std::vector<const Column*> cols_a;
  std::vector<const Column*> cols_b;
  std::vector<internal::Labeler> label_a;
  std::vector<internal::Labeler> label_b;
  for (const auto& name : out.key.attributes) {
    cols_a.push_back(a.FindColumn(name));
    cols_b.push_back(b.FindColumn(name));
    auto [la, lb] = internal::KeyLabelers(*cols_a.back(), *cols_b.back(),
                                          options.numeric_mode);
    label_a.push_back(std::move(la));
    label_b.push_back(std::move(lb));
  }

  auto tuple_of = [width](const std::vector<const Column*>& cols,
                          const std::vector<internal::Labeler>& labels,
                          std::size_t row) -> std::optional<std::vector<std::string>> {
    std::vector<std::string> t;
    t.reserve(width);
    for (std::size_t k = 0; k < width; ++k) {
      auto v = labels[k](cols[k]->cells[row]);
      if (!v) return std::nullopt;
      t.push_back(std::move(*v));
    }
    return t;
  };

  std::unordered_map<std::vector<std::string>, std::vector<std::size_t>,
                     internal::KeyTupleHash>
      buckets;
  for (std::size_t r = 0; r < b.row_count(); ++r) {
    if (auto t = tuple_of(cols_b, label_b, r)) buckets[std::move(*t)].push_back(r);
  }

  std::set<std::vector<std::string>> distinct;
  for (std::size_t r = 0; r < a.row_count(); ++r) {
    if ((r & 0xff) == 0 && stop.stop_requested()) {
      throw Error(ErrorCode::kCancelled, "join cancelled");
    }
    auto t = tuple_of(cols_a, label_a, r);
    if (!t) continue;
    auto it = buckets.find(*t);
    if (it == buckets.end()) continue;
    distinct.insert(*t);
    for (std::size_t rb : it->second) out.matches.push_back({*t, r, rb});
  }
  out.match_count = out.matches.size();
  out.distinct_key_count = distinct.size();

  for (std::size_t k = 0; k < width; ++k) {
    Stack stack;
    stack.attribute = out.key.attributes[k];
    stack.numeric = cols_a[k]->kind == ColumnKind::kNumeric &&
                    cols_b[k]->kind == ColumnKind::kNumeric;
    std::map<std::string, std::size_t> counts;
    for (const auto& m : out.matches) ++counts[m.key_values[k]];
    for (auto& [cat, n] : counts) stack.entries.push_back({cat, n});
    std::stable_sort(stack.entries.begin(), stack.entries.end(),
                     [](const auto& x, const auto& y) { return x.count > y.count; });
    out.stacks.push_back(std::move(stack));
  }
  for (std::size_t k = 0; k + 1 < width; ++k) {
    RibbonSet set;
    set.from_attribute = out.key.attributes[k];
    set.to_attribute = out.key.attributes[k + 1];
    std::map<std::pair<std::string, std::string>, Ribbon> by_pair;
    for (std::size_t i = 0; i < out.matches.size(); ++i) {
      const auto& kv = out.matches[i].key_values;
      auto& ribbon = by_pair[{kv[k], kv[k + 1]}];
      ribbon.from_category = kv[k];
      ribbon.to_category = kv[k + 1];
      ++ribbon.count;
      ribbon.match_indices.push_back(i);
    }
    for (auto& [_, ribbon] : by_pair) set.ribbons.push_back(std::move(ribbon));
    std::stable_sort(set.ribbons.begin(), set.ribbons.end(),
                     [](const auto& x, const auto& y) { return x.count > y.count; });
    out.ribbons.push_back(std::move(set));
  }
  return out;
}

// Both source rows of one match, as column -> text.
struct MatchDetail {
  std::size_t index = 0;
  MatchedRecord match;
  std::vector<std::pair<std::string, std::string>> row_a;
  std::vector<std::pair<std::string, std::string>> row_b;
};

inline MatchDetail GetMatchDetail(const JoinOutcome& outcome, const DatasetTable& a,
                                  const DatasetTable& b, std::size_t index) {
  if (index >= outcome.matches.size()) {
    throw Error(ErrorCode::kNotFound, "match index " + std::to_string(index) +
                                          " out of range (" +
                                          std::to_string(outcome.matches.size()) + ")");
  }
  MatchDetail d;
  d.index = index;
  d.match = outcome.matches[index];
  for (const auto& c : a.columns) d.row_a.emplace_back(c.name, CellText(c.cells[d.match.row_index_a]));
  for (const auto& c : b.columns) d.row_b.emplace_back(c.name, CellText(c.cells[d.match.row_index_b]));
  return d;
}

// ---------------------------------------------------------------------------
// Mutual information
// ---------------------------------------------------------------------------

// I(X;Y) / norm(H(X), H(Y)) over paired discrete observations; 0 when either
// variable is constant.
inline double NormalizedMutualInformation(
    const std::vector<std::string>& x, const std::vector<std::string>& y,
    NmiNormalization mode = NmiNormalization::kSqrt) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kInvalidArgument, "NMI inputs differ in length");
  }
  if (x.size() < 2) {
    throw Error(ErrorCode::kTooFewMatches, "NMI needs at least 2 observations");
  }
  std::map<std::string, std::size_t> cx;
  std::map<std::string, std::size_t> cy;
  std::map<std::pair<std::string, std::string>, std::size_t> cxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++cx[x[i]];
    ++cy[y[i]];
    ++cxy[{x[i], y[i]}];
  }
  const double hx = EntropyFromCounts(cx);
  const double hy = EntropyFromCounts(cy);
  if (hx == 0.0 || hy == 0.0) return 0.0;
  const double n = static_cast<double>(x.size());
  double mi = 0.0;
  for (const auto& [xy, c] : cxy) {
    const double pxy = static_cast<double>(c) / n;
    const double px = static_cast<double>(cx[xy.first]) / n;
    const double py = static_cast<double>(cy[xy.second]) / n;
    mi += pxy * std::log(pxy / (px * py));
  }
  mi = std::max(mi, 0.0);
  double norm = 0.0;
  switch (mode) {
    case NmiNormalization::kSqrt: norm = std::sqrt(hx * hy); break;
    case NmiNormalization::kMin: norm = std::min(hx, hy); break;
    case NmiNormalization::kMax: norm = std::max(hx, hy); break;
    case NmiNormalization::kArithmetic: norm = (hx + hy) / 2.0; break;
  }
  return mi / norm;
}

enum class Side { kA, kB };

struct FeatureSuggestion {
  std::string attribute;
  Side source = Side::kA;
  double nmi = 0.0;
  std::vector<StackEntry> distribution;  // over the matched rows
};

struct FeatureSuggestions {
  std::vector<FeatureSuggestion> from_a;
  std::vector<FeatureSuggestion> from_b;
};

namespace internal {

inline std::vector<FeatureSuggestion> SuggestFromSide(
    const JoinOutcome& outcome, const DatasetTable& table, Side side,
    NmiNormalization mode) {
  std::vector<std::string> joint;
  joint.reserve(outcome.matches.size());
  for (const auto& m : outcome.matches) {
    std::string t;
    for (std::size_t k = 0; k < m.key_values.size(); ++k) {
      if (k > 0) t.push_back('\x1f');
      t += m.key_values[k];
    }
    joint.push_back(std::move(t));
  }
  const std::set<std::string> key(outcome.key.attributes.begin(),
                                  outcome.key.attributes.end());
  std::vector<FeatureSuggestion> out;
  for (const auto& column : table.columns) {
    if (key.contains(column.name)) continue;
    const CellLabeler label(column);
    std::vector<std::string> values;
    values.reserve(outcome.matches.size());
    std::map<std::string, std::size_t> counts;
    for (const auto& m : outcome.matches) {
      const std::size_t row = side == Side::kA ? m.row_index_a : m.row_index_b;
      auto v = label(column.cells[row]);
      values.push_back(v ? std::move(*v) : std::string(kMissingLabel));
      ++counts[values.back()];
    }
    FeatureSuggestion s;
    s.attribute = column.name;
    s.source = side;
    s.nmi = NormalizedMutualInformation(values, joint, mode);
    for (auto& [cat, n] : counts) s.distribution.push_back({cat, n});
    std::stable_sort(s.distribution.begin(), s.distribution.end(),
                     [](const auto& x, const auto& y) { return x.count > y.count; });
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.nmi != y.nmi) return x.nmi > y.nmi;
    return x.attribute < y.attribute;
  });
  if (out.size() > kMaxSuggestions) out.resize(kMaxSuggestions);
  return out;
}

}  // namespace internal

// Top-5 non-key attributes per side by NMI against the joint key tuple.
inline FeatureSuggestions SuggestFeatures(const JoinOutcome& outcome,
                                          const DatasetTable& a, const DatasetTable& b,
                                          NmiNormalization mode = NmiNormalization::kSqrt) {
  if (outcome.match_count < 2) {
    throw Error(ErrorCode::kTooFewMatches,
                "feature suggestions need at least 2 matches, got " +
                    std::to_string(outcome.match_count));
  }
  return {internal::SuggestFromSide(outcome, a, Side::kA, mode),
          internal::SuggestFromSide(outcome, b, Side::kB, mode)};
}

}  // namespace joinrisk

#endif  // JOINRISK_DISCLOSURE_HPP_
