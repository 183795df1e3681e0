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

// Schema -> vector conversion: summed attribute-token embeddings concatenated
// with a privacy weight vector, plus cosine distances between datasets.

#ifndef JOINRISK_EMBEDDING_HPP_
#define JOINRISK_EMBEDDING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "joinrisk/corpus.hpp"
#include "joinrisk/error.hpp"
#include "joinrisk/util.hpp"

namespace joinrisk {

inline constexpr std::size_t kDefaultEmbeddingDimension = 300;

// Token -> dense vector. Immutable after construction and safe to share.
//
// Hashed mode pads the token as "<token>", hashes each character trigram to
// a (slot, sign) pair and accumulates +-1, then scales to unit L2 norm. With
// an external vector table, known tokens are looked up verbatim and unknown
// ones fall back to the hashed embedding, so no token embeds to zero.
class EmbeddingProvider {
 public:
  static EmbeddingProvider HashedTrigrams(
      std::uint64_t seed = 0,
      std::size_t dimension = kDefaultEmbeddingDimension) {
    if (dimension == 0) {
      throw Error(ErrorCode::kInvalidArgument, "dimension must be positive");
    }
    return EmbeddingProvider(dimension, seed, nullptr);
  }

  // Whitespace-separated text: token followed by `dimension` floats per line.
  static EmbeddingProvider FromVectorText(
      std::string_view text, std::uint64_t seed = 0,
      std::size_t dimension = kDefaultEmbeddingDimension) {
    auto table = std::make_shared<VectorTable>();
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::istringstream fields(line);
      std::string token;
      if (!(fields >> token)) continue;
      std::vector<double> v;
      v.reserve(dimension);
      double x = 0.0;
      while (fields >> x) v.push_back(x);
      if (v.size() != dimension) {
        throw Error(ErrorCode::kParseError,
                    "vector file line " + std::to_string(lineno) + ": expected " +
                        std::to_string(dimension) + " components, got " +
                        std::to_string(v.size()));
      }
      table->emplace(std::move(token), std::move(v));
    }
    return EmbeddingProvider(dimension, seed, std::move(table));
  }

  static EmbeddingProvider FromVectorFile(
      const std::filesystem::path& path, std::uint64_t seed = 0,
      std::size_t dimension = kDefaultEmbeddingDimension) {
    return FromVectorText(ReadFile(path), seed, dimension);
  }

  std::size_t dimension() const { return dimension_; }
  std::uint64_t seed() const { return seed_; }
  bool has_external_vectors() const { return external_ != nullptr; }

  std::vector<double> Embed(std::string_view token) const {
    if (external_) {
      auto it = external_->find(std::string(token));
      if (it != external_->end()) return it->second;
    }
    return Hashed(token);
  }

  // Identifies the provider configuration in cache keys.
  std::uint64_t Fingerprint() const {
    std::uint64_t h = Hash64(std::to_string(dimension_), seed_);
    return external_ ? Hash64("external:" + std::to_string(external_->size()), h)
                     : h;
  }

 private:
  using VectorTable = std::unordered_map<std::string, std::vector<double>>;

  EmbeddingProvider(std::size_t dimension, std::uint64_t seed,
                    std::shared_ptr<const VectorTable> external)
      : dimension_(dimension), seed_(seed), external_(std::move(external)) {}

  std::vector<double> Hashed(std::string_view token) const {
    std::vector<double> v(dimension_, 0.0);
    const std::string padded = "<" + std::string(token) + ">";
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
      const std::uint64_t h = Hash64(std::string_view(padded).substr(i, 3), seed_);
      const std::size_t slot = static_cast<std::size_t>(h % dimension_);
      v[slot] += (h >> 63) != 0 ? 1.0 : -1.0;
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      // Every trigram cancelled out; fall back to one deterministic slot.
      const std::uint64_t h = Hash64(padded, seed_ ^ 0x5bd1e995ULL);
      v[static_cast<std::size_t>(h % dimension_)] = 1.0;
      return v;
    }
    for (double& x : v) x /= norm;
    return v;
  }

  std::size_t dimension_;
  std::uint64_t seed_;
  std::shared_ptr<const VectorTable> external_;
};

inline std::vector<double> EmbedToken(const EmbeddingProvider& provider,
                                      std::string_view token) {
  return provider.Embed(token);
}

inline const std::vector<double>& DefaultWeightCandidates() {
  static const std::vector<double> kCandidates = {8.0, 17.0};
  return kCandidates;
}

struct WeightConfig {
  double weight = 8.0;
  std::vector<double> candidates = DefaultWeightCandidates();
  PrivacyDictionary privacy_attributes = PrivacyDictionary::Default();
};

struct DatasetVector {
  std::string dataset_id;
  std::vector<double> base;
  std::vector<double> weights;
  std::vector<double> full;
};

// base = sum over attributes of the sum of their underscore-separated token
// embeddings; weights[i] = weight if the i-th dictionary attribute is present.
inline DatasetVector MakeDatasetVector(const DatasetMeta& meta,
                                       const EmbeddingProvider& provider,
                                       double weight,
                                       const PrivacyDictionary& dictionary) {
  if (meta.attribute_names.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "dataset '" + meta.id + "' has no attributes");
  }
  DatasetVector out;
  out.dataset_id = meta.id;
  out.base.assign(provider.dimension(), 0.0);
  std::unordered_set<std::string> present;
  for (const auto& attr : NormalizedAttributes(meta)) {
    std::size_t start = 0;
    while (start <= attr.size()) {
      std::size_t end = attr.find('_', start);
      if (end == std::string::npos) end = attr.size();
      if (end > start) {
        const auto e = provider.Embed(std::string_view(attr).substr(start, end - start));
        for (std::size_t k = 0; k < e.size(); ++k) out.base[k] += e[k];
      }
      start = end + 1;
    }
    present.insert(attr);
  }
  out.weights.reserve(dictionary.size());
  for (const auto& a : dictionary.attributes()) {
    out.weights.push_back(present.contains(a) ? weight : 0.0);
  }
  out.full = out.base;
  out.full.insert(out.full.end(), out.weights.begin(), out.weights.end());
  return out;
}

inline DatasetVector MakeDatasetVector(const DatasetMeta& meta,
                                       const EmbeddingProvider& provider,
                                       const WeightConfig& weights) {
  return MakeDatasetVector(meta, provider, weights.weight,
                           weights.privacy_attributes);
}

// Dense symmetric n x n matrix, row-major.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Rounding residue below this is reported as exact zero so identical schemas
// coincide in the projection.
inline constexpr double kDistanceSnap = 1e-12;

inline double CosineDistance(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  const double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
  if (d < kDistanceSnap) return 0.0;
  return std::min(d, 2.0);
}

// d(i, j) = 1 - cos(full_i, full_j), clamped to [0, 2], exact zero diagonal.
inline DistanceMatrix PairwiseDistances(const std::vector<DatasetVector>& vectors) {
  if (vectors.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two vectors");
  }
  const std::size_t len = vectors.front().full.size();
  for (const auto& v : vectors) {
    if (v.full.size() != len) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vector length mismatch for '" + v.dataset_id + "'");
    }
    double norm = 0.0;
    for (double x : v.full) norm += x * x;
    if (norm == 0.0) {
      throw Error(ErrorCode::kZeroVector,
                  "dataset '" + v.dataset_id + "' has a zero vector");
    }
  }
  DistanceMatrix d(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double dij = CosineDistance(vectors[i].full, vectors[j].full);
      d(i, j) = dij;
      d(j, i) = dij;
    }
  }
  return d;
}

}  // namespace joinrisk

#endif  // JOINRISK_EMBEDDING_HPP_
