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

// Fixture builders shared by the test binaries.

#ifndef JOINRISK_TESTS_TEST_UTIL_HPP_
#define JOINRISK_TESTS_TEST_UTIL_HPP_

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "joinrisk/corpus.hpp"
#include "joinrisk/tsne.hpp"

namespace joinrisk::testing {

// Builds a table from a header and rows of raw strings via the CSV path.
inline DatasetTable MakeTable(const std::string& id,
                              const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows,
                              Granularity granularity = Granularity::kIndividual) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    return out + "\"";
  };
  std::string csv;
  for (std::size_t i = 0; i < header.size(); ++i) {
    csv += (i ? "," : "") + quote(header[i]);
  }
  csv += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv += (i ? "," : "") + quote(row[i]);
    csv += "\n";
  }
  MetaOverrides o;
  o.id = id;
  o.name = id;
  o.portal = "data.example.org";
  o.granularity = granularity;
  return IngestCsvText(csv, o);
}

// Metadata-only dataset with the given raw attribute names.
inline DatasetMeta MakeMeta(const std::string& id, std::vector<std::string> attributes,
                            std::set<std::string> tags = {},
                            std::string portal = "data.example.org",
                            Granularity granularity = Granularity::kIndividual) {
  DatasetMeta m;
  m.id = id;
  m.name = id;
  m.portal = std::move(portal);
  m.tags = std::move(tags);
  m.granularity = granularity;
  m.attribute_names = std::move(attributes);
  m.row_count = 1;
  return m;
}

inline std::string RandomToken(std::mt19937_64& rng, std::size_t max_len = 12) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, sizeof(kAlphabet) - 2);
  std::string s(len(rng), 'a');
  for (auto& c : s) c = kAlphabet[pick(rng)];
  return s;
}

// Six datasets sharing {age, sex, race} ("p0".."p5") and six sharing
// {permit, fee} ("q0".."q5"), each with one extra distinct column.
inline std::vector<DatasetMeta> TwoFamilyCorpus() {
  std::vector<DatasetMeta> out;
  for (int i = 0; i < 6; ++i) {
    out.push_back(MakeMeta("p" + std::to_string(i), {"age", "sex", "race", "col" + std::to_string(i)}));
  }
  for (int i = 0; i < 6; ++i) {
    out.push_back(MakeMeta("q" + std::to_string(i), {"permit", "fee", "col" + std::to_string(i)}));
  }
  return out;
}

// Oracle: searches 3600 directions for a line that puts every point of the
// first group strictly on one side and the second group on the other.
inline bool LinearlySeparable(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  for (int step = 0; step < 3600; ++step) {
    const double theta = std::numbers::pi * step / 3600.0;
    const double cx = std::cos(theta);
    const double cy = std::sin(theta);
    double a_min = INFINITY, a_max = -INFINITY, b_min = INFINITY, b_max = -INFINITY;
    for (const auto& p : a) {
      const double t = p.x * cx + p.y * cy;
      a_min = std::min(a_min, t);
      a_max = std::max(a_max, t);
    }
    for (const auto& p : b) {
      const double t = p.x * cx + p.y * cy;
      b_min = std::min(b_min, t);
      b_max = std::max(b_max, t);
    }
    if (a_max < b_min || b_max < a_min) return true;
  }
  return false;
}

}  // namespace joinrisk::testing

#endif  // JOINRISK_TESTS_TEST_UTIL_HPP_
