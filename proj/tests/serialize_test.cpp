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

#include "joinrisk/serialize.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace joinrisk {
namespace {

using testing::MakeMeta;
using testing::MakeTable;

TEST(SerializeTest, MetaRoundTrip) {
  DatasetMeta m = MakeMeta("d1", {"Victim Age", "Zip"}, {"health", "crime"});
  m.granularity = Granularity::kAggregated;
  m.row_count = 12;
  m.source = Remote{"https://data.example.org/d/abcd-1234"};
  const Json j = m;
  EXPECT_EQ(j["attributes"], (Json{"victim_age", "zip"}));
  EXPECT_EQ(j["granularity"], "aggregated");
  EXPECT_EQ(j["permalink"], "https://data.example.org/d/abcd-1234");
  const auto back = j.get<DatasetMeta>();
  EXPECT_EQ(back.id, m.id);
  EXPECT_EQ(back.tags, m.tags);
  EXPECT_EQ(back.granularity, m.granularity);
  EXPECT_EQ(back.attribute_names, m.attribute_names);
  EXPECT_EQ(std::get<Remote>(back.source).permalink, "https://data.example.org/d/abcd-1234");
}

TEST(SerializeTest, SnapshotRoundTripIsBitwise) {
  std::vector<DatasetTable> tables;
  tables.push_back(MakeTable("t", {"x", "label"},
                             {{"0.1", "a"}, {"1e-300", "NA"}, {"", "b"}, {"-0", "c"},
                              {"123456789.123456789", "d"}, {"2.5", "e"}, {"3", "f"},
                              {"4", "g"}, {"5", "h"}, {"n/a", "i"}}));
  tables.push_back(MakeTable("u", {"y"}, {{"q"}, {"r"}}));
  const Corpus corpus(std::move(tables));
  const auto text = SnapshotToJson(corpus).dump();
  const Corpus back = SnapshotFromJson(Json::parse(text));
  ASSERT_EQ(back.size(), 2u);
  const auto& a = corpus.tables()[0];
  const auto& b = back.tables()[0];
  ASSERT_EQ(a.columns.size(), b.columns.size());
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    EXPECT_EQ(a.columns[c].kind, b.columns[c].kind);
    ASSERT_EQ(a.columns[c].cells.size(), b.columns[c].cells.size());
    for (std::size_t r = 0; r < a.columns[c].cells.size(); ++r) {
      const auto& x = a.columns[c].cells[r];
      const auto& y = b.columns[c].cells[r];
      ASSERT_EQ(x.index(), y.index());
      if (const auto* d = std::get_if<double>(&x)) {
        EXPECT_EQ(0, std::memcmp(d, &std::get<double>(y), sizeof(double)));
      } else if (const auto* s = std::get_if<std::string>(&x)) {
        EXPECT_EQ(*s, std::get<std::string>(y));
      }
    }
  }
  EXPECT_EQ(SnapshotId(corpus), SnapshotId(back));
  EXPECT_EQ(SnapshotToJson(back).dump(), text);
}

TEST(SerializeTest, SnapshotIdTracksContent) {
  auto make = [](const std::string& v) {
    std::vector<DatasetTable> t;
    t.push_back(MakeTable("t", {"x"}, {{v}}));
    return Corpus(std::move(t));
  };
  EXPECT_EQ(SnapshotId(make("a")), SnapshotId(make("a")));
  EXPECT_NE(SnapshotId(make("a")), SnapshotId(make("b")));
}

TEST(SerializeTest, MalformedSnapshotRejected) {
  EXPECT_THROW(SnapshotFromJson(Json::object()), Error);
  Json bad = {{"tables",
               {{{"meta", {{"id", "t"}, {"row_count", 2}}},
                 {"columns", {{{"name", "x"}, {"kind", "categorical"}, {"cells", {"a"}}}}}}}}};
  EXPECT_THROW(SnapshotFromJson(bad), Error);
}

TEST(SerializeTest, GroupingShape) {
  GroupingResult r;
  r.weight_chosen = 17;
  r.quality = ClusteringQuality{std::numeric_limits<double>::infinity(), 1.0, 0.0};
  JoinableGroup g;
  g.group_id = 3;
  g.rank = 1;
  g.members = {"a", "b"};
  g.coords = {{1, 2}, {1, 2}};
  g.attribute_frequencies = {{"race", 2, true}, {"fee", 2, false}};
  g.privacy_frequencies = {{"race", 2, true}};
  g.frequency_bars = {{"race", 2, true}, {"fee", 2, false}};
  g.markers = {{{1, 2}, {"a", "b"}}};
  r.groups = {g};
  const Json j = r;
  EXPECT_EQ(j["weight_chosen"], 17.0);
  EXPECT_TRUE(j["quality"]["calinski_harabasz"].is_null());
  EXPECT_EQ(j["quality"]["silhouette"], 1.0);
  const auto& jg = j["groups"][0];
  for (const char* key : {"id", "members", "coords", "attribute_frequencies",
                          "privacy_frequencies", "rank"}) {
    EXPECT_TRUE(jg.contains(key)) << key;
  }
  EXPECT_EQ(jg["id"], 3);
  EXPECT_EQ(jg["coords"][1], (Json{1.0, 2.0}));
  EXPECT_EQ(jg["attribute_frequencies"]["fee"], 2);
  EXPECT_EQ(jg["privacy_frequencies"], (Json{{"race", 2}}));
  EXPECT_EQ(jg["frequency_bars"][0]["attribute"], "race");
  EXPECT_EQ(jg["markers"][0]["count"], 2);
  EXPECT_TRUE(jg["quality"].is_null());
  // Non-finite values survive a dump as null.
  EXPECT_NE(j.dump().find("\"calinski_harabasz\":null"), std::string::npos);
}

TEST(SerializeTest, ProfileShape) {
  VulnerabilityProfile p;
  p.dataset_id = "d";
  p.record_points = {{"age", "11–12", 1}, {"gender", "f", 6}};
  p.vulnerable = {{"age", "11–12", 1}};
  p.min_count = 1;
  const Json j = p;
  EXPECT_EQ(j["dataset_id"], "d");
  EXPECT_EQ(j["record_points"][0], (Json{{"a", "age"}, {"v", "11–12"}, {"c", 1}}));
  EXPECT_EQ(j["vulnerable"].size(), 1u);
  EXPECT_EQ(j["min_count"], 1);
}

TEST(SerializeTest, PairShape) {
  PairRisk r;
  r.dataset_a = "a";
  r.dataset_b = "b";
  r.shared = {{"race", 1.0, 0.5, 1.0, true}};
  r.p = 1;
  r.c = 1;
  r.risk = 50;
  r.normalized_risk = 50.0 / 182.0 * 5.0;
  r.suggested_key = {"race"};
  Json j = PairToJson(r, std::vector<std::string>{"race", "sex"});
  for (const char* key : {"a", "b", "shared", "p", "c", "risk", "normalized_risk",
                          "suggested_key", "last_used_key"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(j["shared"][0], (Json{{"name", "race"}, {"H", 1.0}, {"H_a", 1.0}, {"H_b", 0.5},
                                  {"is_privacy", true}}));
  EXPECT_EQ(j["last_used_key"], (Json{"race", "sex"}));
  EXPECT_TRUE(Json(r)["last_used_key"].is_null());
}

TEST(SerializeTest, JoinShape) {
  auto a = MakeTable("a", {"race", "x"}, {{"w", "1"}, {"b", "2"}, {"w", "3"}});
  auto b = MakeTable("b", {"race", "y"}, {{"w", "p"}, {"b", "q"}});
  const auto o = Join(a, b, {{"race"}});
  const Json j = o;
  EXPECT_EQ(j["match_count"], 3);
  EXPECT_EQ(j["matches"][0], (Json{{"key_values", {"w"}}, {"row_a", 0}, {"row_b", 0}}));
  EXPECT_EQ(j["stacks"][0]["entries"][0], (Json{{"category", "w"}, {"count", 2}}));
  EXPECT_TRUE(j["ribbons"].empty());

  const Json s = SuggestFeatures(o, a, b);
  EXPECT_EQ(s["from_a"][0]["source"], "A");
  EXPECT_EQ(s["from_b"][0]["attribute"], "y");

  const Json d = GetMatchDetail(o, a, b, 1);
  EXPECT_EQ(d["row_a"][1], (Json{{"name", "x"}, {"value", "2"}}));
}

}  // namespace
}  // namespace joinrisk
