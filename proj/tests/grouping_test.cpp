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

#include "joinrisk/grouping.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <random>
#include <set>
#include <stop_token>

#include "gtest/gtest.h"
#include "test_util.hpp"

namespace joinrisk {
namespace {

using testing::LinearlySeparable;
using testing::MakeMeta;
using testing::TwoFamilyCorpus;

const EmbeddingProvider& Provider() {
  static const EmbeddingProvider provider = EmbeddingProvider::HashedTrigrams();
  return provider;
}

GroupingConfig WithWeights(std::vector<double> weights) {
  GroupingConfig cfg;
  cfg.weight_candidates = std::move(weights);
  return cfg;
}

const JoinableGroup* GroupOf(const GroupingResult& r, const std::string& id) {
  for (const auto& g : r.groups) {
    if (std::find(g.members.begin(), g.members.end(), id) != g.members.end()) return &g;
  }
  return nullptr;
}

std::set<std::set<std::string>> Partition(const GroupingResult& r) {
  std::set<std::set<std::string>> out;
  for (const auto& g : r.groups) out.insert({g.members.begin(), g.members.end()});
  return out;
}

TEST(BuildGroupsTest, TwoFamiliesSeparateAndPrivacyRanksFirst) {
  const auto corpus = TwoFamilyCorpus();
  const auto r = BuildGroups(corpus, PrivacyDictionary::Default(), Provider(), WithWeights({17}));
  EXPECT_EQ(r.weight_chosen, 17);
  ASSERT_EQ(r.dataset_ids.size(), 12u);
  std::vector<Point2> p(r.coords.begin(), r.coords.begin() + 6);
  std::vector<Point2> q(r.coords.begin() + 6, r.coords.end());
  EXPECT_TRUE(LinearlySeparable(p, q));

  ASSERT_GE(r.groups.size(), 2u);
  const auto& top = r.groups.front();
  EXPECT_EQ(top.rank, 1u);
  EXPECT_EQ(top.members, (std::vector<std::string>{"p0", "p1", "p2", "p3", "p4", "p5"}));
  EXPECT_EQ(top.privacy_coverage, 3u);
  ASSERT_TRUE(r.quality.has_value());
  EXPECT_GT(r.quality->calinski_harabasz, 0);
  for (std::size_t i = 0; i < r.groups.size(); ++i) EXPECT_EQ(r.groups[i].rank, i + 1);
}

TEST(BuildGroupsTest, MembersDisjointAndCoverCorpus) {
  const auto corpus = TwoFamilyCorpus();
  const auto r = BuildGroups(corpus, PrivacyDictionary::Default(), Provider());
  std::multiset<std::string> seen(r.noise.begin(), r.noise.end());
  for (const auto& g : r.groups) {
    EXPECT_EQ(g.members.size(), g.coords.size());
    seen.insert(g.members.begin(), g.members.end());
  }
  EXPECT_EQ(seen.size(), corpus.size());
  EXPECT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), corpus.size());
}

TEST(BuildGroupsTest, SelectsCandidateWithHighestCh) {
  // Privacy datasets buried in long random schemas: the heavier weight pulls
  // them together more tightly.
  std::mt19937_64 rng(5);
  std::vector<DatasetMeta> corpus;
  for (int i = 0; i < 12; ++i) {
    std::vector<std::string> attrs;
    if (i < 6) attrs = {"age", "sex", "race"};
    for (int k = 0; k < 40; ++k) attrs.push_back(testing::RandomToken(rng, 8));
    corpus.push_back(MakeMeta((i < 6 ? "p" : "q") + std::to_string(i % 6), attrs));
  }
  const auto r = BuildGroups(corpus, PrivacyDictionary::Default(), Provider(), WithWeights({8, 17}));
  ASSERT_EQ(r.candidates.size(), 2u);
  ASSERT_TRUE(r.candidates[0].quality && r.candidates[1].quality);
  const double ch8 = r.candidates[0].quality->calinski_harabasz;
  const double ch17 = r.candidates[1].quality->calinski_harabasz;
  EXPECT_GT(ch17, ch8);
  EXPECT_EQ(r.weight_chosen, 17);
  EXPECT_EQ(r.quality->calinski_harabasz, ch17);
  EXPECT_EQ(GroupOf(r, "p0")->members,
            (std::vector<std::string>{"p0", "p1", "p2", "p3", "p4", "p5"}));

  // Reversing the candidate order must not change the pick.
  const auto rev = BuildGroups(corpus, PrivacyDictionary::Default(), Provider(), WithWeights({17, 8}));
  EXPECT_EQ(rev.weight_chosen, 17);
}

TEST(BuildGroupsTest, ChTieGoesToEarlierCandidate) {
  const auto corpus = TwoFamilyCorpus();
  const auto r = BuildGroups(corpus, PrivacyDictionary::Default(), Provider(), WithWeights({8, 17}));
  ASSERT_TRUE(r.candidates[0].quality && r.candidates[1].quality);
  if (r.candidates[0].quality->calinski_harabasz == r.candidates[1].quality->calinski_harabasz) {
    EXPECT_EQ(r.weight_chosen, 8);
  } else {
    const bool first = r.candidates[0].quality->calinski_harabasz >
                       r.candidates[1].quality->calinski_harabasz;
    EXPECT_EQ(r.weight_chosen, first ? 8 : 17);
  }
}

TEST(BuildGroupsTest, DictionaryChangeCoalescesVictimAgeDatasets) {
  std::vector<DatasetMeta> corpus;
  for (int i = 0; i < 3; ++i) {
    corpus.push_back(MakeMeta("v" + std::to_string(i),
                              {"Victim Age", "permit", "fee", "col" + std::to_string(i)}));
  }
  for (int i = 3; i < 6; ++i) {
    corpus.push_back(MakeMeta("v" + std::to_string(i),
                              {"Victim Age", "school", "grade", "col" + std::to_string(i)}));
  }
  for (int i = 0; i < 5; ++i) {
    corpus.push_back(MakeMeta("o" + std::to_string(i), {"permit", "fee", "col" + std::to_string(i)}));
    corpus.push_back(MakeMeta("s" + std::to_string(i), {"school", "grade", "col" + std::to_string(i)}));
  }
  const std::vector<std::string> victims = {"v0", "v1", "v2", "v3", "v4", "v5"};
  auto dict = PrivacyDictionary::Default();
  ASSERT_FALSE(dict.Contains("victim_age"));
  const auto before = BuildGroups(corpus, dict, Provider(), WithWeights({17}));
  const auto* g = GroupOf(before, "v0");
  const bool together_before =
      g && std::all_of(victims.begin(), victims.end(), [&](const auto& v) {
        return std::find(g->members.begin(), g->members.end(), v) != g->members.end();
      });
  EXPECT_FALSE(together_before);

  dict.Add("victim_age");
  const auto after = BuildGroups(corpus, dict, Provider(), WithWeights({17}));
  EXPECT_EQ(after.dictionary_version, dict.version());
  EXPECT_NE(after.dictionary_version, before.dictionary_version);
  const auto* merged = GroupOf(after, "v0");
  ASSERT_NE(merged, nullptr);
  EXPECT_EQ(merged->members, victims);
  ASSERT_EQ(merged->privacy_frequencies.size(), 1u);
  EXPECT_EQ(merged->privacy_frequencies[0], (AttributeCount{"victim_age", 6, true}));
  EXPECT_EQ(merged->rank, 1u);
}

TEST(BuildGroupsTest, RelabelingIdsKeepsMembership) {
  auto corpus = TwoFamilyCorpus();
  const auto r = BuildGroups(corpus, PrivacyDictionary::Default(), Provider());
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    rename[corpus[i].id] = "zz-" + std::to_string(97 - i);
    corpus[i].id = rename[corpus[i].id];
    corpus[i].name = "renamed";
  }
  const auto r2 = BuildGroups(corpus, PrivacyDictionary::Default(), Provider());
  std::set<std::set<std::string>> mapped;
  for (const auto& members : Partition(r)) {
    std::set<std::string> m;
    for (const auto& id : members) m.insert(rename[id]);
    mapped.insert(m);
  }
  EXPECT_EQ(mapped, Partition(r2));
  EXPECT_EQ(0, std::memcmp(r.coords.data(), r2.coords.data(), r.coords.size() * sizeof(Point2)));
}

TEST(BuildGroupsTest, ZeroWeightIgnoresDictionary) {
  const auto corpus = TwoFamilyCorpus();
  PrivacyDictionary other({"permit", "col1", "unrelated"});
  const auto a = BuildGroups(corpus, PrivacyDictionary::Default(), Provider(), WithWeights({0}));
  const auto b = BuildGroups(corpus, other, Provider(), WithWeights({0}));
  EXPECT_EQ(Partition(a), Partition(b));
  ASSERT_EQ(a.coords.size(), b.coords.size());
  EXPECT_EQ(0, std::memcmp(a.coords.data(), b.coords.data(), a.coords.size() * sizeof(Point2)));
}

TEST(BuildGroupsTest, Deterministic) {
  const auto corpus = TwoFamilyCorpus();
  const auto a = BuildGroups(corpus, PrivacyDictionary::Default(), Provider());
  const auto b = BuildGroups(corpus, PrivacyDictionary::Default(), Provider());
  ASSERT_EQ(a.coords.size(), b.coords.size());
  EXPECT_EQ(0, std::memcmp(a.coords.data(), b.coords.data(), a.coords.size() * sizeof(Point2)));
  EXPECT_EQ(Partition(a), Partition(b));
  EXPECT_EQ(a.weight_chosen, b.weight_chosen);
}

TEST(BuildGroupsTest, FallsBackToSingleGroup) {
  // Identical schemas collapse to one point, so no candidate finds two clusters.
  std::vector<DatasetMeta> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(MakeMeta("d" + std::to_string(i), {"age", "fee"}));
  const auto r = BuildGroups(corpus, PrivacyDictionary::Default(), Provider());
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_EQ(r.groups[0].members.size(), 5u);
  EXPECT_FALSE(r.quality.has_value());
  EXPECT_FALSE(r.groups[0].quality.has_value());
  EXPECT_TRUE(r.noise.empty());
  ASSERT_EQ(r.groups[0].markers.size(), 1u);
  EXPECT_EQ(r.groups[0].markers[0].members.size(), 5u);
}

TEST(BuildGroupsTest, RejectsBadInput) {
  const auto corpus = TwoFamilyCorpus();
  EXPECT_THROW(BuildGroups(std::vector<DatasetMeta>(corpus.begin(), corpus.begin() + 2),
                           PrivacyDictionary::Default(), Provider()),
               Error);
  EXPECT_THROW(BuildGroups(corpus, PrivacyDictionary::Default(), Provider(), WithWeights({})),
               Error);
  EXPECT_THROW(BuildGroups(corpus, PrivacyDictionary::Default(), Provider(), WithWeights({-1})),
               Error);
}

TEST(BuildGroupsTest, CancellationPropagates) {
  std::stop_source source;
  source.request_stop();
  try {
    BuildGroups(TwoFamilyCorpus(), PrivacyDictionary::Default(), Provider(), {},
                source.get_token());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCancelled);
  }
}

TEST(SummarizeAttributesTest, FrequenciesAndBarOrder) {
  const auto dict = PrivacyDictionary::Default();
  const std::vector<DatasetMeta> metas = {
      MakeMeta("a", {"Race", "Sex", "Case Number", "beat"}),
      MakeMeta("b", {"race", "case_number", "district"}),
      MakeMeta("c", {"age", "case number", "district"}),
  };
  std::vector<const DatasetMeta*> ptrs;
  for (const auto& m : metas) ptrs.push_back(&m);
  JoinableGroup g;
  SummarizeAttributes(g, ptrs, dict);
  EXPECT_EQ(g.attribute_frequencies,
            (std::vector<AttributeCount>{{"case_number", 3, false},
                                         {"district", 2, false},
                                         {"race", 2, true}}));
  // Dictionary order breaks ties: age, gender, race, ... sex.
  EXPECT_EQ(g.privacy_frequencies,
            (std::vector<AttributeCount>{{"race", 2, true}, {"age", 1, true}, {"sex", 1, true}}));
  EXPECT_EQ(g.frequency_bars,
            (std::vector<AttributeCount>{{"race", 2, true},
                                         {"age", 1, true},
                                         {"sex", 1, true},
                                         {"case_number", 3, false},
                                         {"district", 2, false}}));
  EXPECT_EQ(g.privacy_coverage, 1u);  // only race reaches half of 3 members
}

TEST(MergeOverlappingTest, CountsCoincidentPoints) {
  const std::vector<std::string> ids = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<Point2> pts(7, Point2{1.5, -2});
  pts.push_back({4, 4});
  const auto m = MergeOverlapping(ids, pts);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].members.size(), 7u);
  EXPECT_EQ(m[1].members, (std::vector<std::string>{"h"}));
}

TEST(RankGroupsTest, CoverageThenSizeThenId) {
  std::vector<JoinableGroup> groups(4);
  groups[0] = {.group_id = 0, .members = {"a", "b", "c"}, .privacy_coverage = 1};
  groups[1] = {.group_id = 1, .members = {"d"}, .privacy_coverage = 2};
  groups[2] = {.group_id = 2, .members = {"e", "f", "g"}, .privacy_coverage = 1};
  groups[3] = {.group_id = 3, .members = {"h", "i", "j", "k"}, .privacy_coverage = 1};
  RankGroups(groups);
  std::vector<int> order;
  for (const auto& g : groups) order.push_back(g.group_id);
  EXPECT_EQ(order, (std::vector<int>{1, 3, 0, 2}));
  EXPECT_EQ(groups[3].rank, 4u);
}

}  // namespace
}  // namespace joinrisk
