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

// Eight-dataset synthetic corpus with one individual planted in both
// "arrests" and "er_visits" (same age, sex, race, date and location). All
// other dates differ by year between those two tables, so the planted pair is
// the only match on the full shared key. The planted race appears nowhere
// else, so that record is the one vulnerable point in "arrests".

#ifndef JOINRISK_TESTS_PLANTED_CORPUS_HPP_
#define JOINRISK_TESTS_PLANTED_CORPUS_HPP_

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "joinrisk/corpus.hpp"
#include "test_util.hpp"

namespace joinrisk::testing {

struct PlantedCorpus {
  Corpus corpus;
  std::string a = "arrests";
  std::string b = "er_visits";
  std::size_t row_a = 0;
  std::size_t row_b = 0;
};

inline PlantedCorpus MakePlantedCorpus(std::uint64_t seed = 2024, std::size_t rows = 60) {
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  auto num = [&](int lo, int hi) {
    return std::to_string(std::uniform_int_distribution<int>(lo, hi)(rng));
  };
  auto date = [&](int year) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year,
                  std::uniform_int_distribution<int>(1, 12)(rng),
                  std::uniform_int_distribution<int>(1, 28)(rng));
    return std::string(buf);
  };
  const std::vector<std::string> sexes = {"M", "F"};
  const std::vector<std::string> races = {"white", "black", "asian", "hispanic", "other"};
  const std::vector<std::string> wards = {"ward 1", "ward 2", "ward 3", "ward 4", "ward 5",
                                          "ward 6", "ward 7", "ward 8"};

  PlantedCorpus out;
  std::uniform_int_distribution<std::size_t> where(0, rows - 1);
  out.row_a = where(rng);
  out.row_b = where(rng);
  const std::vector<std::string> planted = {"34", "F", "pacific islander", "2019-07-04", "ward 12"};

  std::vector<std::vector<std::string>> arrests, er, permits, survey, library, schools,
      crashes, payroll;
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = r == out.row_a ? planted
                              : std::vector<std::string>{num(18, 80), pick(sexes), pick(races),
                                                         date(2018), pick(wards)};
    row.push_back(pick({"theft", "assault", "dui", "fraud", "trespass"}));
    arrests.push_back(row);

    row = r == out.row_b ? planted
                         : std::vector<std::string>{num(18, 80), pick(sexes), pick(races),
                                                    date(2020), pick(wards)};
    row.push_back(pick({"fracture", "asthma", "overdose", "laceration", "burn"}));
    er.push_back(row);

    permits.push_back({"P" + num(10000, 99999), num(25, 900), pick(wards), date(2021)});
    survey.push_back({pick(sexes), pick(races), num(15000, 180000), num(1, 7)});
    library.push_back({num(5, 90), pick({"central", "north", "east"}), num(0, 40)});
    schools.push_back({pick({"lincoln", "roosevelt", "king", "park"}), num(1, 12), num(80, 900)});
    crashes.push_back({date(2022), pick(wards), num(1, 4), num(0, 3)});
    payroll.push_back({pick({"fire", "police", "parks", "water"}), num(30000, 150000),
                       pick({"Female", "Male"})});
  }

  std::vector<DatasetTable> tables;
  tables.push_back(MakeTable("arrests", {"Age", "Sex", "Race", "Date", "Location", "Charge"}, arrests));
  tables.push_back(MakeTable("er_visits", {"age", "sex", "race", "date", "location", "diagnosis"}, er));
  tables.push_back(MakeTable("permits", {"permit_id", "fee", "location", "date"}, permits));
  tables.push_back(MakeTable("survey", {"sex", "race", "income", "household_size"}, survey));
  tables.push_back(MakeTable("library", {"age", "branch", "visits"}, library));
  tables.push_back(MakeTable("schools", {"school", "grade", "enrollment"}, schools,
                             Granularity::kAggregated));
  tables.push_back(MakeTable("crashes", {"date", "location", "vehicles", "injuries"}, crashes));
  tables.push_back(MakeTable("payroll", {"department", "salary", "gender"}, payroll));
  out.corpus = Corpus(std::move(tables));
  return out;
}

}  // namespace joinrisk::testing

#endif  // JOINRISK_TESTS_PLANTED_CORPUS_HPP_
