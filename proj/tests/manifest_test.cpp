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

#include "joinrisk/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include "gtest/gtest.h"

namespace joinrisk {
namespace {

namespace fs = std::filesystem;

class ManifestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("joinrisk-manifest-" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "csv");
    std::ofstream(dir_ / "csv" / "a.csv") << "Age,Race\n30,white\n41,black\n";
    std::ofstream(dir_ / "csv" / "b.csv") << "permit,fee\nP1,10\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path Write(const std::string& text) {
    const auto p = dir_ / "manifest.json";
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

TEST_F(ManifestTest, LoadsRelativePaths) {
  const auto path = Write(R"([
    {"id": "a", "name": "Arrests", "portal": "data.city.gov", "tags": ["Crime", "public safety"],
     "granularity": "individual", "path": "csv/a.csv"},
    {"id": "b", "portal": "data.city.gov", "granularity": "Aggregated", "path": "csv/b.csv"}
  ])");
  const Corpus c = LoadManifest(path);
  ASSERT_EQ(c.size(), 2u);
  const auto& a = c.Get("a").meta;
  EXPECT_EQ(a.name, "Arrests");
  EXPECT_EQ(a.tags, (std::set<std::string>{"crime", "public safety"}));
  EXPECT_EQ(a.row_count, 2u);
  EXPECT_EQ(std::get<LocalFile>(a.source).path, "csv/a.csv");
  EXPECT_EQ(c.Get("b").meta.name, "b");
  EXPECT_EQ(c.Get("b").meta.granularity, Granularity::kAggregated);
}

TEST_F(ManifestTest, RejectsBadEntries) {
  auto code_of = [&](const std::string& text) {
    try {
      LoadManifest(Write(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kNotFound;
  };
  EXPECT_EQ(code_of("{}"), ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"id": "a", "path": "csv/a.csv"}])"), ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"id": "a", "granularity": "individual"}])"), ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"id": "a", "granularity": "individual", "path": "x", "permalink": "y"}])"),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"id": "a", "granularity": "sometimes", "path": "csv/a.csv"}])"),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"id": "a", "granularity": "individual", "path": "csv/a.csv"},
                        {"id": "a", "granularity": "individual", "path": "csv/b.csv"}])"),
            ErrorCode::kParseError);
  EXPECT_EQ(code_of(R"([{"id": "a", "granularity": "individual", "path": "missing.csv"}])"),
            ErrorCode::kIoError);
}

TEST_F(ManifestTest, IngestErrorsNameTheEntry) {
  std::ofstream(dir_ / "csv" / "big.csv") << "x\n1\n2\n3\n";
  const auto path = Write(R"([{"id": "big", "granularity": "individual", "path": "csv/big.csv"}])");
  try {
    LoadManifest(path, {.ingest = {.record_cap = 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCapExceeded);
    EXPECT_NE(e.detail().find("big"), std::string::npos);
  }
  const Corpus c = LoadManifest(path, {.ingest = {.record_cap = 2, .truncate = true}});
  EXPECT_TRUE(c.Get("big").meta.truncated);
  EXPECT_EQ(c.Get("big").meta.row_count, 2u);
}

class MapTransport final : public Transport {
 public:
  std::map<std::string, std::string> bodies;
  HttpResponse Get(const std::string& url) override {
    auto it = bodies.find(url);
    if (it == bodies.end()) return {404, ""};
    return {200, it->second};
  }
};

TEST_F(ManifestTest, RemoteEntriesUseTransport) {
  const auto path = Write(R"([
    {"id": "r", "granularity": "individual", "portal": "data.example.gov",
     "permalink": "https://data.example.gov/d/abcd-1234"}
  ])");
  EXPECT_THROW(LoadManifest(path), Error);
  MapTransport t;
  t.bodies["https://data.example.gov/api/views/abcd-1234/rows.csv?accessType=DOWNLOAD"] =
      "sex,zip\nf,1\nm,2\n";
  const Corpus c = LoadManifest(path, {.transport = &t});
  EXPECT_EQ(c.Get("r").meta.row_count, 2u);
  EXPECT_EQ(std::get<Remote>(c.Get("r").meta.source).permalink,
            "https://data.example.gov/d/abcd-1234");
  t.bodies.clear();
  try {
    LoadManifest(path, {.transport = &t});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetworkError);
  }
}

}  // namespace
}  // namespace joinrisk
