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

// Command-line front end: batch subcommands emitting JSON, plus `serve`.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "joinrisk/audit.hpp"
#include "joinrisk/catalog.hpp"
#include "joinrisk/config.hpp"
#include "joinrisk/manifest.hpp"
#include "joinrisk/serialize.hpp"
#include "joinrisk/service.hpp"

namespace {

using joinrisk::Json;

struct CorpusArgs {
  std::string manifest;
  std::string snapshot;
  std::vector<std::string> tags;
  std::vector<std::string> portals;
  std::string granularity;
  std::string dictionary;
};

struct Globals {
  std::string config;
  std::string out;
  bool compact = false;
};

void AddCorpusOptions(CLI::App* cmd, CorpusArgs& args) {
  auto* m = cmd->add_option("--manifest,-m", args.manifest, "Corpus manifest (JSON)");
  auto* s = cmd->add_option("--snapshot", args.snapshot, "Saved corpus snapshot instead of a manifest");
  m->excludes(s);
  cmd->add_option("--tags", args.tags, "Keep datasets with any of these tags")->delimiter(',');
  cmd->add_option("--portals", args.portals, "Keep datasets from any of these portals")
      ->delimiter(',');
  cmd->add_option("--granularity", args.granularity, "individual or aggregated");
  cmd->add_option("--dictionary", args.dictionary,
                  "Privacy attributes: JSON array or {\"attributes\": [...]}");
}

joinrisk::ServiceConfig LoadConfig(const Globals& g) {
  joinrisk::ServiceConfig c =
      g.config.empty() ? joinrisk::ServiceConfig{} : joinrisk::LoadConfigFile(g.config);
  joinrisk::ApplyEnvOverrides(c);
  return c;
}

joinrisk::Corpus LoadCorpus(const CorpusArgs& args, const joinrisk::ServiceConfig& cfg) {
  joinrisk::Corpus corpus;
  if (!args.snapshot.empty()) {
    corpus = joinrisk::LoadSnapshot(args.snapshot);
  } else if (!args.manifest.empty()) {
    joinrisk::HttpTransport transport;
    corpus = joinrisk::LoadManifest(
        args.manifest, {.ingest = {.record_cap = cfg.record_cap, .truncate = cfg.truncate},
                        .transport = &transport});
  } else {
    throw joinrisk::Error(joinrisk::ErrorCode::kInvalidArgument,
                          "pass --manifest or --snapshot");
  }
  joinrisk::CorpusFilter f;
  f.tags = {args.tags.begin(), args.tags.end()};
  f.portals = {args.portals.begin(), args.portals.end()};
  if (!args.granularity.empty()) f.granularity = joinrisk::ParseGranularity(args.granularity);
  if (f.tags.empty() && f.portals.empty() && !f.granularity) return corpus;
  std::vector<joinrisk::DatasetTable> kept;
  for (const auto& t : corpus.tables()) {
    if (f.Matches(t.meta)) kept.push_back(t);
  }
  return joinrisk::Corpus(std::move(kept));
}

joinrisk::PrivacyDictionary LoadDictionary(const CorpusArgs& args) {
  if (args.dictionary.empty()) return joinrisk::PrivacyDictionary::Default();
  auto j = Json::parse(joinrisk::ReadFile(args.dictionary), nullptr, false);
  if (j.is_object() && j.contains("attributes")) j = j["attributes"];
  if (!j.is_array()) {
    throw joinrisk::Error(joinrisk::ErrorCode::kParseError,
                          "dictionary file must hold a JSON array of attribute names");
  }
  return joinrisk::PrivacyDictionary(j.get<std::vector<std::string>>());
}

std::vector<const joinrisk::DatasetTable*> Tables(const joinrisk::Corpus& corpus) {
  std::vector<const joinrisk::DatasetTable*> out;
  for (const auto& t : corpus.tables()) out.push_back(&t);
  return out;
}

void Emit(const Globals& g, const Json& j) {
  const std::string text = g.compact ? j.dump() : j.dump(2);
  if (g.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  out << text << "\n";
  if (!out) {
    throw joinrisk::Error(joinrisk::ErrorCode::kIoError, "cannot write " + g.out);
  }
}

joinrisk::Server* g_server = nullptr;

void HandleSignal(int) {
  if (g_server) g_server->Stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joinability-risk inspection for open tabular datasets"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "Config file (JSON key-value)");
  app.add_option("--out,-o", g.out, "Write JSON here instead of stdout");
  app.add_flag("--compact", g.compact, "Single-line JSON");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Load a manifest and print the corpus metadata");
  std::string ingest_manifest, save_snapshot;
  ingest->add_option("manifest", ingest_manifest, "Corpus manifest")->required();
  ingest->add_option("--save-snapshot", save_snapshot, "Write the loaded corpus snapshot here");

  // catalog
  auto* catalog = app.add_subcommand("catalog", "List catalog portals with official datasets");
  std::string catalog_url, fixtures, cache_dir;
  std::size_t min_resources = 2;
  bool record = false;
  catalog->add_option("--url", catalog_url, "Domains endpoint (default from config)");
  catalog->add_option("--min-resources", min_resources, "Minimum official datasets per portal");
  catalog->add_option("--fixtures", fixtures, "Replay responses from this directory");
  catalog->add_flag("--record", record, "Record missing fixtures from the network");
  catalog->add_option("--cache", cache_dir, "Store a timestamped copy of the result here");

  // groups
  auto* groups = app.add_subcommand("groups", "Group datasets by schema similarity");
  CorpusArgs groups_args;
  std::vector<double> weights;
  std::optional<std::uint64_t> seed;
  AddCorpusOptions(groups, groups_args);
  groups->add_option("--weights", weights, "Privacy weight candidates")->delimiter(',');
  groups->add_option("--seed", seed, "Projection seed");

  // vulnerable
  auto* vulnerable = app.add_subcommand("vulnerable", "Rank datasets by vulnerable record points");
  CorpusArgs vuln_args;
  std::optional<std::size_t> threshold;
  AddCorpusOptions(vulnerable, vuln_args);
  vulnerable->add_option("--threshold", threshold, "Vulnerable if count <= threshold");

  // pairs
  auto* pairs = app.add_subcommand("pairs", "Rank dataset pairs by joinability risk");
  CorpusArgs pairs_args;
  std::vector<std::string> pair_ids;
  std::optional<double> alpha;
  AddCorpusOptions(pairs, pairs_args);
  pairs->add_option("--ids", pair_ids, "Restrict to these dataset ids")->delimiter(',');
  pairs->add_option("--alpha", alpha, "Privacy attribute weight in the risk score");

  // join
  auto* join = app.add_subcommand("join", "Join two datasets and report matching records");
  CorpusArgs join_args;
  std::string join_a, join_b, nmi_mode;
  std::vector<std::string> key;
  bool raw = false;
  AddCorpusOptions(join, join_args);
  join->add_option("a", join_a, "First dataset id")->required();
  join->add_option("b", join_b, "Second dataset id")->required();
  join->add_option("--key,-k", key, "Join key attributes")->required()->delimiter(',');
  join->add_flag("--raw", raw, "Compare numeric key values exactly instead of by bin");
  join->add_option("--nmi-mode", nmi_mode, "sqrt, min, max or arithmetic");

  // audit
  auto* audit = app.add_subcommand("audit", "Groups, top pairs and suggested-key joins");
  CorpusArgs audit_args;
  std::size_t top = 10;
  AddCorpusOptions(audit, audit_args);
  audit->add_option("--top", top, "Number of top pairs to join");

  // alpha-sweep
  auto* sweep = app.add_subcommand("alpha-sweep", "Pair separation across a range of alpha");
  CorpusArgs sweep_args;
  double from = 1, to = 100, step = 1;
  AddCorpusOptions(sweep, sweep_args);
  sweep->add_option("--from", from, "First alpha");
  sweep->add_option("--to", to, "Last alpha");
  sweep->add_option("--step", step, "Alpha increment");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  CorpusArgs serve_args;
  std::optional<int> port;
  std::string host;
  AddCorpusOptions(serve, serve_args);
  serve->add_option("--port", port, "Listen port (0 picks one)");
  serve->add_option("--host", host, "Listen address");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = LoadConfig(g);
    if (*ingest) {
      auto corpus = LoadCorpus({.manifest = ingest_manifest}, cfg);
      if (!save_snapshot.empty()) joinrisk::SaveSnapshot(corpus, save_snapshot);
      Json datasets = Json::array();
      for (const auto& t : corpus.tables()) datasets.push_back(t.meta);
      Emit(g, {{"snapshot_id", joinrisk::SnapshotId(corpus)}, {"datasets", datasets}});
    } else if (*catalog) {
      joinrisk::CatalogOptions opts;
      opts.base_url = catalog_url.empty() ? cfg.catalog_url : catalog_url;
      opts.min_resources = min_resources;
      std::shared_ptr<joinrisk::Transport> live = std::make_shared<joinrisk::HttpTransport>();
      std::shared_ptr<joinrisk::Transport> transport = live;
      if (!fixtures.empty()) {
        transport = std::make_shared<joinrisk::FixtureTransport>(fixtures,
                                                                 record ? live : nullptr);
      }
      const auto portals = joinrisk::FetchCatalog(*transport, opts);
      if (!cache_dir.empty()) joinrisk::CatalogCache(cache_dir).Store(portals, opts);
      Emit(g, joinrisk::PortalsToJson(portals));
    } else if (*groups) {
      const auto corpus = LoadCorpus(groups_args, cfg);
      joinrisk::GroupingConfig gc;
      gc.weight_candidates = weights.empty() ? cfg.weight_candidates : weights;
      gc.projection.seed = seed.value_or(cfg.seed);
      std::vector<const joinrisk::DatasetMeta*> metas;
      for (const auto& t : corpus.tables()) metas.push_back(&t.meta);
      Emit(g, joinrisk::BuildGroups(metas, LoadDictionary(groups_args),
                                    joinrisk::MakeProvider(cfg), gc));
    } else if (*vulnerable) {
      const auto corpus = LoadCorpus(vuln_args, cfg);
      const auto dict = LoadDictionary(vuln_args);
      std::vector<joinrisk::VulnerabilityProfile> profiles;
      Json skipped = Json::array();
      for (const auto& t : corpus.tables()) {
        try {
          profiles.push_back(
              joinrisk::BuildProfile(t, dict, threshold.value_or(cfg.vulnerable_threshold)));
        } catch (const joinrisk::Error& e) {
          if (e.code() != joinrisk::ErrorCode::kNoPrivacyAttributes) throw;
          skipped.push_back(t.meta.id);
        }
      }
      Emit(g, {{"profiles", joinrisk::RankVulnerable(std::move(profiles))},
               {"without_privacy_attributes", skipped}});
    } else if (*pairs) {
      const auto corpus = LoadCorpus(pairs_args, cfg);
      std::vector<const joinrisk::DatasetTable*> tables;
      if (pair_ids.empty()) {
        tables = Tables(corpus);
      } else {
        for (const auto& id : pair_ids) tables.push_back(&corpus.Get(id));
      }
      joinrisk::PairRiskOptions opts;
      opts.alpha = alpha.value_or(cfg.alpha);
      Emit(g, joinrisk::RankPairs(tables, LoadDictionary(pairs_args), opts));
    } else if (*join) {
      const auto corpus = LoadCorpus(join_args, cfg);
      const auto& a = corpus.Get(join_a);
      const auto& b = corpus.Get(join_b);
      const auto outcome = joinrisk::Join(
          a, b, {key}, {raw ? joinrisk::NumericJoinMode::kRaw : joinrisk::NumericJoinMode::kBinned});
      Json body = {{"outcome", outcome}, {"suggestions", nullptr}};
      if (outcome.match_count >= 2) {
        body["suggestions"] = joinrisk::SuggestFeatures(
            outcome, a, b,
            nmi_mode.empty() ? cfg.nmi_mode : joinrisk::ParseNmiNormalization(nmi_mode));
      }
      Emit(g, body);
    } else if (*audit) {
      const auto corpus = LoadCorpus(audit_args, cfg);
      joinrisk::AuditOptions opts;
      opts.top_pairs = top;
      opts.pair.alpha = cfg.alpha;
      opts.grouping.weight_candidates = cfg.weight_candidates;
      opts.grouping.projection.seed = cfg.seed;
      opts.nmi = cfg.nmi_mode;
      Emit(g, joinrisk::RunAudit(corpus, LoadDictionary(audit_args), joinrisk::MakeProvider(cfg),
                                 opts));
    } else if (*sweep) {
      const auto corpus = LoadCorpus(sweep_args, cfg);
      const auto dict = LoadDictionary(sweep_args);
      const auto tables = Tables(corpus);
      std::vector<joinrisk::PairCounts> counts;
      for (std::size_t i = 0; i < tables.size(); ++i) {
        for (std::size_t j = i + 1; j < tables.size(); ++j) {
          joinrisk::PairCounts pc;
          for (const auto& s : joinrisk::SharedAttributes(*tables[i], *tables[j], dict)) {
            ++pc.c;
            if (s.is_privacy) ++pc.p;
          }
          counts.push_back(pc);
        }
      }
      Emit(g, {{"pair_count", counts.size()},
               {"points", joinrisk::AlphaSweep(counts, from, to, step)}});
    } else if (*serve) {
      if (port) cfg.port = *port;
      if (!host.empty()) cfg.host = host;
      joinrisk::Session session(LoadCorpus(serve_args, cfg), LoadDictionary(serve_args), cfg);
      joinrisk::Server server(session);
      const int bound = server.Bind(cfg.host, cfg.port);
      g_server = &server;
      std::signal(SIGINT, HandleSignal);
      std::signal(SIGTERM, HandleSignal);
      std::cerr << "listening on http://" << cfg.host << ":" << bound << "\n";
      server.Run();
      g_server = nullptr;
    }
  } catch (const joinrisk::Error& e) {
    std::cerr << Json{{"error", {{"code", joinrisk::ErrorCodeName(e.code())},
                                 {"message", e.detail()}}}}
                     .dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump() << "\n";
    return 1;
  }
  return 0;
}
