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

// HTTP service: session state over an immutable corpus snapshot, an on-disk
// artifact cache keyed by content hash, async grouping jobs and the JSON
// endpoints used by the browser client.

#ifndef JOINRISK_SERVICE_HPP_
#define JOINRISK_SERVICE_HPP_

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stop_token>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"

#include "joinrisk/config.hpp"
#include "joinrisk/corpus.hpp"
#include "joinrisk/disclosure.hpp"
#include "joinrisk/grouping.hpp"
#include "joinrisk/pairrisk.hpp"
#include "joinrisk/serialize.hpp"
#include "joinrisk/util.hpp"
#include "joinrisk/vulnerability.hpp"

namespace joinrisk {

// ---------------------------------------------------------------------------
// Artifact cache
// ---------------------------------------------------------------------------

// Content-addressed JSON blobs under one directory. A default-constructed
// cache is disabled.
class ArtifactCache {
 public:
  ArtifactCache() = default;
  explicit ArtifactCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }

  std::optional<std::string> Get(const std::string& kind, const std::string& key) const {
    if (!enabled()) return std::nullopt;
    const auto path = PathFor(kind, key);
    std::shared_lock lock(mu_);
    if (!std::filesystem::exists(path)) return std::nullopt;
    return ReadFile(path);
  }

  void Put(const std::string& kind, const std::string& key, const std::string& body) {
    if (!enabled()) return;
    const auto path = PathFor(kind, key);
    std::unique_lock lock(mu_);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      out << body;
      if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp);
    }
    std::filesystem::rename(tmp, path);
  }

  std::filesystem::path PathFor(const std::string& kind, const std::string& key) const {
    return dir_ / (kind + "-" + key + ".json");
  }

 private:
  std::filesystem::path dir_;
  mutable std::shared_mutex mu_;
};

inline void SaveSnapshot(const Corpus& corpus, const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << SnapshotToJson(corpus).dump();
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

inline Corpus LoadSnapshot(const std::filesystem::path& path) {
  auto j = nlohmann::json::parse(ReadFile(path), nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParseError, "invalid snapshot " + path.string());
  return SnapshotFromJson(j);
}

// ---------------------------------------------------------------------------
// Session
// ---------------------------------------------------------------------------

struct GroupingRequest {
  std::vector<std::string> dataset_ids;  // empty: the active filter's datasets
  std::vector<double> weight_candidates;
  std::uint64_t seed = 0;
};

enum class JobStatus { kRunning, kDone, kFailed, kCancelled };

inline std::string_view JobStatusName(JobStatus s) {
  switch (s) {
    case JobStatus::kRunning: return "running";
    case JobStatus::kDone: return "done";
    case JobStatus::kFailed: return "failed";
    case JobStatus::kCancelled: return "cancelled";
  }
  return "failed";
}

// Lookup of a session-scoped handle (grouping or join id) that does not exist.
struct UnknownHandle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Session {
 public:
  Session(Corpus corpus, PrivacyDictionary dictionary, ServiceConfig config)
      : corpus_(std::make_shared<const Corpus>(std::move(corpus))),
        snapshot_id_(SnapshotId(*corpus_)),
        dictionary_(std::move(dictionary)),
        config_(std::move(config)),
        provider_(MakeProvider(config_)),
        cache_(config_.cache_dir.empty() ? ArtifactCache()
                                          : ArtifactCache(config_.cache_dir)) {}

  ~Session() { CancelJobs(); }

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& snapshot_id() const { return snapshot_id_; }
  const Corpus& corpus() const { return *corpus_; }
  const ServiceConfig& config() const { return config_; }

  std::uint64_t dictionary_version() const {
    std::shared_lock lock(mu_);
    return dictionary_.version();
  }

  PrivacyDictionary dictionary() const {
    std::shared_lock lock(mu_);
    return dictionary_;
  }

  // --- corpus ------------------------------------------------------------

  Json ListCorpus(const CorpusFilter& filter) {
    {
      std::unique_lock lock(mu_);
      filter_ = filter;
    }
    Json datasets = Json::array();
    for (const auto& t : corpus_->tables()) {
      if (filter.Matches(t.meta)) datasets.push_back(t.meta);
    }
    return {{"snapshot_id", snapshot_id_}, {"datasets", std::move(datasets)}};
  }

  // --- dictionary --------------------------------------------------------

  Json DictionaryJson() const {
    std::shared_lock lock(mu_);
    return {{"version", dictionary_.version()}, {"attributes", dictionary_.attributes()}};
  }

  // Replaces the attribute list, bumps the version and cancels grouping jobs
  // computed against the old version.
  Json ReplaceDictionary(const std::vector<std::string>& attributes) {
    std::vector<std::shared_ptr<Job>> running;
    {
      std::unique_lock lock(mu_);
      dictionary_.Replace(attributes);
      for (auto& [id, job] : jobs_) running.push_back(job);
    }
    for (auto& job : running) job->thread.request_stop();
    return DictionaryJson();
  }

  // --- groupings ---------------------------------------------------------

  Json StartGrouping(GroupingRequest req) {
    if (req.weight_candidates.empty()) req.weight_candidates = config_.weight_candidates;
    std::vector<const DatasetMeta*> metas;
    PrivacyDictionary dict;
    {
      std::shared_lock lock(mu_);
      dict = dictionary_;
      if (req.dataset_ids.empty()) {
        for (const auto& t : corpus_->tables()) {
          if (filter_.Matches(t.meta)) req.dataset_ids.push_back(t.meta.id);
        }
      }
    }
    for (const auto& id : req.dataset_ids) metas.push_back(&RequireDataset(id).meta);

    Json key_material = {{"snapshot", snapshot_id_},
                         {"dictionary", dict.attributes()},
                         {"provider", provider_.Fingerprint()},
                         {"ids", req.dataset_ids},
                         {"weights", req.weight_candidates},
                         {"seed", req.seed}};
    const std::string content_key = HexDigest(Hash64(key_material.dump()));
    const std::string id =
        HexDigest(Hash64(content_key + "#" + std::to_string(dict.version())));

    std::unique_lock lock(mu_);
    last_grouping_id_ = id;
    if (auto it = jobs_.find(id); it != jobs_.end()) {
      const auto status = it->second->status.load();
      if (status == JobStatus::kRunning || status == JobStatus::kDone) {
        return JobJson(*it->second);
      }
    }
    auto job = std::make_shared<Job>();
    job->id = id;
    job->dictionary_version = dict.version();
    if (auto cached = cache_.Get("grouping", content_key)) {
      job->result = Json::parse(*cached);
      job->status = JobStatus::kDone;
      jobs_[id] = job;
      return JobJson(*job);
    }
    jobs_[id] = job;
    GroupingConfig cfg;
    cfg.weight_candidates = req.weight_candidates;
    cfg.projection.seed = req.seed;
    job->thread = std::jthread([this, job, metas = std::move(metas), dict = std::move(dict), cfg,
                                content_key](std::stop_token stop) {
      try {
        auto result = BuildGroups(metas, dict, provider_, cfg, stop);
        Json body = result;
        cache_.Put("grouping", content_key, body.dump());
        std::unique_lock l(mu_);
        job->result = std::move(body);
        job->status = JobStatus::kDone;
      } catch (const Error& e) {
        std::unique_lock l(mu_);
        job->error = e;
        job->status = e.code() == ErrorCode::kCancelled ? JobStatus::kCancelled : JobStatus::kFailed;
      }
    });
    return JobJson(*job);
  }

  // Throws Stale when the job predates the current dictionary.
  Json GroupingStatus(const std::string& id) const {
    std::shared_lock lock(mu_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw UnknownHandle("no grouping '" + id + "'");
    const Job& job = *it->second;
    if (job.dictionary_version != dictionary_.version()) {
      throw Error(ErrorCode::kStale, "grouping '" + id + "' was computed against dictionary v" +
                                         std::to_string(job.dictionary_version) +
                                         ", current is v" +
                                         std::to_string(dictionary_.version()));
    }
    if (job.status == JobStatus::kFailed) throw *job.error;
    return JobJson(job);
  }

  // Blocks until the job leaves the running state (tests and CLI).
  void WaitForGrouping(const std::string& id) {
    std::shared_ptr<Job> job;
    {
      std::shared_lock lock(mu_);
      auto it = jobs_.find(id);
      if (it == jobs_.end()) throw UnknownHandle("no grouping '" + id + "'");
      job = it->second;
    }
    if (job->thread.joinable()) job->thread.join();
  }

  // --- vulnerability -----------------------------------------------------

  Json Vulnerability(const std::string& id, std::optional<std::size_t> threshold = {}) const {
    const auto& table = RequireDataset(id);
    const auto dict = dictionary();
    Json out = BuildProfile(table, dict, threshold.value_or(config_.vulnerable_threshold));
    out["dictionary_version"] = dict.version();
    return out;
  }

  Json Relevance(const std::string& vulnerable_id, std::vector<std::string> candidate_ids) const {
    const auto& table = RequireDataset(vulnerable_id);
    if (candidate_ids.empty()) {
      for (const auto& t : corpus_->tables()) candidate_ids.push_back(t.meta.id);
    }
    std::vector<const DatasetTable*> candidates;
    for (const auto& id : candidate_ids) candidates.push_back(&RequireDataset(id));
    const auto dict = dictionary();
    const auto profile = BuildProfile(table, dict, config_.vulnerable_threshold);
    return {{"vulnerable_id", vulnerable_id},
            {"dictionary_version", dict.version()},
            {"profile", profile},
            {"partners", RankRelevance(profile, candidates)}};
  }

  // --- pairs -------------------------------------------------------------

  Json Pairs(const std::vector<std::string>& ids, std::optional<double> alpha = {}) {
    std::vector<const DatasetTable*> tables;
    for (const auto& id : ids) tables.push_back(&RequireDataset(id));
    const auto dict = dictionary();
    PairRiskOptions opts;
    opts.alpha = alpha.value_or(config_.alpha);

    const Json key_material = {{"snapshot", snapshot_id_},
                               {"dictionary", dict.attributes()},
                               {"ids", ids},
                               {"alpha", opts.alpha}};
    const std::string content_key = HexDigest(Hash64(key_material.dump()));
    std::vector<PairRisk> pairs;
    Json ranked;
    if (auto cached = cache_.Get("pairs", content_key)) {
      ranked = Json::parse(*cached);
    } else {
      ranked = Json::array();
      for (const auto& p : RankPairs(tables, dict, opts)) ranked.push_back(PairToJson(p));
      cache_.Put("pairs", content_key, ranked.dump());
    }
    std::unique_lock lock(mu_);
    last_pair_selection_ = ids;
    for (auto& p : ranked) {
      auto it = last_keys_.find(PairKey(p["a"], p["b"]));
      p["last_used_key"] = it == last_keys_.end() ? Json(nullptr) : Json(it->second);
    }
    return {{"snapshot_id", snapshot_id_},
            {"dictionary_version", dict.version()},
            {"pairs", std::move(ranked)}};
  }

  // --- join --------------------------------------------------------------

  Json JoinPair(const std::string& a_id, const std::string& b_id,
                const std::vector<std::string>& key, NumericJoinMode mode = NumericJoinMode::kBinned,
                std::optional<NmiNormalization> nmi = {}) {
    const auto& a = RequireDataset(a_id);
    const auto& b = RequireDataset(b_id);
    auto outcome = std::make_shared<JoinOutcome>(Join(a, b, {key}, {mode}));
    Json body = {{"outcome", *outcome}};
    try {
      body["suggestions"] = SuggestFeatures(*outcome, a, b, nmi.value_or(config_.nmi_mode));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTooFewMatches) throw;
      body["suggestions"] = nullptr;
      body["suggestions_error"] = {{"code", ErrorCodeName(e.code())}, {"message", e.detail()}};
    }
    const Json id_material = {{"snapshot", snapshot_id_},
                              {"a", a_id},
                              {"b", b_id},
                              {"key", outcome->key.attributes},
                              {"mode", mode == NumericJoinMode::kRaw ? "raw" : "binned"}};
    const std::string id = HexDigest(Hash64(id_material.dump()));
    body["join_id"] = id;
    std::unique_lock lock(mu_);
    joins_[id] = outcome;
    last_keys_[PairKey(a_id, b_id)] = outcome->key.attributes;
    return body;
  }

  Json Match(const std::string& join_id, std::size_t index) const {
    std::shared_ptr<const JoinOutcome> outcome;
    {
      std::shared_lock lock(mu_);
      auto it = joins_.find(join_id);
      if (it == joins_.end()) throw UnknownHandle("no join '" + join_id + "'");
      outcome = it->second;
    }
    if (index >= outcome->match_count) {
      throw UnknownHandle("match " + std::to_string(index) + " out of range");
    }
    return GetMatchDetail(*outcome, corpus_->Get(outcome->dataset_a),
                          corpus_->Get(outcome->dataset_b), index);
  }

  Json State() const {
    std::shared_lock lock(mu_);
    Json keys = Json::object();
    for (const auto& [pair, key] : last_keys_) keys[pair] = key;
    return {{"snapshot_id", snapshot_id_},
            {"dictionary_version", dictionary_.version()},
            {"filters",
             {{"tags", filter_.tags},
              {"portals", filter_.portals},
              {"granularity", filter_.granularity ? Json(GranularityName(*filter_.granularity))
                                                  : Json(nullptr)}}},
            {"last_grouping_id", last_grouping_id_ ? Json(*last_grouping_id_) : Json(nullptr)},
            {"last_pair_selection", last_pair_selection_},
            {"last_keys", std::move(keys)}};
  }

  void CancelJobs() {
    std::vector<std::shared_ptr<Job>> all;
    {
      std::unique_lock lock(mu_);
      for (auto& [id, job] : jobs_) all.push_back(job);
    }
    for (auto& job : all) {
      job->thread.request_stop();
      if (job->thread.joinable()) job->thread.join();
    }
  }

 private:
  struct Job {
    std::string id;
    std::uint64_t dictionary_version = 0;
    std::atomic<JobStatus> status{JobStatus::kRunning};
    Json result;
    std::optional<Error> error;
    std::jthread thread;
  };

  static std::string PairKey(const std::string& a, const std::string& b) {
    return a < b ? a + "|" + b : b + "|" + a;
  }

  const DatasetTable& RequireDataset(const std::string& id) const {
    const auto* t = corpus_->Find(id);
    if (!t) throw Error(ErrorCode::kNotFound, "unknown dataset '" + id + "'");
    return *t;
  }

  // Caller holds mu_.
  Json JobJson(const Job& job) const {
    Json out = {{"grouping_id", job.id},
                {"status", JobStatusName(job.status.load())},
                {"dictionary_version", job.dictionary_version}};
    if (job.status == JobStatus::kDone) out["result"] = job.result;
    if (job.error) {
      out["error"] = {{"code", ErrorCodeName(job.error->code())}, {"message", job.error->detail()}};
    }
    return out;
  }

  std::shared_ptr<const Corpus> corpus_;
  std::string snapshot_id_;
  mutable std::shared_mutex mu_;
  PrivacyDictionary dictionary_;
  ServiceConfig config_;
  EmbeddingProvider provider_;
  ArtifactCache cache_;
  CorpusFilter filter_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::optional<std::string> last_grouping_id_;
  std::vector<std::string> last_pair_selection_;
  std::map<std::string, std::vector<std::string>> last_keys_;
  std::map<std::string, std::shared_ptr<const JoinOutcome>> joins_;
};

// ---------------------------------------------------------------------------
// HTTP
// ---------------------------------------------------------------------------

inline int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidKey:
    case ErrorCode::kEmptyKey:
    case ErrorCode::kNotFound:
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidAttributeName:
      return 400;
    case ErrorCode::kStale:
    case ErrorCode::kCancelled:
      return 409;
    case ErrorCode::kIoError:
      return 500;
    case ErrorCode::kNetworkError:
    case ErrorCode::kMalformedResponse:
      return 502;
    default:
      return 422;
  }
}

inline Json ErrorBody(std::string_view code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

namespace internal {

inline std::set<std::string> SplitList(const std::string& s) {
  std::set<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    auto part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!part.empty()) out.insert(part);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

inline Json ParseRequestBody(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  auto j = Json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kParseError, "request body must be a JSON object");
  }
  return j;
}

inline std::vector<std::string> StringList(const Json& body, const char* key) {
  if (!body.contains(key)) return {};
  const auto& v = body[key];
  if (!v.is_array()) throw Error(ErrorCode::kInvalidArgument, std::string(key) + " must be a list");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) {
      throw Error(ErrorCode::kInvalidArgument, std::string(key) + " must hold strings");
    }
    out.push_back(s);
  }
  return out;
}

inline std::string RequiredString(const Json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, std::string("missing string field '") + key + "'");
  }
  return body[key];
}

}  // namespace internal

class Server {
 public:
  explicit Server(Session& session) : session_(session) { Routes(); }

  // Binds to the given port (0 picks a free one) and returns the bound port.
  int Bind(const std::string& host, int port) {
    if (port == 0) return server_.bind_to_any_port(host);
    if (!server_.bind_to_port(host, port)) {
      throw Error(ErrorCode::kIoError, "cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
  }

  // Blocks until Stop().
  void Run() { server_.listen_after_bind(); }
  void Stop() { server_.stop(); }
  void WaitUntilReady() { server_.wait_until_ready(); }

 private:
  using Handler = std::function<Json(const httplib::Request&, httplib::Response&)>;

  void Reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  httplib::Server::Handler Wrap(Handler h) {
    return [this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        res.status = 200;
        Json body = h(req, res);
        Reply(res, res.status, body);
      } catch (const Error& e) {
        Reply(res, HttpStatusFor(e.code()), ErrorBody(ErrorCodeName(e.code()), e.detail()));
      } catch (const UnknownHandle& e) {
        Reply(res, 404, ErrorBody("NotFound", e.what()));
      } catch (const Json::exception& e) {
        Reply(res, 400, ErrorBody("ParseError", e.what()));
      } catch (const std::exception& e) {
        Reply(res, 500, ErrorBody("Internal", e.what()));
      }
    };
  }

  void Routes() {
    using internal::ParseRequestBody;
    using internal::RequiredString;
    using internal::StringList;

    server_.Get("/health", Wrap([](const auto&, auto&) { return Json{{"ok", true}}; }));

    server_.Get("/state", Wrap([this](const auto&, auto&) { return session_.State(); }));

    server_.Get("/corpus", Wrap([this](const httplib::Request& req, auto&) {
      CorpusFilter f;
      if (req.has_param("tags")) f.tags = internal::SplitList(req.get_param_value("tags"));
      if (req.has_param("portals")) f.portals = internal::SplitList(req.get_param_value("portals"));
      if (req.has_param("granularity") && !req.get_param_value("granularity").empty()) {
        f.granularity = ParseGranularity(req.get_param_value("granularity"));
      }
      return session_.ListCorpus(f);
    }));

    server_.Get("/dictionary", Wrap([this](const auto&, auto&) {
      return session_.DictionaryJson();
    }));

    server_.Put("/dictionary", Wrap([this](const httplib::Request& req, auto&) {
      const auto body = ParseRequestBody(req);
      if (!body.contains("attributes")) {
        throw Error(ErrorCode::kInvalidArgument, "missing field 'attributes'");
      }
      return session_.ReplaceDictionary(StringList(body, "attributes"));
    }));

    server_.Post("/groupings", Wrap([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = ParseRequestBody(req);
      GroupingRequest g;
      g.dataset_ids = StringList(body, "dataset_ids");
      if (body.contains("weight_candidates")) {
        g.weight_candidates = body["weight_candidates"].get<std::vector<double>>();
        if (g.weight_candidates.empty()) {
          throw Error(ErrorCode::kInvalidArgument, "weight_candidates is empty");
        }
      }
      g.seed = body.value("seed", session_.config().seed);
      auto out = session_.StartGrouping(std::move(g));
      res.status = out["status"] == "done" ? 200 : 202;
      return out;
    }));

    server_.Get(R"(/groupings/([0-9a-f]+))", Wrap([this](const httplib::Request& req, auto&) {
      return session_.GroupingStatus(req.matches[1]);
    }));

    server_.Get(R"(/datasets/([^/]+)/vulnerability)",
                Wrap([this](const httplib::Request& req, auto&) {
                  std::optional<std::size_t> threshold;
                  if (req.has_param("threshold")) {
                    threshold = internal::ParseNumber<std::size_t>(
                        "threshold", req.get_param_value("threshold"));
                  }
                  return session_.Vulnerability(req.matches[1], threshold);
                }));

    server_.Post("/pairs", Wrap([this](const httplib::Request& req, auto&) {
      const auto body = ParseRequestBody(req);
      std::optional<double> alpha;
      if (body.contains("alpha")) alpha = body["alpha"].get<double>();
      return session_.Pairs(StringList(body, "dataset_ids"), alpha);
    }));

    server_.Post("/relevance", Wrap([this](const httplib::Request& req, auto&) {
      const auto body = ParseRequestBody(req);
      return session_.Relevance(RequiredString(body, "vulnerable_id"),
                                StringList(body, "dataset_ids"));
    }));

    server_.Post("/join", Wrap([this](const httplib::Request& req, auto&) {
      const auto body = ParseRequestBody(req);
      NumericJoinMode mode = NumericJoinMode::kBinned;
      if (body.value("numeric_mode", "binned") == "raw") mode = NumericJoinMode::kRaw;
      std::optional<NmiNormalization> nmi;
      if (body.contains("nmi_mode")) nmi = ParseNmiNormalization(body["nmi_mode"].get<std::string>());
      return session_.JoinPair(RequiredString(body, "a"), RequiredString(body, "b"),
                               StringList(body, "key"), mode, nmi);
    }));

    server_.Get(R"(/join/([0-9a-f]+)/match/(\d+))", Wrap([this](const httplib::Request& req, auto&) {
      return session_.Match(req.matches[1],
                            internal::ParseNumber<std::size_t>("match", req.matches[2]));
    }));
  }

  Session& session_;
  httplib::Server server_;
};

}  // namespace joinrisk

#endif  // JOINRISK_SERVICE_HPP_
