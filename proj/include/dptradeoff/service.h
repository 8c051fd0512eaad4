// Copyright 2026 The DP Trade-off Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP JSON API for live elicitation sessions:
//
//   POST /sessions                 {config overrides..., "seed"?} -> {id, status}
//   GET  /sessions/{id}/query      -> {curve, points: [{p, alpha, ...}], step}
//   POST /sessions/{id}/choice     {chosen_index} -> {status, pref_summary}
//   POST /sessions/{id}/evaluate   -> {observation, front_summary, status}
//   GET  /sessions/{id}/state      -> posterior summaries and metric trace
//   GET  /healthz                  -> {ok: true}
//
// Requests for different sessions run concurrently; requests for one session
// are serialized, and a request that finds its session busy is rejected with
// 409 and status "Running".

#ifndef DPTRADEOFF_SERVICE_H_
#define DPTRADEOFF_SERVICE_H_

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/config.h"
#include "dptradeoff/session.h"
#include "json.hpp"

namespace dptradeoff {

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// Transport-independent request handling; the HTTP server is a thin adapter.
class SessionService {
 public:
  explicit SessionService(Config base_config)
      : base_config_(std::move(base_config)) {}

  ApiResponse Handle(const std::string& method, const std::string& path,
                     const std::string& body);

  ApiResponse CreateSession(const std::string& body);
  ApiResponse GetQuery(const std::string& id);
  ApiResponse PostChoice(const std::string& id, const std::string& body);
  ApiResponse PostEvaluate(const std::string& id);
  ApiResponse GetState(const std::string& id);

  // All sessions as run records keyed by id, for snapshots.
  nlohmann::json Snapshot();

 private:
  struct Entry {
    std::mutex mu;
    Session session;
    std::string created_at;
    explicit Entry(Session s) : session(std::move(s)) {}
  };

  std::shared_ptr<Entry> Find(const std::string& id);

  Config base_config_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  uint64_t next_id_ = 1;
};

// Status string of a session: AwaitingEvaluation, AwaitingChoice or Done.
std::string SessionStatus(Session& session);

// Serves the API on `bind` ("host:port") until `stop` becomes true. Fails
// when the address cannot be bound. When `snapshot_path` is non-empty, all
// sessions are written there as JSON on shutdown.
absl::Status Serve(const std::string& bind, const Config& config,
                   const std::atomic<bool>& stop,
                   const std::string& snapshot_path = "",
                   std::atomic<int>* bound_port = nullptr);

}  // namespace dptradeoff

#endif  // DPTRADEOFF_SERVICE_H_
