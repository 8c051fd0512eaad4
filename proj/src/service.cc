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

#include "dptradeoff/service.h"

#include <chrono>
#include <fstream>
#include <random>
#include <thread>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "httplib.h"

namespace dptradeoff {
namespace {

using nlohmann::json;

// Grid on which the state endpoint reports the posterior-mean front.
constexpr int kStateGridSize = 101;

ApiResponse Error(int status, const std::string& message) {
  return {status, json{{"error", message}}};
}

ApiResponse FromStatus(const absl::Status& s) {
  switch (s.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
      return Error(400, std::string(s.message()));
    case absl::StatusCode::kNotFound:
      return Error(404, std::string(s.message()));
    case absl::StatusCode::kFailedPrecondition:
      return Error(409, std::string(s.message()));
    default:
      return Error(500, std::string(s.message()));
  }
}

ApiResponse Busy() {
  return {409, json{{"error", "session is busy"}, {"status", "Running"}}};
}

absl::StatusOr<json> ParseBody(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("request body is not valid JSON: %s", e.what()));
  }
}

std::string NewSessionId(uint64_t counter) {
  static std::mt19937_64 token_rng{std::random_device{}()};
  return absl::StrFormat("s%d-%08x", counter,
                         static_cast<uint32_t>(token_rng()));
}

json PointJson(const NormalizationSpec& norm, double p, double alpha) {
  json j{{"p", p}, {"alpha", alpha}};
  if (absl::StatusOr<double> eps = DenormalizePrivacy(norm, p); eps.ok()) {
    j["epsilon"] = *eps;
  }
  j["accuracy"] = DenormalizeAccuracy(norm, alpha);
  return j;
}

json PrefSummary(const Session& session) {
  return json{{"mean_w", ToJson(session.pref_posterior().MeanWeights())},
              {"ess", session.pref_posterior().EffectiveSampleSize()}};
}

json FrontSummary(const Session& session) {
  const FrontPosterior& front = session.front_posterior();
  return json{{"ess", front.EffectiveSampleSize()},
              {"particle_count", front.particle_count()},
              {"observations", session.observations().size()},
              {"rejuvenations", front.rejuvenations()}};
}

}  // namespace

std::string SessionStatus(Session& session) {
  if (session.done()) return "Done";
  absl::StatusOr<StepKind> kind = session.NextStep();
  if (!kind.ok()) return "Done";
  return *kind == StepKind::kEvaluate ? "AwaitingEvaluation" : "AwaitingChoice";
}

std::shared_ptr<SessionService::Entry> SessionService::Find(
    const std::string& id) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

ApiResponse SessionService::CreateSession(const std::string& body) {
  absl::StatusOr<json> request = ParseBody(body);
  if (!request.ok()) return FromStatus(request.status());
  if (!request->is_object()) return Error(400, "expected a JSON object");
  uint64_t seed = 0;
  if (request->contains("seed")) {
    const json& s = request->at("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer()) {
      return Error(400, "seed: expected a non-negative integer");
    }
    seed = s.get<uint64_t>();
    request->erase("seed");
  } else {
    seed = std::random_device{}();
  }
  absl::StatusOr<Config> config = ApplyOverrides(base_config_, *request);
  if (!config.ok()) return FromStatus(config.status());
  absl::StatusOr<Session> session = Session::CreateLive(*config, seed);
  if (!session.ok()) return FromStatus(session.status());

  auto entry = std::make_shared<Entry>(*std::move(session));
  entry->created_at = CurrentTimestamp();
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mu_);
    id = NewSessionId(next_id_++);
    sessions_.emplace(id, entry);
  }
  std::lock_guard<std::mutex> lock(entry->mu);
  return {201, json{{"id", id},
                    {"status", SessionStatus(entry->session)},
                    {"seed", seed},
                    {"created_at", entry->created_at}}};
}

ApiResponse SessionService::GetQuery(const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return Error(404, "unknown session " + id);
  std::unique_lock<std::mutex> lock(entry->mu, std::try_to_lock);
  if (!lock.owns_lock()) return Busy();
  Session& session = entry->session;
  if (session.done()) return Error(409, "session is done");
  absl::StatusOr<CurveQuery> query = session.PendingQuery();
  if (!query.ok()) {
    ApiResponse r = FromStatus(query.status());
    r.body["status"] = SessionStatus(session);
    return r;
  }
  json points = json::array();
  for (const TradeOffPoint& y : query->points) {
    points.push_back(PointJson(session.config().normalization, y.privacy,
                               y.accuracy));
  }
  return {200, json{{"curve", query->params.has_value()
                                  ? ToJson(*query->params)
                                  : json()},
                    {"points", points},
                    {"step", session.step()},
                    {"status", SessionStatus(session)}}};
}

ApiResponse SessionService::PostChoice(const std::string& id,
                                       const std::string& body) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return Error(404, "unknown session " + id);
  absl::StatusOr<json> request = ParseBody(body);
  if (!request.ok()) return FromStatus(request.status());
  if (!request->is_object() || !request->contains("chosen_index") ||
      !request->at("chosen_index").is_number_integer()) {
    return Error(400, "chosen_index: expected an integer");
  }
  const int64_t index = request->at("chosen_index").get<int64_t>();
  std::unique_lock<std::mutex> lock(entry->mu, std::try_to_lock);
  if (!lock.owns_lock()) return Busy();
  Session& session = entry->session;
  if (session.done()) return Error(409, "session is done");
  absl::StatusOr<StepKind> kind = session.NextStep();
  if (!kind.ok()) return FromStatus(kind.status());
  if (*kind != StepKind::kInteract) {
    return {409, json{{"error", "session is awaiting an evaluation"},
                      {"status", SessionStatus(session)}}};
  }
  if (!session.has_pending_query()) {
    return {409, json{{"error", "no query presented; GET the query first"},
                      {"status", SessionStatus(session)}}};
  }
  absl::StatusOr<CurveQuery> query = session.PendingQuery();
  if (!query.ok()) return FromStatus(query.status());
  if (index < 0 || index >= static_cast<int64_t>(query->size())) {
    return Error(400, absl::StrFormat("chosen_index %d outside [0, %d)", index,
                                      query->size()));
  }
  if (absl::Status s = session.SubmitChoice(static_cast<int>(index)); !s.ok()) {
    return FromStatus(s);
  }
  return {200, json{{"status", SessionStatus(session)},
                    {"step", session.step()},
                    {"pref_summary", PrefSummary(session)}}};
}

ApiResponse SessionService::PostEvaluate(const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return Error(404, "unknown session " + id);
  std::unique_lock<std::mutex> lock(entry->mu, std::try_to_lock);
  if (!lock.owns_lock()) return Busy();
  Session& session = entry->session;
  if (session.done()) return Error(409, "session is done");
  absl::StatusOr<StepKind> kind = session.NextStep();
  if (!kind.ok()) return FromStatus(kind.status());
  if (*kind != StepKind::kEvaluate) {
    return {409, json{{"error", "session is awaiting a choice"},
                      {"status", SessionStatus(session)}}};
  }
  absl::StatusOr<FrontObservation> obs = session.Evaluate();
  if (!obs.ok()) {
    // Oracle failures are upstream errors, not client mistakes.
    ApiResponse r = obs.status().code() == absl::StatusCode::kFailedPrecondition
                        ? FromStatus(obs.status())
                        : Error(502, std::string(obs.status().message()));
    r.body["status"] = SessionStatus(session);
    return r;
  }
  return {200,
          json{{"observation", PointJson(session.config().normalization,
                                         obs->privacy, obs->accuracy)},
               {"front_summary", FrontSummary(session)},
               {"step", session.step()},
               {"status", SessionStatus(session)}}};
}

ApiResponse SessionService::GetState(const std::string& id) {
  std::shared_ptr<Entry> entry = Find(id);
  if (entry == nullptr) return Error(404, "unknown session " + id);
  std::unique_lock<std::mutex> lock(entry->mu, std::try_to_lock);
  if (!lock.owns_lock()) return Busy();
  Session& session = entry->session;
  const NormalizationSpec& norm = session.config().normalization;

  json obs = json::array();
  for (const FrontObservation& o : session.observations()) {
    obs.push_back(PointJson(norm, o.privacy, o.accuracy));
  }
  const std::vector<double> grid = UniformGrid(kStateGridSize);
  absl::StatusOr<MeanCurve> curve =
      PosteriorMeanCurve(session.front_posterior(), grid);
  if (!curve.ok()) return FromStatus(curve.status());
  json mean = json::array();
  json lower = json::array();
  json upper = json::array();
  json grid_json = json::array();
  json eps_grid = json::array();
  for (const MeanCurvePoint& pt : curve->points) {
    grid_json.push_back(pt.privacy);
    eps_grid.push_back(DenormalizePrivacy(norm, pt.privacy).value_or(0));
    mean.push_back(pt.mean);
    lower.push_back(pt.lower);
    upper.push_back(pt.upper);
  }
  absl::StatusOr<UtilityOptimum> opt = session.CurrentOptimum();
  if (!opt.ok()) return FromStatus(opt.status());
  // Live sessions have no ground truth: preference error and regret are
  // omitted rather than estimated.
  json trace = json::array();
  for (const MetricPoint& m : session.metric_trace()) {
    trace.push_back({{"step", m.step},
                     {"kind", StepKindName(m.kind)},
                     {"p_star", m.p_star},
                     {"u_star", m.u_star}});
  }
  return {200,
          json{{"id", id},
               {"status", SessionStatus(session)},
               {"created_at", entry->created_at},
               {"step", session.step()},
               {"num_steps", session.config().loop.num_steps},
               {"obs_history", obs},
               {"choice_count", session.choices().size()},
               {"grid", grid_json},
               {"epsilon_grid", eps_grid},
               {"posterior_mean_curve", mean},
               {"credible_band", {{"lower", lower}, {"upper", upper}}},
               {"band_degenerate", curve->degenerate},
               {"mean_w", ToJson(session.pref_posterior().MeanWeights())},
               {"pref_summary", PrefSummary(session)},
               {"front_summary", FrontSummary(session)},
               {"p_star", opt->privacy},
               {"p_star_denormalized",
                DenormalizePrivacy(norm, opt->privacy).value_or(0)},
               {"u_star", opt->utility},
               {"normalization",
                {{"eps_min", norm.eps_min},
                 {"eps_max", norm.eps_max},
                 {"alpha_min", norm.alpha_min},
                 {"alpha_max", norm.alpha_max}}},
               {"metric_trace", trace}}};
}

ApiResponse SessionService::Handle(const std::string& method,
                                   const std::string& path,
                                   const std::string& body) {
  std::vector<std::string> parts =
      absl::StrSplit(path, '/', absl::SkipEmpty());
  if (method == "GET" && parts.size() == 1 && parts[0] == "healthz") {
    return {200, json{{"ok", true}}};
  }
  if (parts.empty() || parts[0] != "sessions") return Error(404, "not found");
  if (parts.size() == 1) {
    if (method == "POST") return CreateSession(body);
    return Error(405, "method not allowed");
  }
  if (parts.size() != 3) return Error(404, "not found");
  const std::string& id = parts[1];
  const std::string& action = parts[2];
  if (action == "query" && method == "GET") return GetQuery(id);
  if (action == "choice" && method == "POST") return PostChoice(id, body);
  if (action == "evaluate" && method == "POST") return PostEvaluate(id);
  if (action == "state" && method == "GET") return GetState(id);
  if (action == "query" || action == "choice" || action == "evaluate" ||
      action == "state") {
    return Error(405, "method not allowed");
  }
  return Error(404, "not found");
}

json SessionService::Snapshot() {
  std::vector<std::pair<std::string, std::shared_ptr<Entry>>> entries;
  {
    std::lock_guard<std::mutex> lock(mu_);
    entries.assign(sessions_.begin(), sessions_.end());
  }
  json out = json::object();
  for (auto& [id, entry] : entries) {
    std::lock_guard<std::mutex> lock(entry->mu);
    json record = ToJson(MakeRunRecord(entry->session));
    record["created_at"] = entry->created_at;
    record["status"] = SessionStatus(entry->session);
    out[id] = std::move(record);
  }
  return out;
}

absl::Status Serve(const std::string& bind, const Config& config,
                   const std::atomic<bool>& stop,
                   const std::string& snapshot_path,
                   std::atomic<int>* bound_port) {
  const size_t colon = bind.rfind(':');
  int port = 0;
  if (colon == std::string::npos ||
      !absl::SimpleAtoi(bind.substr(colon + 1), &port) || port < 0 ||
      port > 65535) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bind address '%s' is not host:port", bind));
  }
  const std::string host = bind.substr(0, colon);
  SessionService service(config);
  httplib::Server server;
  auto adapt = [&service](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r = service.Handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  server.Get(R"(/.*)", adapt);
  server.Post(R"(/.*)", adapt);
  // The library default adds SO_REUSEPORT, which would let a second server
  // silently share a port that is already in use.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });

  if (port == 0) {
    port = server.bind_to_any_port(host);
    if (port <= 0) {
      return absl::UnavailableError(
          absl::StrFormat("cannot bind %s", bind));
    }
  } else if (!server.bind_to_port(host, port)) {
    return absl::UnavailableError(absl::StrFormat(
        "cannot bind %s (address in use or not permitted)", bind));
  }
  if (bound_port != nullptr) bound_port->store(port);
  std::thread listener([&server] { server.listen_after_bind(); });
  // Stopping before the listener runs would leave it running forever.
  server.wait_until_ready();
  while (!stop.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  server.stop();
  listener.join();
  if (!snapshot_path.empty()) {
    std::ofstream out(snapshot_path);
    if (!out) {
      return absl::InternalError(
          absl::StrFormat("cannot write snapshot %s", snapshot_path));
    }
    out << service.Snapshot().dump(2) << "\n";
  }
  return absl::OkStatus();
}

}  // namespace dptradeoff
