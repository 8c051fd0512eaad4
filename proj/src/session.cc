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

#include "dptradeoff/session.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <sstream>

#include "absl/strings/str_format.h"

namespace dptradeoff {
namespace {

using nlohmann::json;

json OptionalToJson(const std::optional<double>& v) {
  return v.has_value() ? json(*v) : json();
}

std::optional<double> OptionalFromJson(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

// Smallest noise scale assigned to a known front, so that its (irrelevant)
// likelihood stays finite.
constexpr double kMinKnownNoise = 1e-3;

}  // namespace

std::string StepKindName(StepKind kind) {
  return kind == StepKind::kEvaluate ? "evaluate" : "interact";
}

absl::StatusOr<StepKind> ParseStepKind(const std::string& name) {
  if (name == "evaluate") return StepKind::kEvaluate;
  if (name == "interact") return StepKind::kInteract;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown step kind '%s'", name));
}

absl::StatusOr<SimulationTruth> MakeTruth(const Config& config,
                                          const Oracle& oracle,
                                          PreferenceWeights weights) {
  if (absl::Status s = Validate(weights); !s.ok()) return s;
  SimulationTruth truth;
  truth.weights = weights;
  if (!oracle.has_truth()) return truth;
  const NormalizationSpec norm = config.normalization;
  // Validate the whole grid once so the stored closure cannot fail.
  const std::vector<double> grid = UniformGrid(kRegretGridSize);
  for (double p : {0.0, 1.0}) {
    absl::StatusOr<double> eps = DenormalizePrivacy(norm, p);
    if (!eps.ok()) return eps.status();
    absl::StatusOr<double> acc = oracle.NoiselessAccuracy(*eps);
    if (!acc.ok()) return acc.status();
  }
  truth.front = [norm, oracle](double p) {
    const double eps = *DenormalizePrivacy(norm, std::clamp(p, 0.0, 1.0));
    const double acc = *oracle.NoiselessAccuracy(eps);
    return std::clamp(NormalizeAccuracy(norm, acc), 0.0, 1.0);
  };
  truth.best_privacy = grid[0];
  truth.best_utility =
      ChebyshevUtilityUnchecked({grid[0], truth.front(grid[0])}, weights);
  for (size_t i = 1; i < grid.size(); ++i) {
    const double u =
        ChebyshevUtilityUnchecked({grid[i], truth.front(grid[i])}, weights);
    if (u > truth.best_utility) {
      truth.best_utility = u;
      truth.best_privacy = grid[i];
    }
  }
  return truth;
}

absl::StatusOr<double> RegretAt(double p_star, const SimulationTruth* truth) {
  if (truth == nullptr || !truth->front) {
    return absl::FailedPreconditionError(
        "regret needs the true front; unsupported in live mode");
  }
  if (!(p_star >= 0 && p_star <= 1)) {
    return absl::InvalidArgumentError("p_star outside [0, 1]");
  }
  return truth->best_utility -
         ChebyshevUtilityUnchecked({p_star, truth->front(p_star)},
                                   truth->weights);
}

absl::StatusOr<double> ComputeRegret(const FrontPosterior& front,
                                     const PrefPosterior& pref,
                                     const SimulationTruth* truth,
                                     int grid_size) {
  if (truth == nullptr || !truth->front) {
    return absl::FailedPreconditionError(
        "regret needs the true front; unsupported in live mode");
  }
  absl::StatusOr<UtilityOptimum> opt = MaxExpectedUtility(front, pref, grid_size);
  if (!opt.ok()) return opt.status();
  return RegretAt(opt->privacy, truth);
}

Session::Session(Config config, uint64_t seed, Arm arm, Oracle oracle,
                 FrontPosterior front, PrefPosterior pref,
                 std::optional<SimulationTruth> truth, Rng learner_rng)
    : config_(std::move(config)),
      seed_(seed),
      arm_(std::move(arm)),
      oracle_(std::move(oracle)),
      candidate_prior_(config_.EffectiveFrontPrior()),
      front_(std::move(front)),
      pref_(std::move(pref)),
      truth_(std::move(truth)),
      learner_rng_(std::move(learner_rng)),
      oracle_rng_(DeriveRng(seed, Stream::kOracle)) {}

absl::StatusOr<Session> Session::Create(const Config& config, uint64_t seed,
                                        const Arm& arm, bool simulate) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  absl::StatusOr<Oracle> oracle = Oracle::Create(config.oracle);
  if (!oracle.ok()) return oracle.status();

  std::optional<SimulationTruth> truth;
  if (simulate) {
    Rng truth_rng = DeriveRng(seed, Stream::kTruth);
    const PreferenceWeights w =
        config.loop.true_weights.value_or(
            SampleWeightPrior(config.priors.weights, truth_rng));
    absl::StatusOr<SimulationTruth> t = MakeTruth(config, *oracle, w);
    if (!t.ok()) return t.status();
    truth = *std::move(t);
  } else if (config.loop.known_weights) {
    return absl::InvalidArgumentError(
        "loop.known_weights is only available in simulation");
  }

  Rng learner = DeriveRng(seed, Stream::kLearner);
  std::optional<FrontPosterior> front;
  if (config.loop.known_front) {
    const double noise =
        std::max(config.oracle.noise_sigma / (config.normalization.alpha_max -
                                              config.normalization.alpha_min),
                 kMinKnownNoise);
    front = FrontPosterior::PointMass(
        {ClosedFormLogisticFront(config.oracle.c, config.normalization),
         NoiseScale{noise}});
  } else {
    RejuvenationConfig rejuvenation = config.loop.rejuvenation;
    absl::StatusOr<FrontPosterior> post =
        FrontPosterior::FromPrior(config.EffectiveFrontPrior(),
                                  config.loop.front_particles, learner,
                                  rejuvenation);
    if (!post.ok()) return post.status();
    front = *std::move(post);
  }
  std::optional<PrefPosterior> pref;
  if (config.loop.known_weights) {
    pref = PrefPosterior::PointMass(truth->weights);
  } else {
    absl::StatusOr<PrefPosterior> post = PrefPosterior::FromPrior(
        config.priors.weights, config.loop.pref_particles, learner);
    if (!post.ok()) return post.status();
    pref = *std::move(post);
  }
  return Session(config, seed, arm, *std::move(oracle), *std::move(front),
                 *std::move(pref), std::move(truth), std::move(learner));
}

absl::StatusOr<Session> Session::CreateSimulation(const Config& config,
                                                  uint64_t seed,
                                                  const Arm& arm) {
  return Create(config, seed, arm, /*simulate=*/true);
}

absl::StatusOr<Session> Session::CreateLive(const Config& config,
                                            uint64_t seed) {
  return Create(config, seed, config.loop.arms.front(), /*simulate=*/false);
}

std::optional<PreferenceWeights> Session::true_weights() const {
  if (!truth_.has_value()) return std::nullopt;
  return truth_->weights;
}

absl::StatusOr<double> Session::SelectPrivacy() {
  if (arm_.privacy == PrivacyStrategy::kRandom) {
    return RandomPrivacy(learner_rng_);
  }
  absl::StatusOr<PrivacySelection> sel =
      SelectNextPrivacy(front_, pref_, config_.acquisition, learner_rng_);
  if (!sel.ok()) return sel.status();
  return sel->privacy;
}

absl::StatusOr<CurveQuery> Session::SelectQuery() {
  const int q = config_.user_model.discretization;
  switch (arm_.query) {
    case QueryStrategy::kCurveKg: {
      absl::StatusOr<QuerySelection> sel =
          SelectNextCurve(front_, pref_, candidate_prior_, config_.user_model,
                          config_.acquisition, learner_rng_);
      if (!sel.ok()) return sel.status();
      return std::move(sel->query);
    }
    case QueryStrategy::kRandomCurve:
      return RandomCurve(candidate_prior_, q, learner_rng_);
    case QueryStrategy::kPairKg: {
      absl::StatusOr<QuerySelection> sel = SelectNextPair(
          front_, pref_, config_.user_model, config_.acquisition, learner_rng_);
      if (!sel.ok()) return sel.status();
      return std::move(sel->query);
    }
    case QueryStrategy::kRandomPair:
      return RandomPair(front_, q, learner_rng_);
  }
  return absl::InternalError("unknown query strategy");
}

absl::StatusOr<StepKind> Session::NextStep() {
  if (done()) return absl::FailedPreconditionError("session is done");
  if (pending_kind_.has_value()) return *pending_kind_;
  switch (config_.loop.schedule) {
    case Schedule::kInteractOnly:
      return StepKind::kInteract;
    case Schedule::kEvaluateOnly:
      return StepKind::kEvaluate;
    case Schedule::kAlternate:
      return step_ % 2 == 0 ? StepKind::kEvaluate : StepKind::kInteract;
    case Schedule::kAdaptive:
      break;
  }
  const bool kg_query = arm_.query == QueryStrategy::kCurveKg ||
                        arm_.query == QueryStrategy::kPairKg;
  if (step_ == 0 || !kg_query || arm_.privacy != PrivacyStrategy::kKg) {
    return step_ % 2 == 0 ? StepKind::kEvaluate : StepKind::kInteract;
  }
  absl::StatusOr<QuerySelection> query =
      arm_.query == QueryStrategy::kCurveKg
          ? SelectNextCurve(front_, pref_, candidate_prior_, config_.user_model,
                            config_.acquisition, learner_rng_)
          : SelectNextPair(front_, pref_, config_.user_model,
                           config_.acquisition, learner_rng_);
  if (!query.ok()) return query.status();
  absl::StatusOr<PrivacySelection> privacy =
      SelectNextPrivacy(front_, pref_, config_.acquisition, learner_rng_);
  if (!privacy.ok()) return privacy.status();
  const double query_kg = query->evaluated[query->best].value;
  const double privacy_kg = privacy->evaluated[privacy->best].value;
  pending_query_ = std::move(query->query);
  pending_privacy_ = privacy->privacy;
  pending_kind_ =
      query_kg > privacy_kg ? StepKind::kInteract : StepKind::kEvaluate;
  return *pending_kind_;
}

absl::StatusOr<CurveQuery> Session::PendingQuery() {
  absl::StatusOr<StepKind> kind = NextStep();
  if (!kind.ok()) return kind.status();
  if (*kind != StepKind::kInteract) {
    return absl::FailedPreconditionError(
        "session is awaiting an evaluation, not a choice");
  }
  if (!pending_query_.has_value()) {
    absl::StatusOr<CurveQuery> query = SelectQuery();
    if (!query.ok()) return query.status();
    pending_query_ = *std::move(query);
  }
  return *pending_query_;
}

absl::Status Session::SubmitChoice(int chosen_index) {
  absl::StatusOr<StepKind> kind = NextStep();
  if (!kind.ok()) return kind.status();
  if (*kind != StepKind::kInteract) {
    return absl::FailedPreconditionError(
        "session is awaiting an evaluation, not a choice");
  }
  if (!pending_query_.has_value()) {
    return absl::FailedPreconditionError(
        "no query has been presented; fetch the query first");
  }
  ChoiceRecord record{*pending_query_, chosen_index};
  if (absl::Status s = Validate(record); !s.ok()) return s;
  absl::StatusOr<PrefPosterior> updated =
      pref_.Updated(record, config_.user_model.temperature);
  if (!updated.ok()) return updated.status();
  pref_ = *std::move(updated);
  choices_.push_back(std::move(record));
  ++step_;
  pending_query_.reset();
  pending_privacy_.reset();
  pending_kind_.reset();
  return RecordMetrics(StepKind::kInteract);
}

absl::StatusOr<FrontObservation> Session::Evaluate() {
  absl::StatusOr<StepKind> kind = NextStep();
  if (!kind.ok()) return kind.status();
  if (*kind != StepKind::kEvaluate) {
    return absl::FailedPreconditionError(
        "session is awaiting a choice, not an evaluation");
  }
  if (!pending_privacy_.has_value()) {
    absl::StatusOr<double> p = SelectPrivacy();
    if (!p.ok()) return p.status();
    pending_privacy_ = *p;
  }
  absl::StatusOr<FrontObservation> obs =
      oracle_.Evaluate(config_.normalization, *pending_privacy_, oracle_rng_);
  if (!obs.ok()) return obs.status();
  front_ = front_.Updated(*obs, learner_rng_);
  observations_.push_back(*obs);
  ++oracle_calls_;
  ++step_;
  pending_query_.reset();
  pending_privacy_.reset();
  pending_kind_.reset();
  if (absl::Status s = RecordMetrics(StepKind::kEvaluate); !s.ok()) return s;
  return *obs;
}

absl::Status Session::RunStep(ChoiceProvider& user) {
  absl::StatusOr<StepKind> kind = NextStep();
  if (!kind.ok()) return kind.status();
  if (*kind == StepKind::kEvaluate) return Evaluate().status();
  absl::StatusOr<CurveQuery> query = PendingQuery();
  if (!query.ok()) return query.status();
  absl::StatusOr<int> choice = user.Choose(*query);
  if (!choice.ok()) {
    return absl::UnavailableError(absl::StrFormat(
        "session suspended: %s", choice.status().ToString()));
  }
  return SubmitChoice(*choice);
}

absl::StatusOr<UtilityOptimum> Session::CurrentOptimum() const {
  return MaxExpectedUtility(front_, pref_, config_.acquisition.p_grid_size);
}

absl::Status Session::RecordMetrics(StepKind kind) {
  absl::StatusOr<UtilityOptimum> opt = CurrentOptimum();
  if (!opt.ok()) return opt.status();
  MetricPoint point;
  point.step = step_;
  point.kind = kind;
  point.p_star = opt->privacy;
  point.u_star = opt->utility;
  if (truth_.has_value()) {
    point.pref_error = PreferenceError(pref_, truth_->weights);
    if (truth_->front) point.regret = *RegretAt(opt->privacy, &*truth_);
  }
  metrics_.push_back(point);
  return absl::OkStatus();
}

std::string CurrentTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

RunRecord MakeRunRecord(const Session& session) {
  RunRecord record;
  record.seed = session.seed();
  record.arm = session.arm().name;
  record.config = ToJson(session.config());
  record.w_true = session.true_weights();
  record.metric_trace = session.metric_trace();
  record.observations = session.observations();
  record.choice_count = static_cast<int>(session.choices().size());
  record.oracle_calls = session.oracle_calls();
  record.created_at = CurrentTimestamp();
  absl::StatusOr<UtilityOptimum> opt = session.CurrentOptimum();
  if (opt.ok()) {
    const NormalizationSpec& norm = session.config().normalization;
    record.p_star = opt->privacy;
    record.u_star = opt->utility;
    record.epsilon_star = DenormalizePrivacy(norm, opt->privacy).value_or(0);
    const std::vector<double> at = {opt->privacy};
    absl::StatusOr<MeanCurve> mean =
        PosteriorMeanCurve(session.front_posterior(), at);
    if (mean.ok()) {
      record.alpha_star = DenormalizeAccuracy(norm, mean->points[0].mean);
    }
    if (session.truth().has_value()) {
      absl::StatusOr<double> regret = RegretAt(opt->privacy, &*session.truth());
      if (regret.ok()) record.final_regret = *regret;
    }
  }
  return record;
}

json ToJson(const MetricPoint& point) {
  return json{{"step", point.step},
              {"kind", StepKindName(point.kind)},
              {"pref_error", OptionalToJson(point.pref_error)},
              {"regret", OptionalToJson(point.regret)},
              {"p_star", point.p_star},
              {"u_star", point.u_star}};
}

json ToJson(const RunRecord& record) {
  json trace = json::array();
  for (const MetricPoint& m : record.metric_trace) trace.push_back(ToJson(m));
  json obs = json::array();
  for (const FrontObservation& o : record.observations) {
    obs.push_back({{"p", o.privacy}, {"alpha", o.accuracy}});
  }
  return json{
      {"seed", record.seed},
      {"arm", record.arm},
      {"config", record.config},
      {"w_true",
       record.w_true.has_value() ? ToJson(*record.w_true) : json()},
      {"metric_trace", trace},
      {"observations", obs},
      {"choice_count", record.choice_count},
      {"oracle_calls", record.oracle_calls},
      {"final",
       {{"p_star", record.p_star},
        {"epsilon_star", record.epsilon_star},
        {"alpha_star", record.alpha_star},
        {"u_star", record.u_star},
        {"regret", OptionalToJson(record.final_regret)}}},
      {"error", record.error},
      {"created_at", record.created_at},
  };
}

absl::StatusOr<RunRecord> RunRecordFromJson(const json& j) {
  try {
    RunRecord record;
    record.seed = j.at("seed").get<uint64_t>();
    record.arm = j.at("arm").get<std::string>();
    record.config = j.at("config");
    if (!j.at("w_true").is_null()) {
      record.w_true = PreferenceWeights{j.at("w_true")[0].get<double>(),
                                        j.at("w_true")[1].get<double>()};
    }
    for (const json& m : j.at("metric_trace")) {
      MetricPoint point;
      point.step = m.at("step").get<int>();
      absl::StatusOr<StepKind> kind =
          ParseStepKind(m.at("kind").get<std::string>());
      if (!kind.ok()) return kind.status();
      point.kind = *kind;
      point.pref_error = OptionalFromJson(m.at("pref_error"));
      point.regret = OptionalFromJson(m.at("regret"));
      point.p_star = m.at("p_star").get<double>();
      point.u_star = m.at("u_star").get<double>();
      record.metric_trace.push_back(point);
    }
    for (const json& o : j.at("observations")) {
      record.observations.push_back(
          {o.at("p").get<double>(), o.at("alpha").get<double>()});
    }
    record.choice_count = j.at("choice_count").get<int>();
    record.oracle_calls = j.at("oracle_calls").get<int>();
    const json& final = j.at("final");
    record.p_star = final.at("p_star").get<double>();
    record.epsilon_star = final.at("epsilon_star").get<double>();
    record.alpha_star = final.at("alpha_star").get<double>();
    record.u_star = final.at("u_star").get<double>();
    record.final_regret = OptionalFromJson(final.at("regret"));
    record.error = j.at("error").get<std::string>();
    record.created_at = j.at("created_at").get<std::string>();
    return record;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("malformed run record: %s", e.what()));
  }
}

absl::Status RunToCompletion(Session& session, ChoiceProvider& user) {
  while (!session.done()) {
    if (absl::Status s = session.RunStep(user); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<RunRecord> RunLoop(const Config& config, uint64_t seed,
                                  const Arm& arm) {
  absl::StatusOr<Session> session = Session::CreateSimulation(config, seed, arm);
  if (!session.ok()) return session.status();
  SimulatedUser user(*session->true_weights(), config.SimulatorTemperature(),
                     DeriveRng(seed, Stream::kUser));
  const absl::Status status = RunToCompletion(*session, user);
  RunRecord record = MakeRunRecord(*session);
  if (!status.ok()) record.error = status.ToString();
  return record;
}

std::vector<BatchRow> AggregateMetrics(std::span<const RunRecord> records) {
  // Arms in first-seen order.
  std::vector<std::string> arms;
  for (const RunRecord& r : records) {
    if (std::find(arms.begin(), arms.end(), r.arm) == arms.end()) {
      arms.push_back(r.arm);
    }
  }
  using Getter = std::optional<double> (*)(const MetricPoint&);
  const std::pair<const char*, Getter> metrics[] = {
      {"pref_error", [](const MetricPoint& m) { return m.pref_error; }},
      {"regret", [](const MetricPoint& m) { return m.regret; }},
  };
  std::vector<BatchRow> rows;
  for (const std::string& arm : arms) {
    for (const auto& [name, get] : metrics) {
      std::map<int, std::vector<double>> by_step;
      for (const RunRecord& r : records) {
        if (r.arm != arm || !r.error.empty()) continue;
        for (const MetricPoint& m : r.metric_trace) {
          if (std::optional<double> v = get(m); v.has_value()) {
            by_step[m.step].push_back(*v);
          }
        }
      }
      for (const auto& [step, values] : by_step) {
        BatchRow row;
        row.step = step;
        row.metric = arm + "/" + name;
        row.n = static_cast<int>(values.size());
        double sum = 0;
        for (double v : values) sum += v;
        row.mean = sum / row.n;
        if (row.n > 1) {
          double ss = 0;
          for (double v : values) ss += (v - row.mean) * (v - row.mean);
          row.std_error = std::sqrt(ss / (row.n - 1)) / std::sqrt(row.n);
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string BatchReport::ToCsv() const {
  std::ostringstream out;
  out << "step,metric,mean,stderr,n\n";
  for (const BatchRow& row : rows) {
    out << absl::StrFormat("%d,%s,%.17g,%.17g,%d\n", row.step, row.metric,
                           row.mean, row.std_error, row.n);
  }
  return out.str();
}

absl::StatusOr<BatchReport> RunBatch(const Config& config,
                                     std::span<const uint64_t> seeds,
                                     std::span<const Arm> arms) {
  if (seeds.empty()) return absl::InvalidArgumentError("empty seed list");
  if (arms.empty()) return absl::InvalidArgumentError("empty arm list");
  BatchReport report;
  for (const Arm& arm : arms) {
    for (uint64_t seed : seeds) {
      absl::StatusOr<RunRecord> record = RunLoop(config, seed, arm);
      if (!record.ok()) return record.status();
      if (!record->error.empty()) {
        report.failures.push_back(absl::StrFormat(
            "%s seed %d: %s", arm.name, seed, record->error));
      }
      report.records.push_back(*std::move(record));
    }
  }
  report.rows = AggregateMetrics(report.records);
  return report;
}

}  // namespace dptradeoff
