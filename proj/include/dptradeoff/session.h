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

// The interactive loop: alternately evaluate the accuracy oracle at the
// privacy level with the largest knowledge gradient (updating the front
// posterior) and show the decision-maker the most informative hypothetical
// curve (updating the preference posterior). Simulation sessions know the
// true front and weights and track preference error and regret; live
// sessions are driven step by step by a human.

#ifndef DPTRADEOFF_SESSION_H_
#define DPTRADEOFF_SESSION_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/acquisition.h"
#include "dptradeoff/config.h"
#include "dptradeoff/front_model.h"
#include "dptradeoff/oracle.h"
#include "dptradeoff/preference.h"
#include "dptradeoff/random.h"
#include "json.hpp"

namespace dptradeoff {

// Dense grid on which the true optimum is located. It contains the default
// 201-point utility grid, so regret on that grid is never negative.
inline constexpr int kRegretGridSize = 2001;

enum class StepKind { kEvaluate, kInteract };
std::string StepKindName(StepKind kind);
absl::StatusOr<StepKind> ParseStepKind(const std::string& name);

struct MetricPoint {
  int step = 0;  // number of completed steps, starting at 1
  StepKind kind = StepKind::kEvaluate;
  std::optional<double> pref_error;  // simulation only
  std::optional<double> regret;      // simulation with a known front only
  double p_star = 0;
  double u_star = 0;

  friend bool operator==(const MetricPoint&, const MetricPoint&) = default;
};

// Source of the decision-maker's choices.
class ChoiceProvider {
 public:
  virtual ~ChoiceProvider() = default;
  // An error (e.g. a timeout) suspends the session without changing it.
  virtual absl::StatusOr<int> Choose(const CurveQuery& query) = 0;
};

// Boltzmann-rational decision-maker with fixed weights.
class SimulatedUser : public ChoiceProvider {
 public:
  SimulatedUser(PreferenceWeights weights, double temperature, Rng rng)
      : weights_(weights), temperature_(temperature), rng_(std::move(rng)) {}

  absl::StatusOr<int> Choose(const CurveQuery& query) override {
    return SimulateChoice(query, weights_, temperature_, rng_);
  }

 private:
  PreferenceWeights weights_;
  double temperature_;
  Rng rng_;
};

// Ground truth of a simulation.
struct SimulationTruth {
  PreferenceWeights weights;
  // Normalized true accuracy (clamped to [0, 1]) at a normalized privacy
  // level; empty when the oracle has no known noiseless front.
  std::function<double(double)> front;
  // Utility-maximizing privacy level on the dense regret grid.
  double best_privacy = 0;
  double best_utility = 0;
};

absl::StatusOr<SimulationTruth> MakeTruth(const Config& config,
                                          const Oracle& oracle,
                                          PreferenceWeights weights);

// U(y*_true; w) - U((p_star, h(p_star)); w). Errors with FailedPrecondition
// when no true front is available (live mode or an external oracle).
absl::StatusOr<double> RegretAt(double p_star, const SimulationTruth* truth);

// Regret of the recommendation of the given posteriors.
absl::StatusOr<double> ComputeRegret(const FrontPosterior& front,
                                     const PrefPosterior& pref,
                                     const SimulationTruth* truth,
                                     int grid_size);

class Session {
 public:
  // A simulated run: weights are drawn from the weight prior with the
  // seed's truth stream unless the config fixes them.
  static absl::StatusOr<Session> CreateSimulation(const Config& config,
                                                  uint64_t seed,
                                                  const Arm& arm);
  static absl::StatusOr<Session> CreateSimulation(const Config& config,
                                                  uint64_t seed) {
    return CreateSimulation(config, seed, config.loop.arms.front());
  }
  // A live session: choices come from outside and no truth is known.
  static absl::StatusOr<Session> CreateLive(const Config& config,
                                            uint64_t seed);

  // The kind of the next step. With the adaptive schedule this computes both
  // acquisitions once and caches the winner.
  absl::StatusOr<StepKind> NextStep();
  bool done() const { return step_ >= config_.loop.num_steps; }

  // The curve or pair to show next (computed once, then cached until a
  // choice is submitted).
  absl::StatusOr<CurveQuery> PendingQuery();
  bool has_pending_query() const { return pending_query_.has_value(); }

  // Records the decision-maker's pick on the pending query.
  absl::Status SubmitChoice(int chosen_index);

  // Selects a privacy level, queries the oracle and updates the front.
  absl::StatusOr<FrontObservation> Evaluate();

  // One step of the schedule; interactions ask `user`. A failing provider
  // returns Unavailable ("suspended") and leaves the histories unchanged.
  absl::Status RunStep(ChoiceProvider& user);

  // Current recommendation on the utility grid.
  absl::StatusOr<UtilityOptimum> CurrentOptimum() const;

  const Config& config() const { return config_; }
  const Arm& arm() const { return arm_; }
  uint64_t seed() const { return seed_; }
  int step() const { return step_; }
  int oracle_calls() const { return oracle_calls_; }
  const FrontPosterior& front_posterior() const { return front_; }
  const PrefPosterior& pref_posterior() const { return pref_; }
  const std::vector<FrontObservation>& observations() const {
    return observations_;
  }
  const std::vector<ChoiceRecord>& choices() const { return choices_; }
  const std::vector<MetricPoint>& metric_trace() const { return metrics_; }
  const std::optional<SimulationTruth>& truth() const { return truth_; }
  const Oracle& oracle() const { return oracle_; }

  // Weights of the simulated decision-maker, if any.
  std::optional<PreferenceWeights> true_weights() const;
  double SimulatorTemperature() const { return config_.SimulatorTemperature(); }

 private:
  Session(Config config, uint64_t seed, Arm arm, Oracle oracle,
          FrontPosterior front, PrefPosterior pref,
          std::optional<SimulationTruth> truth, Rng learner_rng);

  static absl::StatusOr<Session> Create(const Config& config, uint64_t seed,
                                        const Arm& arm, bool simulate);

  absl::StatusOr<double> SelectPrivacy();
  absl::StatusOr<CurveQuery> SelectQuery();
  absl::Status RecordMetrics(StepKind kind);

  Config config_;
  uint64_t seed_;
  Arm arm_;
  Oracle oracle_;
  FrontPrior candidate_prior_;
  FrontPosterior front_;
  PrefPosterior pref_;
  std::optional<SimulationTruth> truth_;
  Rng learner_rng_;
  Rng oracle_rng_;
  int step_ = 0;
  int oracle_calls_ = 0;
  std::vector<FrontObservation> observations_;
  std::vector<ChoiceRecord> choices_;
  std::vector<MetricPoint> metrics_;
  std::optional<CurveQuery> pending_query_;
  std::optional<double> pending_privacy_;
  std::optional<StepKind> pending_kind_;
};

struct RunRecord {
  uint64_t seed = 0;
  std::string arm;
  nlohmann::json config;
  std::optional<PreferenceWeights> w_true;
  std::vector<MetricPoint> metric_trace;
  std::vector<FrontObservation> observations;
  int choice_count = 0;
  int oracle_calls = 0;
  // Final recommendation: normalized and raw privacy, raw accuracy of the
  // posterior-mean front there, and its expected utility.
  double p_star = 0;
  double epsilon_star = 0;
  double alpha_star = 0;
  double u_star = 0;
  std::optional<double> final_regret;
  // Empty on success; otherwise the error that stopped the run early.
  std::string error;
  std::string created_at;
};

RunRecord MakeRunRecord(const Session& session);

nlohmann::json ToJson(const MetricPoint& point);
nlohmann::json ToJson(const RunRecord& record);
absl::StatusOr<RunRecord> RunRecordFromJson(const nlohmann::json& j);

// Drives `session` with `user` until it is done. Errors stop the loop and are
// returned; the session keeps everything completed before the failure.
absl::Status RunToCompletion(Session& session, ChoiceProvider& user);

// Creates a simulation session for (config, seed, arm), runs it to
// completion with the simulated decision-maker and returns its record. Step
// errors are captured in `RunRecord::error` with the partial trace.
absl::StatusOr<RunRecord> RunLoop(const Config& config, uint64_t seed,
                                  const Arm& arm);

struct BatchRow {
  int step = 0;
  std::string metric;  // "<arm>/<name>"
  double mean = 0;
  double std_error = 0;  // sample standard deviation / sqrt(n)
  int n = 0;
};

struct BatchReport {
  std::vector<RunRecord> records;
  // "<arm> seed <s>: <error>" for runs excluded from the aggregate.
  std::vector<std::string> failures;
  std::vector<BatchRow> rows;

  // Columns step,metric,mean,stderr,n.
  std::string ToCsv() const;
};

absl::StatusOr<BatchReport> RunBatch(const Config& config,
                                     std::span<const uint64_t> seeds,
                                     std::span<const Arm> arms);

// Aggregates per-step metrics of successful records.
std::vector<BatchRow> AggregateMetrics(std::span<const RunRecord> records);

std::string CurrentTimestamp();

}  // namespace dptradeoff

#endif  // DPTRADEOFF_SESSION_H_
