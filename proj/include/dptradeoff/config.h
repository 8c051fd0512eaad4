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

// Engine configuration and its JSON form. A config document has the sections
// `normalization`, `oracle`, `user_model`, `acquisition`, `priors` and
// `loop`; every section and field is optional and defaults to the reference
// protocol (20 steps, T = 0.2, Dirichlet(2, 2) weights, sigmoid fronts).

#ifndef DPTRADEOFF_CONFIG_H_
#define DPTRADEOFF_CONFIG_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/acquisition.h"
#include "dptradeoff/front_model.h"
#include "dptradeoff/normalization.h"
#include "dptradeoff/oracle.h"
#include "dptradeoff/preference.h"
#include "json.hpp"

namespace dptradeoff {

enum class QueryStrategy { kCurveKg, kRandomCurve, kPairKg, kRandomPair };
enum class PrivacyStrategy { kKg, kRandom };

// Which step the loop takes next.
enum class Schedule {
  kAlternate,     // evaluate, interact, evaluate, ...
  kAdaptive,      // first evaluate, then whichever action has the larger KG
  kInteractOnly,  // preference elicitation only (front known or fixed)
  kEvaluateOnly,  // front learning only
};

std::string QueryStrategyName(QueryStrategy s);
std::string PrivacyStrategyName(PrivacyStrategy s);
std::string ScheduleName(Schedule s);
absl::StatusOr<Schedule> ParseSchedule(const std::string& name);

// A named pair of query and privacy strategies, as compared in ablations:
// curve-kg, random-curve, pair-kg, random-pairs and random.
struct Arm {
  std::string name;
  QueryStrategy query = QueryStrategy::kCurveKg;
  PrivacyStrategy privacy = PrivacyStrategy::kKg;
};

absl::StatusOr<Arm> ParseArm(const std::string& name);
// Comma-separated arm names.
absl::StatusOr<std::vector<Arm>> ParseArmList(const std::string& list);

struct LoopConfig {
  int num_steps = 20;
  int num_seeds = 30;
  Schedule schedule = Schedule::kAlternate;
  // Strategies to run; single runs use the first, batches compare all.
  std::vector<Arm> arms = {
      {"curve-kg", QueryStrategy::kCurveKg, PrivacyStrategy::kKg}};
  int front_particles = 4000;
  int pref_particles = 2000;
  RejuvenationConfig rejuvenation;
  // Degenerate priors at the truth (simulation only).
  bool known_front = false;
  bool known_weights = false;
  // Fixes the simulated decision-maker's weights instead of drawing them
  // from the weight prior.
  std::optional<PreferenceWeights> true_weights;
};

struct PriorConfig {
  FrontPrior front = FrontPrior::Default(FrontKind::kSigmoid);
  DirichletPrior weights;
  // "normalized" or "raw": whether Gompertz priors are stated on normalized
  // privacy or on -log(epsilon).
  bool gompertz_raw_space = false;
};

struct Config {
  NormalizationSpec normalization;
  OracleSpec oracle;
  UserModelConfig user_model;
  // Temperature of the simulated decision-maker; defaults to the learner's.
  std::optional<double> simulator_temperature;
  AcquisitionConfig acquisition;
  PriorConfig priors;
  LoopConfig loop;

  double SimulatorTemperature() const {
    return simulator_temperature.value_or(user_model.temperature);
  }
  // The front prior in normalized coordinates, with any raw-space mapping
  // resolved against the normalization.
  FrontPrior EffectiveFrontPrior() const;
};

absl::Status Validate(const Config& config);

// Parses a config document. Relative oracle paths are resolved against
// `base_dir` when non-empty. Errors name the offending field, or the line and
// column of a JSON syntax error.
absl::StatusOr<Config> ConfigFromJson(const nlohmann::json& j,
                                      const std::string& base_dir = "");
absl::StatusOr<Config> ParseConfig(const std::string& text,
                                   const std::string& base_dir = "");
absl::StatusOr<Config> LoadConfig(const std::string& path);

// Applies the fields present in `overrides` on top of `base`.
absl::StatusOr<Config> ApplyOverrides(const Config& base,
                                      const nlohmann::json& overrides);

nlohmann::json ToJson(const Config& config);

}  // namespace dptradeoff

#endif  // DPTRADEOFF_CONFIG_H_
