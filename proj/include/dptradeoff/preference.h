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

// Decision-maker preferences over normalized (privacy, accuracy) trade-offs:
// utility functions, the Boltzmann-rational choice model over a discretized
// hypothetical front, a simulated decision-maker, and the importance-sampling
// posterior over preference weights.

#ifndef DPTRADEOFF_PREFERENCE_H_
#define DPTRADEOFF_PREFERENCE_H_

#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/front_model.h"
#include "dptradeoff/particles.h"
#include "dptradeoff/random.h"
#include "json.hpp"

namespace dptradeoff {

// Weights on (privacy, accuracy); strictly positive and summing to one.
struct PreferenceWeights {
  double privacy = 0.5;
  double accuracy = 0.5;

  static absl::StatusOr<PreferenceWeights> FromPrivacyWeight(double w_privacy);
  friend bool operator==(const PreferenceWeights&,
                         const PreferenceWeights&) = default;
};

absl::Status Validate(const PreferenceWeights& w);

struct TradeOffPoint {
  double privacy = 0;
  double accuracy = 0;

  friend bool operator==(const TradeOffPoint&, const TradeOffPoint&) = default;
};

// A set of options shown to the decision-maker. Curve queries carry the
// generating parameters and their points are exactly the clamped curve
// values; pair queries built from a mean front carry no parameters.
struct CurveQuery {
  std::optional<FrontParams> params;
  std::vector<TradeOffPoint> points;  // sorted by privacy, size >= 2

  size_t size() const { return points.size(); }
};

absl::Status Validate(const CurveQuery& query);

// `q` uniform privacy levels on [0, 1], accuracies clamped to [0, 1].
absl::StatusOr<CurveQuery> DiscretizeCurve(const FrontParams& params, int q);

absl::StatusOr<CurveQuery> MakePairQuery(TradeOffPoint a, TradeOffPoint b);

struct ChoiceRecord {
  CurveQuery query;
  int chosen_index = 0;
};

absl::Status Validate(const ChoiceRecord& record);

struct UserModelConfig {
  double temperature = 0.2;
  int discretization = 101;
};

absl::Status Validate(const UserModelConfig& config);

// min(privacy / w_privacy, accuracy / w_accuracy).
absl::StatusOr<double> ChebyshevUtility(TradeOffPoint y, PreferenceWeights w);
double ChebyshevUtilityUnchecked(TradeOffPoint y, PreferenceWeights w);

// w_privacy * privacy + w_accuracy * accuracy on normalized coordinates.
absl::StatusOr<double> LinearUtility(TradeOffPoint y, PreferenceWeights w);

// w_privacy * exp(-epsilon) + w_accuracy * exp(accuracy - 1) on raw epsilon
// and raw accuracy (classification error 1 - accuracy).
absl::StatusOr<double> ExpLinearUtility(double epsilon, double accuracy,
                                        PreferenceWeights w);

// log(exp(u_j / T) / sum_i exp(u_i / T)).
std::vector<double> BoltzmannLogProbs(std::span<const double> utilities,
                                      double temperature);

absl::StatusOr<std::vector<double>> ChoiceLogProbs(const CurveQuery& query,
                                                   PreferenceWeights w,
                                                   double temperature);

absl::StatusOr<int> SimulateChoice(const CurveQuery& query, PreferenceWeights w,
                                   double temperature, Rng& rng);

// Index of the highest-utility point; ties resolve to the smaller index.
int ArgmaxChoice(const CurveQuery& query, PreferenceWeights w);

struct DirichletPrior {
  double privacy_concentration = 2;
  double accuracy_concentration = 2;
};

absl::Status Validate(const DirichletPrior& prior);

PreferenceWeights SampleWeightPrior(const DirichletPrior& prior, Rng& rng);
inline PreferenceWeights SampleWeightPrior(Rng& rng) {
  return SampleWeightPrior(DirichletPrior{}, rng);
}

// Importance-sampling posterior over preference weights. Particles are kept
// sorted by privacy weight so utility expectations can use prefix sums.
class PrefPosterior {
 public:
  static absl::StatusOr<PrefPosterior> FromPrior(const DirichletPrior& prior,
                                                 int particle_count, Rng& rng);
  static PrefPosterior PointMass(PreferenceWeights w);
  static absl::StatusOr<PrefPosterior> FromParticles(
      WeightedParticles<PreferenceWeights> particles);

  // Reweights every particle by the Boltzmann likelihood of the recorded
  // choice under that particle's weights.
  absl::StatusOr<PrefPosterior> Updated(const ChoiceRecord& record,
                                        double temperature) const;
  absl::StatusOr<PrefPosterior> Updated(std::span<const ChoiceRecord> records,
                                        double temperature) const;

  const WeightedParticles<PreferenceWeights>& particles() const {
    return particles_;
  }
  size_t particle_count() const { return particles_.size(); }
  double EffectiveSampleSize() const { return particles_.EffectiveSampleSize(); }
  PreferenceWeights MeanWeights() const;

 private:
  explicit PrefPosterior(WeightedParticles<PreferenceWeights> particles);

  WeightedParticles<PreferenceWeights> particles_;
};

// E_w ||w_true - w||_2 under the posterior.
double PreferenceError(const PrefPosterior& posterior,
                       PreferenceWeights truth);

nlohmann::json ToJson(const CurveQuery& query);
nlohmann::json ToJson(const PreferenceWeights& w);

}  // namespace dptradeoff

#endif  // DPTRADEOFF_PREFERENCE_H_
