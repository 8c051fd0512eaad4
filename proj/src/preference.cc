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

#include "dptradeoff/preference.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_format.h"

namespace dptradeoff {

absl::StatusOr<PreferenceWeights> PreferenceWeights::FromPrivacyWeight(
    double w_privacy) {
  PreferenceWeights w{w_privacy, 1.0 - w_privacy};
  if (absl::Status s = Validate(w); !s.ok()) return s;
  return w;
}

absl::Status Validate(const PreferenceWeights& w) {
  if (!(w.privacy > 0) || !(w.accuracy > 0) || !std::isfinite(w.privacy) ||
      !std::isfinite(w.accuracy)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "preference weights must be strictly positive, got (%g, %g)", w.privacy,
        w.accuracy));
  }
  if (std::abs(w.privacy + w.accuracy - 1.0) > 1e-12) {
    return absl::InvalidArgumentError(
        absl::StrFormat("preference weights must sum to 1, got %.17g",
                        w.privacy + w.accuracy));
  }
  return absl::OkStatus();
}

absl::Status Validate(const CurveQuery& query) {
  if (query.points.size() < 2) {
    return absl::InvalidArgumentError("a query needs at least two points");
  }
  for (size_t i = 0; i < query.points.size(); ++i) {
    const TradeOffPoint& y = query.points[i];
    if (!(y.privacy >= 0 && y.privacy <= 1 && y.accuracy >= 0 &&
          y.accuracy <= 1)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("query point %d outside [0,1]^2", i));
    }
    if (i > 0 && y.privacy < query.points[i - 1].privacy) {
      return absl::InvalidArgumentError("query points must be sorted by privacy");
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<CurveQuery> DiscretizeCurve(const FrontParams& params, int q) {
  if (q < 2) {
    return absl::InvalidArgumentError("discretization needs q >= 2");
  }
  if (absl::Status s = ValidateParams(params); !s.ok()) return s;
  CurveQuery query;
  query.params = params;
  query.points.reserve(q);
  for (double p : UniformGrid(q)) {
    const double a = std::clamp(EvalFrontUnchecked(p, params), 0.0, 1.0);
    query.points.push_back({p, a});
  }
  return query;
}

absl::StatusOr<CurveQuery> MakePairQuery(TradeOffPoint a, TradeOffPoint b) {
  CurveQuery query;
  if (b.privacy < a.privacy) std::swap(a, b);
  query.points = {a, b};
  if (absl::Status s = Validate(query); !s.ok()) return s;
  return query;
}

absl::Status Validate(const ChoiceRecord& record) {
  if (absl::Status s = Validate(record.query); !s.ok()) return s;
  if (record.chosen_index < 0 ||
      record.chosen_index >= static_cast<int>(record.query.size())) {
    return absl::InvalidArgumentError(
        absl::StrFormat("chosen index %d outside [0, %d)", record.chosen_index,
                        record.query.size()));
  }
  return absl::OkStatus();
}

absl::Status Validate(const UserModelConfig& config) {
  if (!(config.temperature > 0) || !std::isfinite(config.temperature)) {
    return absl::InvalidArgumentError("temperature must be > 0");
  }
  if (config.discretization < 2) {
    return absl::InvalidArgumentError("discretization must be >= 2");
  }
  return absl::OkStatus();
}

double ChebyshevUtilityUnchecked(TradeOffPoint y, PreferenceWeights w) {
  return std::min(y.privacy / w.privacy, y.accuracy / w.accuracy);
}

absl::StatusOr<double> ChebyshevUtility(TradeOffPoint y, PreferenceWeights w) {
  if (absl::Status s = Validate(w); !s.ok()) return s;
  if (!std::isfinite(y.privacy) || !std::isfinite(y.accuracy)) {
    return absl::InvalidArgumentError("trade-off point must be finite");
  }
  return ChebyshevUtilityUnchecked(y, w);
}

absl::StatusOr<double> LinearUtility(TradeOffPoint y, PreferenceWeights w) {
  if (absl::Status s = Validate(w); !s.ok()) return s;
  if (!std::isfinite(y.privacy) || !std::isfinite(y.accuracy)) {
    return absl::InvalidArgumentError("trade-off point must be finite");
  }
  return w.privacy * y.privacy + w.accuracy * y.accuracy;
}

absl::StatusOr<double> ExpLinearUtility(double epsilon, double accuracy,
                                        PreferenceWeights w) {
  if (absl::Status s = Validate(w); !s.ok()) return s;
  if (!std::isfinite(epsilon) || !std::isfinite(accuracy)) {
    return absl::InvalidArgumentError("epsilon and accuracy must be finite");
  }
  return w.privacy * std::exp(-epsilon) + w.accuracy * std::exp(accuracy - 1.0);
}

std::vector<double> BoltzmannLogProbs(std::span<const double> utilities,
                                      double temperature) {
  // Utilities are taken relative to their maximum before scaling, so tied
  // utilities give exactly -log(q) whatever their common value.
  const double top = *std::max_element(utilities.begin(), utilities.end());
  std::vector<double> scaled(utilities.size());
  for (size_t i = 0; i < utilities.size(); ++i) {
    scaled[i] = (utilities[i] - top) / temperature;
  }
  return NormalizeLogWeights(scaled);
}

absl::StatusOr<std::vector<double>> ChoiceLogProbs(const CurveQuery& query,
                                                   PreferenceWeights w,
                                                   double temperature) {
  if (absl::Status s = Validate(query); !s.ok()) return s;
  if (absl::Status s = Validate(w); !s.ok()) return s;
  if (!(temperature > 0)) {
    return absl::InvalidArgumentError("temperature must be > 0");
  }
  std::vector<double> u(query.size());
  for (size_t j = 0; j < query.size(); ++j) {
    u[j] = ChebyshevUtilityUnchecked(query.points[j], w);
  }
  return BoltzmannLogProbs(u, temperature);
}

absl::StatusOr<int> SimulateChoice(const CurveQuery& query, PreferenceWeights w,
                                   double temperature, Rng& rng) {
  absl::StatusOr<std::vector<double>> log_probs =
      ChoiceLogProbs(query, w, temperature);
  if (!log_probs.ok()) return log_probs.status();
  std::vector<double> probs(log_probs->size());
  std::transform(log_probs->begin(), log_probs->end(), probs.begin(),
                 [](double lp) { return std::exp(lp); });
  std::discrete_distribution<int> dist(probs.begin(), probs.end());
  return dist(rng);
}

int ArgmaxChoice(const CurveQuery& query, PreferenceWeights w) {
  int best = 0;
  double best_u = ChebyshevUtilityUnchecked(query.points[0], w);
  for (size_t j = 1; j < query.size(); ++j) {
    const double u = ChebyshevUtilityUnchecked(query.points[j], w);
    if (u > best_u) {
      best_u = u;
      best = static_cast<int>(j);
    }
  }
  return best;
}

absl::Status Validate(const DirichletPrior& prior) {
  if (!(prior.privacy_concentration > 0) || !(prior.accuracy_concentration > 0)) {
    return absl::InvalidArgumentError("dirichlet concentrations must be > 0");
  }
  return absl::OkStatus();
}

PreferenceWeights SampleWeightPrior(const DirichletPrior& prior, Rng& rng) {
  for (;;) {
    const double w = SampleBeta(prior.privacy_concentration,
                                prior.accuracy_concentration, rng);
    if (w > 0 && w < 1) return PreferenceWeights{w, 1.0 - w};
  }
}

PrefPosterior::PrefPosterior(WeightedParticles<PreferenceWeights> particles) {
  // Sort by privacy weight, carrying log-weights along.
  std::vector<size_t> order(particles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return particles.value(a).privacy < particles.value(b).privacy;
  });
  std::vector<PreferenceWeights> values;
  std::vector<double> lw;
  values.reserve(order.size());
  lw.reserve(order.size());
  for (size_t i : order) {
    values.push_back(particles.value(i));
    lw.push_back(particles.log_weights()[i]);
  }
  particles_ = WeightedParticles<PreferenceWeights>(std::move(values), lw);
}

absl::StatusOr<PrefPosterior> PrefPosterior::FromPrior(
    const DirichletPrior& prior, int particle_count, Rng& rng) {
  if (particle_count < 1) {
    return absl::InvalidArgumentError("particle_count must be >= 1");
  }
  if (absl::Status s = Validate(prior); !s.ok()) return s;
  std::vector<PreferenceWeights> values;
  values.reserve(particle_count);
  for (int i = 0; i < particle_count; ++i) {
    values.push_back(SampleWeightPrior(prior, rng));
  }
  return PrefPosterior(WeightedParticles<PreferenceWeights>(std::move(values)));
}

PrefPosterior PrefPosterior::PointMass(PreferenceWeights w) {
  return PrefPosterior(WeightedParticles<PreferenceWeights>({w}));
}

absl::StatusOr<PrefPosterior> PrefPosterior::FromParticles(
    WeightedParticles<PreferenceWeights> particles) {
  if (particles.empty()) {
    return absl::InvalidArgumentError("posterior needs at least one particle");
  }
  for (const PreferenceWeights& w : particles.values()) {
    if (absl::Status s = Validate(w); !s.ok()) return s;
  }
  return PrefPosterior(std::move(particles));
}

absl::StatusOr<PrefPosterior> PrefPosterior::Updated(const ChoiceRecord& record,
                                                     double temperature) const {
  return Updated(std::span<const ChoiceRecord>(&record, 1), temperature);
}

absl::StatusOr<PrefPosterior> PrefPosterior::Updated(
    std::span<const ChoiceRecord> records, double temperature) const {
  if (!(temperature > 0)) {
    return absl::InvalidArgumentError("temperature must be > 0");
  }
  for (const ChoiceRecord& r : records) {
    if (absl::Status s = Validate(r); !s.ok()) return s;
  }
  std::vector<double> increments(particles_.size(), 0.0);
  std::vector<double> u;
  for (const ChoiceRecord& r : records) {
    u.resize(r.query.size());
    for (size_t i = 0; i < particles_.size(); ++i) {
      const PreferenceWeights& w = particles_.value(i);
      for (size_t j = 0; j < u.size(); ++j) {
        u[j] = ChebyshevUtilityUnchecked(r.query.points[j], w);
      }
      increments[i] += BoltzmannLogProbs(u, temperature)[r.chosen_index];
    }
  }
  return PrefPosterior(particles_.Reweighted(increments));
}

PreferenceWeights PrefPosterior::MeanWeights() const {
  double w1 = 0;
  const std::vector<double> w = particles_.Weights();
  for (size_t i = 0; i < w.size(); ++i) w1 += w[i] * particles_.value(i).privacy;
  return PreferenceWeights{w1, 1.0 - w1};
}

double PreferenceError(const PrefPosterior& posterior,
                       PreferenceWeights truth) {
  const auto& particles = posterior.particles();
  const std::vector<double> w = particles.Weights();
  double error = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    const double d1 = truth.privacy - particles.value(i).privacy;
    const double d2 = truth.accuracy - particles.value(i).accuracy;
    error += w[i] * std::sqrt(d1 * d1 + d2 * d2);
  }
  return error;
}

nlohmann::json ToJson(const CurveQuery& query) {
  nlohmann::json points = nlohmann::json::array();
  for (const TradeOffPoint& y : query.points) {
    points.push_back({{"p", y.privacy}, {"alpha", y.accuracy}});
  }
  nlohmann::json j{{"points", points}};
  j["curve"] = query.params.has_value() ? ToJson(*query.params) : nlohmann::json();
  return j;
}

nlohmann::json ToJson(const PreferenceWeights& w) {
  return nlohmann::json::array({w.privacy, w.accuracy});
}

}  // namespace dptradeoff
