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

// S-shaped models of the privacy/accuracy Pareto front and an importance
// sampling posterior over their parameters.
//
// Privacy is the normalized level p in [0, 1] (larger = more private) and
// accuracy is normalized to [0, 1]. Both curve families decrease in p:
//
//   sigmoid:   h(p) = span / (1 + exp(steepness * (p - location))) + offset
//   gompertz:  h(p) = offset - span * exp(-steepness * exp(-location * p))
//
// The Gompertz form is the closed-form accuracy of output-perturbed logistic
// regression, 1 - 0.5 * exp(-C * eps), written in p = -log(eps).

#ifndef DPTRADEOFF_FRONT_MODEL_H_
#define DPTRADEOFF_FRONT_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/distributions.h"
#include "dptradeoff/particles.h"
#include "dptradeoff/random.h"
#include "json.hpp"

namespace dptradeoff {

enum class FrontKind { kSigmoid, kGompertz };

std::string FrontKindName(FrontKind kind);
absl::StatusOr<FrontKind> ParseFrontKind(const std::string& name);

struct FrontParams {
  FrontKind kind = FrontKind::kSigmoid;
  double span = 1;       // accuracy drop between the two asymptotes
  double steepness = 1;  // > 0
  double offset = 0;     // sigmoid: lower asymptote; gompertz: upper asymptote
  double location = 0;   // sigmoid: midpoint; gompertz: decay rate in p

  friend bool operator==(const FrontParams&, const FrontParams&) = default;
};

struct NoiseScale {
  double sigma = 0.05;

  friend bool operator==(const NoiseScale&, const NoiseScale&) = default;
};

struct FrontObservation {
  double privacy = 0;
  double accuracy = 0;
};

// One particle of the front posterior.
struct FrontSample {
  FrontParams params;
  NoiseScale noise;
};

absl::Status ValidateParams(const FrontParams& params);

absl::StatusOr<double> EvalFront(double privacy, const FrontParams& params);

// Unvalidated evaluation for inner loops over already-validated particles.
double EvalFrontUnchecked(double privacy, const FrontParams& params);

// Prior over (FrontParams, NoiseScale). `Default(kind)` gives the reference
// priors: sigmoid span ~ Beta(40,2), steepness ~ LogNormal(log 10, 0.2),
// location ~ Beta(2,2), offset ~ Normal(0, 0.1); gompertz span ~ U(0.8, 4),
// steepness ~ U(10, 100), location ~ U(1, 10), offset ~ U(0.8, 1.1); noise
// sigma ~ Gamma(shape 0.5, scale 0.1) for both.
struct FrontPrior {
  FrontKind kind = FrontKind::kSigmoid;
  Distribution span;
  Distribution steepness;
  Distribution location;
  Distribution offset;
  Distribution noise;
  // Gompertz only: reject draws whose inflection log(steepness)/location
  // falls outside [0, 1].
  bool transition_in_unit = true;

  static FrontPrior Default(FrontKind kind);

  // Re-expresses a prior stated on raw privacy -log(eps) in normalized
  // coordinates p = (-log(eps) - p_min) / (p_max - p_min). Only meaningful for
  // Gompertz priors; draws are mapped through steepness * exp(-location *
  // p_min) and location * (p_max - p_min).
  struct RawPrivacyMap {
    double p_min;
    double p_range;
  };
  std::optional<RawPrivacyMap> raw_privacy;
};

absl::Status Validate(const FrontPrior& prior);

FrontSample SamplePrior(const FrontPrior& prior, Rng& rng);

// Log prior density of a sample in the model's own coordinates (up to a
// constant when draws are rejected or remapped).
double PriorLogDensity(const FrontPrior& prior, const FrontSample& sample);

// Prior mean parameters, used as the least-squares starting point.
FrontParams PriorMeanParams(const FrontPrior& prior);

// sum_n log N(accuracy_n | h(privacy_n), sigma^2).
absl::StatusOr<double> LogLikelihood(const FrontParams& params,
                                     NoiseScale noise,
                                     std::span<const FrontObservation> obs);

double LogLikelihoodUnchecked(const FrontParams& params, NoiseScale noise,
                              std::span<const FrontObservation> obs);

// What to do when the effective sample size collapses after an update.
struct RejuvenationConfig {
  enum class Mode { kNone, kResample, kResampleMove };
  Mode mode = Mode::kResampleMove;
  // Triggered when ESS < ess_fraction * particle_count.
  double ess_fraction = 0.25;
  int mcmc_steps = 6;
};

absl::StatusOr<RejuvenationConfig::Mode> ParseRejuvenationMode(
    const std::string& name);
std::string RejuvenationModeName(RejuvenationConfig::Mode mode);

// Immutable importance-sampling posterior over front parameters and noise.
class FrontPosterior {
 public:
  // Draws `particle_count` i.i.d. prior particles with uniform weights.
  static absl::StatusOr<FrontPosterior> FromPrior(
      const FrontPrior& prior, int particle_count, Rng& rng,
      RejuvenationConfig rejuvenation = {});

  // A single particle carrying all mass (the front is known).
  static FrontPosterior PointMass(const FrontSample& sample);

  static absl::StatusOr<FrontPosterior> FromParticles(
      FrontKind kind, WeightedParticles<FrontSample> particles);

  // Pure importance reweighting by the Gaussian likelihood of `obs`.
  FrontPosterior Reweighted(std::span<const FrontObservation> obs) const;
  FrontPosterior Reweighted(const FrontObservation& obs) const {
    return Reweighted(std::span<const FrontObservation>(&obs, 1));
  }

  // Reweights, then applies the rejuvenation policy if the effective sample
  // size has collapsed.
  FrontPosterior Updated(const FrontObservation& obs, Rng& rng) const;

  FrontKind kind() const { return kind_; }
  const WeightedParticles<FrontSample>& particles() const { return particles_; }
  const std::vector<FrontObservation>& observations() const {
    return observations_;
  }
  size_t particle_count() const { return particles_.size(); }
  double EffectiveSampleSize() const {
    return particles_.EffectiveSampleSize();
  }
  // Number of rejuvenation passes performed so far.
  int rejuvenations() const { return rejuvenations_; }

 private:
  FrontPosterior(FrontKind kind, WeightedParticles<FrontSample> particles)
      : kind_(kind), particles_(std::move(particles)) {}

  FrontPosterior ResampleMove(Rng& rng, bool move) const;

  FrontKind kind_ = FrontKind::kSigmoid;
  WeightedParticles<FrontSample> particles_;
  std::vector<FrontObservation> observations_;
  std::optional<FrontPrior> prior_;
  RejuvenationConfig rejuvenation_;
  int rejuvenations_ = 0;
};

double EffectiveSampleSize(const FrontPosterior& posterior);

struct MeanCurvePoint {
  double privacy;
  double mean;
  double lower;  // weighted 5% quantile
  double upper;  // weighted 95% quantile
};

struct MeanCurve {
  std::vector<MeanCurvePoint> points;
  // True when one particle holds (numerically) all the mass.
  bool degenerate = false;
};

// Posterior mean of h(p) and a 90% credible band on each grid point.
absl::StatusOr<MeanCurve> PosteriorMeanCurve(const FrontPosterior& posterior,
                                             std::span<const double> grid);

std::vector<double> UniformGrid(int size);

struct FitResult {
  FrontParams params;
  double residual_norm = 0;
  // Residual norm at the prior-mean starting point.
  double initial_residual_norm = 0;
  int iterations = 0;
  bool converged = false;
  // The fitted curve carries no transition over the data range: steepness
  // collapsed to its lower bound or the fitted drop is negligible.
  bool flat = false;
};

// Deterministic bounded Levenberg-Marquardt least squares from the prior
// mean. Needs at least four observations.
absl::StatusOr<FitResult> FitFront(std::span<const FrontObservation> obs,
                                   const FrontPrior& prior);

nlohmann::json ToJson(const FrontParams& params);
absl::StatusOr<FrontParams> FrontParamsFromJson(const nlohmann::json& j);

}  // namespace dptradeoff

#endif  // DPTRADEOFF_FRONT_MODEL_H_
