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

// Expected Chebyshev utility under the joint (front, preference) posterior,
// the incumbent maximum U*, and knowledge-gradient acquisition of the next
// hypothetical curve, pairwise comparison or privacy level to evaluate.
//
// Knowledge gradients are estimated by simulation and importance reweighting:
// draw an outcome from the predictive distribution, reweight a copy of the
// relevant posterior by its likelihood, recompute U*, and average the
// improvement. Queries with few possible outcomes are enumerated exactly.

#ifndef DPTRADEOFF_ACQUISITION_H_
#define DPTRADEOFF_ACQUISITION_H_

#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/front_model.h"
#include "dptradeoff/preference.h"
#include "dptradeoff/random.h"

namespace dptradeoff {

struct AcquisitionConfig {
  // Grid on [0, 1] used to maximize expected utility.
  int p_grid_size = 201;
  // Simulations per knowledge-gradient estimate.
  int num_sims = 64;
  int num_curve_candidates = 16;
  int num_p_candidates = 33;
  int num_pair_candidates = 32;
  // Queries with at most this many outcomes are enumerated exactly.
  int max_exact_outcomes = 4;
  // Posteriors larger than these caps are systematically thinned before
  // knowledge-gradient computations.
  int max_front_particles = 512;
  int max_pref_particles = 512;
};

absl::Status Validate(const AcquisitionConfig& config);

// E_{beta, w}[U((p, clamp(h_beta(p))); w)].
absl::StatusOr<double> ExpectedUtility(double privacy,
                                       const FrontPosterior& front,
                                       const PrefPosterior& pref);

struct UtilityOptimum {
  double privacy = 0;
  double utility = 0;
  int grid_index = 0;
};

// Grid maximizer of ExpectedUtility; ties go to the smaller privacy level.
absl::StatusOr<UtilityOptimum> MaxExpectedUtility(const FrontPosterior& front,
                                                  const PrefPosterior& pref,
                                                  int grid_size);

struct KgResult {
  int candidate = 0;
  double value = 0;
  // Simulated improvements (value = their mean), or for exact results the
  // improvement of each outcome (value = their probability-weighted sum).
  std::vector<double> deltas;
  std::vector<double> outcome_probs;  // exact results only
  double std_error = 0;
  bool exact = false;
};

absl::StatusOr<KgResult> CurveKnowledgeGradient(const CurveQuery& query,
                                                const FrontPosterior& front,
                                                const PrefPosterior& pref,
                                                double temperature,
                                                const AcquisitionConfig& config,
                                                Rng& rng);

absl::StatusOr<KgResult> PairKnowledgeGradient(TradeOffPoint a,
                                               TradeOffPoint b,
                                               const FrontPosterior& front,
                                               const PrefPosterior& pref,
                                               double temperature,
                                               const AcquisitionConfig& config,
                                               Rng& rng);

absl::StatusOr<KgResult> PrivacyKnowledgeGradient(
    double privacy, const FrontPosterior& front, const PrefPosterior& pref,
    const AcquisitionConfig& config, Rng& rng);

// Exact one-step expectation over every choice the decision-maker could make
// on `query`; used for small queries and as a reference in tests.
absl::StatusOr<KgResult> ExactChoiceKnowledgeGradient(
    const CurveQuery& query, const FrontPosterior& front,
    const PrefPosterior& pref, double temperature, int p_grid_size);

struct QuerySelection {
  CurveQuery query;
  std::vector<KgResult> evaluated;  // one per candidate, in candidate order
  int best = 0;
};

struct PrivacySelection {
  double privacy = 0;
  std::vector<double> candidates;
  std::vector<KgResult> evaluated;
  int best = 0;
};

// Scores `num_curve_candidates` curves (the first half resampled from the
// front posterior, the rest drawn from `candidate_prior`) and returns the one
// with the largest knowledge gradient (ties: first).
absl::StatusOr<QuerySelection> SelectNextCurve(
    const FrontPosterior& front, const PrefPosterior& pref,
    const FrontPrior& candidate_prior, const UserModelConfig& user,
    const AcquisitionConfig& config, Rng& rng);

// Scores a uniform grid of `num_p_candidates` privacy levels (ties: smaller).
absl::StatusOr<PrivacySelection> SelectNextPrivacy(
    const FrontPosterior& front, const PrefPosterior& pref,
    const AcquisitionConfig& config, Rng& rng);

// Scores `num_pair_candidates` random index pairs on the discretized
// posterior-mean front.
absl::StatusOr<QuerySelection> SelectNextPair(const FrontPosterior& front,
                                              const PrefPosterior& pref,
                                              const UserModelConfig& user,
                                              const AcquisitionConfig& config,
                                              Rng& rng);

// Ablation selectors.
absl::StatusOr<CurveQuery> RandomCurve(const FrontPrior& prior, int q,
                                       Rng& rng);
absl::StatusOr<CurveQuery> RandomPair(const FrontPosterior& front, int q,
                                      Rng& rng);
double RandomPrivacy(Rng& rng);

}  // namespace dptradeoff

#endif  // DPTRADEOFF_ACQUISITION_H_
