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

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace dptradeoff {
namespace {

using ::testing::DoubleNear;

PreferenceWeights W(double w1) { return {w1, 1 - w1}; }

CurveQuery Points(std::vector<TradeOffPoint> points) {
  CurveQuery q;
  q.points = std::move(points);
  return q;
}

double SumExp(const std::vector<double>& log_probs) {
  double s = 0;
  for (double v : log_probs) s += std::exp(v);
  return s;
}

TEST(PreferenceWeightsTest, Validation) {
  EXPECT_TRUE(Validate(W(0.3)).ok());
  EXPECT_FALSE(Validate(PreferenceWeights{0, 1}).ok());
  EXPECT_FALSE(Validate(PreferenceWeights{0.5, 0.6}).ok());
  EXPECT_FALSE(Validate(PreferenceWeights{-0.1, 1.1}).ok());
  EXPECT_FALSE(PreferenceWeights::FromPrivacyWeight(1.0).ok());
  EXPECT_EQ(*PreferenceWeights::FromPrivacyWeight(0.25), W(0.25));
}

TEST(ChebyshevUtilityTest, Examples) {
  EXPECT_EQ(*ChebyshevUtility({0.4, 0.8}, W(0.5)), 0.8);
  for (double w1 : {0.1, 0.5, 0.7}) {
    EXPECT_THAT(*ChebyshevUtility({1, 1}, W(w1)),
                DoubleNear(1 / std::max(w1, 1 - w1), 1e-15));
    EXPECT_EQ(*ChebyshevUtility({0, 0.6}, W(w1)), 0);
  }
}

TEST(ChebyshevUtilityTest, ScaleEquivariant) {
  const TradeOffPoint y{0.3, 0.45};
  for (double s : {0.5, 2.0}) {
    EXPECT_THAT(*ChebyshevUtility({s * y.privacy, s * y.accuracy}, W(0.35)),
                DoubleNear(s * *ChebyshevUtility(y, W(0.35)), 1e-15));
  }
}

TEST(ChebyshevUtilityTest, ZeroWeightIsAnError) {
  EXPECT_FALSE(ChebyshevUtility({0.5, 0.5}, PreferenceWeights{0, 1}).ok());
}

TEST(LinearUtilityTest, Examples) {
  for (double w1 : {0.1, 0.5, 0.9}) {
    EXPECT_THAT(*LinearUtility({1, 1}, W(w1)), DoubleNear(1, 1e-15));
    EXPECT_THAT(*ExpLinearUtility(0, 1, W(w1)), DoubleNear(1, 1e-15));
  }
  EXPECT_THAT(*LinearUtility({0.3, 0.7}, W(0.5)), DoubleNear(0.5, 1e-15));
  EXPECT_THAT(*ExpLinearUtility(0.5, 0.8, W(0.25)),
              DoubleNear(0.25 * std::exp(-0.5) + 0.75 * std::exp(-0.2), 1e-15));
  EXPECT_FALSE(LinearUtility({0.3, 0.7}, PreferenceWeights{0.2, 0.2}).ok());
}

TEST(ChoiceLogProbsTest, EqualUtilitiesAreUniform) {
  // Every point has p/w1 >= 1 > alpha/w2, so utility is alpha/w2 = 0.5/0.5.
  const CurveQuery q = Points({{0.6, 0.25}, {0.7, 0.25}, {0.9, 0.25}});
  const std::vector<double> lp = *ChoiceLogProbs(q, W(0.5), 0.2);
  for (double v : lp) EXPECT_THAT(std::exp(v), DoubleNear(1.0 / 3, 1e-15));
}

TEST(ChoiceLogProbsTest, LogisticIdentity) {
  const double t = 0.2;
  const std::vector<double> u = {0.3, 0.3 + t * std::log(3.0)};
  const std::vector<double> lp = BoltzmannLogProbs(u, t);
  EXPECT_THAT(std::exp(lp[0]), DoubleNear(0.25, 1e-15));
  EXPECT_THAT(std::exp(lp[1]), DoubleNear(0.75, 1e-15));
}

TEST(ChoiceLogProbsTest, ZeroTemperatureLimit) {
  const CurveQuery q = Points({{0.1, 0.9}, {0.4, 0.6}, {0.8, 0.1}});
  const std::vector<double> lp = *ChoiceLogProbs(q, W(0.5), 1e-9);
  EXPECT_THAT(std::exp(lp[1]), DoubleNear(1, 1e-6));
}

TEST(ChoiceLogProbsTest, NormalizedAndShiftInvariant) {
  Rng rng = DeriveRng(1, 0);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> u(2 + trial % 7);
    for (double& v : u) v = 3 * unit(rng);
    const double t = 0.05 + unit(rng);
    const std::vector<double> lp = BoltzmannLogProbs(u, t);
    EXPECT_THAT(SumExp(lp), DoubleNear(1, 1e-12));
    std::vector<double> shifted = u;
    for (double& v : shifted) v += 17.5;
    const std::vector<double> ls = BoltzmannLogProbs(shifted, t);
    for (size_t i = 0; i < u.size(); ++i) {
      EXPECT_THAT(std::exp(ls[i]), DoubleNear(std::exp(lp[i]), 1e-12));
    }
  }
}

TEST(ChoiceLogProbsTest, RejectsBadInputs) {
  const CurveQuery q = Points({{0.1, 0.9}, {0.4, 0.6}});
  EXPECT_FALSE(ChoiceLogProbs(q, W(0.5), 0).ok());
  EXPECT_FALSE(ChoiceLogProbs(Points({{0.1, 0.9}}), W(0.5), 0.2).ok());
  EXPECT_FALSE(ChoiceLogProbs(Points({{0.4, 0.9}, {0.1, 0.6}}), W(0.5), 0.2)
                   .ok());  // unsorted
  EXPECT_FALSE(ChoiceLogProbs(Points({{0.1, 1.2}, {0.4, 0.6}}), W(0.5), 0.2)
                   .ok());  // outside the unit square
}

TEST(SimulateChoiceTest, FairCoinForEqualUtilities) {
  Rng rng = DeriveRng(2, 0);
  const CurveQuery q = Points({{0.6, 0.25}, {0.9, 0.25}});
  constexpr int kDraws = 100000;
  int first = 0;
  for (int i = 0; i < kDraws; ++i) first += *SimulateChoice(q, W(0.5), 0.2, rng) == 0;
  EXPECT_THAT(static_cast<double>(first) / kDraws,
              DoubleNear(0.5, 3 * std::sqrt(0.25 / kDraws)));
}

TEST(SimulateChoiceTest, ZeroTemperatureAlwaysPicksArgmax) {
  Rng rng = DeriveRng(3, 0);
  const CurveQuery q = Points({{0.1, 0.9}, {0.4, 0.6}, {0.8, 0.1}});
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(*SimulateChoice(q, W(0.5), 1e-9, rng), 1);
  }
  EXPECT_EQ(ArgmaxChoice(q, W(0.5)), 1);
}

TEST(SimulateChoiceTest, FrequenciesMatchExactProbabilities) {
  Rng rng = DeriveRng(4, 0);
  const CurveQuery q = *DiscretizeCurve({FrontKind::kSigmoid, 0.9, 8, 0.05, 0.5}, 6);
  const PreferenceWeights w = W(0.4);
  const std::vector<double> lp = *ChoiceLogProbs(q, w, 0.2);
  constexpr int kDraws = 200000;
  std::vector<int> counts(q.size());
  for (int i = 0; i < kDraws; ++i) ++counts[*SimulateChoice(q, w, 0.2, rng)];
  for (size_t j = 0; j < q.size(); ++j) {
    const double p = std::exp(lp[j]);
    EXPECT_THAT(static_cast<double>(counts[j]) / kDraws,
                DoubleNear(p, 3 * std::sqrt(p * (1 - p) / kDraws) + 1e-12));
  }
}

TEST(SimulateChoiceTest, DeterministicGivenSeed) {
  const CurveQuery q = *DiscretizeCurve({FrontKind::kSigmoid, 0.9, 8, 0.05, 0.5}, 11);
  Rng a = DeriveRng(5, 0);
  Rng b = DeriveRng(5, 0);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(*SimulateChoice(q, W(0.3), 0.2, a), *SimulateChoice(q, W(0.3), 0.2, b));
  }
}

TEST(ArgmaxChoiceTest, TiesGoToSmallerIndex) {
  const CurveQuery q = Points({{0.6, 0.25}, {0.7, 0.25}, {0.9, 0.25}});
  EXPECT_EQ(ArgmaxChoice(q, W(0.5)), 0);
}

TEST(DiscretizeCurveTest, SortedClampedAndOnTheCurve) {
  const FrontParams p{FrontKind::kSigmoid, 1.0, 10, 0.05, 0.5};  // max 1.05
  const CurveQuery q = *DiscretizeCurve(p, 101);
  ASSERT_EQ(q.size(), 101);
  EXPECT_EQ(q.points.front().privacy, 0);
  EXPECT_EQ(q.points.back().privacy, 1);
  for (size_t i = 0; i < q.size(); ++i) {
    const TradeOffPoint& y = q.points[i];
    EXPECT_EQ(y.accuracy,
              std::clamp(EvalFrontUnchecked(y.privacy, p), 0.0, 1.0));
    if (i > 0) EXPECT_GT(y.privacy, q.points[i - 1].privacy);
  }
  EXPECT_EQ(q.points.front().accuracy, 1.0);  // clamped
  EXPECT_FALSE(DiscretizeCurve(p, 1).ok());
}

TEST(MakePairQueryTest, SortsByPrivacy) {
  const CurveQuery q = *MakePairQuery({0.8, 0.2}, {0.1, 0.9});
  EXPECT_EQ(q.points[0], (TradeOffPoint{0.1, 0.9}));
  EXPECT_EQ(q.points[1], (TradeOffPoint{0.8, 0.2}));
  EXPECT_FALSE(q.params.has_value());
}

TEST(SampleWeightPriorTest, DirichletMoments) {
  Rng rng = DeriveRng(6, 0);
  constexpr int kDraws = 100000;
  double sum = 0;
  double sum_sq = 0;
  for (int i = 0; i < kDraws; ++i) {
    const PreferenceWeights w = SampleWeightPrior(rng);
    ASSERT_GT(w.privacy, 0);
    ASSERT_GT(w.accuracy, 0);
    ASSERT_THAT(w.privacy + w.accuracy, DoubleNear(1, 1e-12));
    sum += w.privacy;
    sum_sq += w.privacy * w.privacy;
  }
  const double mean = sum / kDraws;
  const double var = sum_sq / kDraws - mean * mean;
  EXPECT_THAT(mean, DoubleNear(0.5, 3 * std::sqrt(0.05 / kDraws)));
  // Beta(2,2): variance 0.05, fourth central moment 3/560.
  const double var_se = std::sqrt((3.0 / 560 - 0.05 * 0.05) / kDraws);
  EXPECT_THAT(var, DoubleNear(0.05, 3 * var_se));
}

PrefPosterior TwoParticle(double a, double b) {
  return *PrefPosterior::FromParticles(
      WeightedParticles<PreferenceWeights>({W(a), W(b)}));
}

TEST(PrefPosteriorTest, UninformativeChoiceLeavesWeightsUnchanged) {
  // Utility alpha/w2 = 0.25/w2 at every point for both particles.
  const PrefPosterior post = TwoParticle(0.3, 0.6);
  const ChoiceRecord rec{Points({{0.9, 0.25}, {0.95, 0.25}}), 1};
  const PrefPosterior next = *post.Updated(rec, 0.2);
  EXPECT_EQ(next.particles().Weights(), post.particles().Weights());
}

TEST(PrefPosteriorTest, WeightRatioEqualsLikelihoodRatio) {
  Rng rng = DeriveRng(7, 0);
  const PrefPosterior post = *PrefPosterior::FromPrior({}, 200, rng);
  const CurveQuery q = *DiscretizeCurve({FrontKind::kSigmoid, 0.9, 9, 0.05, 0.45}, 101);
  const ChoiceRecord rec{q, 37};
  const PrefPosterior next = *post.Updated(rec, 0.2);
  const auto& before = post.particles();
  const auto& after = next.particles();
  for (size_t i = 1; i < before.size(); ++i) {
    const double lik_i = (*ChoiceLogProbs(q, before.value(i), 0.2))[37];
    const double lik_0 = (*ChoiceLogProbs(q, before.value(0), 0.2))[37];
    const double weight_ratio = (after.log_weights()[i] - after.log_weights()[0]) -
                                (before.log_weights()[i] - before.log_weights()[0]);
    EXPECT_THAT(weight_ratio, DoubleNear(lik_i - lik_0, 1e-9));
  }
}

TEST(PrefPosteriorTest, RepeatedChoicesShrinkEss) {
  Rng rng = DeriveRng(8, 0);
  PrefPosterior post = *PrefPosterior::FromPrior({}, 2000, rng);
  const CurveQuery q = *DiscretizeCurve({FrontKind::kSigmoid, 0.9, 9, 0.05, 0.45}, 101);
  const ChoiceRecord rec{q, 30};
  double ess = post.EffectiveSampleSize();
  for (int i = 0; i < 10; ++i) {
    post = *post.Updated(rec, 0.2);
    EXPECT_LT(post.EffectiveSampleSize(), ess);
    ess = post.EffectiveSampleSize();
  }
}

TEST(PrefPosteriorTest, BatchEqualsSequential) {
  Rng rng = DeriveRng(9, 0);
  const PrefPosterior prior = *PrefPosterior::FromPrior({}, 1000, rng);
  std::vector<ChoiceRecord> records;
  for (int i = 0; i < 6; ++i) {
    const FrontParams p{FrontKind::kSigmoid, 0.9, 5.0 + i, 0.05, 0.2 + 0.1 * i};
    records.push_back({*DiscretizeCurve(p, 101), 10 + 13 * i});
  }
  PrefPosterior seq = prior;
  for (const ChoiceRecord& r : records) seq = *seq.Updated(r, 0.2);
  const PrefPosterior batch = *prior.Updated(records, 0.2);
  const std::vector<double> ws = seq.particles().Weights();
  const std::vector<double> wb = batch.particles().Weights();
  for (size_t i = 0; i < ws.size(); ++i) {
    EXPECT_THAT(ws[i], DoubleNear(wb[i], 1e-10));
  }
  double sum = 0;
  for (double w : wb) sum += w;
  EXPECT_THAT(sum, DoubleNear(1, 1e-12));
}

TEST(PrefPosteriorTest, RejectsInvalidRecord) {
  const PrefPosterior post = TwoParticle(0.3, 0.6);
  const ChoiceRecord rec{Points({{0.1, 0.9}, {0.4, 0.6}}), 2};
  EXPECT_FALSE(post.Updated(rec, 0.2).ok());
  EXPECT_FALSE(post.Updated({Points({{0.1, 0.9}, {0.4, 0.6}}), 0}, -1).ok());
}

TEST(PreferenceErrorTest, Examples) {
  EXPECT_EQ(PreferenceError(PrefPosterior::PointMass(W(0.3)), W(0.3)), 0);
  const double e = 0.2;
  EXPECT_THAT(PreferenceError(PrefPosterior::PointMass(W(1 - e)), W(e)),
              DoubleNear(std::sqrt(2.0) * std::abs(1 - 2 * e), 1e-15));
  const PrefPosterior two = TwoParticle(0.2, 0.6);
  const double d1 = std::sqrt(2.0) * 0.1;
  const double d2 = std::sqrt(2.0) * 0.3;
  EXPECT_THAT(PreferenceError(two, W(0.3)), DoubleNear(0.5 * (d1 + d2), 1e-15));
}

TEST(PrefPosteriorTest, MeanWeights) {
  EXPECT_THAT(TwoParticle(0.2, 0.6).MeanWeights().privacy, DoubleNear(0.4, 1e-15));
}

TEST(PreferenceJsonTest, QueryShape) {
  const nlohmann::json j = ToJson(*MakePairQuery({0.1, 0.9}, {0.8, 0.2}));
  ASSERT_EQ(j["points"].size(), 2);
  EXPECT_EQ(j["points"][0]["p"], 0.1);
  EXPECT_EQ(j["points"][0]["alpha"], 0.9);
  EXPECT_TRUE(j["curve"].is_null());
}

}  // namespace
}  // namespace dptradeoff
