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

#include "dptradeoff/acquisition.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include <Eigen/Dense>

#include "absl/strings/str_format.h"

namespace dptradeoff {
namespace {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Expected Chebyshev utility of one point over a weighted preference set.
//
// With t = p / (p + alpha), min(p / w1, alpha / (1 - w1)) equals
// alpha / (1 - w1) when w1 < t and p / w1 otherwise, so the expectation is
// alpha * A(t) + p * B(t) with A, B prefix/suffix sums over particles sorted
// by w1.
class PrefSums {
 public:
  PrefSums(const std::vector<PreferenceWeights>& values,
           const std::vector<double>& weights) {
    std::vector<size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return values[a].privacy < values[b].privacy;
    });
    const size_t n = values.size();
    w1_.resize(n);
    below_.assign(n + 1, 0.0);
    above_.assign(n + 1, 0.0);
    for (size_t i = 0; i < n; ++i) {
      const PreferenceWeights& w = values[order[i]];
      w1_[i] = w.privacy;
      below_[i + 1] = below_[i] + weights[order[i]] / w.accuracy;
    }
    for (size_t i = n; i-- > 0;) {
      const PreferenceWeights& w = values[order[i]];
      above_[i] = above_[i + 1] + weights[order[i]] / w.privacy;
    }
  }

  double Expected(double p, double alpha) const {
    if (p + alpha <= 0) return 0;
    const double t = p / (p + alpha);
    const size_t i = std::lower_bound(w1_.begin(), w1_.end(), t) - w1_.begin();
    return alpha * below_[i] + p * above_[i];
  }

 private:
  std::vector<double> w1_;
  std::vector<double> below_;  // below_[i] = sum_{j < i} W_j / (1 - w1_j)
  std::vector<double> above_;  // above_[i] = sum_{j >= i} W_j / w1_j
};

std::vector<double> ExpNormalized(std::span<const double> log_w) {
  std::vector<double> w = NormalizeLogWeights(log_w);
  for (double& v : w) v = std::exp(v);
  return w;
}

Eigen::Map<const Eigen::VectorXd> AsVector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

UtilityOptimum ArgmaxOnGrid(const Eigen::VectorXd& values,
                            const std::vector<double>& grid) {
  UtilityOptimum best{grid[0], values[0], 0};
  for (Eigen::Index g = 1; g < values.size(); ++g) {
    if (values[g] > best.utility) {
      best = {grid[g], values[g], static_cast<int>(g)};
    }
  }
  return best;
}

// Utility tables over a fixed grid for fixed particle locations, so that U*
// under any reweighting of one posterior is a matrix-vector product:
//   by_pref(g, r)  = sum_f W_f U((p_g, alpha_gf); w_r)   (front weights fixed)
//   by_front(g, f) = sum_r W_r U((p_g, alpha_gf); w_r)   (pref weights fixed)
class UtilityTables {
 public:
  UtilityTables(const WeightedParticles<FrontSample>& front,
                const WeightedParticles<PreferenceWeights>& pref,
                int grid_size)
      : grid_(UniformGrid(grid_size)),
        front_(front),
        pref_(pref),
        front_weights_(ExpNormalized(front.log_weights())),
        pref_weights_(ExpNormalized(pref.log_weights())) {
    const size_t num_front = front.size();
    alpha_ = RowMatrix(grid_.size(), num_front);
    for (size_t g = 0; g < grid_.size(); ++g) {
      for (size_t f = 0; f < num_front; ++f) {
        alpha_(g, f) = std::clamp(
            EvalFrontUnchecked(grid_[g], front.value(f).params), 0.0, 1.0);
      }
    }
  }

  const std::vector<double>& grid() const { return grid_; }
  const WeightedParticles<FrontSample>& front() const { return front_; }
  const WeightedParticles<PreferenceWeights>& pref() const { return pref_; }

  // U* with the preference weights replaced by `w`.
  UtilityOptimum BestForPref(const std::vector<double>& w) {
    if (!by_pref_) BuildByPref();
    return ArgmaxOnGrid(*by_pref_ * AsVector(w), grid_);
  }

  // U* with the front weights replaced by `w`.
  UtilityOptimum BestForFront(const std::vector<double>& w) {
    if (!by_front_) BuildByFront();
    return ArgmaxOnGrid(*by_front_ * AsVector(w), grid_);
  }

 private:
  void BuildByPref() {
    const size_t num_front = front_.size();
    const size_t num_pref = pref_.size();
    by_pref_ = RowMatrix(grid_.size(), num_pref);
    std::vector<size_t> order(num_front);
    std::vector<double> sorted_alpha(num_front);
    std::vector<double> mass_below(num_front + 1);
    std::vector<double> alpha_mass_below(num_front + 1);
    for (size_t g = 0; g < grid_.size(); ++g) {
      const double p = grid_[g];
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return alpha_(g, a) < alpha_(g, b);
      });
      for (size_t i = 0; i < num_front; ++i) {
        const double a = alpha_(g, order[i]);
        const double w = front_weights_[order[i]];
        sorted_alpha[i] = a;
        mass_below[i + 1] = mass_below[i] + w;
        alpha_mass_below[i + 1] = alpha_mass_below[i] + w * a;
      }
      const double total = mass_below[num_front];
      for (size_t r = 0; r < num_pref; ++r) {
        const PreferenceWeights& w = pref_.value(r);
        // alpha / w2 < p / w1  <=>  alpha < p * w2 / w1.
        const double threshold = p * w.accuracy / w.privacy;
        const size_t i =
            std::lower_bound(sorted_alpha.begin(), sorted_alpha.end(),
                             threshold) -
            sorted_alpha.begin();
        (*by_pref_)(g, r) = alpha_mass_below[i] / w.accuracy +
                            (total - mass_below[i]) * p / w.privacy;
      }
    }
  }

  void BuildByFront() {
    const PrefSums sums(pref_.values(), pref_weights_);
    by_front_ = RowMatrix(grid_.size(), front_.size());
    for (size_t g = 0; g < grid_.size(); ++g) {
      for (size_t f = 0; f < front_.size(); ++f) {
        (*by_front_)(g, f) = sums.Expected(grid_[g], alpha_(g, f));
      }
    }
  }

  std::vector<double> grid_;
  const WeightedParticles<FrontSample>& front_;
  const WeightedParticles<PreferenceWeights>& pref_;
  std::vector<double> front_weights_;
  std::vector<double> pref_weights_;
  RowMatrix alpha_;
  std::optional<RowMatrix> by_pref_;
  std::optional<RowMatrix> by_front_;
};

double MeanOf(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double StdErrorOf(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  const double mean = MeanOf(v);
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) /
                   static_cast<double>(v.size()));
}

// log P(choice j | w_r) for every preference particle r (row) and option j.
std::vector<std::vector<double>> ChoiceLogLikelihoods(
    const CurveQuery& query, const WeightedParticles<PreferenceWeights>& pref,
    double temperature) {
  std::vector<std::vector<double>> ll(pref.size());
  std::vector<double> u(query.size());
  for (size_t r = 0; r < pref.size(); ++r) {
    for (size_t j = 0; j < query.size(); ++j) {
      u[j] = ChebyshevUtilityUnchecked(query.points[j], pref.value(r));
    }
    ll[r] = BoltzmannLogProbs(u, temperature);
  }
  return ll;
}

// Preference weights after observing choice `j`. Increments are shifted by
// their maximum so a choice that is equally likely under every particle
// leaves the weights bit-identical.
std::vector<double> PrefWeightsAfterChoice(
    const WeightedParticles<PreferenceWeights>& pref,
    const std::vector<std::vector<double>>& ll, size_t j) {
  double max_ll = -std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < pref.size(); ++r) max_ll = std::max(max_ll, ll[r][j]);
  std::vector<double> lw(pref.log_weights());
  for (size_t r = 0; r < lw.size(); ++r) lw[r] += ll[r][j] - max_ll;
  return ExpNormalized(lw);
}

KgResult ChoiceKg(UtilityTables& tables, const CurveQuery& query,
                  double temperature, int num_sims, bool exact, Rng& rng) {
  const auto& pref = tables.pref();
  const double current =
      tables.BestForPref(ExpNormalized(pref.log_weights())).utility;
  const std::vector<std::vector<double>> ll =
      ChoiceLogLikelihoods(query, pref, temperature);
  std::map<size_t, double> delta_by_choice;
  auto delta_for = [&](size_t j) {
    auto it = delta_by_choice.find(j);
    if (it != delta_by_choice.end()) return it->second;
    const double d =
        tables.BestForPref(PrefWeightsAfterChoice(pref, ll, j)).utility -
        current;
    delta_by_choice.emplace(j, d);
    return d;
  };

  KgResult result;
  if (exact) {
    result.exact = true;
    const std::vector<double> w = ExpNormalized(pref.log_weights());
    for (size_t j = 0; j < query.size(); ++j) {
      double prob = 0;
      for (size_t r = 0; r < pref.size(); ++r) prob += w[r] * std::exp(ll[r][j]);
      const double d = delta_for(j);
      result.outcome_probs.push_back(prob);
      result.deltas.push_back(d);
      result.value += prob * d;
    }
    return result;
  }
  std::vector<double> probs(query.size());
  for (int s = 0; s < num_sims; ++s) {
    const size_t r = pref.SampleIndex(rng);
    for (size_t j = 0; j < query.size(); ++j) probs[j] = std::exp(ll[r][j]);
    std::discrete_distribution<size_t> choice(probs.begin(), probs.end());
    result.deltas.push_back(delta_for(choice(rng)));
  }
  result.value = MeanOf(result.deltas);
  result.std_error = StdErrorOf(result.deltas);
  return result;
}

double GaussianLogPdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2 * std::numbers::pi);
}

KgResult PrivacyKg(UtilityTables& tables, double privacy, int num_sims,
                   Rng& rng) {
  const auto& front = tables.front();
  const double current =
      tables.BestForFront(ExpNormalized(front.log_weights())).utility;
  std::vector<double> mean(front.size());
  for (size_t f = 0; f < front.size(); ++f) {
    mean[f] = EvalFrontUnchecked(privacy, front.value(f).params);
  }
  KgResult result;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> ll(front.size());
  std::vector<double> lw(front.size());
  for (int s = 0; s < num_sims; ++s) {
    const size_t f0 = front.SampleIndex(rng);
    const double alpha = mean[f0] + front.value(f0).noise.sigma * normal(rng);
    double max_ll = -std::numeric_limits<double>::infinity();
    for (size_t f = 0; f < front.size(); ++f) {
      ll[f] = GaussianLogPdf(alpha, mean[f], front.value(f).noise.sigma);
      max_ll = std::max(max_ll, ll[f]);
    }
    for (size_t f = 0; f < front.size(); ++f) {
      lw[f] = front.log_weights()[f] + (ll[f] - max_ll);
    }
    result.deltas.push_back(tables.BestForFront(ExpNormalized(lw)).utility -
                            current);
  }
  result.value = MeanOf(result.deltas);
  result.std_error = StdErrorOf(result.deltas);
  return result;
}

absl::Status CheckTemperature(double temperature) {
  if (!(temperature > 0) || !std::isfinite(temperature)) {
    return absl::InvalidArgumentError("temperature must be > 0");
  }
  return absl::OkStatus();
}

// Posteriors thinned to the configured caps, owned for the duration of one
// acquisition call.
struct ThinnedPosteriors {
  WeightedParticles<FrontSample> front;
  WeightedParticles<PreferenceWeights> pref;
};

ThinnedPosteriors Thin(const FrontPosterior& front, const PrefPosterior& pref,
                       const AcquisitionConfig& config, Rng& rng) {
  return {front.particles().Thinned(config.max_front_particles, rng),
          pref.particles().Thinned(config.max_pref_particles, rng)};
}

// Discretized posterior-mean front, clamped to [0, 1].
absl::StatusOr<CurveQuery> MeanFrontQuery(const FrontPosterior& front, int q) {
  if (q < 2) return absl::InvalidArgumentError("discretization needs q >= 2");
  absl::StatusOr<MeanCurve> mean = PosteriorMeanCurve(front, UniformGrid(q));
  if (!mean.ok()) return mean.status();
  CurveQuery query;
  for (const MeanCurvePoint& pt : mean->points) {
    query.points.push_back({pt.privacy, std::clamp(pt.mean, 0.0, 1.0)});
  }
  return query;
}

std::pair<int, int> DistinctPair(int q, Rng& rng) {
  std::uniform_int_distribution<int> first(0, q - 1);
  std::uniform_int_distribution<int> second(0, q - 2);
  const int i = first(rng);
  int j = second(rng);
  if (j >= i) ++j;
  return {std::min(i, j), std::max(i, j)};
}

int ArgmaxKg(const std::vector<KgResult>& results) {
  int best = 0;
  for (size_t i = 1; i < results.size(); ++i) {
    if (results[i].value > results[best].value) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace

absl::Status Validate(const AcquisitionConfig& config) {
  if (config.p_grid_size < 2) {
    return absl::InvalidArgumentError("p_grid_size must be >= 2");
  }
  const std::pair<const char*, int> positive[] = {
      {"num_sims", config.num_sims},
      {"num_curve_candidates", config.num_curve_candidates},
      {"num_p_candidates", config.num_p_candidates},
      {"num_pair_candidates", config.num_pair_candidates},
      {"max_front_particles", config.max_front_particles},
      {"max_pref_particles", config.max_pref_particles},
  };
  for (const auto& [name, value] : positive) {
    if (value < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s must be >= 1, got %d", name, value));
    }
  }
  if (config.max_exact_outcomes < 0) {
    return absl::InvalidArgumentError("max_exact_outcomes must be >= 0");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> ExpectedUtility(double privacy,
                                       const FrontPosterior& front,
                                       const PrefPosterior& pref) {
  if (!(privacy >= 0 && privacy <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("privacy %g outside [0, 1]", privacy));
  }
  const PrefSums sums(pref.particles().values(), pref.particles().Weights());
  const std::vector<double> w = front.particles().Weights();
  double total = 0;
  for (size_t f = 0; f < w.size(); ++f) {
    const double alpha = std::clamp(
        EvalFrontUnchecked(privacy, front.particles().value(f).params), 0.0,
        1.0);
    total += w[f] * sums.Expected(privacy, alpha);
  }
  return total;
}

absl::StatusOr<UtilityOptimum> MaxExpectedUtility(const FrontPosterior& front,
                                                  const PrefPosterior& pref,
                                                  int grid_size) {
  if (grid_size < 2) {
    return absl::InvalidArgumentError("p_grid_size must be >= 2");
  }
  UtilityTables tables(front.particles(), pref.particles(), grid_size);
  return tables.BestForFront(front.particles().Weights());
}

absl::StatusOr<KgResult> CurveKnowledgeGradient(const CurveQuery& query,
                                                const FrontPosterior& front,
                                                const PrefPosterior& pref,
                                                double temperature,
                                                const AcquisitionConfig& config,
                                                Rng& rng) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  if (absl::Status s = Validate(query); !s.ok()) return s;
  if (absl::Status s = CheckTemperature(temperature); !s.ok()) return s;
  ThinnedPosteriors thin = Thin(front, pref, config, rng);
  UtilityTables tables(thin.front, thin.pref, config.p_grid_size);
  const bool exact =
      static_cast<int>(query.size()) <= config.max_exact_outcomes;
  return ChoiceKg(tables, query, temperature, config.num_sims, exact, rng);
}

absl::StatusOr<KgResult> PairKnowledgeGradient(TradeOffPoint a,
                                               TradeOffPoint b,
                                               const FrontPosterior& front,
                                               const PrefPosterior& pref,
                                               double temperature,
                                               const AcquisitionConfig& config,
                                               Rng& rng) {
  absl::StatusOr<CurveQuery> query = MakePairQuery(a, b);
  if (!query.ok()) return query.status();
  return CurveKnowledgeGradient(*query, front, pref, temperature, config, rng);
}

absl::StatusOr<KgResult> PrivacyKnowledgeGradient(
    double privacy, const FrontPosterior& front, const PrefPosterior& pref,
    const AcquisitionConfig& config, Rng& rng) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  if (!(privacy >= 0 && privacy <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("candidate privacy %g outside [0, 1]", privacy));
  }
  ThinnedPosteriors thin = Thin(front, pref, config, rng);
  UtilityTables tables(thin.front, thin.pref, config.p_grid_size);
  return PrivacyKg(tables, privacy, config.num_sims, rng);
}

absl::StatusOr<KgResult> ExactChoiceKnowledgeGradient(
    const CurveQuery& query, const FrontPosterior& front,
    const PrefPosterior& pref, double temperature, int p_grid_size) {
  if (absl::Status s = Validate(query); !s.ok()) return s;
  if (absl::Status s = CheckTemperature(temperature); !s.ok()) return s;
  if (p_grid_size < 2) {
    return absl::InvalidArgumentError("p_grid_size must be >= 2");
  }
  UtilityTables tables(front.particles(), pref.particles(), p_grid_size);
  Rng unused;
  return ChoiceKg(tables, query, temperature, 0, /*exact=*/true, unused);
}

absl::StatusOr<QuerySelection> SelectNextCurve(
    const FrontPosterior& front, const PrefPosterior& pref,
    const FrontPrior& candidate_prior, const UserModelConfig& user,
    const AcquisitionConfig& config, Rng& rng) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  if (absl::Status s = Validate(user); !s.ok()) return s;
  if (absl::Status s = Validate(candidate_prior); !s.ok()) return s;

  std::vector<CurveQuery> candidates;
  const int from_posterior = (config.num_curve_candidates + 1) / 2;
  for (int i = 0; i < config.num_curve_candidates; ++i) {
    const FrontParams params =
        i < from_posterior
            ? front.particles().value(front.particles().SampleIndex(rng)).params
            : SamplePrior(candidate_prior, rng).params;
    absl::StatusOr<CurveQuery> query =
        DiscretizeCurve(params, user.discretization);
    if (!query.ok()) return query.status();
    candidates.push_back(*std::move(query));
  }

  ThinnedPosteriors thin = Thin(front, pref, config, rng);
  UtilityTables tables(thin.front, thin.pref, config.p_grid_size);
  const bool exact = user.discretization <= config.max_exact_outcomes;
  const uint64_t base = NextSeed(rng);
  QuerySelection selection;
  for (size_t i = 0; i < candidates.size(); ++i) {
    Rng stream = DeriveRng(base, i);
    KgResult kg = ChoiceKg(tables, candidates[i], user.temperature,
                           config.num_sims, exact, stream);
    kg.candidate = static_cast<int>(i);
    selection.evaluated.push_back(std::move(kg));
  }
  selection.best = ArgmaxKg(selection.evaluated);
  selection.query = std::move(candidates[selection.best]);
  return selection;
}

absl::StatusOr<PrivacySelection> SelectNextPrivacy(
    const FrontPosterior& front, const PrefPosterior& pref,
    const AcquisitionConfig& config, Rng& rng) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  PrivacySelection selection;
  selection.candidates = config.num_p_candidates == 1
                             ? std::vector<double>{0.5}
                             : UniformGrid(config.num_p_candidates);
  ThinnedPosteriors thin = Thin(front, pref, config, rng);
  UtilityTables tables(thin.front, thin.pref, config.p_grid_size);
  const uint64_t base = NextSeed(rng);
  for (size_t i = 0; i < selection.candidates.size(); ++i) {
    Rng stream = DeriveRng(base, i);
    KgResult kg =
        PrivacyKg(tables, selection.candidates[i], config.num_sims, stream);
    kg.candidate = static_cast<int>(i);
    selection.evaluated.push_back(std::move(kg));
  }
  selection.best = ArgmaxKg(selection.evaluated);
  selection.privacy = selection.candidates[selection.best];
  return selection;
}

absl::StatusOr<QuerySelection> SelectNextPair(const FrontPosterior& front,
                                              const PrefPosterior& pref,
                                              const UserModelConfig& user,
                                              const AcquisitionConfig& config,
                                              Rng& rng) {
  if (absl::Status s = Validate(config); !s.ok()) return s;
  if (absl::Status s = Validate(user); !s.ok()) return s;
  absl::StatusOr<CurveQuery> mean = MeanFrontQuery(front, user.discretization);
  if (!mean.ok()) return mean.status();

  std::vector<CurveQuery> candidates;
  for (int i = 0; i < config.num_pair_candidates; ++i) {
    const auto [a, b] = DistinctPair(user.discretization, rng);
    absl::StatusOr<CurveQuery> pair =
        MakePairQuery(mean->points[a], mean->points[b]);
    if (!pair.ok()) return pair.status();
    candidates.push_back(*std::move(pair));
  }

  ThinnedPosteriors thin = Thin(front, pref, config, rng);
  UtilityTables tables(thin.front, thin.pref, config.p_grid_size);
  const bool exact = 2 <= config.max_exact_outcomes;
  const uint64_t base = NextSeed(rng);
  QuerySelection selection;
  for (size_t i = 0; i < candidates.size(); ++i) {
    Rng stream = DeriveRng(base, i);
    KgResult kg = ChoiceKg(tables, candidates[i], user.temperature,
                           config.num_sims, exact, stream);
    kg.candidate = static_cast<int>(i);
    selection.evaluated.push_back(std::move(kg));
  }
  selection.best = ArgmaxKg(selection.evaluated);
  selection.query = std::move(candidates[selection.best]);
  return selection;
}

absl::StatusOr<CurveQuery> RandomCurve(const FrontPrior& prior, int q,
                                       Rng& rng) {
  if (absl::Status s = Validate(prior); !s.ok()) return s;
  return DiscretizeCurve(SamplePrior(prior, rng).params, q);
}

absl::StatusOr<CurveQuery> RandomPair(const FrontPosterior& front, int q,
                                      Rng& rng) {
  absl::StatusOr<CurveQuery> mean = MeanFrontQuery(front, q);
  if (!mean.ok()) return mean.status();
  const auto [a, b] = DistinctPair(q, rng);
  return MakePairQuery(mean->points[a], mean->points[b]);
}

double RandomPrivacy(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace dptradeoff
