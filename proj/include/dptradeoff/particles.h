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

// Weighted particle sets used as importance-sampling posteriors.

#ifndef DPTRADEOFF_PARTICLES_H_
#define DPTRADEOFF_PARTICLES_H_

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "dptradeoff/random.h"

namespace dptradeoff {

inline double LogSumExp(std::span<const double> values) {
  double max = -std::numeric_limits<double>::infinity();
  for (double v : values) max = std::max(max, v);
  if (!std::isfinite(max)) return max;
  double sum = 0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

// Shifts log-weights so that they log-sum-exp to zero.
inline std::vector<double> NormalizeLogWeights(std::span<const double> log_w) {
  const double lse = LogSumExp(log_w);
  std::vector<double> out(log_w.begin(), log_w.end());
  for (double& v : out) v -= lse;
  return out;
}

// Systematic resampling: returns `n` ancestor indices for normalized
// `weights`, using a single uniform offset.
inline std::vector<size_t> SystematicResample(std::span<const double> weights,
                                              size_t n, Rng& rng) {
  std::vector<size_t> ancestors;
  ancestors.reserve(n);
  const double u0 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cumulative = weights.empty() ? 0 : weights[0];
  size_t i = 0;
  for (size_t m = 0; m < n; ++m) {
    const double u = (u0 + static_cast<double>(m)) / static_cast<double>(n);
    while (u > cumulative && i + 1 < weights.size()) {
      ++i;
      cumulative += weights[i];
    }
    ancestors.push_back(i);
  }
  return ancestors;
}

// A collection of (value, log-weight) pairs. Log-weights are kept normalized
// so that the weights sum to one.
template <typename T>
class WeightedParticles {
 public:
  WeightedParticles() = default;

  // Uniform weights.
  explicit WeightedParticles(std::vector<T> values)
      : values_(std::move(values)),
        log_weights_(values_.size(),
                     -std::log(static_cast<double>(values_.size()))) {}

  WeightedParticles(std::vector<T> values, std::span<const double> log_weights)
      : values_(std::move(values)),
        log_weights_(NormalizeLogWeights(log_weights)) {
    assert(values_.size() == log_weights_.size());
  }

  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<T>& values() const { return values_; }
  const T& value(size_t i) const { return values_[i]; }
  const std::vector<double>& log_weights() const { return log_weights_; }

  std::vector<double> Weights() const {
    std::vector<double> w(log_weights_.size());
    std::transform(log_weights_.begin(), log_weights_.end(), w.begin(),
                   [](double lw) { return std::exp(lw); });
    return w;
  }

  // 1 / sum(w_i^2) for the normalized weights.
  double EffectiveSampleSize() const {
    double sum_sq = 0;
    for (double lw : log_weights_) sum_sq += std::exp(2 * lw);
    return 1.0 / sum_sq;
  }

  // Adds `log_increments[i]` to particle i's log-weight and renormalizes.
  WeightedParticles Reweighted(std::span<const double> log_increments) const {
    assert(log_increments.size() == size());
    std::vector<double> lw(log_weights_);
    for (size_t i = 0; i < lw.size(); ++i) lw[i] += log_increments[i];
    return WeightedParticles(values_, lw);
  }

  // Draws one index with probability equal to its weight.
  size_t SampleIndex(Rng& rng) const {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    double cumulative = 0;
    for (size_t i = 0; i < log_weights_.size(); ++i) {
      cumulative += std::exp(log_weights_[i]);
      if (u < cumulative) return i;
    }
    return log_weights_.size() - 1;
  }

  // Systematic resampling to `n` equally weighted particles.
  WeightedParticles Resampled(size_t n, Rng& rng) const {
    const std::vector<double> w = Weights();
    std::vector<T> out;
    out.reserve(n);
    for (size_t a : SystematicResample(w, n, rng)) out.push_back(values_[a]);
    return WeightedParticles(std::move(out));
  }

  // Systematic resampling to at most `n` particles, merging duplicated
  // ancestors into one particle carrying their combined weight. Sets of size
  // <= n are returned unchanged.
  WeightedParticles Thinned(size_t n, Rng& rng) const {
    if (size() <= n) return *this;
    std::vector<size_t> ancestors = SystematicResample(Weights(), n, rng);
    std::vector<T> out;
    std::vector<double> lw;
    for (size_t m = 0; m < ancestors.size();) {
      size_t run = 1;
      while (m + run < ancestors.size() && ancestors[m + run] == ancestors[m]) {
        ++run;
      }
      out.push_back(values_[ancestors[m]]);
      lw.push_back(std::log(static_cast<double>(run)));
      m += run;
    }
    return WeightedParticles(std::move(out), lw);
  }

 private:
  std::vector<T> values_;
  std::vector<double> log_weights_;
};

}  // namespace dptradeoff

#endif  // DPTRADEOFF_PARTICLES_H_
