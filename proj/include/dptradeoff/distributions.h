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

#ifndef DPTRADEOFF_DISTRIBUTIONS_H_
#define DPTRADEOFF_DISTRIBUTIONS_H_

#include <string>
#include <utility>
#include <variant>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/random.h"
#include "json.hpp"

namespace dptradeoff {

// Univariate prior families. Parameterizations follow the usual conventions:
// Beta(a, b), LogNormal(mu, sigma) of the underlying normal, Normal(mean,
// stddev), Uniform(lo, hi), Gamma(shape, scale).
struct BetaDist {
  double a;
  double b;
};
struct LogNormalDist {
  double mu;
  double sigma;
};
struct NormalDist {
  double mean;
  double stddev;
};
struct UniformDist {
  double lo;
  double hi;
};
struct GammaDist {
  double shape;
  double scale;
};

using Distribution =
    std::variant<BetaDist, LogNormalDist, NormalDist, UniformDist, GammaDist>;

absl::Status Validate(const Distribution& dist);

double Sample(const Distribution& dist, Rng& rng);

// Log density; -infinity outside the support.
double LogDensity(const Distribution& dist, double x);

double Mean(const Distribution& dist);
double Variance(const Distribution& dist);

// Closed support interval, possibly infinite at either end.
std::pair<double, double> Support(const Distribution& dist);

std::string Describe(const Distribution& dist);

nlohmann::json ToJson(const Distribution& dist);
absl::StatusOr<Distribution> DistributionFromJson(const nlohmann::json& j);

// Gamma(shape, 1) draws combined into Beta/Dirichlet samples.
double SampleBeta(double a, double b, Rng& rng);

}  // namespace dptradeoff

#endif  // DPTRADEOFF_DISTRIBUTIONS_H_
