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

#include "dptradeoff/normalization.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_format.h"

namespace dptradeoff {
namespace {

// Relative slack on the epsilon range so that denormalized endpoints
// round-trip without spurious range errors.
constexpr double kRangeSlack = 1e-12;

}  // namespace

double NormalizationSpec::p_min() const { return -std::log(eps_max); }
double NormalizationSpec::p_max() const { return -std::log(eps_min); }

absl::Status Validate(const NormalizationSpec& spec) {
  if (!(spec.eps_min > 0) || !std::isfinite(spec.eps_min)) {
    return absl::InvalidArgumentError("normalization.eps_min must be > 0");
  }
  if (!(spec.eps_max > spec.eps_min) || !std::isfinite(spec.eps_max)) {
    return absl::InvalidArgumentError(
        "normalization.eps_max must be > eps_min");
  }
  if (!std::isfinite(spec.alpha_min) || !std::isfinite(spec.alpha_max) ||
      !(spec.alpha_max > spec.alpha_min)) {
    return absl::InvalidArgumentError(
        "normalization.alpha_max must be > alpha_min");
  }
  return absl::OkStatus();
}

absl::StatusOr<double> NormalizePrivacy(const NormalizationSpec& spec,
                                        double epsilon) {
  if (!(epsilon >= spec.eps_min * (1 - kRangeSlack) &&
        epsilon <= spec.eps_max * (1 + kRangeSlack))) {
    return absl::OutOfRangeError(
        absl::StrFormat("epsilon %g outside [%g, %g]", epsilon, spec.eps_min,
                        spec.eps_max));
  }
  const double p =
      (-std::log(epsilon) - spec.p_min()) / (spec.p_max() - spec.p_min());
  return std::clamp(p, 0.0, 1.0);
}

absl::StatusOr<double> DenormalizePrivacy(const NormalizationSpec& spec,
                                          double p) {
  if (!(p >= 0 && p <= 1)) {
    return absl::OutOfRangeError(
        absl::StrFormat("privacy level %g outside [0, 1]", p));
  }
  return std::exp(-(spec.p_min() + p * (spec.p_max() - spec.p_min())));
}

double NormalizeAccuracy(const NormalizationSpec& spec, double accuracy) {
  return (accuracy - spec.alpha_min) / (spec.alpha_max - spec.alpha_min);
}

double DenormalizeAccuracy(const NormalizationSpec& spec, double alpha) {
  return spec.alpha_min + alpha * (spec.alpha_max - spec.alpha_min);
}

}  // namespace dptradeoff
