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

// Maps raw (epsilon, accuracy) pairs to the unit square the models work in.
// The privacy level is p = -log(epsilon), min-max normalized so that
// eps_max -> 0 and eps_min -> 1 (larger p = stronger privacy).

#ifndef DPTRADEOFF_NORMALIZATION_H_
#define DPTRADEOFF_NORMALIZATION_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dptradeoff {

struct NormalizationSpec {
  double eps_min = 0.01;
  double eps_max = 0.5;
  double alpha_min = 0.5;
  double alpha_max = 1.0;

  double p_min() const;
  double p_max() const;
};

absl::Status Validate(const NormalizationSpec& spec);

// Errors with OutOfRange when epsilon lies outside [eps_min, eps_max].
absl::StatusOr<double> NormalizePrivacy(const NormalizationSpec& spec,
                                        double epsilon);
// Errors with OutOfRange when p lies outside [0, 1].
absl::StatusOr<double> DenormalizePrivacy(const NormalizationSpec& spec,
                                          double p);

// Accuracy maps are affine and defined on the whole real line so that noisy
// observations beyond the nominal range survive the round trip.
double NormalizeAccuracy(const NormalizationSpec& spec, double accuracy);
double DenormalizeAccuracy(const NormalizationSpec& spec, double alpha);

}  // namespace dptradeoff

#endif  // DPTRADEOFF_NORMALIZATION_H_
