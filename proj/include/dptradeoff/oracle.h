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

// Accuracy oracles: sources of the best accuracy achievable at a privacy
// budget epsilon. The closed form is the expected accuracy of logistic
// regression released by Laplace output perturbation; the tabulated oracle
// interpolates a measured front; the external oracle delegates to a command
// (typically a hyperparameter-optimized DP training run).

#ifndef DPTRADEOFF_ORACLE_H_
#define DPTRADEOFF_ORACLE_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dptradeoff/front_model.h"
#include "dptradeoff/normalization.h"
#include "dptradeoff/random.h"

namespace dptradeoff {

// 1 - 0.5 * exp(-c * epsilon).
double ClosedFormLogisticAccuracy(double c, double epsilon);

// The closed form expressed in normalized coordinates, which is exactly a
// Gompertz front: offset (1 - alpha_min) / d, span 0.5 / d, steepness
// c * eps_max, location p_max - p_min, with d = alpha_max - alpha_min.
FrontParams ClosedFormLogisticFront(double c, const NormalizationSpec& spec);

// Brute-force check of the closed form: a one-dimensional classifier with
// coefficient xi is released as xi + eta with eta ~ Laplace(S / epsilon) and
// S = |xi| / c, and evaluated on x ~ Uniform[-1, 1]. Draws `n_noise` noise
// values and `n_x` inputs per noise value; returns the fraction of (noise,
// input) pairs classified as the noiseless model does.
double MonteCarloLogisticAccuracy(double c, double epsilon, int n_noise,
                                  int n_x, Rng& rng, double xi = 1.0);

// Monotone piecewise-linear front in -log(epsilon).
class TabulatedFront {
 public:
  // CSV with header `epsilon,accuracy`, sorted ascending in epsilon.
  static absl::StatusOr<TabulatedFront> Load(const std::string& path);
  static absl::StatusOr<TabulatedFront> FromPoints(
      std::vector<double> epsilon, std::vector<double> accuracy);

  // Errors with OutOfRange outside the tabulated epsilon range.
  absl::StatusOr<double> Accuracy(double epsilon) const;

  double eps_min() const { return epsilon_.front(); }
  double eps_max() const { return epsilon_.back(); }
  const std::vector<double>& epsilons() const { return epsilon_; }
  const std::vector<double>& accuracies() const { return accuracy_; }
  double accuracy_min() const;
  double accuracy_max() const;

 private:
  TabulatedFront(std::vector<double> epsilon, std::vector<double> accuracy)
      : epsilon_(std::move(epsilon)), accuracy_(std::move(accuracy)) {}

  std::vector<double> epsilon_;
  std::vector<double> accuracy_;
};

// Runs `command_template` with every `{epsilon}` replaced by the budget and
// parses the accuracy printed on the final output line.
absl::StatusOr<double> RunExternalOracle(const std::string& command_template,
                                         double epsilon);

struct OracleSpec {
  enum class Kind { kClosedFormLogistic, kTabulated, kExternal };
  Kind kind = Kind::kClosedFormLogistic;
  double c = 5;             // closed form: |xi| / sensitivity
  std::string path;         // tabulated
  std::string command;      // external, with an {epsilon} placeholder
  double noise_sigma = 0;   // Gaussian noise on raw accuracy
  double delta = 1e-5;      // metadata only
};

absl::Status Validate(const OracleSpec& spec);
std::string OracleKindName(OracleSpec::Kind kind);
absl::StatusOr<OracleSpec::Kind> ParseOracleKind(const std::string& name);

class Oracle {
 public:
  // Loads tables eagerly so that missing files fail at construction.
  static absl::StatusOr<Oracle> Create(const OracleSpec& spec);

  const OracleSpec& spec() const { return spec_; }
  const std::optional<TabulatedFront>& table() const { return table_; }

  // Whether the noiseless front is known (closed form and tabulated).
  bool has_truth() const { return spec_.kind != OracleSpec::Kind::kExternal; }

  // Raw accuracy without observation noise.
  absl::StatusOr<double> NoiselessAccuracy(double epsilon) const;

  // One evaluation at normalized privacy `p`, returned normalized.
  absl::StatusOr<FrontObservation> Evaluate(const NormalizationSpec& norm,
                                            double p, Rng& rng) const;

 private:
  explicit Oracle(OracleSpec spec) : spec_(std::move(spec)) {}

  OracleSpec spec_;
  std::optional<TabulatedFront> table_;
};

}  // namespace dptradeoff

#endif  // DPTRADEOFF_ORACLE_H_
