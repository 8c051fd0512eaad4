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

#include "dptradeoff/oracle.h"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_replace.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace dptradeoff {

double ClosedFormLogisticAccuracy(double c, double epsilon) {
  return 1.0 - 0.5 * std::exp(-c * epsilon);
}

FrontParams ClosedFormLogisticFront(double c, const NormalizationSpec& spec) {
  const double d = spec.alpha_max - spec.alpha_min;
  FrontParams params;
  params.kind = FrontKind::kGompertz;
  params.offset = (1.0 - spec.alpha_min) / d;
  params.span = 0.5 / d;
  params.steepness = c * spec.eps_max;
  params.location = spec.p_max() - spec.p_min();
  return params;
}

double MonteCarloLogisticAccuracy(double c, double epsilon, int n_noise,
                                  int n_x, Rng& rng, double xi) {
  const double sensitivity = std::abs(xi) / c;
  const double scale = sensitivity / epsilon;
  std::exponential_distribution<double> exponential(1.0);
  std::uniform_real_distribution<double> input(-1.0, 1.0);
  long long correct = 0;
  for (int i = 0; i < n_noise; ++i) {
    // Difference of two unit exponentials is a unit Laplace variate.
    const double eta = scale * (exponential(rng) - exponential(rng));
    const double released = xi + eta;
    for (int j = 0; j < n_x; ++j) {
      const double x = input(rng);
      if ((released * x) * (xi * x) >= 0) ++correct;
    }
  }
  return static_cast<double>(correct) /
         (static_cast<double>(n_noise) * static_cast<double>(n_x));
}

absl::StatusOr<TabulatedFront> TabulatedFront::FromPoints(
    std::vector<double> epsilon, std::vector<double> accuracy) {
  if (epsilon.size() != accuracy.size()) {
    return absl::InvalidArgumentError("epsilon/accuracy length mismatch");
  }
  if (epsilon.size() < 2) {
    return absl::InvalidArgumentError("a tabulated front needs >= 2 rows");
  }
  for (size_t i = 0; i < epsilon.size(); ++i) {
    if (!(epsilon[i] > 0) || !std::isfinite(epsilon[i]) ||
        !std::isfinite(accuracy[i])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d: epsilon must be > 0 and values finite", i + 1));
    }
    if (i > 0 && !(epsilon[i] > epsilon[i - 1])) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "row %d: epsilon must be strictly ascending", i + 1));
    }
  }
  return TabulatedFront(std::move(epsilon), std::move(accuracy));
}

absl::StatusOr<TabulatedFront> TabulatedFront::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open tabulated front '%s'", path));
  }
  std::string line;
  if (!std::getline(in, line) ||
      absl::StripAsciiWhitespace(line) != "epsilon,accuracy") {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s:1: expected header 'epsilon,accuracy'", path));
  }
  std::vector<double> eps;
  std::vector<double> acc;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (absl::StripAsciiWhitespace(line).empty()) continue;
    std::vector<std::string> fields = absl::StrSplit(line, ',');
    double e = 0;
    double a = 0;
    if (fields.size() != 2 ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(fields[0]), &e) ||
        !absl::SimpleAtod(absl::StripAsciiWhitespace(fields[1]), &a)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: expected two numbers 'epsilon,accuracy'", path, line_no));
    }
    eps.push_back(e);
    acc.push_back(a);
  }
  absl::StatusOr<TabulatedFront> front =
      FromPoints(std::move(eps), std::move(acc));
  if (!front.ok()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: %s", path, front.status().message()));
  }
  return front;
}

absl::StatusOr<double> TabulatedFront::Accuracy(double epsilon) const {
  if (!(epsilon >= eps_min() * (1 - 1e-12) &&
        epsilon <= eps_max() * (1 + 1e-12))) {
    return absl::OutOfRangeError(absl::StrFormat(
        "epsilon %g outside tabulated range [%g, %g]; extrapolation refused",
        epsilon, eps_min(), eps_max()));
  }
  const double x = -std::log(epsilon);
  // -log(epsilon) is descending along the table.
  size_t hi = std::upper_bound(epsilon_.begin(), epsilon_.end(), epsilon) -
              epsilon_.begin();
  hi = std::clamp<size_t>(hi, 1, epsilon_.size() - 1);
  const size_t lo = hi - 1;
  const double x_lo = -std::log(epsilon_[lo]);
  const double x_hi = -std::log(epsilon_[hi]);
  const double t = std::clamp((x - x_lo) / (x_hi - x_lo), 0.0, 1.0);
  return accuracy_[lo] + t * (accuracy_[hi] - accuracy_[lo]);
}

double TabulatedFront::accuracy_min() const {
  return *std::min_element(accuracy_.begin(), accuracy_.end());
}

double TabulatedFront::accuracy_max() const {
  return *std::max_element(accuracy_.begin(), accuracy_.end());
}

absl::StatusOr<double> RunExternalOracle(const std::string& command_template,
                                         double epsilon) {
  const std::string command =
      absl::StrReplaceAll(command_template,
                          {{"{epsilon}", absl::StrFormat("%.17g", epsilon)}});
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (pipe == nullptr) {
    return absl::InternalError(
        absl::StrFormat("failed to start oracle command '%s'", command));
  }
  std::string output;
  std::array<char, 4096> buffer;
  size_t n = 0;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    output.append(buffer.data(), n);
  }
  const int status = pclose(pipe);
  const int exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (exit_code != 0) {
    return absl::InternalError(
        absl::StrFormat("oracle command '%s' exited with %d; output:\n%s",
                        command, exit_code, output));
  }
  std::vector<std::string> lines =
      absl::StrSplit(output, '\n', absl::SkipWhitespace());
  double accuracy = 0;
  if (lines.empty() ||
      !absl::SimpleAtod(absl::StripAsciiWhitespace(lines.back()), &accuracy) ||
      !(accuracy >= 0 && accuracy <= 1)) {
    return absl::InternalError(absl::StrFormat(
        "oracle command '%s' did not print an accuracy in [0,1] on its final "
        "line; output:\n%s",
        command, output));
  }
  return accuracy;
}

std::string OracleKindName(OracleSpec::Kind kind) {
  switch (kind) {
    case OracleSpec::Kind::kClosedFormLogistic:
      return "closed_form_logistic";
    case OracleSpec::Kind::kTabulated:
      return "tabulated";
    case OracleSpec::Kind::kExternal:
      return "external";
  }
  return "unknown";
}

absl::StatusOr<OracleSpec::Kind> ParseOracleKind(const std::string& name) {
  for (OracleSpec::Kind kind :
       {OracleSpec::Kind::kClosedFormLogistic, OracleSpec::Kind::kTabulated,
        OracleSpec::Kind::kExternal}) {
    if (name == OracleKindName(kind)) return kind;
  }
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown oracle kind '%s' (closed_form_logistic|tabulated|external)",
      name));
}

absl::Status Validate(const OracleSpec& spec) {
  if (!(spec.noise_sigma >= 0) || !std::isfinite(spec.noise_sigma)) {
    return absl::InvalidArgumentError("oracle.noise_sigma must be >= 0");
  }
  switch (spec.kind) {
    case OracleSpec::Kind::kClosedFormLogistic:
      if (!(spec.c > 0) || !std::isfinite(spec.c)) {
        return absl::InvalidArgumentError("oracle.C must be > 0");
      }
      break;
    case OracleSpec::Kind::kTabulated:
      if (spec.path.empty()) {
        return absl::InvalidArgumentError("oracle.path is required");
      }
      break;
    case OracleSpec::Kind::kExternal:
      if (spec.command.find("{epsilon}") == std::string::npos) {
        return absl::InvalidArgumentError(
            "oracle.command must contain an {epsilon} placeholder");
      }
      break;
  }
  return absl::OkStatus();
}

absl::StatusOr<Oracle> Oracle::Create(const OracleSpec& spec) {
  if (absl::Status s = Validate(spec); !s.ok()) return s;
  Oracle oracle(spec);
  if (spec.kind == OracleSpec::Kind::kTabulated) {
    absl::StatusOr<TabulatedFront> table = TabulatedFront::Load(spec.path);
    if (!table.ok()) return table.status();
    oracle.table_ = *std::move(table);
  }
  return oracle;
}

absl::StatusOr<double> Oracle::NoiselessAccuracy(double epsilon) const {
  switch (spec_.kind) {
    case OracleSpec::Kind::kClosedFormLogistic:
      return ClosedFormLogisticAccuracy(spec_.c, epsilon);
    case OracleSpec::Kind::kTabulated:
      return table_->Accuracy(epsilon);
    case OracleSpec::Kind::kExternal:
      return RunExternalOracle(spec_.command, epsilon);
  }
  return absl::InternalError("unknown oracle kind");
}

absl::StatusOr<FrontObservation> Oracle::Evaluate(const NormalizationSpec& norm,
                                                  double p, Rng& rng) const {
  absl::StatusOr<double> epsilon = DenormalizePrivacy(norm, p);
  if (!epsilon.ok()) return epsilon.status();
  absl::StatusOr<double> accuracy = NoiselessAccuracy(*epsilon);
  if (!accuracy.ok()) return accuracy.status();
  double raw = *accuracy;
  if (spec_.noise_sigma > 0) {
    raw += std::normal_distribution<double>(0.0, spec_.noise_sigma)(rng);
  }
  return FrontObservation{p, NormalizeAccuracy(norm, raw)};
}

}  // namespace dptradeoff
