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

#include "dptradeoff/distributions.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "absl/strings/str_format.h"

namespace dptradeoff {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool Positive(double x) { return std::isfinite(x) && x > 0; }

}  // namespace

double SampleBeta(double a, double b, Rng& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

absl::Status Validate(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const BetaDist& d) -> absl::Status {
            if (!Positive(d.a) || !Positive(d.b)) {
              return absl::InvalidArgumentError("beta parameters must be > 0");
            }
            return absl::OkStatus();
          },
          [](const LogNormalDist& d) -> absl::Status {
            if (!std::isfinite(d.mu) || !Positive(d.sigma)) {
              return absl::InvalidArgumentError(
                  "lognormal needs finite mu and sigma > 0");
            }
            return absl::OkStatus();
          },
          [](const NormalDist& d) -> absl::Status {
            if (!std::isfinite(d.mean) || !Positive(d.stddev)) {
              return absl::InvalidArgumentError(
                  "normal needs finite mean and stddev > 0");
            }
            return absl::OkStatus();
          },
          [](const UniformDist& d) -> absl::Status {
            if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi)) {
              return absl::InvalidArgumentError("uniform needs lo < hi");
            }
            return absl::OkStatus();
          },
          [](const GammaDist& d) -> absl::Status {
            if (!Positive(d.shape) || !Positive(d.scale)) {
              return absl::InvalidArgumentError(
                  "gamma shape and scale must be > 0");
            }
            return absl::OkStatus();
          },
      },
      dist);
}

double Sample(const Distribution& dist, Rng& rng) {
  return std::visit(
      Overloaded{
          [&](const BetaDist& d) { return SampleBeta(d.a, d.b, rng); },
          [&](const LogNormalDist& d) {
            return std::lognormal_distribution<double>(d.mu, d.sigma)(rng);
          },
          [&](const NormalDist& d) {
            return std::normal_distribution<double>(d.mean, d.stddev)(rng);
          },
          [&](const UniformDist& d) {
            return std::uniform_real_distribution<double>(d.lo, d.hi)(rng);
          },
          [&](const GammaDist& d) {
            return std::gamma_distribution<double>(d.shape, d.scale)(rng);
          },
      },
      dist);
}

double LogDensity(const Distribution& dist, double x) {
  if (!std::isfinite(x)) return -kInf;
  return std::visit(
      Overloaded{
          [x](const BetaDist& d) {
            if (x <= 0 || x >= 1) return -kInf;
            return (d.a - 1) * std::log(x) + (d.b - 1) * std::log1p(-x) +
                   std::lgamma(d.a + d.b) - std::lgamma(d.a) - std::lgamma(d.b);
          },
          [x](const LogNormalDist& d) {
            if (x <= 0) return -kInf;
            const double z = (std::log(x) - d.mu) / d.sigma;
            return -0.5 * z * z - std::log(x * d.sigma) -
                   0.5 * std::log(2 * std::numbers::pi);
          },
          [x](const NormalDist& d) {
            const double z = (x - d.mean) / d.stddev;
            return -0.5 * z * z - std::log(d.stddev) -
                   0.5 * std::log(2 * std::numbers::pi);
          },
          [x](const UniformDist& d) {
            if (x < d.lo || x > d.hi) return -kInf;
            return -std::log(d.hi - d.lo);
          },
          [x](const GammaDist& d) {
            if (x <= 0) return -kInf;
            return (d.shape - 1) * std::log(x) - x / d.scale -
                   std::lgamma(d.shape) - d.shape * std::log(d.scale);
          },
      },
      dist);
}

double Mean(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const BetaDist& d) { return d.a / (d.a + d.b); },
          [](const LogNormalDist& d) {
            return std::exp(d.mu + 0.5 * d.sigma * d.sigma);
          },
          [](const NormalDist& d) { return d.mean; },
          [](const UniformDist& d) { return 0.5 * (d.lo + d.hi); },
          [](const GammaDist& d) { return d.shape * d.scale; },
      },
      dist);
}

double Variance(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const BetaDist& d) {
            const double s = d.a + d.b;
            return d.a * d.b / (s * s * (s + 1));
          },
          [](const LogNormalDist& d) {
            const double s2 = d.sigma * d.sigma;
            return (std::exp(s2) - 1) * std::exp(2 * d.mu + s2);
          },
          [](const NormalDist& d) { return d.stddev * d.stddev; },
          [](const UniformDist& d) {
            return (d.hi - d.lo) * (d.hi - d.lo) / 12.0;
          },
          [](const GammaDist& d) { return d.shape * d.scale * d.scale; },
      },
      dist);
}

std::pair<double, double> Support(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const BetaDist&) { return std::pair(0.0, 1.0); },
          [](const LogNormalDist&) { return std::pair(0.0, kInf); },
          [](const NormalDist&) { return std::pair(-kInf, kInf); },
          [](const UniformDist& d) { return std::pair(d.lo, d.hi); },
          [](const GammaDist&) { return std::pair(0.0, kInf); },
      },
      dist);
}

std::string Describe(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const BetaDist& d) { return absl::StrFormat("Beta(%g, %g)", d.a, d.b); },
          [](const LogNormalDist& d) {
            return absl::StrFormat("LogNormal(%g, %g)", d.mu, d.sigma);
          },
          [](const NormalDist& d) {
            return absl::StrFormat("Normal(%g, %g)", d.mean, d.stddev);
          },
          [](const UniformDist& d) {
            return absl::StrFormat("Uniform(%g, %g)", d.lo, d.hi);
          },
          [](const GammaDist& d) {
            return absl::StrFormat("Gamma(shape=%g, scale=%g)", d.shape, d.scale);
          },
      },
      dist);
}

nlohmann::json ToJson(const Distribution& dist) {
  return std::visit(
      Overloaded{
          [](const BetaDist& d) {
            return nlohmann::json{{"family", "beta"}, {"a", d.a}, {"b", d.b}};
          },
          [](const LogNormalDist& d) {
            return nlohmann::json{
                {"family", "lognormal"}, {"mu", d.mu}, {"sigma", d.sigma}};
          },
          [](const NormalDist& d) {
            return nlohmann::json{
                {"family", "normal"}, {"mean", d.mean}, {"stddev", d.stddev}};
          },
          [](const UniformDist& d) {
            return nlohmann::json{{"family", "uniform"}, {"lo", d.lo}, {"hi", d.hi}};
          },
          [](const GammaDist& d) {
            return nlohmann::json{
                {"family", "gamma"}, {"shape", d.shape}, {"scale", d.scale}};
          },
      },
      dist);
}

absl::StatusOr<Distribution> DistributionFromJson(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    return absl::InvalidArgumentError(
        "distribution must be an object with a string 'family'");
  }
  const std::string family = j["family"].get<std::string>();
  auto number = [&j](const char* key) -> absl::StatusOr<double> {
    if (!j.contains(key) || !j[key].is_number()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("distribution field '%s' must be a number", key));
    }
    return j[key].get<double>();
  };
  auto two = [&](const char* k1, const char* k2)
      -> absl::StatusOr<std::pair<double, double>> {
    absl::StatusOr<double> a = number(k1);
    if (!a.ok()) return a.status();
    absl::StatusOr<double> b = number(k2);
    if (!b.ok()) return b.status();
    return std::pair(*a, *b);
  };
  absl::StatusOr<std::pair<double, double>> params;
  Distribution dist;
  if (family == "beta") {
    params = two("a", "b");
    if (params.ok()) dist = BetaDist{params->first, params->second};
  } else if (family == "lognormal") {
    params = two("mu", "sigma");
    if (params.ok()) dist = LogNormalDist{params->first, params->second};
  } else if (family == "normal") {
    params = two("mean", "stddev");
    if (params.ok()) dist = NormalDist{params->first, params->second};
  } else if (family == "uniform") {
    params = two("lo", "hi");
    if (params.ok()) dist = UniformDist{params->first, params->second};
  } else if (family == "gamma") {
    params = two("shape", "scale");
    if (params.ok()) dist = GammaDist{params->first, params->second};
  } else {
    return absl::InvalidArgumentError(
        absl::StrFormat("unknown distribution family '%s'", family));
  }
  if (!params.ok()) return params.status();
  if (absl::Status s = Validate(dist); !s.ok()) return s;
  return dist;
}

}  // namespace dptradeoff
