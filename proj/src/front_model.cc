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

#include "dptradeoff/front_model.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "absl/strings/str_format.h"

namespace dptradeoff {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxPriorRejections = 100000;
constexpr int kNumFitParams = 4;

using ParamVector = Eigen::Matrix<double, kNumFitParams, 1>;

bool TransitionInUnit(const FrontParams& params) {
  const double inflection = std::log(params.steepness) / params.location;
  return inflection >= 0.0 && inflection <= 1.0;
}

FrontParams MapRawPrivacy(const FrontParams& raw,
                          const FrontPrior::RawPrivacyMap& map) {
  FrontParams out = raw;
  out.steepness = raw.steepness * std::exp(-raw.location * map.p_min);
  out.location = raw.location * map.p_range;
  return out;
}

double GaussianLogPdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2 * std::numbers::pi);
}

}  // namespace

std::string FrontKindName(FrontKind kind) {
  return kind == FrontKind::kSigmoid ? "sigmoid" : "gompertz";
}

absl::StatusOr<FrontKind> ParseFrontKind(const std::string& name) {
  if (name == "sigmoid") return FrontKind::kSigmoid;
  if (name == "gompertz") return FrontKind::kGompertz;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown front kind '%s' (sigmoid|gompertz)", name));
}

absl::Status ValidateParams(const FrontParams& params) {
  if (!std::isfinite(params.span) || !std::isfinite(params.steepness) ||
      !std::isfinite(params.offset) || !std::isfinite(params.location)) {
    return absl::InvalidArgumentError("front parameters must be finite");
  }
  if (params.span <= 0) {
    return absl::InvalidArgumentError("front span must be > 0");
  }
  if (params.steepness <= 0) {
    return absl::InvalidArgumentError("front steepness must be > 0");
  }
  if (params.kind == FrontKind::kGompertz && params.location <= 0) {
    return absl::InvalidArgumentError("gompertz location (rate) must be > 0");
  }
  return absl::OkStatus();
}

double EvalFrontUnchecked(double privacy, const FrontParams& params) {
  if (params.kind == FrontKind::kSigmoid) {
    return params.span /
               (1.0 + std::exp(params.steepness * (privacy - params.location))) +
           params.offset;
  }
  return params.offset -
         params.span *
             std::exp(-params.steepness * std::exp(-params.location * privacy));
}

absl::StatusOr<double> EvalFront(double privacy, const FrontParams& params) {
  if (!std::isfinite(privacy)) {
    return absl::InvalidArgumentError("privacy level must be finite");
  }
  if (absl::Status s = ValidateParams(params); !s.ok()) return s;
  return EvalFrontUnchecked(privacy, params);
}

FrontPrior FrontPrior::Default(FrontKind kind) {
  FrontPrior prior;
  prior.kind = kind;
  prior.noise = GammaDist{0.5, 0.1};
  if (kind == FrontKind::kSigmoid) {
    prior.span = BetaDist{40, 2};
    prior.steepness = LogNormalDist{std::log(10.0), 0.2};
    prior.location = BetaDist{2, 2};
    prior.offset = NormalDist{0, 0.1};
  } else {
    prior.span = UniformDist{0.8, 4};
    prior.steepness = UniformDist{10, 100};
    prior.location = UniformDist{1, 10};
    prior.offset = UniformDist{0.8, 1.1};
  }
  return prior;
}

absl::Status Validate(const FrontPrior& prior) {
  for (const Distribution* d : {&prior.span, &prior.steepness, &prior.location,
                                &prior.offset, &prior.noise}) {
    if (absl::Status s = Validate(*d); !s.ok()) return s;
  }
  if (Support(prior.noise).first < 0) {
    return absl::InvalidArgumentError("noise prior must be supported on (0, inf)");
  }
  if (prior.raw_privacy.has_value() && !(prior.raw_privacy->p_range > 0)) {
    return absl::InvalidArgumentError("raw privacy range must be > 0");
  }
  return absl::OkStatus();
}

FrontSample SamplePrior(const FrontPrior& prior, Rng& rng) {
  FrontSample sample;
  for (int attempt = 0;; ++attempt) {
    FrontParams p;
    p.kind = prior.kind;
    p.span = Sample(prior.span, rng);
    p.steepness = Sample(prior.steepness, rng);
    p.location = Sample(prior.location, rng);
    p.offset = Sample(prior.offset, rng);
    if (prior.raw_privacy.has_value()) p = MapRawPrivacy(p, *prior.raw_privacy);
    sample.params = p;
    if (prior.kind != FrontKind::kGompertz || !prior.transition_in_unit ||
        TransitionInUnit(p) || attempt >= kMaxPriorRejections) {
      break;
    }
  }
  do {
    sample.noise.sigma = Sample(prior.noise, rng);
  } while (!(sample.noise.sigma > 0));
  return sample;
}

double PriorLogDensity(const FrontPrior& prior, const FrontSample& sample) {
  const FrontParams& p = sample.params;
  if (ValidateParams(p).ok() == false || !(sample.noise.sigma > 0)) return -kInf;
  if (prior.kind == FrontKind::kGompertz && prior.transition_in_unit &&
      !TransitionInUnit(p)) {
    return -kInf;
  }
  double steepness = p.steepness;
  double location = p.location;
  double log_jacobian = 0;
  if (prior.raw_privacy.has_value()) {
    const auto& map = *prior.raw_privacy;
    location = p.location / map.p_range;
    steepness = p.steepness * std::exp(location * map.p_min);
    // d(k', c') / d(k, c) = p_range * exp(-c * p_min).
    log_jacobian = -std::log(map.p_range) + location * map.p_min;
  }
  return LogDensity(prior.span, p.span) +
         LogDensity(prior.steepness, steepness) +
         LogDensity(prior.location, location) +
         LogDensity(prior.offset, p.offset) +
         LogDensity(prior.noise, sample.noise.sigma) + log_jacobian;
}

FrontParams PriorMeanParams(const FrontPrior& prior) {
  FrontParams p;
  p.kind = prior.kind;
  p.span = Mean(prior.span);
  p.steepness = Mean(prior.steepness);
  p.location = Mean(prior.location);
  p.offset = Mean(prior.offset);
  if (prior.raw_privacy.has_value()) p = MapRawPrivacy(p, *prior.raw_privacy);
  return p;
}

double LogLikelihoodUnchecked(const FrontParams& params, NoiseScale noise,
                              std::span<const FrontObservation> obs) {
  double total = 0;
  for (const FrontObservation& o : obs) {
    total += GaussianLogPdf(o.accuracy, EvalFrontUnchecked(o.privacy, params),
                            noise.sigma);
  }
  return total;
}

absl::StatusOr<double> LogLikelihood(const FrontParams& params,
                                     NoiseScale noise,
                                     std::span<const FrontObservation> obs) {
  if (!(noise.sigma > 0) || !std::isfinite(noise.sigma)) {
    return absl::InvalidArgumentError("noise sigma must be > 0");
  }
  if (absl::Status s = ValidateParams(params); !s.ok()) return s;
  for (const FrontObservation& o : obs) {
    if (!std::isfinite(o.privacy) || !std::isfinite(o.accuracy)) {
      return absl::InvalidArgumentError("observations must be finite");
    }
  }
  return LogLikelihoodUnchecked(params, noise, obs);
}

absl::StatusOr<RejuvenationConfig::Mode> ParseRejuvenationMode(
    const std::string& name) {
  if (name == "none") return RejuvenationConfig::Mode::kNone;
  if (name == "resample") return RejuvenationConfig::Mode::kResample;
  if (name == "resample-move") return RejuvenationConfig::Mode::kResampleMove;
  return absl::InvalidArgumentError(absl::StrFormat(
      "unknown rejuvenation mode '%s' (none|resample|resample-move)", name));
}

std::string RejuvenationModeName(RejuvenationConfig::Mode mode) {
  switch (mode) {
    case RejuvenationConfig::Mode::kNone:
      return "none";
    case RejuvenationConfig::Mode::kResample:
      return "resample";
    case RejuvenationConfig::Mode::kResampleMove:
      return "resample-move";
  }
  return "none";
}

absl::StatusOr<FrontPosterior> FrontPosterior::FromPrior(
    const FrontPrior& prior, int particle_count, Rng& rng,
    RejuvenationConfig rejuvenation) {
  if (particle_count < 1) {
    return absl::InvalidArgumentError("particle_count must be >= 1");
  }
  if (absl::Status s = Validate(prior); !s.ok()) return s;
  std::vector<FrontSample> samples;
  samples.reserve(particle_count);
  for (int i = 0; i < particle_count; ++i) {
    samples.push_back(SamplePrior(prior, rng));
  }
  FrontPosterior post(prior.kind, WeightedParticles<FrontSample>(std::move(samples)));
  post.prior_ = prior;
  post.rejuvenation_ = rejuvenation;
  return post;
}

FrontPosterior FrontPosterior::PointMass(const FrontSample& sample) {
  FrontPosterior post(sample.params.kind,
                      WeightedParticles<FrontSample>({sample}));
  post.rejuvenation_.mode = RejuvenationConfig::Mode::kNone;
  return post;
}

absl::StatusOr<FrontPosterior> FrontPosterior::FromParticles(
    FrontKind kind, WeightedParticles<FrontSample> particles) {
  if (particles.empty()) {
    return absl::InvalidArgumentError("posterior needs at least one particle");
  }
  for (const FrontSample& s : particles.values()) {
    if (s.params.kind != kind) {
      return absl::InvalidArgumentError("particle kind does not match posterior");
    }
    if (absl::Status st = ValidateParams(s.params); !st.ok()) return st;
    if (!(s.noise.sigma > 0)) {
      return absl::InvalidArgumentError("particle noise sigma must be > 0");
    }
  }
  for (double lw : particles.log_weights()) {
    if (std::isnan(lw)) {
      return absl::InvalidArgumentError("particle log-weights must not be NaN");
    }
  }
  FrontPosterior post(kind, std::move(particles));
  post.rejuvenation_.mode = RejuvenationConfig::Mode::kNone;
  return post;
}

FrontPosterior FrontPosterior::Reweighted(
    std::span<const FrontObservation> obs) const {
  std::vector<double> increments(particles_.size());
  for (size_t i = 0; i < particles_.size(); ++i) {
    const FrontSample& s = particles_.value(i);
    increments[i] = LogLikelihoodUnchecked(s.params, s.noise, obs);
  }
  FrontPosterior out = *this;
  out.particles_ = particles_.Reweighted(increments);
  out.observations_.insert(out.observations_.end(), obs.begin(), obs.end());
  return out;
}

FrontPosterior FrontPosterior::Updated(const FrontObservation& obs,
                                       Rng& rng) const {
  FrontPosterior out = Reweighted(obs);
  const auto mode = rejuvenation_.mode;
  if (mode == RejuvenationConfig::Mode::kNone || particles_.size() < 2) {
    return out;
  }
  if (out.EffectiveSampleSize() >=
      rejuvenation_.ess_fraction * static_cast<double>(out.particle_count())) {
    return out;
  }
  return out.ResampleMove(
      rng, mode == RejuvenationConfig::Mode::kResampleMove && prior_.has_value());
}

// Systematic resampling followed by random-walk Metropolis moves targeting
// prior x likelihood of every observation so far. Coordinates are (span,
// steepness, offset, location, log sigma); proposal scales follow the
// resampled population's spread.
FrontPosterior FrontPosterior::ResampleMove(Rng& rng, bool move) const {
  FrontPosterior out = *this;
  out.particles_ = particles_.Resampled(particles_.size(), rng);
  ++out.rejuvenations_;
  if (!move) return out;

  constexpr int kDims = 5;
  using Coords = std::array<double, kDims>;
  auto to_coords = [](const FrontSample& s) {
    return Coords{s.params.span, s.params.steepness, s.params.offset,
                  s.params.location, std::log(s.noise.sigma)};
  };
  auto from_coords = [this](const Coords& c) {
    FrontSample s;
    s.params.kind = kind_;
    s.params.span = c[0];
    s.params.steepness = c[1];
    s.params.offset = c[2];
    s.params.location = c[3];
    s.noise.sigma = std::exp(c[4]);
    return s;
  };
  const FrontPrior& prior = *prior_;
  auto log_target = [&](const FrontSample& s) {
    const double lp = PriorLogDensity(prior, s);
    if (!std::isfinite(lp)) return -kInf;
    // log sigma coordinates: density picks up a factor sigma.
    return lp + std::log(s.noise.sigma) +
           LogLikelihoodUnchecked(s.params, s.noise, observations_);
  };

  std::vector<FrontSample> samples = out.particles_.values();
  const double n = static_cast<double>(samples.size());
  Coords mean{}, sq{};
  for (const FrontSample& s : samples) {
    const Coords c = to_coords(s);
    for (int d = 0; d < kDims; ++d) {
      mean[d] += c[d] / n;
      sq[d] += c[d] * c[d] / n;
    }
  }
  const std::array<double, kDims> prior_sd = {
      std::sqrt(Variance(prior.span)), std::sqrt(Variance(prior.steepness)),
      std::sqrt(Variance(prior.offset)), std::sqrt(Variance(prior.location)),
      1.0};
  Coords scale{};
  const double factor = 2.38 / std::sqrt(static_cast<double>(kDims));
  for (int d = 0; d < kDims; ++d) {
    const double sd = std::sqrt(std::max(0.0, sq[d] - mean[d] * mean[d]));
    scale[d] = factor * std::max(sd, 1e-3 * prior_sd[d]);
  }

  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (FrontSample& s : samples) {
    Coords current = to_coords(s);
    double current_lt = log_target(s);
    for (int step = 0; step < rejuvenation_.mcmc_steps; ++step) {
      Coords proposal = current;
      for (int d = 0; d < kDims; ++d) proposal[d] += scale[d] * normal(rng);
      const FrontSample candidate = from_coords(proposal);
      const double lt = log_target(candidate);
      if (std::isfinite(lt) && std::log(unif(rng)) < lt - current_lt) {
        current = proposal;
        current_lt = lt;
      }
    }
    s = from_coords(current);
  }
  out.particles_ = WeightedParticles<FrontSample>(std::move(samples));
  return out;
}

double EffectiveSampleSize(const FrontPosterior& posterior) {
  return posterior.EffectiveSampleSize();
}

std::vector<double> UniformGrid(int size) {
  std::vector<double> grid(std::max(size, 1));
  if (size <= 1) {
    grid[0] = 0;
    return grid;
  }
  for (int i = 0; i < size; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(size - 1);
  }
  return grid;
}

absl::StatusOr<MeanCurve> PosteriorMeanCurve(const FrontPosterior& posterior,
                                             std::span<const double> grid) {
  for (double p : grid) {
    if (!(p >= 0.0 && p <= 1.0)) {
      return absl::InvalidArgumentError("grid values must lie in [0, 1]");
    }
  }
  const auto& particles = posterior.particles();
  const std::vector<double> w = particles.Weights();
  MeanCurve curve;
  curve.degenerate = *std::max_element(w.begin(), w.end()) >= 1.0 - 1e-12;
  std::vector<double> values(w.size());
  std::vector<size_t> order(w.size());
  for (double p : grid) {
    double mean = 0;
    for (size_t i = 0; i < w.size(); ++i) {
      values[i] = EvalFrontUnchecked(p, particles.value(i).params);
      mean += w[i] * values[i];
    }
    MeanCurvePoint point{p, mean, mean, mean};
    if (!curve.degenerate) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(),
                [&](size_t a, size_t b) { return values[a] < values[b]; });
      double cumulative = 0;
      bool have_lower = false;
      for (size_t idx : order) {
        cumulative += w[idx];
        if (!have_lower && cumulative >= 0.05) {
          point.lower = values[idx];
          have_lower = true;
        }
        if (cumulative >= 0.95) {
          point.upper = values[idx];
          break;
        }
      }
    }
    curve.points.push_back(point);
  }
  return curve;
}

namespace {

struct Box {
  ParamVector lo;
  ParamVector hi;
};

ParamVector ToVector(const FrontParams& p) {
  ParamVector v;
  v << p.span, p.steepness, p.offset, p.location;
  return v;
}

FrontParams FromVector(const ParamVector& v, FrontKind kind) {
  FrontParams p;
  p.kind = kind;
  p.span = v[0];
  p.steepness = v[1];
  p.offset = v[2];
  p.location = v[3];
  return p;
}

Box FitBox(const FrontPrior& prior) {
  constexpr double kMargin = 1e-6;
  auto bounds = [&](const Distribution& d, bool positive) {
    auto [lo, hi] = Support(d);
    if (positive) lo = std::max(lo, 0.0);
    return std::pair(std::isfinite(lo) ? lo + kMargin : -1e6,
                     std::isfinite(hi) ? hi - kMargin : 1e6);
  };
  Box box;
  const std::array<std::pair<double, double>, kNumFitParams> b = {
      bounds(prior.span, true), bounds(prior.steepness, true),
      bounds(prior.offset, false),
      bounds(prior.location, prior.kind == FrontKind::kGompertz)};
  for (int i = 0; i < kNumFitParams; ++i) {
    box.lo[i] = b[i].first;
    box.hi[i] = b[i].second;
  }
  if (prior.raw_privacy.has_value()) {
    // Remapped coordinates; only positivity is known.
    box.lo[1] = kMargin;
    box.hi[1] = 1e6;
    box.lo[3] = prior.kind == FrontKind::kGompertz ? kMargin : -1e6;
    box.hi[3] = 1e6;
  }
  return box;
}

ParamVector Clip(const ParamVector& v, const Box& box) {
  return v.cwiseMax(box.lo).cwiseMin(box.hi);
}

double SumSquares(const ParamVector& v, FrontKind kind,
                  std::span<const FrontObservation> obs) {
  const FrontParams p = FromVector(v, kind);
  double sse = 0;
  for (const FrontObservation& o : obs) {
    const double r = EvalFrontUnchecked(o.privacy, p) - o.accuracy;
    sse += r * r;
  }
  return sse;
}

// Residual Jacobian rows d h(p) / d(span, steepness, offset, location).
Eigen::Matrix<double, 1, kNumFitParams> Gradient(const FrontParams& p,
                                                 double privacy) {
  Eigen::Matrix<double, 1, kNumFitParams> g;
  if (p.kind == FrontKind::kSigmoid) {
    const double s = 1.0 / (1.0 + std::exp(p.steepness * (privacy - p.location)));
    const double ds = s * (1.0 - s);
    g << s, -p.span * ds * (privacy - p.location), 1.0, p.span * ds * p.steepness;
  } else {
    const double e = std::exp(-p.location * privacy);
    const double gz = std::exp(-p.steepness * e);
    g << -gz, p.span * gz * e, 1.0, -p.span * gz * p.steepness * privacy * e;
  }
  return g;
}

struct LmOutcome {
  ParamVector params;
  double sse;
  int iterations;
  bool converged;
};

LmOutcome LevenbergMarquardt(ParamVector start, FrontKind kind, const Box& box,
                             std::span<const FrontObservation> obs) {
  constexpr int kMaxIterations = 500;
  ParamVector theta = Clip(start, box);
  double sse = SumSquares(theta, kind, obs);
  double lambda = 1e-3;
  LmOutcome out{theta, sse, 0, false};
  for (int it = 0; it < kMaxIterations; ++it) {
    out.iterations = it + 1;
    if (sse < 1e-28) {
      out.converged = true;
      break;
    }
    Eigen::Matrix<double, kNumFitParams, kNumFitParams> jtj =
        Eigen::Matrix<double, kNumFitParams, kNumFitParams>::Zero();
    ParamVector jtr = ParamVector::Zero();
    const FrontParams p = FromVector(theta, kind);
    for (const FrontObservation& o : obs) {
      const auto g = Gradient(p, o.privacy);
      const double r = EvalFrontUnchecked(o.privacy, p) - o.accuracy;
      jtj += g.transpose() * g;
      jtr += g.transpose() * r;
    }
    bool accepted = false;
    while (lambda < 1e12) {
      Eigen::Matrix<double, kNumFitParams, kNumFitParams> a = jtj;
      for (int d = 0; d < kNumFitParams; ++d) {
        a(d, d) += lambda * (jtj(d, d) + 1e-12);
      }
      const ParamVector delta = a.ldlt().solve(-jtr);
      const ParamVector next = Clip(theta + delta, box);
      const double next_sse = SumSquares(next, kind, obs);
      if (std::isfinite(next_sse) && next_sse < sse) {
        const double improvement = (sse - next_sse) / std::max(sse, 1e-300);
        theta = next;
        sse = next_sse;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (improvement < 1e-13) out.converged = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No descent direction left inside the box: a (bounded) local minimum.
      out.converged = true;
    }
    if (out.converged) break;
  }
  out.params = theta;
  out.sse = sse;
  return out;
}

}  // namespace

absl::StatusOr<FitResult> FitFront(std::span<const FrontObservation> obs,
                                   const FrontPrior& prior) {
  if (obs.size() < 4) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "need at least 4 observations to fit 4 parameters, got %d",
        obs.size()));
  }
  for (const FrontObservation& o : obs) {
    if (!std::isfinite(o.privacy) || !std::isfinite(o.accuracy)) {
      return absl::InvalidArgumentError("observations must be finite");
    }
  }
  if (absl::Status s = Validate(prior); !s.ok()) return s;

  const Box box = FitBox(prior);
  const ParamVector mean = Clip(ToVector(PriorMeanParams(prior)), box);
  FitResult result;
  result.initial_residual_norm = std::sqrt(SumSquares(mean, prior.kind, obs));

  // Prior mean first, then the same point with the transition moved across
  // the observed privacy range.
  double p_lo = obs.front().privacy, p_hi = obs.front().privacy;
  for (const FrontObservation& o : obs) {
    p_lo = std::min(p_lo, o.privacy);
    p_hi = std::max(p_hi, o.privacy);
  }
  std::vector<ParamVector> starts = {mean};
  for (double frac : {0.2, 0.5, 0.8}) {
    ParamVector s = mean;
    const double target = p_lo + frac * (p_hi - p_lo);
    if (prior.kind == FrontKind::kSigmoid) {
      s[3] = target;
    } else if (target > 0) {
      s[3] = std::log(s[1]) / target;
    }
    starts.push_back(Clip(s, box));
  }

  LmOutcome best{mean, kInf, 0, false};
  int total_iterations = 0;
  for (const ParamVector& start : starts) {
    LmOutcome o = LevenbergMarquardt(start, prior.kind, box, obs);
    total_iterations += o.iterations;
    if (o.sse < best.sse) best = o;
  }
  result.params = FromVector(best.params, prior.kind);
  result.residual_norm = std::sqrt(best.sse);
  result.iterations = total_iterations;
  result.converged = best.converged;
  const double drop = std::abs(EvalFrontUnchecked(p_lo, result.params) -
                               EvalFrontUnchecked(p_hi, result.params));
  result.flat = drop < 1e-6 || best.params[1] <= box.lo[1] * (1 + 1e-9);
  return result;
}

nlohmann::json ToJson(const FrontParams& params) {
  return nlohmann::json{{"kind", FrontKindName(params.kind)},
                        {"L", params.span},
                        {"k", params.steepness},
                        {"b", params.offset},
                        {"c", params.location}};
}

absl::StatusOr<FrontParams> FrontParamsFromJson(const nlohmann::json& j) {
  if (!j.is_object()) {
    return absl::InvalidArgumentError("front params must be an object");
  }
  FrontParams p;
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) {
      return absl::InvalidArgumentError("front params 'kind' must be a string");
    }
    absl::StatusOr<FrontKind> kind = ParseFrontKind(j["kind"].get<std::string>());
    if (!kind.ok()) return kind.status();
    p.kind = *kind;
  }
  for (auto [key, field] : {std::pair{"L", &p.span}, std::pair{"k", &p.steepness},
                            std::pair{"b", &p.offset}, std::pair{"c", &p.location}}) {
    if (!j.contains(key) || !j[key].is_number()) {
      return absl::InvalidArgumentError(
          absl::StrFormat("front params field '%s' must be a number", key));
    }
    *field = j[key].get<double>();
  }
  if (absl::Status s = ValidateParams(p); !s.ok()) return s;
  return p;
}

}  // namespace dptradeoff
