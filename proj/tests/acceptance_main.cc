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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails. All thresholds are fixed below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "boost/math/distributions/students_t.hpp"
#include "dptradeoff/acquisition.h"
#include "dptradeoff/config.h"
#include "dptradeoff/front_model.h"
#include "dptradeoff/normalization.h"
#include "dptradeoff/oracle.h"
#include "dptradeoff/preference.h"
#include "dptradeoff/random.h"
#include "dptradeoff/session.h"

namespace dptradeoff {
namespace {

// Criterion 1.
constexpr double kOracleC = 5;
constexpr int64_t kOracleSamples = 1000000;
constexpr double kOracleSigmas = 3;
constexpr double kOracleSeconds = 30;
// Criterion 2.
constexpr int kRecoveryObservations = 40;
constexpr double kRecoveryNoise = 0.01;
constexpr int kRecoveryParticles = 4000;
constexpr double kRecoveryMaxError = 0.02;
constexpr double kRecoverySeconds = 10;
// Criteria 3, 4, 7.
constexpr int kSeeds = 30;
constexpr int kSteps = 20;
constexpr double kAlpha = 0.05;
constexpr double kPooledSigmas = 2;
// Criterion 5.
constexpr int kGeometryGrid = 201;
constexpr double kEndpointFraction = 0.9;
constexpr int kMinInteriorIndices = 5;
// Criterion 6.
constexpr int kKgInstances = 20;
constexpr int kKgParticles = 8;
constexpr int kKgSims = 4096;
constexpr double kKgSigmas = 3;
constexpr double kKgFloor = -1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

double Mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

double StdError(const std::vector<double>& v) {
  const double m = Mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1) / v.size());
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// One-sided paired t-test of mean(a - b) < 0; returns the p-value.
double PairedLessPValue(const std::vector<double>& a,
                        const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double se = StdError(d);
  if (se == 0) return Mean(d) < 0 ? 0.0 : 1.0;
  const boost::math::students_t dist(static_cast<double>(d.size() - 1));
  return boost::math::cdf(dist, Mean(d) / se);
}

// Final (or step-indexed) metric of every run of one arm.
absl::StatusOr<std::vector<RunRecord>> RunArm(const Config& config,
                                              const std::string& arm_name) {
  absl::StatusOr<Arm> arm = ParseArm(arm_name);
  if (!arm.ok()) return arm.status();
  std::vector<RunRecord> out;
  for (int seed = 0; seed < kSeeds; ++seed) {
    absl::StatusOr<RunRecord> r = RunLoop(config, seed, *arm);
    if (!r.ok()) return r.status();
    if (!r->error.empty()) return absl::InternalError(r->error);
    out.push_back(*std::move(r));
  }
  return out;
}

std::vector<double> MetricAt(const std::vector<RunRecord>& runs, int step,
                             bool regret) {
  std::vector<double> out;
  for (const RunRecord& r : runs) {
    const MetricPoint& m = r.metric_trace.at(step - 1);
    out.push_back(regret ? m.regret.value() : m.pref_error.value());
  }
  return out;
}

Outcome Criterion1() {
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  int i = 0;
  for (double eps : {0.05, 0.1, 0.2, 0.5}) {
    Rng rng = DeriveRng(2026, i++);
    const double exact = 1 - 0.5 * std::exp(-kOracleC * eps);
    const double mc =
        MonteCarloLogisticAccuracy(kOracleC, eps, kOracleSamples, 1, rng);
    const double se = std::sqrt(exact * (1 - exact) / kOracleSamples);
    const double z = (mc - exact) / se;
    pass = pass && std::abs(z) < kOracleSigmas;
    detail += absl::StrFormat("eps=%g z=%+.2f; ", eps, z);
  }
  const double secs = Seconds(start);
  pass = pass && secs < kOracleSeconds;
  return {pass, detail + absl::StrFormat("%.1fs (limit %.0fs)", secs,
                                         kOracleSeconds)};
}

Outcome Criterion2() {
  const auto start = std::chrono::steady_clock::now();
  const FrontParams truth{FrontKind::kSigmoid, /*span=*/0.92,
                          /*steepness=*/9, /*offset=*/0.04, /*location=*/0.45};
  Rng rng = DeriveRng(2026, 2);
  absl::StatusOr<FrontPosterior> post = FrontPosterior::FromPrior(
      FrontPrior::Default(FrontKind::kSigmoid), kRecoveryParticles, rng);
  if (!post.ok()) return {false, std::string(post.status().message())};
  std::uniform_real_distribution<double> unit(0, 1);
  std::normal_distribution<double> noise(0, kRecoveryNoise);
  for (int i = 0; i < kRecoveryObservations; ++i) {
    const double p = unit(rng);
    post = post->Updated({p, EvalFrontUnchecked(p, truth) + noise(rng)}, rng);
  }
  const std::vector<double> grid = UniformGrid(201);
  absl::StatusOr<MeanCurve> curve = PosteriorMeanCurve(*post, grid);
  if (!curve.ok()) return {false, std::string(curve.status().message())};
  double max_err = 0;
  for (const MeanCurvePoint& pt : curve->points) {
    max_err = std::max(
        max_err, std::abs(pt.mean - EvalFrontUnchecked(pt.privacy, truth)));
  }
  const double secs = Seconds(start);
  return {max_err < kRecoveryMaxError && secs < kRecoverySeconds,
          absl::StrFormat("max |mean - truth| = %.4f (limit %.2f); %.1fs "
                          "(limit %.0fs)",
                          max_err, kRecoveryMaxError, secs, kRecoverySeconds)};
}

Config KnownFrontConfig() {
  Config config;
  config.loop.known_front = true;
  config.loop.schedule = Schedule::kInteractOnly;
  config.loop.num_steps = kSteps;
  return config;
}

Outcome Criterion3() {
  const Config config = KnownFrontConfig();
  std::vector<double> finals[3];
  const char* arms[3] = {"curve-kg", "random-pairs", "random-curve"};
  for (int a = 0; a < 3; ++a) {
    absl::StatusOr<std::vector<RunRecord>> runs = RunArm(config, arms[a]);
    if (!runs.ok()) return {false, std::string(runs.status().message())};
    finals[a] = MetricAt(*runs, kSteps, /*regret=*/false);
  }
  const double p = PairedLessPValue(finals[0], finals[1]);
  const double kg = Mean(finals[0]);
  const double rc = Mean(finals[2]);
  return {p < kAlpha && kg <= rc,
          absl::StrFormat("pref_error@%d curve-kg %.4f, random-pairs %.4f "
                          "(paired one-sided p=%.2g), random-curve %.4f",
                          kSteps, kg, Mean(finals[1]), p, rc)};
}

Outcome Criterion4() {
  Config config;
  config.oracle.kind = OracleSpec::Kind::kClosedFormLogistic;
  config.oracle.c = 5;
  config.normalization.eps_min = 0.01;
  config.normalization.eps_max = 0.5;
  config.loop.num_steps = kSteps;
  absl::StatusOr<std::vector<RunRecord>> kg = RunArm(config, "curve-kg");
  if (!kg.ok()) return {false, std::string(kg.status().message())};
  absl::StatusOr<std::vector<RunRecord>> rnd = RunArm(config, "random");
  if (!rnd.ok()) return {false, std::string(rnd.status().message())};
  const double early = Median(MetricAt(*kg, 2, true));
  const double late = Median(MetricAt(*kg, kSteps, true));
  const double random_late = Median(MetricAt(*rnd, kSteps, true));
  return {late < early && late <= random_late,
          absl::StrFormat("median regret curve-kg step2 %.4f -> step%d %.4f; "
                          "random step%d %.4f",
                          early, kSteps, late, kSteps, random_late)};
}

Outcome Criterion5() {
  // Sigmoid fitted to the closed-form logistic front.
  const NormalizationSpec norm;
  std::vector<FrontObservation> obs;
  for (double p : UniformGrid(40)) {
    const double eps = *DenormalizePrivacy(norm, p);
    obs.push_back({p, NormalizeAccuracy(
                          norm, ClosedFormLogisticAccuracy(kOracleC, eps))});
  }
  absl::StatusOr<FitResult> fit =
      FitFront(obs, FrontPrior::Default(FrontKind::kSigmoid));
  if (!fit.ok()) return {false, std::string(fit.status().message())};
  absl::StatusOr<CurveQuery> front = DiscretizeCurve(fit->params, kGeometryGrid);
  if (!front.ok()) return {false, std::string(front.status().message())};
  const int last = kGeometryGrid - 1;
  auto argmax = [&](const std::function<double(const TradeOffPoint&)>& u) {
    int best = 0;
    for (int i = 1; i <= last; ++i) {
      if (u(front->points[i]) > u(front->points[best])) best = i;
    }
    return best;
  };
  int linear_endpoints = 0;
  int exp_endpoints = 0;
  int sweep = 0;
  std::set<int> interior;
  bool monotone = true;
  int previous = -1;
  for (int k = 1; k <= 19; ++k, ++sweep) {
    const PreferenceWeights w{0.05 * k, 1 - 0.05 * k};
    const int lin =
        argmax([&](const TradeOffPoint& y) { return *LinearUtility(y, w); });
    const int exp = argmax([&](const TradeOffPoint& y) {
      return *ExpLinearUtility(*DenormalizePrivacy(norm, y.privacy),
                               DenormalizeAccuracy(norm, y.accuracy), w);
    });
    const int cheb = argmax(
        [&](const TradeOffPoint& y) { return *ChebyshevUtility(y, w); });
    linear_endpoints += (lin == 0 || lin == last);
    exp_endpoints += (exp == 0 || exp == last);
    if (cheb != 0 && cheb != last) interior.insert(cheb);
    monotone = monotone && cheb >= previous;
    previous = cheb;
  }
  const double lin_frac = static_cast<double>(linear_endpoints) / sweep;
  const double exp_frac = static_cast<double>(exp_endpoints) / sweep;
  const bool pass = lin_frac >= kEndpointFraction &&
                    exp_frac >= kEndpointFraction &&
                    static_cast<int>(interior.size()) >= kMinInteriorIndices &&
                    monotone;
  return {pass,
          absl::StrFormat("endpoint argmax: linear %.0f%%, exp-linear %.0f%% "
                          "(limit %.0f%%); chebyshev interior indices %d "
                          "(limit %d), monotone %s",
                          100 * lin_frac, 100 * exp_frac,
                          100 * kEndpointFraction, interior.size(),
                          kMinInteriorIndices, monotone ? "yes" : "no")};
}

// Knowledge gradient of a curve query by brute-force enumeration of the
// user's choice, written against the utility and likelihood definitions.
double BruteForceKg(const CurveQuery& query, const FrontPosterior& front,
                    const PrefPosterior& pref, double temperature,
                    int grid_size) {
  const std::vector<double> grid = UniformGrid(grid_size);
  const std::vector<double> wf = front.particles().Weights();
  const std::vector<double> wr = pref.particles().Weights();
  auto best = [&](const std::vector<double>& pref_w) {
    double top = -std::numeric_limits<double>::infinity();
    for (double p : grid) {
      double eu = 0;
      for (size_t f = 0; f < wf.size(); ++f) {
        const double a = std::clamp(
            EvalFrontUnchecked(p, front.particles().value(f).params), 0.0, 1.0);
        for (size_t r = 0; r < pref_w.size(); ++r) {
          const PreferenceWeights& w = pref.particles().value(r);
          eu += wf[f] * pref_w[r] *
                std::min(p / w.privacy, a / w.accuracy);
        }
      }
      top = std::max(top, eu);
    }
    return top;
  };
  const double now = best(wr);
  // likelihood[r][j] = P(choice j | w_r).
  std::vector<std::vector<double>> lik(wr.size());
  for (size_t r = 0; r < wr.size(); ++r) {
    const PreferenceWeights& w = pref.particles().value(r);
    double z = 0;
    for (const TradeOffPoint& y : query.points) {
      z += std::exp(std::min(y.privacy / w.privacy, y.accuracy / w.accuracy) /
                    temperature);
    }
    for (const TradeOffPoint& y : query.points) {
      lik[r].push_back(
          std::exp(std::min(y.privacy / w.privacy, y.accuracy / w.accuracy) /
                   temperature) /
          z);
    }
  }
  double kg = 0;
  for (size_t j = 0; j < query.size(); ++j) {
    double prob = 0;
    std::vector<double> post(wr.size());
    for (size_t r = 0; r < wr.size(); ++r) {
      post[r] = wr[r] * lik[r][j];
      prob += post[r];
    }
    for (double& v : post) v /= prob;
    kg += prob * (best(post) - now);
  }
  return kg;
}

Outcome Criterion6() {
  Rng rng = DeriveRng(2026, 6);
  const FrontPrior prior = FrontPrior::Default(FrontKind::kSigmoid);
  const double temperature = 0.2;
  AcquisitionConfig sim_config;
  sim_config.num_sims = kKgSims;
  sim_config.max_exact_outcomes = 0;  // force simulation
  int agree = 0;
  double worst_z = 0;
  double min_exact = std::numeric_limits<double>::infinity();
  double worst_oracle_gap = 0;
  std::uniform_real_distribution<double> unit(0, 1);
  for (int inst = 0; inst < kKgInstances; ++inst) {
    const int nf = 1 + static_cast<int>(unit(rng) * kKgParticles);
    const int nr = 2 + static_cast<int>(unit(rng) * (kKgParticles - 1));
    std::vector<FrontSample> fs;
    std::vector<double> flw;
    for (int i = 0; i < nf; ++i) {
      fs.push_back(SamplePrior(prior, rng));
      flw.push_back(std::log(0.05 + unit(rng)));
    }
    std::vector<PreferenceWeights> ws;
    std::vector<double> rlw;
    for (int i = 0; i < nr; ++i) {
      ws.push_back(SampleWeightPrior(rng));
      rlw.push_back(std::log(0.05 + unit(rng)));
    }
    absl::StatusOr<FrontPosterior> front = FrontPosterior::FromParticles(
        FrontKind::kSigmoid, WeightedParticles<FrontSample>(fs, flw));
    absl::StatusOr<PrefPosterior> pref =
        PrefPosterior::FromParticles(WeightedParticles<PreferenceWeights>(ws, rlw));
    if (!front.ok() || !pref.ok()) return {false, "posterior construction"};
    const double p1 = unit(rng);
    const double p2 = unit(rng);
    absl::StatusOr<CurveQuery> query =
        MakePairQuery({p1, unit(rng)}, {p2, unit(rng)});
    if (!query.ok()) return {false, std::string(query.status().message())};
    absl::StatusOr<KgResult> exact = ExactChoiceKnowledgeGradient(
        *query, *front, *pref, temperature, sim_config.p_grid_size);
    absl::StatusOr<KgResult> sim = CurveKnowledgeGradient(
        *query, *front, *pref, temperature, sim_config, rng);
    if (!exact.ok() || !sim.ok()) return {false, "kg evaluation failed"};
    const double brute = BruteForceKg(*query, *front, *pref, temperature,
                                      sim_config.p_grid_size);
    worst_oracle_gap = std::max(worst_oracle_gap, std::abs(brute - exact->value));
    min_exact = std::min(min_exact, exact->value);
    const double gap = std::abs(sim->value - exact->value);
    const double z = sim->std_error > 0 ? gap / sim->std_error
                                        : (gap == 0 ? 0 : HUGE_VAL);
    worst_z = std::max(worst_z, z);
    agree += z <= kKgSigmas;
  }
  const bool pass = agree == kKgInstances && min_exact >= kKgFloor &&
                    worst_oracle_gap < 1e-10;
  return {pass,
          absl::StrFormat("%d/%d within %.0f SE (worst %.2f SE); min exact KG "
                          "%.3g; |exact - brute force| <= %.2g",
                          agree, kKgInstances, kKgSigmas, worst_z, min_exact,
                          worst_oracle_gap)};
}

Outcome Criterion7() {
  std::vector<std::vector<double>> finals;
  const double temps[3] = {0.1, 0.2, 0.3};
  for (double t : temps) {
    Config config = KnownFrontConfig();
    config.simulator_temperature = 0.2;
    config.user_model.temperature = t;
    absl::StatusOr<std::vector<RunRecord>> runs = RunArm(config, "curve-kg");
    if (!runs.ok()) return {false, std::string(runs.status().message())};
    finals.push_back(MetricAt(*runs, kSteps, false));
  }
  bool pass = true;
  std::string detail;
  for (int i = 0; i < 3; ++i) {
    detail += absl::StrFormat("T=%.1f %.4f±%.4f; ", temps[i], Mean(finals[i]),
                              StdError(finals[i]));
  }
  double worst = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const double pooled = std::hypot(StdError(finals[i]), StdError(finals[j]));
      const double z = std::abs(Mean(finals[i]) - Mean(finals[j])) / pooled;
      worst = std::max(worst, z);
      pass = pass && z <= kPooledSigmas;
    }
  }
  return {pass, detail + absl::StrFormat("max pairwise gap %.2f pooled SE "
                                         "(limit %.0f)",
                                         worst, kPooledSigmas)};
}

Outcome Criterion8() {
  Config config;
  config.loop.num_steps = 8;
  std::string traces[2];
  for (std::string& trace : traces) {
    absl::StatusOr<RunRecord> r = RunLoop(config, 11, config.loop.arms.front());
    if (!r.ok()) return {false, std::string(r.status().message())};
    nlohmann::json j = nlohmann::json::array();
    for (const MetricPoint& m : r->metric_trace) j.push_back(ToJson(m));
    trace = j.dump();
  }
  return {traces[0] == traces[1],
          absl::StrFormat("two runs of seed 11: %d-byte traces %s",
                          traces[0].size(),
                          traces[0] == traces[1] ? "identical" : "differ")};
}

}  // namespace
}  // namespace dptradeoff

// With arguments, runs only the listed criteria (e.g. `acceptance 3 7`).
int main(int argc, char** argv) {
  using Check = dptradeoff::Outcome (*)();
  const Check checks[] = {
      dptradeoff::Criterion1, dptradeoff::Criterion2, dptradeoff::Criterion3,
      dptradeoff::Criterion4, dptradeoff::Criterion5, dptradeoff::Criterion6,
      dptradeoff::Criterion7, dptradeoff::Criterion8};
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]) - 1);
  if (selected.empty()) {
    for (int i = 0; i < 8; ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int i : selected) {
    if (i < 0 || i >= 8) return 2;
    const dptradeoff::Outcome o = checks[i]();
    failures += !o.pass;
    std::printf("criterion %d: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
