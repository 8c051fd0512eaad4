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

#include "commands.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/strip.h"
#include "dptradeoff/front_model.h"
#include "dptradeoff/normalization.h"
#include "dptradeoff/oracle.h"
#include "dptradeoff/service.h"
#include "dptradeoff/session.h"

namespace dptradeoff::cli {
namespace {

absl::StatusOr<std::vector<uint64_t>> ReadSeedsFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(
        absl::StrFormat("cannot open seeds file '%s'", path));
  }
  std::vector<uint64_t> seeds;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const absl::string_view s = absl::StripAsciiWhitespace(line);
    if (s.empty() || s[0] == '#') continue;
    uint64_t seed = 0;
    if (!absl::SimpleAtoi(s, &seed)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s:%d: expected a non-negative integer seed", path,
                          line_no));
    }
    seeds.push_back(seed);
  }
  return seeds;
}

std::string OptionalNumber(const std::optional<double>& v) {
  return v.has_value() ? absl::StrFormat("%.6g", *v) : "n/a";
}

}  // namespace

std::string ResolveConfigPath(const std::string& flag) {
  if (!flag.empty()) return flag;
  const char* env = std::getenv(kConfigEnvVar);
  return env == nullptr ? "" : env;
}

absl::StatusOr<Config> LoadCommandConfig(const std::string& path,
                                         const std::string& arms) {
  absl::StatusOr<Config> config = path.empty() ? Config{} : LoadConfig(path);
  if (!config.ok()) return config.status();
  if (!arms.empty()) {
    absl::StatusOr<std::vector<Arm>> parsed = ParseArmList(arms);
    if (!parsed.ok()) return parsed.status();
    config->loop.arms = *parsed;
  }
  if (absl::Status s = Validate(*config); !s.ok()) return s;
  return config;
}

int Simulate(const SimulateOptions& options, std::ostream& out,
             std::ostream& err) {
  absl::StatusOr<Config> config =
      LoadCommandConfig(ResolveConfigPath(options.config_path), options.arms);
  if (!config.ok()) {
    err << "error: " << config.status().message() << "\n";
    return kExitUsage;
  }
  absl::StatusOr<RunRecord> record =
      RunLoop(*config, options.seed, config->loop.arms.front());
  if (!record.ok()) {
    err << "error: " << record.status().message() << "\n";
    return kExitUsage;
  }
  const std::string path = options.out.empty()
                               ? absl::StrFormat("run-%d.json", options.seed)
                               : options.out;
  std::ofstream file(path);
  if (!file) {
    err << "error: cannot write " << path << "\n";
    return kExitFailure;
  }
  file << ToJson(*record).dump(2) << "\n";
  out << absl::StrFormat("arm: %s  seed: %d  steps: %d  oracle calls: %d\n",
                         record->arm, record->seed,
                         record->metric_trace.size(), record->oracle_calls);
  out << absl::StrFormat("epsilon* = %.6g  accuracy* = %.6g  (p* = %.4f)\n",
                         record->epsilon_star, record->alpha_star,
                         record->p_star);
  out << "final regret = " << OptionalNumber(record->final_regret) << "\n";
  out << "record written to " << path << "\n";
  if (!record->error.empty()) {
    err << "error: run stopped early: " << record->error << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int Batch(const BatchOptions& options, std::ostream& out, std::ostream& err) {
  absl::StatusOr<Config> config =
      LoadCommandConfig(ResolveConfigPath(options.config_path), options.arms);
  if (!config.ok()) {
    err << "error: " << config.status().message() << "\n";
    return kExitUsage;
  }
  std::vector<uint64_t> seeds;
  if (!options.seeds_file.empty()) {
    absl::StatusOr<std::vector<uint64_t>> read =
        ReadSeedsFile(options.seeds_file);
    if (!read.ok()) {
      err << "error: " << read.status().message() << "\n";
      return kExitUsage;
    }
    seeds = *read;
  } else {
    const int count = options.num_seeds.value_or(config->loop.num_seeds);
    if (count < 0) {
      err << "error: seed count must be >= 0\n";
      return kExitUsage;
    }
    for (int i = 0; i < count; ++i) seeds.push_back(options.first_seed + i);
  }
  if (seeds.empty()) {
    err << "error: empty seed list\n";
    return kExitUsage;
  }
  absl::StatusOr<BatchReport> report =
      RunBatch(*config, seeds, config->loop.arms);
  if (!report.ok()) {
    err << "error: " << report.status().message() << "\n";
    return kExitUsage;
  }
  if (!options.records_dir.empty()) {
    std::filesystem::create_directories(options.records_dir);
    for (const RunRecord& r : report->records) {
      const std::filesystem::path path =
          std::filesystem::path(options.records_dir) /
          absl::StrFormat("%s-seed%d.json", r.arm, r.seed);
      std::ofstream file(path);
      file << ToJson(r).dump(2) << "\n";
    }
  }
  const std::string csv = report->ToCsv();
  if (options.out.empty()) {
    out << csv;
  } else {
    std::ofstream file(options.out);
    if (!file) {
      err << "error: cannot write " << options.out << "\n";
      return kExitFailure;
    }
    file << csv;
    out << absl::StrFormat("%d runs (%d arms x %d seeds); report written to %s\n",
                           report->records.size(), config->loop.arms.size(),
                           seeds.size(), options.out);
  }
  for (const std::string& failure : report->failures) {
    err << "warning: excluded failed run " << failure << "\n";
  }
  return report->failures.empty() ? kExitOk : kExitFailure;
}

int Fit(const FitOptions& options, std::ostream& out, std::ostream& err) {
  absl::StatusOr<FrontKind> kind = ParseFrontKind(options.kind);
  if (!kind.ok()) {
    err << "error: " << kind.status().message() << "\n";
    return kExitUsage;
  }
  if (options.grid < 2) {
    err << "error: --grid must be >= 2\n";
    return kExitUsage;
  }
  absl::StatusOr<TabulatedFront> data = TabulatedFront::Load(options.data);
  if (!data.ok()) {
    err << "error: " << data.status().message() << "\n";
    return kExitUsage;
  }
  // Both axes are normalized over the data's own ranges, as the engine does
  // for tabulated oracles, so the fit lives on the front prior's scale.
  const NormalizationSpec norm{data->eps_min(), data->eps_max(),
                               data->accuracy_min(), data->accuracy_max()};
  if (!(norm.alpha_max > norm.alpha_min)) {
    err << "error: " << options.data << ": accuracy is constant; nothing to fit\n";
    return kExitUsage;
  }
  std::vector<FrontObservation> obs;
  for (size_t i = 0; i < data->epsilons().size(); ++i) {
    absl::StatusOr<double> p = NormalizePrivacy(norm, data->epsilons()[i]);
    if (!p.ok()) {
      err << "error: " << p.status().message() << "\n";
      return kExitUsage;
    }
    obs.push_back({*p, NormalizeAccuracy(norm, data->accuracies()[i])});
  }
  absl::StatusOr<FitResult> fit = FitFront(obs, FrontPrior::Default(*kind));
  if (!fit.ok()) {
    err << "error: " << fit.status().message() << "\n";
    return kExitUsage;
  }
  const FrontParams& p = fit->params;
  out << "kind: " << FrontKindName(p.kind) << "\n";
  out << absl::StrFormat(
      "normalization: epsilon [%.6g, %.6g], accuracy [%.6g, %.6g]\n"
      "params (normalized): L=%.6g k=%.6g b=%.6g c=%.6g\n",
      norm.eps_min, norm.eps_max, norm.alpha_min, norm.alpha_max, p.span,
      p.steepness, p.offset, p.location);
  out << absl::StrFormat("observations: %d\n", obs.size());
  out << absl::StrFormat("residual_norm: %.6g (prior mean: %.6g)\n",
                         fit->residual_norm, fit->initial_residual_norm);
  out << absl::StrFormat("iterations: %d  converged: %s  flat: %s\n",
                         fit->iterations, fit->converged ? "yes" : "no",
                         fit->flat ? "yes" : "no");
  if (!fit->converged) {
    err << "warning: least squares did not converge; best-so-far reported\n";
  }
  if (fit->flat) {
    err << "warning: fitted curve has no transition over the data range\n";
  }
  out << "epsilon,p,accuracy_fit\n";
  for (double q : UniformGrid(options.grid)) {
    out << absl::StrFormat("%.9g,%.6f,%.9g\n", *DenormalizePrivacy(norm, q), q,
                           DenormalizeAccuracy(norm, EvalFrontUnchecked(q, p)));
  }
  return kExitOk;
}

int OracleCheck(const OracleCheckOptions& options, std::ostream& out,
                std::ostream& err) {
  if (!(options.c > 0) || !std::isfinite(options.c)) {
    err << "error: --C must be > 0\n";
    return kExitUsage;
  }
  if (options.samples < 1) {
    err << "error: --samples must be >= 1\n";
    return kExitUsage;
  }
  if (options.epsilons.empty()) {
    err << "error: --eps needs at least one value\n";
    return kExitUsage;
  }
  for (double eps : options.epsilons) {
    if (!(eps > 0) || !std::isfinite(eps)) {
      err << "error: every --eps value must be > 0\n";
      return kExitUsage;
    }
  }
  out << "epsilon,closed_form,monte_carlo,std_error,pass\n";
  bool all_pass = true;
  for (size_t i = 0; i < options.epsilons.size(); ++i) {
    const double eps = options.epsilons[i];
    Rng rng = DeriveRng(options.seed, i);
    const double exact = ClosedFormLogisticAccuracy(options.c, eps);
    // One input per noise draw keeps the samples independent, so the
    // binomial standard error applies.
    const double mc = MonteCarloLogisticAccuracy(
        options.c, eps, static_cast<int>(options.samples), 1, rng);
    const double se =
        std::sqrt(exact * (1 - exact) / static_cast<double>(options.samples));
    // <= so that an exact match passes when the standard error is zero.
    const bool pass = std::abs(mc - exact) <= 3 * se;
    all_pass = all_pass && pass;
    out << absl::StrFormat("%g,%.6f,%.6f,%.6f,%s\n", eps, exact, mc, se,
                           pass ? "pass" : "FAIL");
  }
  return all_pass ? kExitOk : kExitFailure;
}

int Serve(const ServeOptions& options, const std::atomic<bool>& stop,
          std::ostream& out, std::ostream& err) {
  absl::StatusOr<Config> config =
      LoadCommandConfig(ResolveConfigPath(options.config_path), "");
  if (!config.ok()) {
    err << "error: " << config.status().message() << "\n";
    return kExitUsage;
  }
  out << "serving on " << options.bind << "\n" << std::flush;
  absl::Status status =
      dptradeoff::Serve(options.bind, *config, stop, options.snapshot);
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace dptradeoff::cli
