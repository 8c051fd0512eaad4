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

// Implementations of the `dptradeoff` subcommands, separated from argument
// parsing so that they can be exercised directly in tests. Each returns the
// process exit code: 0 on success, 1 on a failed check or runtime error, 2 on
// invalid arguments or configuration.

#ifndef DPTRADEOFF_TOOLS_COMMANDS_H_
#define DPTRADEOFF_TOOLS_COMMANDS_H_

#include <atomic>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dptradeoff/config.h"

namespace dptradeoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Environment variable consulted when no --config flag is given.
inline constexpr char kConfigEnvVar[] = "DPTRADEOFF_CONFIG";

// --config wins; otherwise $DPTRADEOFF_CONFIG; otherwise empty (defaults).
std::string ResolveConfigPath(const std::string& flag);

// Loads the config at `path` (defaults when empty) and applies --arms.
absl::StatusOr<Config> LoadCommandConfig(const std::string& path,
                                         const std::string& arms);

struct SimulateOptions {
  std::string config_path;
  uint64_t seed = 0;
  std::string out;  // RunRecord JSON; default run-<seed>.json
  std::string arms;
};
int Simulate(const SimulateOptions& options, std::ostream& out,
             std::ostream& err);

struct BatchOptions {
  std::string config_path;
  uint64_t first_seed = 0;
  std::optional<int> num_seeds;  // default loop.num_seeds
  std::string seeds_file;        // one seed per line; overrides the count
  std::string out;               // CSV; stdout when empty
  std::string records_dir;       // per-run JSON records when non-empty
  std::string arms;
};
int Batch(const BatchOptions& options, std::ostream& out, std::ostream& err);

struct FitOptions {
  std::string data;  // CSV epsilon,accuracy
  std::string kind = "sigmoid";
  int grid = 50;
};
int Fit(const FitOptions& options, std::ostream& out, std::ostream& err);

struct OracleCheckOptions {
  double c = 5;
  std::vector<double> epsilons = {0.05, 0.1, 0.2, 0.5};
  int64_t samples = 1000000;
  uint64_t seed = 0;
};
int OracleCheck(const OracleCheckOptions& options, std::ostream& out,
                std::ostream& err);

struct ServeOptions {
  std::string config_path;
  std::string bind = "127.0.0.1:8080";
  std::string snapshot;
};
int Serve(const ServeOptions& options, const std::atomic<bool>& stop,
          std::ostream& out, std::ostream& err);

}  // namespace dptradeoff::cli

#endif  // DPTRADEOFF_TOOLS_COMMANDS_H_
