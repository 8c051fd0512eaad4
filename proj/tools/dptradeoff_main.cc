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

// Command-line entry point:
//
//   dptradeoff simulate     --config C --seed S [--out run.json] [--arms A]
//   dptradeoff batch        --config C [--seeds N | --seeds-file F] [--arms A,B]
//   dptradeoff fit          --data front.csv [--kind sigmoid|gompertz]
//   dptradeoff oracle-check [--C 5] [--eps 0.05,0.1] [--samples 1000000]
//   dptradeoff serve        --config C [--bind 127.0.0.1:8080]

#include <atomic>
#include <csignal>
#include <iostream>

#include "CLI11.hpp"
#include "commands.h"

namespace {

std::atomic<bool> g_stop{false};

void HandleSignal(int) { g_stop.store(true); }

}  // namespace

int main(int argc, char** argv) {
  namespace cli = dptradeoff::cli;
  CLI::App app{"Interactive privacy-accuracy trade-off engine"};
  app.require_subcommand(1);

  cli::SimulateOptions simulate;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Run one simulated interactive session");
  sim_cmd->add_option("--config", simulate.config_path,
                      "Config JSON (default: $DPTRADEOFF_CONFIG or built-in)");
  sim_cmd->add_option("--seed", simulate.seed, "Random seed");
  sim_cmd->add_option("--out", simulate.out,
                      "Run record JSON path (default run-<seed>.json)");
  sim_cmd->add_option("--arms", simulate.arms,
                      "Strategy arm (first of a comma-separated list)");

  cli::BatchOptions batch;
  int num_seeds = -1;
  CLI::App* batch_cmd =
      app.add_subcommand("batch", "Run many seeds and aggregate metrics");
  batch_cmd->add_option("--config", batch.config_path, "Config JSON");
  batch_cmd->add_option("--seed", batch.first_seed, "First seed");
  batch_cmd->add_option("--seeds", num_seeds,
                        "Number of consecutive seeds (default loop.num_seeds)");
  batch_cmd->add_option("--seeds-file", batch.seeds_file,
                        "File with one seed per line");
  batch_cmd->add_option("--out", batch.out, "CSV report path (default stdout)");
  batch_cmd->add_option("--records-dir", batch.records_dir,
                        "Directory for per-run JSON records");
  batch_cmd->add_option(
      "--arms", batch.arms,
      "Comma-separated arms: curve-kg,random-curve,pair-kg,random-pairs,random");

  cli::FitOptions fit;
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Least-squares fit of a front model to epsilon,accuracy data");
  fit_cmd->add_option("--data", fit.data, "CSV with header epsilon,accuracy")
      ->required();
  fit_cmd->add_option("--kind", fit.kind, "sigmoid or gompertz");
  fit_cmd->add_option("--grid", fit.grid, "Points in the fitted-curve grid");

  cli::OracleCheckOptions check;
  CLI::App* check_cmd = app.add_subcommand(
      "oracle-check",
      "Compare the closed-form logistic accuracy with Monte Carlo");
  check_cmd->add_option("--C", check.c, "Coefficient-to-sensitivity ratio");
  check_cmd->add_option("--eps", check.epsilons, "Privacy budgets")
      ->delimiter(',');
  check_cmd->add_option("--samples", check.samples, "Monte Carlo samples");
  check_cmd->add_option("--seed", check.seed, "Random seed");

  cli::ServeOptions serve;
  CLI::App* serve_cmd =
      app.add_subcommand("serve", "Serve the live-session HTTP API");
  serve_cmd->add_option("--config", serve.config_path, "Config JSON");
  serve_cmd->add_option("--bind", serve.bind, "host:port");
  serve_cmd->add_option("--snapshot", serve.snapshot,
                        "Write all sessions to this JSON file on shutdown");

  CLI11_PARSE(app, argc, argv);

  if (*sim_cmd) return cli::Simulate(simulate, std::cout, std::cerr);
  if (*batch_cmd) {
    if (num_seeds >= 0) batch.num_seeds = num_seeds;
    return cli::Batch(batch, std::cout, std::cerr);
  }
  if (*fit_cmd) return cli::Fit(fit, std::cout, std::cerr);
  if (*check_cmd) return cli::OracleCheck(check, std::cout, std::cerr);
  if (*serve_cmd) {
    std::signal(SIGINT, HandleSignal);
    std::signal(SIGTERM, HandleSignal);
    return cli::Serve(serve, g_stop, std::cout, std::cerr);
  }
  return cli::kExitUsage;
}
