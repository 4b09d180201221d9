// Copyright 2026 The ldplab Authors
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
//
// Command-line driver: privacy audits and projections for finite channels,
// closed-form minimax lower bounds, Monte Carlo risk simulation, and the
// numerical verification suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ldplab/accounting.hpp"
#include "ldplab/bounds.hpp"
#include "ldplab/channels.hpp"
#include "ldplab/harness.hpp"
#include "ldplab/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

uint64_t default_seed() {
  if (const char* env = std::getenv("LDPLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("LDPLAB_SEED is not an integer");
    }
  }
  return 0;
}

ldplab::channels::DiscreteChannel load_channel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open channel file: " + path);
  nlohmann::json j;
  in >> j;
  return j.get<ldplab::channels::DiscreteChannel>();
}

void write_or_print(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"locally private estimation laboratory"};
  app.require_subcommand(1);

  std::string channel_path, out_path;
  std::optional<double> audit_eps;
  std::optional<double> audit_alpha;
  auto* audit = app.add_subcommand("audit", "audit a finite channel against privacy definitions");
  audit->add_option("channel", channel_path, "channel JSON file")->required();
  audit->add_option("--eps", audit_eps, "also report the tightest delta at this eps");
  audit->add_option("--alpha", audit_alpha, "also report the Renyi divergence at this order");

  std::string project_path, project_out;
  double project_eps = 0.0, project_delta = 0.0;
  auto* project = app.add_subcommand("project", "project an approximately private channel to a pure one");
  project->add_option("channel", project_path, "channel JSON file")->required();
  project->add_option("--eps", project_eps, "target pure privacy level")->required();
  project->add_option("--delta", project_delta, "certified approximation level")->required();
  project->add_option("--out", project_out, "output file (stdout when omitted)");

  std::string bound_family, bound_loss = "squared";
  long bound_n = 0;
  int bound_d = 0, bound_k = 1;
  double bound_eps = 0.0, bound_sigma2 = 1.0, bound_delta = 0.0;
  auto* bound = app.add_subcommand("bound", "evaluate a closed-form minimax lower bound");
  bound->add_option("family", bound_family, "bernoulli|gaussian|sparse_gaussian|logistic")->required();
  bound->add_option("--n", bound_n, "sample count")->required();
  bound->add_option("--d", bound_d, "dimension")->required();
  bound->add_option("--eps", bound_eps, "per-release privacy level")->required();
  bound->add_option("--sigma2", bound_sigma2, "noise variance (gaussian families)");
  bound->add_option("--k", bound_k, "sparsity (sparse family)");
  bound->add_option("--delta", bound_delta, "approximation level; positive switches the budget route");
  bound->add_option("--loss", bound_loss, "squared|absolute (bernoulli family)");
  bound->add_option("--out", out_path, "output file (stdout when omitted)");

  std::string config_path, sim_out, sim_format = "csv";
  std::optional<uint64_t> sim_seed;
  std::optional<int> sim_reps, sim_workers;
  auto* simulate = app.add_subcommand("simulate", "run a Monte Carlo risk experiment");
  simulate->add_option("config", config_path, "experiment config JSON")->required();
  simulate->add_option("--out", sim_out, "results file (stdout when omitted)");
  simulate->add_option("--format", sim_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  simulate->add_option("--seed", sim_seed, "override config seed");
  simulate->add_option("--replications", sim_reps, "override config replications");
  simulate->add_option("--workers", sim_workers, "override worker count");

  std::string suite_name, verify_out;
  std::optional<uint64_t> verify_seed;
  auto* verify = app.add_subcommand("verify", "run a numerical verification suite");
  verify->add_option("suite", suite_name, "channels|sdpi|info_budget|assouad|mechanisms")->required();
  verify->add_option("--seed", verify_seed, "suite seed");
  verify->add_option("--out", verify_out, "report file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*audit) {
      const auto channel = load_channel(channel_path);
      nlohmann::json result;
      const double pure = ldplab::channels::audit_pure_dp(channel);
      result["pure_epsilon"] = std::isinf(pure) ? nlohmann::json("inf") : nlohmann::json(pure);
      if (audit_eps) {
        result["epsilon"] = *audit_eps;
        result["delta_at_epsilon"] = ldplab::channels::audit_approx_dp(channel, *audit_eps);
      }
      if (audit_alpha) {
        const double renyi = ldplab::channels::audit_renyi(channel, *audit_alpha);
        result["renyi_order"] = *audit_alpha;
        result["renyi_divergence"] =
            std::isinf(renyi) ? nlohmann::json("inf") : nlohmann::json(renyi);
      }
      std::cout << result.dump(2) << "\n";
      return kExitOk;
    }

    if (*project) {
      const auto channel = load_channel(project_path);
      const auto projected =
          ldplab::channels::project_to_pure_dp(channel, project_eps, project_delta);
      write_or_print(nlohmann::json(projected), project_out);
      return kExitOk;
    }

    if (*bound) {
      // Pure releases convert through the KL route; a positive delta takes
      // the admissible approximate-DP budget instead.
      const double eps_kl =
          bound_delta > 0.0
              ? std::min(9.0 * bound_eps, 75.0 * bound_eps * bound_eps)
              : ldplab::accounting::dp_to_kl_average({bound_eps});
      ldplab::bounds::LowerBoundReport report;
      if (bound_family == "bernoulli") {
        const auto loss = bound_loss == "absolute" ? ldplab::bounds::Loss::kAbsolute
                                                   : ldplab::bounds::Loss::kSquared;
        report = ldplab::bounds::corollary_bernoulli_bound(bound_n, bound_d, eps_kl, loss);
      } else if (bound_family == "gaussian") {
        report = ldplab::bounds::corollary_gaussian_bound(bound_n, bound_d, bound_sigma2, eps_kl);
      } else if (bound_family == "sparse_gaussian") {
        report = ldplab::bounds::corollary_sparse_gaussian_bound(bound_n, bound_d, bound_k,
                                                                 bound_sigma2, eps_kl);
      } else if (bound_family == "logistic") {
        report = ldplab::bounds::corollary_logistic_bound(bound_n, bound_d, eps_kl);
      } else {
        std::cerr << "unknown family: " << bound_family << "\n";
        return kExitUsage;
      }
      nlohmann::json j(report);
      j["epsilon"] = bound_eps;
      write_or_print(j, out_path);
      return kExitOk;
    }

    if (*simulate) {
      auto config = ldplab::harness::load_config(config_path);
      if (sim_seed) {
        config.seed = *sim_seed;
      } else if (std::getenv("LDPLAB_SEED") && config.seed == 0) {
        config.seed = default_seed();
      }
      if (sim_reps) config.replications = *sim_reps;
      if (sim_workers) config.workers = *sim_workers;
      const auto rows = ldplab::harness::run_experiment(config);
      const auto format = sim_format == "json" ? ldplab::harness::ResultFormat::kJson
                                               : ldplab::harness::ResultFormat::kCsv;
      if (sim_out.empty()) {
        if (format == ldplab::harness::ResultFormat::kCsv) {
          std::cout << ldplab::harness::results_to_csv(rows);
        } else {
          std::cout << nlohmann::json(rows).dump(2) << "\n";
        }
      } else {
        ldplab::harness::emit_results(rows, format, sim_out);
      }
      return kExitOk;
    }

    if (*verify) {
      const uint64_t seed = verify_seed ? *verify_seed : default_seed();
      const auto report = ldplab::verify::run_suite(suite_name, seed);
      write_or_print(nlohmann::json(report), verify_out);
      return report.pass ? kExitOk : kExitVerificationFailure;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
