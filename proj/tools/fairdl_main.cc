// Copyright 2026 The fairdl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// fairdl: run FDPDDL experiments and inspect their outputs.
//
//   fairdl run --config configs/setting3.json --out results/s3
//   fairdl report --trace results/s3/trace.json --out results/s3b
//   fairdl verify-chain results/s3/chain_seed1.jsonl
//   fairdl fairness --x 0.6,0.7,0.8 --y 0.70,0.74,0.81
//   fairdl default-config > my.json

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "fairdl/harness/experiment.h"
#include "fairdl/harness/fairness.h"
#include "fairdl/ledger/exchange.h"
#include "fairdl/ledger/ledger.h"
#include "fairdl/protocol/config.h"

namespace fairdl {
namespace {

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return 1;
}

struct RunArgs {
  std::string config;
  std::string out = "results";
  std::vector<uint64_t> seeds;
  std::vector<std::string> frameworks;
  size_t threads = 1;
};

int Run(const RunArgs& args) {
  absl::StatusOr<ExperimentConfig> config = LoadConfig(args.config);
  if (!config.ok()) return Fail(config.status());
  if (!args.seeds.empty()) config->seeds = args.seeds;
  if (!args.frameworks.empty()) {
    config->frameworks.clear();
    for (const std::string& name : args.frameworks) {
      absl::StatusOr<FrameworkKind> f = ParseFramework(name);
      if (!f.ok()) return Fail(f.status());
      config->frameworks.push_back(*f);
    }
  }
  absl::StatusOr<RunTrace> trace = RunExperiment(*config, args.threads);
  if (!trace.ok()) return Fail(trace.status());
  if (absl::Status s = WriteReport(*trace, args.out); !s.ok()) return Fail(s);

  int failed = 0;
  for (const CellResult& c : trace->cells) {
    if (!c.error.empty()) {
      ++failed;
      std::cerr << FrameworkName(c.framework) << " seed " << c.seed << ": " << c.error
                << "\n";
    }
  }
  for (const FrameworkSummary& s : Summarize(*trace)) {
    double mean = 0;
    for (double a : s.mean_final_accuracy) mean += a;
    if (!s.mean_final_accuracy.empty()) mean /= s.mean_final_accuracy.size();
    std::printf("%-12s mean accuracy %.4f", std::string(FrameworkName(s.framework)).c_str(),
                mean);
    if (s.mean_fairness) std::printf("  fairness %.4f", *s.mean_fairness);
    std::printf("\n");
  }
  std::printf("wrote %s\n", args.out.c_str());
  return failed == 0 ? 0 : 1;
}

int Report(const std::string& trace_path, const std::string& out) {
  absl::StatusOr<std::string> text = ReadFile(trace_path);
  if (!text.ok()) return Fail(text.status());
  absl::StatusOr<RunTrace> trace = TraceFromJson(*text);
  if (!trace.ok()) return Fail(trace.status());
  if (absl::Status s = WriteReport(*trace, out); !s.ok()) return Fail(s);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int VerifyChainFile(const std::string& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return Fail(text.status());
  absl::StatusOr<std::vector<Block>> chain = ChainFromJsonl(*text);
  if (!chain.ok()) return Fail(chain.status());
  if (absl::Status s = CheckChain(*chain); !s.ok()) return Fail(s);
  absl::StatusOr<std::map<PartyId, int64_t>> balances = ReplayBalances(*chain);
  if (!balances.ok()) return Fail(balances.status());
  std::printf("ok: %zu blocks\n", chain->size());
  for (const auto& [party, tokens] : *balances) {
    std::printf("party %u: %lld tokens\n", party, static_cast<long long>(tokens));
  }
  return 0;
}

int ComputeFairness(const std::vector<double>& x, const std::vector<double>& y) {
  absl::StatusOr<FairnessReport> r = Fairness(x, y);
  if (!r.ok()) return Fail(r.status());
  if (!r->defined) {
    std::printf("undefined: %s\n", r->note.c_str());
    return 1;
  }
  std::printf("%.6f\n", r->r);
  return 0;
}

}  // namespace
}  // namespace fairdl

int main(int argc, char** argv) {
  CLI::App app{"Fair and differentially private decentralised learning simulator"};
  app.require_subcommand(1);

  fairdl::RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run every (framework, seed) cell");
  run_cmd->add_option("-c,--config", run.config, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--out", run.out, "Output directory");
  run_cmd->add_option("-s,--seed", run.seeds, "Replace the configured seeds");
  run_cmd->add_option("-f,--framework", run.frameworks,
                      "Only these frameworks (standalone, centralised, distributed, "
                      "fdpddl)");
  run_cmd->add_option("-j,--threads", run.threads, "Worker threads; 0 = all cores");

  std::string trace_path, report_out = "report";
  CLI::App* report_cmd =
      app.add_subcommand("report", "Regenerate the tables from a stored trace");
  report_cmd->add_option("-t,--trace", trace_path, "trace.json of an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  report_cmd->add_option("-o,--out", report_out, "Output directory");

  std::string chain_path;
  CLI::App* verify_cmd =
      app.add_subcommand("verify-chain", "Verify hashes, signatures and token rules");
  verify_cmd->add_option("chain", chain_path, "chain_seed*.jsonl")
      ->required()
      ->check(CLI::ExistingFile);

  std::vector<double> xs, ys;
  CLI::App* fair_cmd =
      app.add_subcommand("fairness", "Pearson correlation of contributions and rewards");
  fair_cmd->add_option("-x,--x", xs, "Contributions")->required()->delimiter(',');
  fair_cmd->add_option("-y,--y", ys, "Final accuracies")->required()->delimiter(',');

  CLI::App* default_cmd =
      app.add_subcommand("default-config", "Print the default config as JSON");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) return fairdl::Run(run);
  if (*report_cmd) return fairdl::Report(trace_path, report_out);
  if (*verify_cmd) return fairdl::VerifyChainFile(chain_path);
  if (*fair_cmd) return fairdl::ComputeFairness(xs, ys);
  if (*default_cmd) {
    std::cout << fairdl::ConfigToJson(fairdl::ExperimentConfig{});
    return 0;
  }
  return 1;
}
