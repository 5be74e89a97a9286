// Batch front-end for the cloakbound library. Physics lives in the config
// file; flags only carry paths, seed and parallelism degree.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "cloakbound.h"

namespace {

int run_kind(cb_run_kind kind, const std::string& config, const std::string& out_dir,
             int jobs, long long seed) {
  cb_run_summary summary{};
  const cb_status status =
      cb_run_config(config.c_str(), kind, out_dir.empty() ? nullptr : out_dir.c_str(),
                    jobs, seed, &summary);
  if (status == CB_ERROR_CONFIG) {
    std::fprintf(stderr, "config error: %s\n", cb_last_error());
    return 2;
  }
  if (status != CB_OK) {
    std::fprintf(stderr, "error: %s\n", cb_last_error());
    return 1;
  }
  std::printf("%s\n", cb_last_error());
  if (summary.report_path[0]) std::printf("report: %s\n", summary.report_path);
  if (summary.sweep_path[0] && (kind == CB_RUN || kind == CB_SWEEP))
    std::printf("sweep:  %s\n", summary.sweep_path);
  return summary.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cloakbound: DtN maps, effective operators, and passive-cloaking bounds"};
  app.require_subcommand(1);

  std::string config, out_dir;
  int jobs = 0;
  long long seed = -1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "JSON config file")->required();
    cmd->add_option("--jobs", jobs, "parallel frequency workers (default: config)");
    cmd->add_option("--seed", seed, "random seed override (default: config)");
    cmd->add_option("--out", out_dir, "output directory for report.json / sweep.csv");
  };

  auto* cmd_run = app.add_subcommand(
      "run", "full sweep with hypothesis checks and every applicable bound");
  auto* cmd_verify = app.add_subcommand(
      "verify-identities",
      "operator-identity suites: DtN factorization, dual-route effective operators, "
      "variational sandwiches");
  auto* cmd_sumrule = app.add_subcommand(
      "sumrule", "sum-rule ledger: analytic benchmarks plus the model window");
  auto* cmd_sweep = app.add_subcommand(
      "sweep",
      "frequency sweep only; sweep.csv columns: omega, x = omega^2, then per "
      "potential re_F, im_F, H(x), then envelope_lo/envelope_hi when applicable");
  for (auto* c : {cmd_run, cmd_verify, cmd_sumrule, cmd_sweep}) add_common(c);

  CLI11_PARSE(app, argc, argv);

  if (cmd_run->parsed()) return run_kind(CB_RUN, config, out_dir, jobs, seed);
  if (cmd_verify->parsed())
    return run_kind(CB_VERIFY_IDENTITIES, config, out_dir, jobs, seed);
  if (cmd_sumrule->parsed()) return run_kind(CB_SUMRULE, config, out_dir, jobs, seed);
  return run_kind(CB_SWEEP, config, out_dir, jobs, seed);
}
