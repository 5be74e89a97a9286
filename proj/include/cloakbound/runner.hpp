#ifndef CLOAKBOUND_RUNNER_HPP
#define CLOAKBOUND_RUNNER_HPP

#include <string>

#include "cloakbound/config.hpp"
#include "cloakbound/report.hpp"

namespace cloakbound {

enum class RunKind { Run, VerifyIdentities, Sumrule, Sweep };

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 1 numerical failure, 2 config error
  int checks_run = 0;
  int checks_failed = 0;
  std::string report_path;
  std::string sweep_path;
  std::string message;
};

/// Executes one batch kind against a loaded config, writing report.json and
/// sweep.csv under out_dir. jobs/seed <= 0 fall back to the config values.
RunOutcome run_batch(const RunConfig& cfg, RunKind kind, const std::string& out_dir,
                     int jobs_override = 0, std::int64_t seed_override = -1);

}  // namespace cloakbound

#endif
