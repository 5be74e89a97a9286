#include "cloakbound.h"

#include <cstring>
#include <string>

#include "cloakbound/config.hpp"
#include "cloakbound/errors.hpp"
#include "cloakbound/runner.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
cb_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const cloakbound::ConfigError& e) {
    set_error(e.what());
    return CB_ERROR_CONFIG;
  } catch (const cloakbound::Error& e) {
    set_error(e.what());
    return CB_ERROR_NUMERIC;
  } catch (const std::exception& e) {
    set_error(e.what());
    return CB_ERROR_NUMERIC;
  }
}

void copy_path(char (&dst)[512], const std::string& src) {
  std::strncpy(dst, src.c_str(), sizeof(dst) - 1);
  dst[sizeof(dst) - 1] = '\0';
}

}  // namespace

struct cb_problem {
  cloakbound::RunConfig config;
  cloakbound::CloakProblem problem;
};

extern "C" {

const char* cb_version(void) { return "cloakbound 1.0.0"; }

const char* cb_last_error(void) { return g_last_error.c_str(); }

cb_status cb_problem_create_from_json(const char* json_text, cb_problem** out) {
  if (!json_text || !out) {
    set_error("null argument");
    return CB_ERROR_ARGUMENT;
  }
  return guarded([&]() {
    cloakbound::RunConfig cfg = cloakbound::parse_config(json_text);
    cloakbound::Rng rng(cfg.seed);
    auto* handle = new cb_problem{cfg, cloakbound::build_problem(cfg, rng)};
    *out = handle;
    return CB_OK;
  });
}

cb_status cb_problem_create_from_file(const char* path, cb_problem** out) {
  if (!path || !out) {
    set_error("null argument");
    return CB_ERROR_ARGUMENT;
  }
  return guarded([&]() {
    cloakbound::RunConfig cfg = cloakbound::load_config(path);
    cloakbound::Rng rng(cfg.seed);
    auto* handle = new cb_problem{cfg, cloakbound::build_problem(cfg, rng)};
    *out = handle;
    return CB_OK;
  });
}

void cb_problem_destroy(cb_problem* problem) { delete problem; }

cb_status cb_problem_num_potentials(const cb_problem* problem, int* out) {
  if (!problem || !out) {
    set_error("null argument");
    return CB_ERROR_ARGUMENT;
  }
  *out = static_cast<int>(problem->problem.potentials().size());
  return CB_OK;
}

cb_status cb_problem_evaluate_F(const cb_problem* problem, double re_omega,
                                double im_omega, int potential, double* re_f,
                                double* im_f) {
  if (!problem || !re_f || !im_f) {
    set_error("null argument");
    return CB_ERROR_ARGUMENT;
  }
  if (potential < 0 ||
      potential >= static_cast<int>(problem->problem.potentials().size())) {
    set_error("potential index out of range");
    return CB_ERROR_ARGUMENT;
  }
  return guarded([&]() {
    const cloakbound::Complex f = cloakbound::evaluate_F(
        problem->problem, problem->problem.potentials()[potential],
        cloakbound::Complex(re_omega, im_omega));
    *re_f = f.real();
    *im_f = f.imag();
    return CB_OK;
  });
}

cb_status cb_problem_F_infinity(const cb_problem* problem, int potential, double* out) {
  if (!problem || !out) {
    set_error("null argument");
    return CB_ERROR_ARGUMENT;
  }
  if (potential < 0 ||
      potential >= static_cast<int>(problem->problem.potentials().size())) {
    set_error("potential index out of range");
    return CB_ERROR_ARGUMENT;
  }
  return guarded([&]() {
    *out = cloakbound::F_infinity(problem->problem,
                                  problem->problem.potentials()[potential]);
    return CB_OK;
  });
}

cb_status cb_problem_G_vac(const cb_problem* problem, int potential, double* out) {
  if (!problem || !out) {
    set_error("null argument");
    return CB_ERROR_ARGUMENT;
  }
  if (potential < 0 ||
      potential >= static_cast<int>(problem->problem.potentials().size())) {
    set_error("potential index out of range");
    return CB_ERROR_ARGUMENT;
  }
  return guarded([&]() {
    *out = problem->problem.g_vac(problem->problem.potentials()[potential]).real();
    return CB_OK;
  });
}

cb_status cb_run_config(const char* config_path, cb_run_kind kind, const char* out_dir,
                        int jobs, long long seed, cb_run_summary* summary) {
  if (!config_path || !summary) {
    set_error("null argument");
    return CB_ERROR_ARGUMENT;
  }
  return guarded([&]() {
    cloakbound::RunConfig cfg = cloakbound::load_config(config_path);
    cloakbound::RunKind k = cloakbound::RunKind::Run;
    switch (kind) {
      case CB_RUN: k = cloakbound::RunKind::Run; break;
      case CB_VERIFY_IDENTITIES: k = cloakbound::RunKind::VerifyIdentities; break;
      case CB_SUMRULE: k = cloakbound::RunKind::Sumrule; break;
      case CB_SWEEP: k = cloakbound::RunKind::Sweep; break;
    }
    const cloakbound::RunOutcome outcome = cloakbound::run_batch(
        cfg, k, out_dir ? out_dir : "", jobs, seed);
    summary->exit_code = outcome.exit_code;
    summary->checks_run = outcome.checks_run;
    summary->checks_failed = outcome.checks_failed;
    copy_path(summary->report_path, outcome.report_path);
    copy_path(summary->sweep_path, outcome.sweep_path);
    if (!outcome.message.empty()) set_error(outcome.message);
    return CB_OK;
  });
}

}  // extern "C"
