/* C API for the cloakbound shared library.
 *
 * All entry points return cb_status; 0 means success. On failure,
 * cb_last_error() returns a message for the calling thread. Handles are
 * opaque and must be released with their destroy function. */

#ifndef CLOAKBOUND_H
#define CLOAKBOUND_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cb_status {
  CB_OK = 0,
  CB_ERROR_CONFIG = 2,   /* invalid config / input */
  CB_ERROR_NUMERIC = 1,  /* solver or numerical failure */
  CB_ERROR_ARGUMENT = 3  /* null pointer or bad argument */
} cb_status;

typedef enum cb_run_kind {
  CB_RUN = 0,
  CB_VERIFY_IDENTITIES = 1,
  CB_SUMRULE = 2,
  CB_SWEEP = 3
} cb_run_kind;

typedef struct cb_problem cb_problem;

typedef struct cb_run_summary {
  int exit_code;     /* 0 ok, 1 check failed / numeric, 2 config */
  int checks_run;
  int checks_failed;
  char report_path[512];
  char sweep_path[512];
} cb_run_summary;

const char* cb_version(void);

/* Message for the last failing call on this thread. */
const char* cb_last_error(void);

/* Load a problem from a JSON config file or string. */
cb_status cb_problem_create_from_file(const char* path, cb_problem** out);
cb_status cb_problem_create_from_json(const char* json_text, cb_problem** out);
void cb_problem_destroy(cb_problem* problem);

cb_status cb_problem_num_potentials(const cb_problem* problem, int* out);

/* F_{V0}(omega) for one probing potential at a complex frequency. */
cb_status cb_problem_evaluate_F(const cb_problem* problem, double re_omega,
                                double im_omega, int potential, double* re_f,
                                double* im_f);

/* High-frequency limit F_inf for one probing potential. */
cb_status cb_problem_F_infinity(const cb_problem* problem, int potential, double* out);

/* Vacuum quadratic form G_vac for one probing potential. */
cb_status cb_problem_G_vac(const cb_problem* problem, int potential, double* out);

/* Run one batch kind against a config file; writes report.json and sweep.csv
 * under out_dir (current directory when NULL). jobs <= 0 and seed < 0 fall
 * back to the config values. */
cb_status cb_run_config(const char* config_path, cb_run_kind kind, const char* out_dir,
                        int jobs, long long seed, cb_run_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* CLOAKBOUND_H */
