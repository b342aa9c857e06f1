/* C interface to the mslab shared library.
 *
 * A lab handle wraps one experiment configuration; subcommands run the
 * verification suites and write CSV/JSON artifacts under the configured
 * output directory. All functions are thread-compatible per handle.
 */
#ifndef MSLAB_H
#define MSLAB_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mslab_lab mslab_lab;

typedef enum {
  MSLAB_OK = 0,
  MSLAB_ERR_ARG = 1,      /* null pointer / bad argument */
  MSLAB_ERR_CONFIG = 2,   /* unreadable or malformed configuration */
  MSLAB_ERR_RUNTIME = 3   /* solver or i/o failure while running */
} mslab_status;

const char* mslab_version(void);

/* comma-separated list of subcommand names */
const char* mslab_subcommands(void);

mslab_status mslab_lab_create(const char* config_path, mslab_lab** out);
mslab_status mslab_lab_create_from_string(const char* config_text, mslab_lab** out);
void mslab_lab_destroy(mslab_lab* lab);

/* options: "out_dir", "seed", "grid_scale" */
mslab_status mslab_lab_set_option(mslab_lab* lab, const char* key, const char* value);

/* Runs one subcommand. exit_code (if non-null) receives 0 when every
 * configured verdict passed, 1 on a verdict failure, 2 for an unknown
 * subcommand. The return value reports mechanical failures only. */
mslab_status mslab_lab_run(mslab_lab* lab, const char* subcommand, int* exit_code);

/* pass/fail lines of the last run (stable until the next call) */
const char* mslab_lab_last_log(const mslab_lab* lab);

/* message for the last error on this handle ("" if none) */
const char* mslab_lab_last_error(const mslab_lab* lab);

#ifdef __cplusplus
}
#endif

#endif /* MSLAB_H */
