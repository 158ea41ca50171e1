/* isingqoc — driven transverse-field Ising ring simulator with dCRAB optimal
 * control over irreversibility quantifiers.
 *
 * C interface of the shared library. All functions are thread-safe; error
 * messages are per-thread and refer to the last failing call on the calling
 * thread. Handles are opaque and must be released with their destroy
 * function.
 */
#ifndef ISINGQOC_H
#define ISINGQOC_H

#include <stddef.h>

#if defined(_WIN32)
#define IQOC_API __declspec(dllexport)
#else
#define IQOC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum iqoc_status {
  IQOC_OK = 0,
  IQOC_ERR_CONFIG = 1,   /* malformed config, bad key, invalid parameter */
  IQOC_ERR_NUMERIC = 2,  /* numerical failure during a run */
  IQOC_ERR_IO = 3,       /* file read/write failure */
  IQOC_ERR_ARGUMENT = 4  /* null handle or out-of-contract C argument */
} iqoc_status;

/* Experiment configuration: flat string key/value pairs using the same
 * schema as the config files. */
typedef struct iqoc_config iqoc_config;

IQOC_API iqoc_config* iqoc_config_create(void);

/* Parses a config file; returns NULL on failure (see iqoc_last_error). */
IQOC_API iqoc_config* iqoc_config_load(const char* path);

IQOC_API iqoc_status iqoc_config_set(iqoc_config* config, const char* key,
                                     const char* value);

/* Copies the value of a key into buf (NUL-terminated, truncating). Returns
 * IQOC_ERR_CONFIG when the key is absent. */
IQOC_API iqoc_status iqoc_config_get(const iqoc_config* config, const char* key,
                                     char* buf, size_t buf_size);

IQOC_API void iqoc_config_destroy(iqoc_config* config);

/* Runs an experiment under one of the CLI verbs: "sweep-quench",
 * "sweep-optimize", "trace", "transfer", "work-compare", "convergence".
 * Writes the CSV to the configured output (key "out", "-" = stdout), the
 * optimized pulse files, and the metadata sidecar. */
IQOC_API iqoc_status iqoc_run(const iqoc_config* config, const char* verb);

/* Quantifiers of a single sudden quench f0 -> fT from the Gibbs state:
 * out_report = {avg_work, delta_F, s_irr, w_fric, s_qvol}. */
IQOC_API iqoc_status iqoc_quench_report(int n_spins, double beta, double f0,
                                        double f_T, double out_report[5]);

/* Message for the last failing call on this thread; empty string if none. */
IQOC_API const char* iqoc_last_error(void);

IQOC_API const char* iqoc_version(void);

#ifdef __cplusplus
}
#endif

#endif /* ISINGQOC_H */
