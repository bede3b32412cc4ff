#ifndef SWELAB_SWELAB_H
#define SWELAB_SWELAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define SWELAB_API __attribute__((visibility("default")))
#else
#define SWELAB_API
#endif

/* Status codes double as process exit codes for the CLI. */
typedef enum swelab_status {
  SWELAB_OK = 0,
  SWELAB_ERR_ARGUMENT = 1,   /* null handle or bad argument */
  SWELAB_ERR_VALIDATION = 2, /* configuration rejected */
  SWELAB_ERR_RUNTIME = 3,    /* numerical, budget or I/O failure */
  SWELAB_ERR_CHECK = 4       /* run finished but an acceptance threshold failed */
} swelab_status;

typedef struct swelab_config swelab_config;
typedef struct swelab_report swelab_report;

SWELAB_API const char* swelab_version(void);

/* JSON document describing the most recent failure on this thread, or "{}". */
SWELAB_API const char* swelab_last_error(void);

/* Worker count from SWE_LAB_WORKERS, else the hardware concurrency. */
SWELAB_API int swelab_default_workers(void);

SWELAB_API swelab_status swelab_config_create(const char* experiment, swelab_config** out);
SWELAB_API void swelab_config_destroy(swelab_config* cfg);
/* INI file with [section] key = value lines. */
SWELAB_API swelab_status swelab_config_load_file(swelab_config* cfg, const char* path);
/* key is "section.key"; values set here take precedence over file values. */
SWELAB_API swelab_status swelab_config_set(swelab_config* cfg, const char* key, const char* value);
SWELAB_API swelab_status swelab_config_validate(const swelab_config* cfg);

/* Runs the experiment and writes tables plus manifest.json into out_dir.
 * workers <= 0 selects swelab_default_workers(). On SWELAB_OK and
 * SWELAB_ERR_CHECK a report is returned and must be destroyed. */
SWELAB_API swelab_status swelab_run(const swelab_config* cfg, const char* out_dir, int check,
                                    int workers, swelab_report** out);
SWELAB_API const char* swelab_report_manifest_json(const swelab_report* rep);
SWELAB_API int swelab_report_check_passed(const swelab_report* rep);
SWELAB_API size_t swelab_report_warning_count(const swelab_report* rep);
SWELAB_API const char* swelab_report_warning(const swelab_report* rep, size_t i);
SWELAB_API void swelab_report_destroy(swelab_report* rep);

/* Scalar helpers. */
SWELAB_API double swelab_rho(double xi);
SWELAB_API double swelab_spectral_sum(int N);
SWELAB_API double swelab_mass_squared(int N, double t);
SWELAB_API uint64_t swelab_seed_derive(uint64_t root, const char* const* labels, size_t n_labels);

#ifdef __cplusplus
}
#endif

#endif
