/* SPDX-License-Identifier: Apache-2.0 */
/*
 * jamloc C API.
 *
 * Opaque handles own their memory; release them with the matching *_free function. Every call
 * that can fail returns a jl_status; on failure jl_last_error() holds a message for the calling
 * thread until its next failing call. Strings returned through char** out-parameters are
 * heap-allocated and must be released with jl_string_free.
 */
#ifndef JAMLOC_JAMLOC_H
#define JAMLOC_JAMLOC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(JAMLOC_BUILDING)
#    define JL_API __declspec(dllexport)
#  else
#    define JL_API __declspec(dllimport)
#  endif
#else
#  define JL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jl_status {
    JL_OK = 0,
    JL_ERR_INVALID_ARGUMENT = 1, /* null handle or pointer, bad enum string */
    JL_ERR_CONFIG = 2,           /* invalid configuration or precondition */
    JL_ERR_DOMAIN = 3,           /* geometric domain error, e.g. coincident points */
    JL_ERR_SINGULAR_GEOMETRY = 4,
    JL_ERR_IO = 5,
    JL_ERR_EMPTY_REPORT = 6,     /* no trial succeeded */
    JL_ERR_INTERNAL = 99
} jl_status;

typedef struct jl_config jl_config;
typedef struct jl_result jl_result;

typedef struct jl_vec3 {
    double x, y, z;
} jl_vec3;

/* One bearing measurement as seen by a localizer. Angles in radians. */
typedef struct jl_aoa_sample {
    jl_vec3 uav_position;
    double azimuth_rad;
    double elevation_rad;
    double jsr_db;
    double time_s;
} jl_aoa_sample;

typedef struct jl_spgd_params {
    int iterations;
    double learning_rate;
    double decay;
    double pruning_rate;
} jl_spgd_params;

typedef struct jl_estimate {
    jl_vec3 position;
    int samples_used;
    long work; /* constraint rows (LSE/WLSE) or gradient evaluations (SPGD) */
} jl_estimate;

/* Preset selectors. NULL strings and m_jammers == 0 mean "all". threads == 0 means 1. */
typedef struct jl_preset_options {
    unsigned threads;
    const char* lean;      /* "strong" | "slight" */
    int m_jammers;         /* multi only */
    const char* freq_mode; /* "constant" | "random" */
} jl_preset_options;

JL_API const char* jl_version(void);
JL_API const char* jl_last_error(void);
JL_API const char* jl_status_name(jl_status status);
JL_API void jl_string_free(char* s);

/* ---- configuration ---- */
JL_API jl_status jl_config_default(jl_config** out);
JL_API jl_status jl_config_parse(const char* json_text, jl_config** out);
JL_API jl_status jl_config_load_file(const char* path, jl_config** out);
JL_API jl_status jl_config_to_json(const jl_config* cfg, char** out);
JL_API jl_status jl_config_set_trials(jl_config* cfg, int trials);
JL_API jl_status jl_config_set_seed(jl_config* cfg, uint64_t seed);
/* Overrides one numeric scenario parameter (same names as sweep parameters). */
JL_API jl_status jl_config_set_number(jl_config* cfg, const char* parameter, double value);
JL_API void jl_config_free(jl_config* cfg);

/* ---- experiments ---- */
JL_API void jl_preset_options_init(jl_preset_options* opts);
/* preset: "ideal" | "multi" | "modulation" | "run" */
JL_API jl_status jl_run_preset(const jl_config* cfg, const char* preset, const jl_preset_options* opts,
                               jl_result** out);
JL_API size_t jl_result_row_count(const jl_result* result);
JL_API jl_status jl_result_csv(const jl_result* result, char** out);
JL_API jl_status jl_result_manifest(const jl_result* result, char** out);
/* Writes <out_dir>/<preset>.csv and <out_dir>/<preset>.manifest.json. csv_path may be NULL. */
JL_API jl_status jl_result_write(const jl_result* result, const char* out_dir, char** csv_path);
JL_API void jl_result_free(jl_result* result);

/* ---- localizers ---- */
JL_API jl_status jl_localize_lse(const jl_aoa_sample* samples, size_t n, jl_estimate* out);
JL_API jl_status jl_localize_wlse(const jl_aoa_sample* samples, size_t n, double path_loss_exponent,
                                  jl_estimate* out);
JL_API void jl_spgd_params_init(jl_spgd_params* params);
JL_API jl_status jl_localize_spgd(const jl_aoa_sample* samples, size_t n, const jl_spgd_params* params,
                                  jl_estimate* out);

#ifdef __cplusplus
}
#endif

#endif /* JAMLOC_JAMLOC_H */
