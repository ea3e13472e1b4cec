/*
 * invctl: C interface to the inventory-control simulation core.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an invctl_status;
 * on failure invctl_last_error() holds a message for the calling thread
 * until its next failing call.
 */
#ifndef INVCTL_INVCTL_H
#define INVCTL_INVCTL_H

#include <stddef.h>
#include <stdint.h>

#if defined(INVCTL_BUILDING_LIBRARY)
#define INVCTL_API __attribute__((visibility("default")))
#else
#define INVCTL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum invctl_status {
    INVCTL_OK = 0,
    INVCTL_ERR_INVALID_ARGUMENT = 1,
    INVCTL_ERR_CONFIG = 2,
    INVCTL_ERR_RUNTIME = 3,
    INVCTL_ERR_IO = 4,
    INVCTL_ERR_NOT_FOUND = 5
} invctl_status;

typedef struct invctl_scenario invctl_scenario;
typedef struct invctl_result invctl_result;

typedef struct invctl_metrics {
    double tracking_rmse;
    double steady_state_error;
    double bullwhip_ratio; /* meaningful only when bullwhip_defined != 0 */
    int bullwhip_defined;
    double control_variance;
    double drift_slope;
    double tracking_error_sup;
    double steady_envelope;
    double reference_amplitude;
    size_t warmup_samples;
    size_t steady_begin;
} invctl_metrics;

typedef struct invctl_plant_params {
    double yield_k;
    double decay_sigma;
    double lead_time;
    double dt;
    double y0;
} invctl_plant_params;

INVCTL_API const char* invctl_version(void);
INVCTL_API const char* invctl_last_error(void);

/* Built-in scenarios S1..S8. */
INVCTL_API size_t invctl_fixture_count(void);
INVCTL_API const char* invctl_fixture_id(size_t index);
INVCTL_API const char* invctl_fixture_description(size_t index);

INVCTL_API invctl_status invctl_scenario_from_fixture(const char* id, invctl_scenario** out);
INVCTL_API invctl_status invctl_scenario_from_file(const char* path, invctl_scenario** out);
INVCTL_API invctl_status invctl_scenario_from_string(const char* text, invctl_scenario** out);
INVCTL_API invctl_status invctl_scenario_clone(const invctl_scenario* scenario, invctl_scenario** out);
INVCTL_API void invctl_scenario_free(invctl_scenario* scenario);

/* Overrides use the scenario file keys, e.g. ("controller.gain", "0.5"). */
INVCTL_API invctl_status invctl_scenario_set(invctl_scenario* scenario, const char* key, const char* value);
INVCTL_API invctl_status invctl_scenario_set_seed(invctl_scenario* scenario, uint64_t seed);
INVCTL_API invctl_status invctl_scenario_set_duration(invctl_scenario* scenario, double duration);
INVCTL_API invctl_status invctl_scenario_validate(const invctl_scenario* scenario);

/* Canonical text form. Writes at most `capacity` bytes including the
 * terminator and stores the full length (excluding the terminator) in
 * *needed. Pass buffer = NULL, capacity = 0 to query the size. */
INVCTL_API invctl_status invctl_scenario_to_string(const invctl_scenario* scenario, char* buffer, size_t capacity,
                                                   size_t* needed);
INVCTL_API const char* invctl_scenario_id(const invctl_scenario* scenario);

INVCTL_API invctl_status invctl_run(const invctl_scenario* scenario, invctl_result** out);
INVCTL_API void invctl_result_free(invctl_result* result);

INVCTL_API size_t invctl_result_length(const invctl_result* result);
INVCTL_API size_t invctl_result_column_count(const invctl_result* result);
INVCTL_API const char* invctl_result_column_name(const invctl_result* result, size_t column);
/* Borrowed pointer, valid until invctl_result_free. */
INVCTL_API invctl_status invctl_result_column(const invctl_result* result, size_t column, const double** data,
                                              size_t* length);
INVCTL_API invctl_status invctl_result_metrics(const invctl_result* result, invctl_metrics* out);
INVCTL_API invctl_status invctl_result_write_csv(const invctl_result* result, const char* path);
/* Same contract as invctl_scenario_to_string. */
INVCTL_API invctl_status invctl_result_csv(const invctl_result* result, char* buffer, size_t capacity,
                                           size_t* needed);

/* One metrics row per gain into out[0 .. count). */
INVCTL_API invctl_status invctl_gain_sweep(const invctl_scenario* scenario, const double* gains, size_t count,
                                           double bound, invctl_metrics* out);

INVCTL_API invctl_status invctl_bias_drift(double bias, const invctl_plant_params* plant, double duration,
                                           double demand_level, invctl_metrics* out);

#ifdef __cplusplus
}
#endif

#endif /* INVCTL_INVCTL_H */
