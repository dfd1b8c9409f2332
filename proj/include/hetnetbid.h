/*
 * hetnetbid C API: HetNet bidding simulator and optimized-bidding engine.
 *
 * All entry points return hnb_status; a human-readable message for the
 * last failure on the calling thread is available via hnb_last_error().
 * Objects are opaque handles owned by the caller and released with the
 * matching *_free function. NULL/NaN/0-sized optional arguments mean
 * "use the value embedded in the scenario's configuration".
 */
#ifndef HETNETBID_H
#define HETNETBID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HNB_API __declspec(dllexport)
#else
#define HNB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hnb_status {
    HNB_OK = 0,
    HNB_ERROR = 1,        /* internal or invalid-argument failure */
    HNB_ERROR_CONFIG = 2, /* unreadable or inconsistent configuration */
    HNB_ERROR_DATA = 3,   /* degenerate or malformed data */
    HNB_ERROR_IO = 4      /* filesystem failure */
} hnb_status;

typedef struct hnb_scenario hnb_scenario;
typedef struct hnb_model hnb_model;

HNB_API const char* hnb_version(void);

/* Message for the last failing call on this thread; empty string if none. */
HNB_API const char* hnb_last_error(void);

/* ------------------------------------------------------------------ */
/* Scenario lifecycle                                                  */

/* Builds a scenario from a JSON configuration file (// comments allowed).
 * seed_override, when non-NULL, replaces the file's master seed. */
HNB_API hnb_status hnb_scenario_from_config(const char* config_path, const uint64_t* seed_override,
                                            hnb_scenario** out);

HNB_API hnb_status hnb_scenario_save(const hnb_scenario* scenario, const char* path);
HNB_API hnb_status hnb_scenario_load(const char* path, hnb_scenario** out);
HNB_API void hnb_scenario_free(hnb_scenario* scenario);

HNB_API hnb_status hnb_scenario_user_count(const hnb_scenario* scenario, size_t* out);
HNB_API hnb_status hnb_scenario_station_count(const hnb_scenario* scenario, size_t* out);
HNB_API hnb_status hnb_scenario_seed(const hnb_scenario* scenario, uint64_t* out);

/* ------------------------------------------------------------------ */
/* Training-data bootstrap and the SVM model                           */

/* Writes the labeled bid history CSV. prelec_alpha: NaN = scenario value;
 * bids_per_user/seed: 0 = scenario value. */
HNB_API hnb_status hnb_bootstrap_csv(const hnb_scenario* scenario, double prelec_alpha,
                                     int bids_per_user, const uint64_t* seed,
                                     const char* out_path);

typedef struct hnb_train_summary {
    size_t samples;
    size_t accepted;
    size_t rejected;
    double training_accuracy;
    int outer_iterations;
    double duality_gap;
} hnb_train_summary;

/* Bootstraps history from the scenario and trains the accept/reject
 * classifier. summary may be NULL. */
HNB_API hnb_status hnb_model_train(const hnb_scenario* scenario, double prelec_alpha,
                                   int bids_per_user, const uint64_t* seed,
                                   hnb_train_summary* summary, hnb_model** out);

HNB_API hnb_status hnb_model_save(const hnb_model* model, const char* path);
HNB_API hnb_status hnb_model_load(const char* path, hnb_model** out);
HNB_API void hnb_model_free(hnb_model* model);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

/* Runs a load sweep and writes the metrics CSV.
 *   modes:  comma-separated subset of "eut,pt_deviation,dpob"; NULL =
 *           scenario's configured modes.
 *   loads:  user counts; NULL/0 = scenario's configured loads.
 *   prelec_alpha: NaN = scenario value.
 *   grid_m/grid_n: 0 = scenario values.
 *   model:  required when dpob is among the modes (HNB_ERROR_CONFIG
 *           otherwise).
 *   seed:   NULL = scenario's master seed. */
HNB_API hnb_status hnb_sweep_csv(const hnb_scenario* scenario, const char* modes, const int* loads,
                                 size_t n_loads, double prelec_alpha, size_t grid_m, size_t grid_n,
                                 const hnb_model* model, const uint64_t* seed,
                                 const char* out_path);

/* Runs the experiment exactly as configured in the scenario; trains a
 * model from a bootstrap when dpob is configured and model is NULL. */
HNB_API hnb_status hnb_simulate_csv(const hnb_scenario* scenario, const hnb_model* model,
                                    const uint64_t* seed, const char* out_path);

/* DPOB convergence study over randomized monotone-consistent classifiers;
 * writes one CSV row per requested state count. */
HNB_API hnb_status hnb_convergence_csv(const size_t* state_counts, size_t n_counts, int trials,
                                       uint64_t seed, const char* out_path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* HETNETBID_H */
