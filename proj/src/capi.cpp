#include "hetnetbid.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "hetnetbid/dpob.hpp"
#include "hetnetbid/errors.hpp"
#include "hetnetbid/learn.hpp"
#include "hetnetbid/sim.hpp"

struct hnb_scenario {
    hetnetbid::sim::Scenario scenario;
};

struct hnb_model {
    hetnetbid::learn::SvmModel model;
};

namespace {

thread_local std::string g_last_error;

hnb_status status_of(hetnetbid::errc code) {
    using hetnetbid::errc;
    switch (code) {
    case errc::config:
        return HNB_ERROR_CONFIG;
    case errc::degenerate_data:
    case errc::invalid_data:
        return HNB_ERROR_DATA;
    case errc::io:
        return HNB_ERROR_IO;
    default:
        return HNB_ERROR;
    }
}

template <typename Fn> hnb_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return HNB_OK;
    } catch (const hetnetbid::error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return HNB_ERROR;
    }
}

hnb_status fail(hnb_status status, const char* message) {
    g_last_error = message;
    return status;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw hetnetbid::error(hetnetbid::errc::io, "cannot open " + path + " for writing");
    out << text;
    if (!out)
        throw hetnetbid::error(hetnetbid::errc::io, "write failed for " + path);
}

double resolve_alpha(const hnb_scenario* s, double prelec_alpha) {
    return std::isnan(prelec_alpha) ? s->scenario.config.experiment.prelec_alpha : prelec_alpha;
}

int resolve_bids(const hnb_scenario* s, int bids_per_user) {
    return bids_per_user > 0 ? bids_per_user
                             : s->scenario.config.experiment.bootstrap_bids_per_user;
}

std::uint64_t resolve_seed(const hnb_scenario* s, const uint64_t* seed) {
    return seed ? *seed : s->scenario.seed;
}

} // namespace

extern "C" {

const char* hnb_version(void) { return "1.0.0"; }

const char* hnb_last_error(void) { return g_last_error.c_str(); }

hnb_status hnb_scenario_from_config(const char* config_path, const uint64_t* seed_override,
                                    hnb_scenario** out) {
    if (!config_path || !out)
        return fail(HNB_ERROR, "hnb_scenario_from_config: null argument");
    return guarded([&] {
        const auto config = hetnetbid::sim::load_config(config_path);
        std::optional<std::uint64_t> seed;
        if (seed_override)
            seed = *seed_override;
        *out = new hnb_scenario{hetnetbid::sim::generate_scenario(config, seed)};
    });
}

hnb_status hnb_scenario_save(const hnb_scenario* scenario, const char* path) {
    if (!scenario || !path)
        return fail(HNB_ERROR, "hnb_scenario_save: null argument");
    return guarded([&] { hetnetbid::sim::save_scenario(scenario->scenario, path); });
}

hnb_status hnb_scenario_load(const char* path, hnb_scenario** out) {
    if (!path || !out)
        return fail(HNB_ERROR, "hnb_scenario_load: null argument");
    return guarded([&] { *out = new hnb_scenario{hetnetbid::sim::load_scenario(path)}; });
}

void hnb_scenario_free(hnb_scenario* scenario) { delete scenario; }

hnb_status hnb_scenario_user_count(const hnb_scenario* scenario, size_t* out) {
    if (!scenario || !out)
        return fail(HNB_ERROR, "hnb_scenario_user_count: null argument");
    *out = scenario->scenario.users.size();
    return HNB_OK;
}

hnb_status hnb_scenario_station_count(const hnb_scenario* scenario, size_t* out) {
    if (!scenario || !out)
        return fail(HNB_ERROR, "hnb_scenario_station_count: null argument");
    *out = scenario->scenario.stations.size();
    return HNB_OK;
}

hnb_status hnb_scenario_seed(const hnb_scenario* scenario, uint64_t* out) {
    if (!scenario || !out)
        return fail(HNB_ERROR, "hnb_scenario_seed: null argument");
    *out = scenario->scenario.seed;
    return HNB_OK;
}

hnb_status hnb_bootstrap_csv(const hnb_scenario* scenario, double prelec_alpha, int bids_per_user,
                             const uint64_t* seed, const char* out_path) {
    if (!scenario || !out_path)
        return fail(HNB_ERROR, "hnb_bootstrap_csv: null argument");
    return guarded([&] {
        const auto history = hetnetbid::sim::bootstrap_history(
            scenario->scenario, resolve_alpha(scenario, prelec_alpha),
            resolve_bids(scenario, bids_per_user), resolve_seed(scenario, seed));
        write_text_file(out_path, hetnetbid::sim::history_csv(history));
    });
}

hnb_status hnb_model_train(const hnb_scenario* scenario, double prelec_alpha, int bids_per_user,
                           const uint64_t* seed, hnb_train_summary* summary, hnb_model** out) {
    if (!scenario || !out)
        return fail(HNB_ERROR, "hnb_model_train: null argument");
    return guarded([&] {
        const auto history = hetnetbid::sim::bootstrap_history(
            scenario->scenario, resolve_alpha(scenario, prelec_alpha),
            resolve_bids(scenario, bids_per_user), resolve_seed(scenario, seed));
        const auto samples = hetnetbid::learn::collect_samples(history);
        hetnetbid::learn::TrainStats stats;
        auto model = hetnetbid::learn::train_svm(
            samples, scenario->scenario.config.experiment.svm, &stats);
        if (summary) {
            summary->samples = samples.size();
            summary->accepted = 0;
            for (const auto& s : samples)
                summary->accepted += s.y > 0 ? 1 : 0;
            summary->rejected = summary->samples - summary->accepted;
            summary->training_accuracy = hetnetbid::learn::training_accuracy(model, samples);
            summary->outer_iterations = stats.outer_iterations;
            summary->duality_gap = stats.duality_gap;
        }
        *out = new hnb_model{std::move(model)};
    });
}

hnb_status hnb_model_save(const hnb_model* model, const char* path) {
    if (!model || !path)
        return fail(HNB_ERROR, "hnb_model_save: null argument");
    return guarded([&] { hetnetbid::learn::save_model(model->model, path); });
}

hnb_status hnb_model_load(const char* path, hnb_model** out) {
    if (!path || !out)
        return fail(HNB_ERROR, "hnb_model_load: null argument");
    return guarded([&] { *out = new hnb_model{hetnetbid::learn::load_model(path)}; });
}

void hnb_model_free(hnb_model* model) { delete model; }

hnb_status hnb_sweep_csv(const hnb_scenario* scenario, const char* modes, const int* loads,
                         size_t n_loads, double prelec_alpha, size_t grid_m, size_t grid_n,
                         const hnb_model* model, const uint64_t* seed, const char* out_path) {
    if (!scenario || !out_path)
        return fail(HNB_ERROR, "hnb_sweep_csv: null argument");
    return guarded([&] {
        using namespace hetnetbid;
        sim::Scenario local = scenario->scenario;
        if (seed) {
            local.seed = *seed;
            local.config.seed = *seed;
        }
        sim::ExperimentConfig experiment = local.config.experiment;
        if (modes && std::strlen(modes) > 0) {
            experiment.modes.clear();
            std::string list(modes);
            std::size_t start = 0;
            while (start <= list.size()) {
                const auto comma = list.find(',', start);
                const std::string item =
                    list.substr(start, comma == std::string::npos ? std::string::npos
                                                                  : comma - start);
                if (!item.empty())
                    experiment.modes.push_back(sim::mode_from_string(item));
                if (comma == std::string::npos)
                    break;
                start = comma + 1;
            }
            if (experiment.modes.empty())
                throw error(errc::config, "hnb_sweep_csv: empty mode list");
        }
        if (loads && n_loads > 0)
            experiment.loads.assign(loads, loads + n_loads);
        if (!std::isnan(prelec_alpha))
            experiment.prelec_alpha = prelec_alpha;
        if (grid_m > 0)
            experiment.grid.rates = grid_m;
        if (grid_n > 0)
            experiment.grid.bandwidths = grid_n;

        const bool wants_dpob =
            std::find(experiment.modes.begin(), experiment.modes.end(), sim::Mode::dpob) !=
            experiment.modes.end();
        if (wants_dpob && !model)
            throw error(errc::config,
                        "hnb_sweep_csv: dpob mode requires a trained model (see hnb_model_train)");

        const auto rows =
            sim::run_experiment(local, experiment, model ? &model->model : nullptr);
        write_text_file(out_path, sim::sweep_report(rows));
    });
}

hnb_status hnb_simulate_csv(const hnb_scenario* scenario, const hnb_model* model,
                            const uint64_t* seed, const char* out_path) {
    if (!scenario || !out_path)
        return fail(HNB_ERROR, "hnb_simulate_csv: null argument");
    return guarded([&] {
        using namespace hetnetbid;
        sim::Scenario local = scenario->scenario;
        if (seed) {
            local.seed = *seed;
            local.config.seed = *seed;
        }
        const auto rows = sim::run_experiment(local, local.config.experiment,
                                              model ? &model->model : nullptr);
        write_text_file(out_path, sim::sweep_report(rows));
    });
}

hnb_status hnb_convergence_csv(const size_t* state_counts, size_t n_counts, int trials,
                               uint64_t seed, const char* out_path) {
    if (!state_counts || n_counts == 0 || !out_path)
        return fail(HNB_ERROR, "hnb_convergence_csv: null or empty argument");
    return guarded([&] {
        const auto rows = hetnetbid::dpob::measure_convergence(
            std::span<const std::size_t>(state_counts, n_counts), trials, seed);
        write_text_file(out_path, hetnetbid::dpob::convergence_csv(rows));
    });
}

} // extern "C"
