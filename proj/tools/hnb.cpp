// hnb: batch driver for the HetNet bidding simulator. Links the public C
// API only; every subcommand maps onto one or two library calls.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hetnetbid.h"

namespace {

struct ScenarioDeleter {
    void operator()(hnb_scenario* s) const { hnb_scenario_free(s); }
};
struct ModelDeleter {
    void operator()(hnb_model* m) const { hnb_model_free(m); }
};
using ScenarioPtr = std::unique_ptr<hnb_scenario, ScenarioDeleter>;
using ModelPtr = std::unique_ptr<hnb_model, ModelDeleter>;

int report(hnb_status status) {
    if (status == HNB_OK)
        return 0;
    std::fprintf(stderr, "hnb: %s\n", hnb_last_error());
    return static_cast<int>(status);
}

// "50,100,150" or "50..500:50" (inclusive range with step).
std::vector<int> parse_loads(const std::string& text) {
    std::vector<int> loads;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const auto colon = text.find(':', dots);
        const int start = std::stoi(text.substr(0, dots));
        const int stop = std::stoi(text.substr(
            dots + 2, colon == std::string::npos ? std::string::npos : colon - dots - 2));
        const int step = colon == std::string::npos ? 1 : std::stoi(text.substr(colon + 1));
        if (step <= 0)
            throw CLI::ValidationError("--loads", "range step must be positive");
        for (int u = start; u <= stop; u += step)
            loads.push_back(u);
        return loads;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string item = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty())
            loads.push_back(std::stoi(item));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return loads;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    for (int v : parse_loads(text))
        sizes.push_back(static_cast<std::size_t>(v));
    return sizes;
}

// "MxN", e.g. "32x32".
bool parse_grid(const std::string& text, std::size_t& m, std::size_t& n) {
    const auto x = text.find('x');
    if (x == std::string::npos)
        return false;
    try {
        m = std::stoul(text.substr(0, x));
        n = std::stoul(text.substr(x + 1));
    } catch (const std::exception&) {
        return false;
    }
    return m > 0 && n > 0;
}

struct CommonInputs {
    std::string config_path;
    std::string scenario_path;
    std::uint64_t seed = 0;
    bool has_seed = false;
};

void add_scenario_inputs(CLI::App* cmd, CommonInputs& in, bool with_seed = true) {
    auto* config = cmd->add_option("--config", in.config_path,
                                   "Configuration file (JSON, // comments allowed)");
    auto* scenario =
        cmd->add_option("--scenario", in.scenario_path, "Previously generated scenario file");
    config->excludes(scenario);
    if (with_seed)
        cmd->add_option("--seed", in.seed, "Master seed override")
            ->check(CLI::NonNegativeNumber)
            ->each([&in](const std::string&) { in.has_seed = true; });
}

// Loads --scenario if given, otherwise builds one from --config.
hnb_status open_scenario(const CommonInputs& in, bool seed_at_creation, ScenarioPtr& out) {
    hnb_scenario* raw = nullptr;
    hnb_status status;
    if (!in.scenario_path.empty()) {
        status = hnb_scenario_load(in.scenario_path.c_str(), &raw);
    } else if (!in.config_path.empty()) {
        const uint64_t* seed = (seed_at_creation && in.has_seed) ? &in.seed : nullptr;
        status = hnb_scenario_from_config(in.config_path.c_str(), seed, &raw);
    } else {
        std::fprintf(stderr, "hnb: one of --config or --scenario is required\n");
        return HNB_ERROR_CONFIG;
    }
    out.reset(raw);
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"HetNet bidding simulator: Stackelberg pricing, prospect-theory users, "
                 "SVM-learned decisions and DPOB optimized bidding"};
    app.require_subcommand(1);

    const double nan = std::nan("");

    // gen-scenario ----------------------------------------------------
    CommonInputs gen_in;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen-scenario", "Generate a scenario file from a configuration");
    gen->add_option("--config", gen_in.config_path, "Configuration file")->required();
    gen->add_option("--seed", gen_in.seed, "Master seed override")
        ->each([&gen_in](const std::string&) { gen_in.has_seed = true; });
    gen->add_option("--out", gen_out, "Scenario file to write")->required();

    // bootstrap --------------------------------------------------------
    CommonInputs boot_in;
    std::string boot_out;
    double boot_alpha = nan;
    int boot_bids = 0;
    auto* boot = app.add_subcommand(
        "bootstrap", "Sample labeled bid history from the prospect-theory decision model");
    add_scenario_inputs(boot, boot_in);
    boot->add_option("--alpha", boot_alpha, "Prelec alpha (1 = EUT behavior)");
    boot->add_option("--bids-per-user", boot_bids, "Bids sampled per covered user");
    boot->add_option("--out", boot_out, "History CSV to write")->required();

    // train --------------------------------------------------------------
    CommonInputs train_in;
    std::string train_out;
    double train_alpha = nan;
    int train_bids = 0;
    auto* train = app.add_subcommand("train",
                                     "Bootstrap history and train the accept/reject classifier");
    add_scenario_inputs(train, train_in);
    train->add_option("--alpha", train_alpha, "Prelec alpha for the simulated users");
    train->add_option("--bids-per-user", train_bids, "Bids sampled per covered user");
    train->add_option("--out", train_out, "Model file to write")->required();

    // simulate -----------------------------------------------------------
    CommonInputs sim_in;
    std::string sim_out, sim_model;
    auto* simulate = app.add_subcommand(
        "simulate", "Run the experiment exactly as configured (trains a model if dpob needs one)");
    add_scenario_inputs(simulate, sim_in);
    simulate->add_option("--model", sim_model, "Trained model file (optional)");
    simulate->add_option("--out", sim_out, "Metrics CSV to write")->required();

    // sweep ---------------------------------------------------------------
    CommonInputs sweep_in;
    std::string sweep_out, sweep_model, sweep_modes, sweep_loads, sweep_grid;
    double sweep_alpha = nan;
    auto* sweep = app.add_subcommand("sweep", "Run a load sweep over selected modes");
    add_scenario_inputs(sweep, sweep_in);
    sweep->add_option("--modes", sweep_modes,
                      "Comma list from eut,pt_deviation,dpob (default: configured modes)");
    sweep->add_option("--loads", sweep_loads, "User counts: \"50,100\" or \"50..500:50\"");
    sweep->add_option("--alpha", sweep_alpha, "Prelec alpha override");
    sweep->add_option("--grid", sweep_grid, "DPOB grid as MxN, e.g. 32x32");
    sweep->add_option("--model", sweep_model, "Trained model file (required with dpob)");
    sweep->add_option("--out", sweep_out, "Metrics CSV to write")->required();

    // convergence -----------------------------------------------------------
    std::string conv_out;
    std::string conv_sizes = "64,256,1024,4096";
    int conv_trials = 100;
    std::uint64_t conv_seed = 0;
    auto* conv = app.add_subcommand("convergence",
                                    "Measure DPOB iteration counts against the state-space size");
    conv->add_option("--sizes", conv_sizes, "State counts |S| (comma list or A..B:step)");
    conv->add_option("--trials", conv_trials, "Trials per size")->check(CLI::PositiveNumber);
    conv->add_option("--seed", conv_seed, "Random seed");
    conv->add_option("--out", conv_out, "Convergence CSV to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return HNB_ERROR_CONFIG; // bad flags are configuration errors
    }

    if (gen->parsed()) {
        hnb_scenario* raw = nullptr;
        const uint64_t* seed = gen_in.has_seed ? &gen_in.seed : nullptr;
        hnb_status status = hnb_scenario_from_config(gen_in.config_path.c_str(), seed, &raw);
        ScenarioPtr scenario(raw);
        if (status == HNB_OK)
            status = hnb_scenario_save(scenario.get(), gen_out.c_str());
        if (status == HNB_OK) {
            size_t users = 0, stations = 0;
            hnb_scenario_user_count(scenario.get(), &users);
            hnb_scenario_station_count(scenario.get(), &stations);
            std::printf("wrote %s (%zu stations, %zu users)\n", gen_out.c_str(), stations, users);
        }
        return report(status);
    }

    if (boot->parsed()) {
        ScenarioPtr scenario;
        hnb_status status = open_scenario(boot_in, false, scenario);
        if (status == HNB_OK) {
            const uint64_t* seed = boot_in.has_seed ? &boot_in.seed : nullptr;
            status = hnb_bootstrap_csv(scenario.get(), boot_alpha, boot_bids, seed,
                                       boot_out.c_str());
        }
        if (status == HNB_OK)
            std::printf("wrote %s\n", boot_out.c_str());
        return report(status);
    }

    if (train->parsed()) {
        ScenarioPtr scenario;
        hnb_status status = open_scenario(train_in, false, scenario);
        ModelPtr model;
        if (status == HNB_OK) {
            const uint64_t* seed = train_in.has_seed ? &train_in.seed : nullptr;
            hnb_model* raw = nullptr;
            hnb_train_summary summary{};
            status = hnb_model_train(scenario.get(), train_alpha, train_bids, seed, &summary,
                                     &raw);
            model.reset(raw);
            if (status == HNB_OK) {
                std::printf("samples: %zu (accepted %zu, rejected %zu)\n", summary.samples,
                            summary.accepted, summary.rejected);
                std::printf("training accuracy: %.4f (outer iterations %d, duality gap %.3g)\n",
                            summary.training_accuracy, summary.outer_iterations,
                            summary.duality_gap);
            }
        }
        if (status == HNB_OK)
            status = hnb_model_save(model.get(), train_out.c_str());
        if (status == HNB_OK)
            std::printf("wrote %s\n", train_out.c_str());
        return report(status);
    }

    if (simulate->parsed()) {
        ScenarioPtr scenario;
        hnb_status status = open_scenario(sim_in, false, scenario);
        ModelPtr model;
        if (status == HNB_OK && !sim_model.empty()) {
            hnb_model* raw = nullptr;
            status = hnb_model_load(sim_model.c_str(), &raw);
            model.reset(raw);
        }
        if (status == HNB_OK) {
            const uint64_t* seed = sim_in.has_seed ? &sim_in.seed : nullptr;
            status = hnb_simulate_csv(scenario.get(), model.get(), seed, sim_out.c_str());
        }
        if (status == HNB_OK)
            std::printf("wrote %s\n", sim_out.c_str());
        return report(status);
    }

    if (sweep->parsed()) {
        ScenarioPtr scenario;
        hnb_status status = open_scenario(sweep_in, false, scenario);
        ModelPtr model;
        if (status == HNB_OK && !sweep_model.empty()) {
            hnb_model* raw = nullptr;
            status = hnb_model_load(sweep_model.c_str(), &raw);
            model.reset(raw);
        }
        std::vector<int> loads;
        std::size_t grid_m = 0, grid_n = 0;
        if (status == HNB_OK && !sweep_loads.empty()) {
            try {
                loads = parse_loads(sweep_loads);
            } catch (const std::exception&) {
                std::fprintf(stderr, "hnb: cannot parse --loads '%s'\n", sweep_loads.c_str());
                return HNB_ERROR_CONFIG;
            }
        }
        if (status == HNB_OK && !sweep_grid.empty() &&
            !parse_grid(sweep_grid, grid_m, grid_n)) {
            std::fprintf(stderr, "hnb: cannot parse --grid '%s' (expected MxN)\n",
                         sweep_grid.c_str());
            return HNB_ERROR_CONFIG;
        }
        if (status == HNB_OK) {
            const uint64_t* seed = sweep_in.has_seed ? &sweep_in.seed : nullptr;
            status = hnb_sweep_csv(scenario.get(), sweep_modes.empty() ? nullptr : sweep_modes.c_str(),
                                   loads.empty() ? nullptr : loads.data(), loads.size(),
                                   sweep_alpha, grid_m, grid_n, model.get(), seed,
                                   sweep_out.c_str());
        }
        if (status == HNB_OK)
            std::printf("wrote %s\n", sweep_out.c_str());
        return report(status);
    }

    if (conv->parsed()) {
        std::vector<std::size_t> sizes;
        try {
            sizes = parse_sizes(conv_sizes);
        } catch (const std::exception&) {
            std::fprintf(stderr, "hnb: cannot parse --sizes '%s'\n", conv_sizes.c_str());
            return HNB_ERROR_CONFIG;
        }
        const hnb_status status = hnb_convergence_csv(sizes.data(), sizes.size(), conv_trials,
                                                      conv_seed, conv_out.c_str());
        if (status == HNB_OK)
            std::printf("wrote %s\n", conv_out.c_str());
        return report(status);
    }

    return 0;
}
