#ifndef HETNETBID_SIM_HPP
#define HETNETBID_SIM_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hetnetbid/learn.hpp"
#include "hetnetbid/market.hpp"
#include "hetnetbid/types.hpp"

namespace hetnetbid::sim {

enum class Mode { eut, pt_deviation, dpob };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name); // throws errc::config

struct PhysicsConfig {
    double noise_dbm = -100.0;
    double sinr_threshold_db = 6.0;
};

/// Station-class template: every station of a kind shares these.
/// tx_power_dbm may be NaN ("auto" in the config file), in which case the
/// power is calibrated so the mean SNR at coverage_radius_m equals the
/// SINR threshold and the nominal footprint is exactly the coverage disc.
struct StationClassConfig {
    double carrier_freq_mhz = 900.0;
    double antenna_height_m = 30.0;
    double total_bandwidth_mhz = 150.0;
    double alloc_gain = 0.9;
    double tx_power_dbm = std::numeric_limits<double>::quiet_NaN();
    PricingParams pricing{0.8, 2.0};
    CostParams cost{0.2, 1.0};
};

struct UserClassConfig {
    double min_rate_mbps = 1.0;
    double benefit_scale = 10.0;    // delta
    double benefit_curvature = 2.0; // theta
    double antenna_height_m = 1.5;
    double activity_probability = 1.0;
};

struct ScenarioConfig {
    std::size_t users = 80;
    double macro_radius_m = 304.8;     // 1000 ft
    std::size_t wifi_count = 8;
    double wifi_ring_fraction = 0.6;   // ring radius as a fraction of the macro radius
    double wifi_radius_m = 91.44;      // 300 ft
    StationClassConfig macro_cell;
    StationClassConfig wifi{.carrier_freq_mhz = 2400.0,
                            .antenna_height_m = 10.0,
                            .total_bandwidth_mhz = 8.0,
                            .pricing = {1.0, 2.0}};
    UserClassConfig user;
    PhysicsConfig physics;
};

struct GridConfig {
    std::size_t rates = 32;      // M
    std::size_t bandwidths = 32; // N
};

struct ExperimentConfig {
    std::vector<Mode> modes{Mode::eut, Mode::pt_deviation, Mode::dpob};
    double prelec_alpha = 0.8;
    std::vector<int> loads{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
    GridConfig grid;
    int rate_grid_size = 512;
    int bootstrap_bids_per_user = 50;
    learn::SvmConfig svm;
};

/// The one structured configuration file: master seed at the top level,
/// scenario and experiment sections below. JSON with // comments allowed.
struct Config {
    std::uint64_t seed = 0;
    ScenarioConfig scenario;
    ExperimentConfig experiment;
};

Config parse_config(const std::string& json_text); // throws errc::config
Config load_config(const std::string& path);
std::string default_config_json();

struct Scenario {
    Config config; // full configuration echoed for reproducibility
    std::uint64_t seed = 0;
    std::vector<Station> stations; // stations[0] is the macro cell
    std::vector<UserNode> users;
};

/// Macro cell at the origin, wifi_count WiFi stations evenly on a ring,
/// `users` drawn uniformly over the macro disc. Deterministic given seed.
Scenario generate_scenario(const Config& config, std::optional<std::uint64_t> seed_override = {});

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text); // throws errc::config
void save_scenario(const Scenario& scenario, const std::string& path);
Scenario load_scenario(const std::string& path);

/// Users redrawn for one sweep load point (stations unchanged); stream
/// seeded from (scenario seed, load).
std::vector<UserNode> users_for_load(const Scenario& scenario, int load);

/// Labeled bid history for classifier training: every covered user rates
/// bids_per_user bids drawn uniformly from the quantized bid space of a
/// random covering station, deciding each bid standalone under Prelec
/// weighting (alpha = 1 or NaN means identity/EUT behavior).
std::vector<std::pair<Bid, bool>> bootstrap_history(const Scenario& scenario, double prelec_alpha,
                                                    int bids_per_user, std::uint64_t seed);

/// bootstrap_history + train_svm with the scenario's SVM settings.
learn::SvmModel train_from_bootstrap(const Scenario& scenario, double prelec_alpha,
                                     int bids_per_user, std::uint64_t seed,
                                     learn::TrainStats* stats = nullptr);

struct MetricsRow {
    int load = 0;
    Mode mode = Mode::eut;
    double prelec_alpha = 1.0;
    double sum_sp_utility = 0.0;
    double sum_user_utility = 0.0;
    double acceptance_rate = 0.0; // accepted bids / offered bids (0 when none offered)
    int connected_users = 0;
    double mean_dpob_iterations = 0.0; // 0 outside dpob mode
    std::uint64_t seed = 0;
};

/// Runs every (mode, load) cell of the sweep. For dpob mode a trained
/// model may be supplied; when absent one is trained from a bootstrap of
/// the scenario first. Rows come back sorted by (mode, load) with modes in
/// canonical order eut, pt_deviation, dpob.
std::vector<MetricsRow> run_experiment(const Scenario& scenario, const ExperimentConfig& experiment,
                                       const learn::SvmModel* model = nullptr);

/// CSV document for a set of metric rows; header documented in the README;
/// byte-identical for identical inputs.
std::string sweep_report(std::span<const MetricsRow> rows);

/// Advertised EUT-bid guarantees at one load point (diagnostic; used to
/// locate the underweighting regime where the median exceeds 1/e).
std::vector<double> advertised_guarantees(const Scenario& scenario, int load,
                                          int rate_grid_size = 512);

std::string history_csv(std::span<const std::pair<Bid, bool>> history);

} // namespace hetnetbid::sim

#endif
