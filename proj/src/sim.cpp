#include "hetnetbid/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "hetnetbid/behavior.hpp"
#include "hetnetbid/csv.hpp"
#include "hetnetbid/dpob.hpp"
#include "hetnetbid/errors.hpp"
#include "hetnetbid/radio.hpp"
#include "hetnetbid/rng.hpp"

namespace hetnetbid::sim {
namespace {

using nlohmann::json;

constexpr std::uint64_t kUsersTag = 0x7573657273ULL;     // "users"
constexpr std::uint64_t kBootstrapTag = 0x626f6f74ULL;   // "boot"
constexpr std::uint64_t kHistoryTag = 0x68697374ULL;     // "hist"
constexpr std::uint64_t kDpobTag = 0x64706f62ULL;        // "dpob"

std::uint64_t mode_tag(Mode mode) { return static_cast<std::uint64_t>(mode); }

[[noreturn]] void config_fail(const std::string& msg) { throw error(errc::config, msg); }

double require_positive(double v, const char* what) {
    if (!(v > 0.0))
        config_fail(std::string(what) + " must be positive");
    return v;
}

WeightingFn make_weighting(double alpha) {
    if (alpha == 1.0)
        return WeightingFn::identity();
    return WeightingFn::prelec(alpha);
}

// ---------------------------------------------------------------- JSON

json pricing_to_json(const PricingParams& p) { return {{"alpha", p.alpha}, {"beta", p.beta}}; }

PricingParams pricing_from_json(const json& j) {
    PricingParams p;
    p.alpha = require_positive(j.value("alpha", p.alpha), "pricing.alpha");
    p.beta = j.value("beta", p.beta);
    if (!(p.beta > 1.0))
        config_fail("pricing.beta must exceed 1 (convex pricing)");
    return p;
}

json cost_to_json(const CostParams& c) { return {{"per_mbps", c.per_mbps}, {"per_mhz", c.per_mhz}}; }

CostParams cost_from_json(const json& j) {
    CostParams c;
    c.per_mbps = j.value("per_mbps", c.per_mbps);
    c.per_mhz = j.value("per_mhz", c.per_mhz);
    if (c.per_mbps < 0.0 || c.per_mhz < 0.0)
        config_fail("cost coefficients must be nonnegative");
    return c;
}

json station_class_to_json(const StationClassConfig& s) {
    json j{{"carrier_freq_mhz", s.carrier_freq_mhz},
           {"antenna_height_m", s.antenna_height_m},
           {"total_bandwidth_mhz", s.total_bandwidth_mhz},
           {"alloc_gain", s.alloc_gain},
           {"pricing", pricing_to_json(s.pricing)},
           {"cost", cost_to_json(s.cost)}};
    if (std::isnan(s.tx_power_dbm))
        j["tx_power_dbm"] = "auto";
    else
        j["tx_power_dbm"] = s.tx_power_dbm;
    return j;
}

StationClassConfig station_class_from_json(const json& j, const StationClassConfig& defaults) {
    StationClassConfig s = defaults;
    s.carrier_freq_mhz = require_positive(j.value("carrier_freq_mhz", s.carrier_freq_mhz),
                                          "carrier_freq_mhz");
    s.antenna_height_m = require_positive(j.value("antenna_height_m", s.antenna_height_m),
                                          "antenna_height_m");
    s.total_bandwidth_mhz = require_positive(j.value("total_bandwidth_mhz", s.total_bandwidth_mhz),
                                             "total_bandwidth_mhz");
    s.alloc_gain = j.value("alloc_gain", s.alloc_gain);
    if (!(s.alloc_gain > 0.0) || s.alloc_gain > 1.0)
        config_fail("alloc_gain must lie in (0, 1]");
    if (j.contains("tx_power_dbm")) {
        const json& p = j.at("tx_power_dbm");
        if (p.is_string()) {
            if (p.get<std::string>() != "auto")
                config_fail("tx_power_dbm must be a number or \"auto\"");
            s.tx_power_dbm = std::numeric_limits<double>::quiet_NaN();
        } else if (p.is_number()) {
            s.tx_power_dbm = p.get<double>();
        } else {
            config_fail("tx_power_dbm must be a number or \"auto\"");
        }
    }
    if (j.contains("pricing"))
        s.pricing = pricing_from_json(j.at("pricing"));
    if (j.contains("cost"))
        s.cost = cost_from_json(j.at("cost"));
    return s;
}

json user_class_to_json(const UserClassConfig& u) {
    return {{"min_rate_mbps", u.min_rate_mbps},
            {"benefit_scale", u.benefit_scale},
            {"benefit_curvature", u.benefit_curvature},
            {"antenna_height_m", u.antenna_height_m},
            {"activity_probability", u.activity_probability}};
}

UserClassConfig user_class_from_json(const json& j, const UserClassConfig& defaults) {
    UserClassConfig u = defaults;
    u.min_rate_mbps = require_positive(j.value("min_rate_mbps", u.min_rate_mbps), "min_rate_mbps");
    u.benefit_scale = require_positive(j.value("benefit_scale", u.benefit_scale), "benefit_scale");
    u.benefit_curvature = j.value("benefit_curvature", u.benefit_curvature);
    if (!(u.benefit_curvature > 1.0))
        config_fail("benefit_curvature must exceed 1");
    u.antenna_height_m = require_positive(j.value("antenna_height_m", u.antenna_height_m),
                                          "antenna_height_m");
    u.activity_probability = j.value("activity_probability", u.activity_probability);
    if (u.activity_probability < 0.0 || u.activity_probability > 1.0)
        config_fail("activity_probability must lie in [0, 1]");
    return u;
}

json physics_to_json(const PhysicsConfig& p) {
    return {{"noise_dbm", p.noise_dbm}, {"sinr_threshold_db", p.sinr_threshold_db}};
}

PhysicsConfig physics_from_json(const json& j, const PhysicsConfig& defaults) {
    PhysicsConfig p = defaults;
    p.noise_dbm = j.value("noise_dbm", p.noise_dbm);
    p.sinr_threshold_db = j.value("sinr_threshold_db", p.sinr_threshold_db);
    return p;
}

json scenario_config_to_json(const ScenarioConfig& s) {
    return {{"users", s.users},
            {"macro_radius_m", s.macro_radius_m},
            {"wifi_count", s.wifi_count},
            {"wifi_ring_fraction", s.wifi_ring_fraction},
            {"wifi_radius_m", s.wifi_radius_m},
            {"macro", station_class_to_json(s.macro_cell)},
            {"wifi", station_class_to_json(s.wifi)},
            {"user", user_class_to_json(s.user)},
            {"physics", physics_to_json(s.physics)}};
}

ScenarioConfig scenario_config_from_json(const json& j, const ScenarioConfig& defaults) {
    ScenarioConfig s = defaults;
    s.users = j.value("users", s.users);
    s.macro_radius_m = require_positive(j.value("macro_radius_m", s.macro_radius_m),
                                        "macro_radius_m");
    s.wifi_count = j.value("wifi_count", s.wifi_count);
    s.wifi_ring_fraction = j.value("wifi_ring_fraction", s.wifi_ring_fraction);
    if (s.wifi_ring_fraction < 0.0 || s.wifi_ring_fraction > 1.0)
        config_fail("wifi_ring_fraction must lie in [0, 1]");
    s.wifi_radius_m = require_positive(j.value("wifi_radius_m", s.wifi_radius_m), "wifi_radius_m");
    if (j.contains("macro"))
        s.macro_cell = station_class_from_json(j.at("macro"), s.macro_cell);
    if (j.contains("wifi"))
        s.wifi = station_class_from_json(j.at("wifi"), s.wifi);
    if (j.contains("user"))
        s.user = user_class_from_json(j.at("user"), s.user);
    if (j.contains("physics"))
        s.physics = physics_from_json(j.at("physics"), s.physics);
    return s;
}

json svm_to_json(const learn::SvmConfig& c) {
    return {{"C", c.C},
            {"tolerance", c.tolerance},
            {"max_iterations", c.max_iterations},
            {"seed", c.seed}};
}

learn::SvmConfig svm_from_json(const json& j, const learn::SvmConfig& defaults) {
    learn::SvmConfig c = defaults;
    c.C = require_positive(j.value("C", c.C), "svm.C");
    c.tolerance = require_positive(j.value("tolerance", c.tolerance), "svm.tolerance");
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    if (c.max_iterations < 1)
        config_fail("svm.max_iterations must be >= 1");
    c.seed = j.value("seed", c.seed);
    return c;
}

json experiment_to_json(const ExperimentConfig& e) {
    json modes = json::array();
    for (Mode m : e.modes)
        modes.push_back(to_string(m));
    return {{"modes", modes},
            {"prelec_alpha", e.prelec_alpha},
            {"loads", e.loads},
            {"grid", {{"rates", e.grid.rates}, {"bandwidths", e.grid.bandwidths}}},
            {"rate_grid_size", e.rate_grid_size},
            {"bootstrap_bids_per_user", e.bootstrap_bids_per_user},
            {"svm", svm_to_json(e.svm)}};
}

ExperimentConfig experiment_from_json(const json& j, const ExperimentConfig& defaults) {
    ExperimentConfig e = defaults;
    if (j.contains("modes")) {
        e.modes.clear();
        for (const json& m : j.at("modes"))
            e.modes.push_back(mode_from_string(m.get<std::string>()));
        if (e.modes.empty())
            config_fail("experiment.modes must not be empty");
    }
    e.prelec_alpha = j.value("prelec_alpha", e.prelec_alpha);
    const bool needs_alpha = std::any_of(e.modes.begin(), e.modes.end(),
                                         [](Mode m) { return m != Mode::eut; });
    if (needs_alpha && (!(e.prelec_alpha > 0.0) || !(e.prelec_alpha < 1.0)))
        config_fail("experiment.prelec_alpha must lie in (0, 1) for pt_deviation/dpob modes");
    if (j.contains("loads")) {
        e.loads = j.at("loads").get<std::vector<int>>();
        if (e.loads.empty())
            config_fail("experiment.loads must not be empty");
    }
    for (int u : e.loads)
        if (u < 0)
            config_fail("experiment.loads entries must be nonnegative");
    if (j.contains("grid")) {
        e.grid.rates = j.at("grid").value("rates", e.grid.rates);
        e.grid.bandwidths = j.at("grid").value("bandwidths", e.grid.bandwidths);
    }
    if (e.grid.rates < 1 || e.grid.bandwidths < 1)
        config_fail("experiment.grid dimensions must be >= 1");
    e.rate_grid_size = j.value("rate_grid_size", e.rate_grid_size);
    if (e.rate_grid_size < 2)
        config_fail("experiment.rate_grid_size must be >= 2");
    e.bootstrap_bids_per_user = j.value("bootstrap_bids_per_user", e.bootstrap_bids_per_user);
    if (e.bootstrap_bids_per_user < 1)
        config_fail("experiment.bootstrap_bids_per_user must be >= 1");
    if (j.contains("svm"))
        e.svm = svm_from_json(j.at("svm"), e.svm);
    return e;
}

json config_to_json(const Config& c) {
    return {{"seed", c.seed},
            {"scenario", scenario_config_to_json(c.scenario)},
            {"experiment", experiment_to_json(c.experiment)}};
}

Config config_from_json(const json& j) {
    Config c;
    c.seed = j.value("seed", c.seed);
    if (j.contains("scenario"))
        c.scenario = scenario_config_from_json(j.at("scenario"), c.scenario);
    if (j.contains("experiment"))
        c.experiment = experiment_from_json(j.at("experiment"), c.experiment);
    return c;
}

json station_to_json(const Station& s) {
    return {{"id", s.id},
            {"kind", s.kind == StationKind::macro_cell ? "macro" : "wifi"},
            {"x", s.position.x},
            {"y", s.position.y},
            {"tx_power_dbm", s.tx_power_dbm},
            {"carrier_freq_mhz", s.carrier_freq_mhz},
            {"antenna_height_m", s.antenna_height_m},
            {"total_bandwidth_mhz", s.total_bandwidth_mhz},
            {"alloc_gain", s.alloc_gain},
            {"coverage_radius_m", s.coverage_radius_m},
            {"pricing", pricing_to_json(s.pricing)},
            {"cost", cost_to_json(s.cost)}};
}

Station station_from_json(const json& j) {
    Station s;
    s.id = j.at("id").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "macro")
        s.kind = StationKind::macro_cell;
    else if (kind == "wifi")
        s.kind = StationKind::wifi;
    else
        config_fail("station.kind must be macro or wifi");
    s.position = {j.at("x").get<double>(), j.at("y").get<double>()};
    s.tx_power_dbm = j.at("tx_power_dbm").get<double>();
    s.carrier_freq_mhz = j.at("carrier_freq_mhz").get<double>();
    s.antenna_height_m = j.at("antenna_height_m").get<double>();
    s.total_bandwidth_mhz = j.at("total_bandwidth_mhz").get<double>();
    s.alloc_gain = j.at("alloc_gain").get<double>();
    s.coverage_radius_m = j.at("coverage_radius_m").get<double>();
    s.pricing = pricing_from_json(j.at("pricing"));
    s.cost = cost_from_json(j.at("cost"));
    return s;
}

json user_to_json(const UserNode& u) {
    return {{"id", u.id},
            {"x", u.position.x},
            {"y", u.position.y},
            {"active", u.active},
            {"min_rate_mbps", u.min_rate_mbps},
            {"benefit_scale", u.benefit_scale},
            {"benefit_curvature", u.benefit_curvature},
            {"antenna_height_m", u.antenna_height_m}};
}

UserNode user_from_json(const json& j) {
    UserNode u;
    u.id = j.at("id").get<int>();
    u.position = {j.at("x").get<double>(), j.at("y").get<double>()};
    u.active = j.at("active").get<bool>();
    u.min_rate_mbps = j.at("min_rate_mbps").get<double>();
    u.benefit_scale = j.at("benefit_scale").get<double>();
    u.benefit_curvature = j.at("benefit_curvature").get<double>();
    u.antenna_height_m = j.at("antenna_height_m").get<double>();
    return u;
}

// ------------------------------------------------------- scenario build

double resolved_tx_power_dbm(const StationClassConfig& cls, double radius_m,
                             double user_height_m, const PhysicsConfig& physics) {
    if (!std::isnan(cls.tx_power_dbm))
        return cls.tx_power_dbm;
    // "auto": the mean SNR at the nominal coverage radius equals the SINR
    // threshold, so the coverage disc is exactly the nominal footprint.
    const double edge_loss = radio::hata_path_loss(cls.carrier_freq_mhz, cls.antenna_height_m,
                                                   user_height_m, radius_m / 1000.0);
    return physics.sinr_threshold_db + edge_loss + physics.noise_dbm;
}

std::vector<UserNode> draw_users(std::uint64_t master_seed, const ScenarioConfig& cfg,
                                 std::size_t count) {
    auto engine = make_engine(mix_seed({master_seed, kUsersTag, count}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<UserNode> users(count);
    for (std::size_t i = 0; i < count; ++i) {
        UserNode& u = users[i];
        const double r = cfg.macro_radius_m * std::sqrt(unit(engine));
        const double phi = 2.0 * std::numbers::pi * unit(engine);
        const double a = unit(engine);
        u.id = static_cast<int>(i);
        u.position = {r * std::cos(phi), r * std::sin(phi)};
        u.active = a < cfg.user.activity_probability;
        u.min_rate_mbps = cfg.user.min_rate_mbps;
        u.benefit_scale = cfg.user.benefit_scale;
        u.benefit_curvature = cfg.user.benefit_curvature;
        u.antenna_height_m = cfg.user.antenna_height_m;
    }
    return users;
}

// Per-load-point view: link budgets, coverage and per-user bandwidth caps.
struct LoadContext {
    const Scenario* scenario = nullptr;
    std::vector<UserNode> users;
    std::vector<std::vector<LinkBudget>> links; // [station][user]
    std::vector<double> budgets;                // per-user bandwidth cap, 0 = no demand
};

LoadContext build_load_context(const Scenario& scenario, std::vector<UserNode> users) {
    LoadContext ctx;
    ctx.scenario = &scenario;
    ctx.users = std::move(users);
    const PhysicsConfig& ph = scenario.config.scenario.physics;
    const double noise = db_to_linear(ph.noise_dbm);
    ctx.links.resize(scenario.stations.size());
    ctx.budgets.assign(scenario.stations.size(), 0.0);
    for (std::size_t si = 0; si < scenario.stations.size(); ++si) {
        const Station& st = scenario.stations[si];
        auto& row = ctx.links[si];
        row.reserve(ctx.users.size());
        std::vector<std::pair<bool, bool>> demand;
        demand.reserve(ctx.users.size());
        for (const UserNode& u : ctx.users) {
            row.push_back(radio::link_budget(st, u, noise, ph.sinr_threshold_db));
            demand.emplace_back(u.active, row.back().covered);
        }
        try {
            ctx.budgets[si] = radio::bw_per_user(st, demand);
        } catch (const error&) {
            ctx.budgets[si] = 0.0; // nobody to serve: the station stays quiet
        }
    }
    return ctx;
}

std::vector<market::SpContext> contexts_for_user(const LoadContext& ctx, std::size_t ui) {
    std::vector<market::SpContext> out;
    const UserNode& user = ctx.users[ui];
    if (!user.active)
        return out;
    for (std::size_t si = 0; si < ctx.scenario->stations.size(); ++si) {
        const Station& st = ctx.scenario->stations[si];
        const LinkBudget& link = ctx.links[si][ui];
        if (!link.covered || ctx.budgets[si] <= 0.0)
            continue;
        market::SpContext sp;
        sp.sp_id = st.id;
        sp.kind = st.kind;
        sp.mean_snr = link.mean_snr;
        sp.bw_max_mhz = ctx.budgets[si];
        sp.max_rate_mbps = radio::max_rate(ctx.budgets[si], link, user.active, link.covered);
        sp.pricing = st.pricing;
        sp.cost = st.cost;
        out.push_back(sp);
    }
    return out;
}

market::BidFn eut_bid_fn(const UserNode& user, int rate_grid_size) {
    return [&user, rate_grid_size](const market::SpContext& sp) -> std::optional<Bid> {
        guarantee::RayleighGuarantee model(sp.mean_snr);
        const auto br = market::solve_sp_best_response(model, sp.pricing, sp.cost, sp.bw_max_mhz,
                                                       sp.max_rate_mbps, user.min_rate_mbps,
                                                       rate_grid_size);
        if (!br)
            return std::nullopt;
        return market::make_bid(sp.sp_id, sp.kind, br->rate_mbps, br->bandwidth_mhz, sp.pricing,
                                model);
    };
}

} // namespace

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::eut:
        return "eut";
    case Mode::pt_deviation:
        return "pt_deviation";
    case Mode::dpob:
        return "dpob";
    }
    return "eut";
}

Mode mode_from_string(const std::string& name) {
    if (name == "eut")
        return Mode::eut;
    if (name == "pt_deviation")
        return Mode::pt_deviation;
    if (name == "dpob")
        return Mode::dpob;
    config_fail("unknown mode '" + name + "' (expected eut, pt_deviation or dpob)");
}

Config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        config_fail(std::string("configuration is not valid JSON: ") + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const json::exception& e) {
        config_fail(std::string("configuration field error: ") + e.what());
    }
}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        config_fail("cannot open configuration file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string default_config_json() { return config_to_json(Config{}).dump(2) + "\n"; }

Scenario generate_scenario(const Config& config, std::optional<std::uint64_t> seed_override) {
    Scenario scenario;
    scenario.config = config;
    scenario.seed = seed_override.value_or(config.seed);
    scenario.config.seed = scenario.seed;
    const ScenarioConfig& sc = config.scenario;

    Station macro;
    macro.id = 0;
    macro.kind = StationKind::macro_cell;
    macro.position = {0.0, 0.0};
    macro.carrier_freq_mhz = sc.macro_cell.carrier_freq_mhz;
    macro.antenna_height_m = sc.macro_cell.antenna_height_m;
    macro.total_bandwidth_mhz = sc.macro_cell.total_bandwidth_mhz;
    macro.alloc_gain = sc.macro_cell.alloc_gain;
    macro.coverage_radius_m = sc.macro_radius_m;
    macro.tx_power_dbm = resolved_tx_power_dbm(sc.macro_cell, sc.macro_radius_m,
                                               sc.user.antenna_height_m, sc.physics);
    macro.pricing = sc.macro_cell.pricing;
    macro.cost = sc.macro_cell.cost;
    scenario.stations.push_back(macro);

    const double ring = sc.wifi_ring_fraction * sc.macro_radius_m;
    for (std::size_t k = 0; k < sc.wifi_count; ++k) {
        Station wifi;
        wifi.id = static_cast<int>(k + 1);
        wifi.kind = StationKind::wifi;
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(sc.wifi_count);
        wifi.position = {ring * std::cos(phi), ring * std::sin(phi)};
        wifi.carrier_freq_mhz = sc.wifi.carrier_freq_mhz;
        wifi.antenna_height_m = sc.wifi.antenna_height_m;
        wifi.total_bandwidth_mhz = sc.wifi.total_bandwidth_mhz;
        wifi.alloc_gain = sc.wifi.alloc_gain;
        wifi.coverage_radius_m = sc.wifi_radius_m;
        wifi.tx_power_dbm = resolved_tx_power_dbm(sc.wifi, sc.wifi_radius_m,
                                                  sc.user.antenna_height_m, sc.physics);
        wifi.pricing = sc.wifi.pricing;
        wifi.cost = sc.wifi.cost;
        scenario.stations.push_back(wifi);
    }

    scenario.users = draw_users(scenario.seed, sc, sc.users);
    return scenario;
}

std::string scenario_to_json(const Scenario& scenario) {
    json stations = json::array();
    for (const Station& s : scenario.stations)
        stations.push_back(station_to_json(s));
    json users = json::array();
    for (const UserNode& u : scenario.users)
        users.push_back(user_to_json(u));
    const json j{{"format", "hetnetbid-scenario-v1"},
                 {"seed", scenario.seed},
                 {"config", config_to_json(scenario.config)},
                 {"stations", stations},
                 {"users", users}};
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        config_fail(std::string("scenario is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != "hetnetbid-scenario-v1")
            config_fail("scenario file format marker missing or unsupported");
        Scenario s;
        s.seed = j.at("seed").get<std::uint64_t>();
        s.config = config_from_json(j.at("config"));
        for (const json& st : j.at("stations"))
            s.stations.push_back(station_from_json(st));
        for (const json& u : j.at("users"))
            s.users.push_back(user_from_json(u));
        if (s.stations.empty() || s.stations.front().kind != StationKind::macro_cell)
            config_fail("scenario must start with the macro station");
        return s;
    } catch (const json::exception& e) {
        config_fail(std::string("scenario field error: ") + e.what());
    }
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw error(errc::io, "save_scenario: cannot open " + path);
    out << scenario_to_json(scenario);
    if (!out)
        throw error(errc::io, "save_scenario: write failed for " + path);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io, "load_scenario: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

std::vector<UserNode> users_for_load(const Scenario& scenario, int load) {
    if (load < 0)
        throw error(errc::invalid_parameter, "users_for_load: load must be nonnegative");
    return draw_users(scenario.seed, scenario.config.scenario,
                      static_cast<std::size_t>(load));
}

std::vector<std::pair<Bid, bool>> bootstrap_history(const Scenario& scenario, double prelec_alpha,
                                                    int bids_per_user, std::uint64_t seed) {
    if (bids_per_user < 1)
        throw error(errc::invalid_parameter, "bootstrap_history: bids_per_user must be >= 1");
    const WeightingFn weighting = make_weighting(prelec_alpha);
    const GridConfig& grid_cfg = scenario.config.experiment.grid;

    LoadContext ctx = build_load_context(scenario, scenario.users);
    std::vector<std::pair<Bid, bool>> history;
    history.reserve(ctx.users.size() * static_cast<std::size_t>(bids_per_user));

    for (std::size_t ui = 0; ui < ctx.users.size(); ++ui) {
        const UserNode& user = ctx.users[ui];
        auto sps = contexts_for_user(ctx, ui);
        // Only stations whose budget admits rates beyond b_min span a bid grid.
        std::erase_if(sps, [&](const market::SpContext& sp) {
            return !(sp.max_rate_mbps > user.min_rate_mbps) || !(sp.bw_max_mhz > 0.0);
        });
        if (sps.empty())
            continue;
        auto engine = make_engine(mix_seed({seed, kHistoryTag,
                                            static_cast<std::uint64_t>(user.id)}));
        std::uniform_int_distribution<std::size_t> pick_sp(0, sps.size() - 1);
        for (int k = 0; k < bids_per_user; ++k) {
            const market::SpContext& sp = sps[pick_sp(engine)];
            const auto grid = dpob::BidGrid::uniform(user.min_rate_mbps, sp.max_rate_mbps,
                                                     grid_cfg.rates, sp.bw_max_mhz,
                                                     grid_cfg.bandwidths);
            std::uniform_int_distribution<std::size_t> pick_state(0, grid.size() - 1);
            const std::size_t s = pick_state(engine);
            guarantee::RayleighGuarantee model(sp.mean_snr);
            const Bid bid = market::make_bid(sp.sp_id, sp.kind, grid.rate(s), grid.bandwidth(s),
                                             sp.pricing, model);
            const bool is_cellular = sp.kind == StationKind::macro_cell;
            const UserStrategy d = behavior::decide(
                user, is_cellular ? std::optional<Bid>(bid) : std::nullopt,
                is_cellular ? std::nullopt : std::optional<Bid>(bid), weighting);
            history.emplace_back(bid, d.cellular || d.wifi);
        }
    }
    return history;
}

learn::SvmModel train_from_bootstrap(const Scenario& scenario, double prelec_alpha,
                                     int bids_per_user, std::uint64_t seed,
                                     learn::TrainStats* stats) {
    const auto history = bootstrap_history(scenario, prelec_alpha, bids_per_user, seed);
    const auto samples = learn::collect_samples(history);
    return learn::train_svm(samples, scenario.config.experiment.svm, stats);
}

namespace {

MetricsRow run_cell(const Scenario& scenario, const ExperimentConfig& experiment, Mode mode,
                    int load, const learn::SvmModel* model) {
    LoadContext ctx = build_load_context(scenario, users_for_load(scenario, load));
    const WeightingFn weighting =
        mode == Mode::eut ? WeightingFn::identity() : WeightingFn::prelec(experiment.prelec_alpha);

    MetricsRow row;
    row.load = load;
    row.mode = mode;
    row.prelec_alpha = mode == Mode::eut ? 1.0 : experiment.prelec_alpha;
    row.seed = scenario.seed;

    std::size_t offered = 0, accepted = 0;
    double dpob_iterations = 0.0;
    std::size_t dpob_runs = 0;

    for (std::size_t ui = 0; ui < ctx.users.size(); ++ui) {
        const UserNode& user = ctx.users[ui];
        const auto sps = contexts_for_user(ctx, ui);

        market::BidFn bid_fn;
        if (mode == Mode::dpob) {
            bid_fn = [&](const market::SpContext& sp) -> std::optional<Bid> {
                if (!(sp.max_rate_mbps > user.min_rate_mbps) || !(sp.bw_max_mhz > 0.0))
                    return std::nullopt;
                const auto grid = dpob::BidGrid::uniform(user.min_rate_mbps, sp.max_rate_mbps,
                                                         experiment.grid.rates, sp.bw_max_mhz,
                                                         experiment.grid.bandwidths);
                guarantee::RayleighGuarantee g(sp.mean_snr);
                // Algorithm start: the previous (EUT) bid snapped to the grid.
                std::size_t initial = 0;
                if (const auto br = market::solve_sp_best_response(
                        g, sp.pricing, sp.cost, sp.bw_max_mhz, sp.max_rate_mbps,
                        user.min_rate_mbps, experiment.rate_grid_size))
                    initial = grid.nearest_state(br->rate_mbps, br->bandwidth_mhz);
                dpob::Classifier classifier = [model](double b, double p, double bw) {
                    return learn::classify(*model, {b, p, bw}).accepted;
                };
                dpob::DpobConfig dc;
                dc.seed = mix_seed({scenario.seed, kDpobTag, mode_tag(mode),
                                    static_cast<std::uint64_t>(load),
                                    static_cast<std::uint64_t>(user.id),
                                    static_cast<std::uint64_t>(sp.sp_id)});
                const auto res = dpob::run(grid, initial, classifier, sp.pricing, sp.cost, dc);
                dpob_iterations += static_cast<double>(res.iterations);
                ++dpob_runs;
                if (!res.has_best)
                    return std::nullopt; // no predicted-accepted profitable bid
                return market::make_bid(sp.sp_id, sp.kind, res.best.rate_mbps,
                                        res.best.bandwidth_mhz, sp.pricing, g);
            };
        } else {
            bid_fn = eut_bid_fn(user, experiment.rate_grid_size);
        }

        const auto outcome = market::stackelberg_round(user, sps, weighting, bid_fn);
        for (const auto& [sp_id, utility] : outcome.sp_utilities)
            row.sum_sp_utility += utility;
        row.sum_user_utility += outcome.user_utility;
        offered += (outcome.cellular_bid ? 1 : 0) + (outcome.wifi_bid ? 1 : 0);
        accepted += (outcome.strategy.cellular ? 1 : 0) + (outcome.strategy.wifi ? 1 : 0);
        row.connected_users += outcome.feasible ? 1 : 0;
    }

    row.acceptance_rate =
        offered == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(offered);
    row.mean_dpob_iterations = dpob_runs == 0 ? 0.0 : dpob_iterations / static_cast<double>(dpob_runs);
    return row;
}

} // namespace

std::vector<MetricsRow> run_experiment(const Scenario& scenario, const ExperimentConfig& experiment,
                                       const learn::SvmModel* model) {
    if (experiment.modes.empty())
        config_fail("run_experiment: no modes configured");
    if (experiment.loads.empty())
        config_fail("run_experiment: no loads configured");

    const bool wants_dpob = std::find(experiment.modes.begin(), experiment.modes.end(),
                                      Mode::dpob) != experiment.modes.end();
    std::optional<learn::SvmModel> trained;
    if (wants_dpob && model == nullptr) {
        trained = train_from_bootstrap(scenario, experiment.prelec_alpha,
                                       experiment.bootstrap_bids_per_user,
                                       mix_seed({scenario.seed, kBootstrapTag}));
        model = &*trained;
    }

    std::vector<int> loads = experiment.loads;
    std::sort(loads.begin(), loads.end());

    std::vector<MetricsRow> rows;
    for (Mode mode : {Mode::eut, Mode::pt_deviation, Mode::dpob}) {
        if (std::find(experiment.modes.begin(), experiment.modes.end(), mode) ==
            experiment.modes.end())
            continue;
        for (int load : loads)
            rows.push_back(run_cell(scenario, experiment, mode, load,
                                    mode == Mode::dpob ? model : nullptr));
    }
    return rows;
}

std::string sweep_report(std::span<const MetricsRow> rows) {
    std::vector<MetricsRow> sorted(rows.begin(), rows.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](const MetricsRow& a, const MetricsRow& b) {
        if (a.mode != b.mode)
            return static_cast<int>(a.mode) < static_cast<int>(b.mode);
        return a.load < b.load;
    });
    std::string out = "load,mode,prelec_alpha,sum_sp_utility,sum_user_utility,acceptance_rate,"
                      "connected_users,mean_dpob_iterations,seed\n";
    for (const MetricsRow& r : sorted) {
        out += std::to_string(r.load) + ',' + to_string(r.mode) + ',' +
               format_double(r.prelec_alpha) + ',' + format_double(r.sum_sp_utility) + ',' +
               format_double(r.sum_user_utility) + ',' + format_double(r.acceptance_rate) + ',' +
               std::to_string(r.connected_users) + ',' + format_double(r.mean_dpob_iterations) +
               ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

std::vector<double> advertised_guarantees(const Scenario& scenario, int load,
                                          int rate_grid_size) {
    LoadContext ctx = build_load_context(scenario, users_for_load(scenario, load));
    std::vector<double> guarantees;
    const WeightingFn identity = WeightingFn::identity();
    for (std::size_t ui = 0; ui < ctx.users.size(); ++ui) {
        const auto sps = contexts_for_user(ctx, ui);
        const auto outcome = market::stackelberg_round(
            ctx.users[ui], sps, identity, eut_bid_fn(ctx.users[ui], rate_grid_size));
        if (outcome.cellular_bid)
            guarantees.push_back(outcome.cellular_bid->guarantee);
        if (outcome.wifi_bid)
            guarantees.push_back(outcome.wifi_bid->guarantee);
    }
    return guarantees;
}

std::string history_csv(std::span<const std::pair<Bid, bool>> history) {
    std::string out = "sp_id,sp_kind,rate_mbps,price,bandwidth_mhz,guarantee,accepted\n";
    for (const auto& [bid, accepted] : history) {
        out += std::to_string(bid.sp_id) + ',' +
               (bid.sp_kind == StationKind::macro_cell ? "macro" : "wifi") + ',' +
               format_double(bid.rate_mbps) + ',' + format_double(bid.price) + ',' +
               format_double(bid.bandwidth_mhz) + ',' + format_double(bid.guarantee) + ',' +
               (accepted ? "1" : "0") + '\n';
    }
    return out;
}

} // namespace hetnetbid::sim
