// Exercises the public shared-library surface the way an external client
// (or the CLI) would: opaque handles, status codes, files on disk.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "hetnetbid.h"

namespace fs = std::filesystem;

namespace {

std::atomic<int> g_dir_counter{0};

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("hnb_capi_" + std::to_string(::getpid()) + "_" +
                std::to_string(g_dir_counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

const char* kSmallConfig = R"({
  // compact test scenario
  "seed": 4242,
  "scenario": {
    "users": 30,
    "wifi_count": 4,
    "physics": { "sinr_threshold_db": 6.0 },
    "macro": { "pricing": { "alpha": 0.08, "beta": 2.0 }, "cost": { "per_mbps": 0.02, "per_mhz": 0.05 } },
    "wifi":  { "carrier_freq_mhz": 2400.0, "antenna_height_m": 10.0, "total_bandwidth_mhz": 20.0,
               "pricing": { "alpha": 0.12, "beta": 2.0 }, "cost": { "per_mbps": 0.02, "per_mhz": 0.05 } }
  },
  "experiment": {
    "loads": [10, 20],
    "grid": { "rates": 8, "bandwidths": 8 },
    "rate_grid_size": 64,
    "bootstrap_bids_per_user": 10
  }
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

long line_count(const std::string& text) {
    long n = 0;
    for (char c : text)
        n += c == '\n';
    return n;
}

struct ScenarioFixture {
    TempDir dir;
    hnb_scenario* scenario = nullptr;
    ScenarioFixture() {
        const std::string cfg = dir.file("config.json");
        std::ofstream(cfg) << kSmallConfig;
        REQUIRE(hnb_scenario_from_config(cfg.c_str(), nullptr, &scenario) == HNB_OK);
    }
    ~ScenarioFixture() { hnb_scenario_free(scenario); }
};

} // namespace

TEST_CASE("version and error text are always available") {
    CHECK(hnb_version() != nullptr);
    CHECK(hnb_last_error() != nullptr);
}

TEST_CASE("null arguments are rejected with a message") {
    CHECK(hnb_scenario_from_config(nullptr, nullptr, nullptr) == HNB_ERROR);
    CHECK(std::string(hnb_last_error()).find("null") != std::string::npos);
    hnb_scenario* out = nullptr;
    CHECK(hnb_scenario_load(nullptr, &out) == HNB_ERROR);
    CHECK(hnb_model_load(nullptr, nullptr) == HNB_ERROR);
}

TEST_CASE("missing or broken config files are config errors") {
    hnb_scenario* s = nullptr;
    CHECK(hnb_scenario_from_config("/nonexistent/config.json", nullptr, &s) == HNB_ERROR_CONFIG);
    CHECK(std::string(hnb_last_error()).size() > 0);

    TempDir dir;
    const std::string bad = dir.file("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK(hnb_scenario_from_config(bad.c_str(), nullptr, &s) == HNB_ERROR_CONFIG);
}

TEST_CASE("scenario lifecycle: create, introspect, save, load") {
    ScenarioFixture fx;
    size_t users = 0, stations = 0;
    uint64_t seed = 0;
    CHECK(hnb_scenario_user_count(fx.scenario, &users) == HNB_OK);
    CHECK(hnb_scenario_station_count(fx.scenario, &stations) == HNB_OK);
    CHECK(hnb_scenario_seed(fx.scenario, &seed) == HNB_OK);
    CHECK(users == 30);
    CHECK(stations == 5);
    CHECK(seed == 4242);

    const std::string path = fx.dir.file("scenario.json");
    REQUIRE(hnb_scenario_save(fx.scenario, path.c_str()) == HNB_OK);
    hnb_scenario* loaded = nullptr;
    REQUIRE(hnb_scenario_load(path.c_str(), &loaded) == HNB_OK);
    size_t users2 = 0;
    CHECK(hnb_scenario_user_count(loaded, &users2) == HNB_OK);
    CHECK(users2 == users);
    hnb_scenario_free(loaded);

    // seed override at creation
    const std::string cfg = fx.dir.file("config.json");
    const uint64_t override_seed = 11;
    hnb_scenario* other = nullptr;
    REQUIRE(hnb_scenario_from_config(cfg.c_str(), &override_seed, &other) == HNB_OK);
    uint64_t got = 0;
    hnb_scenario_seed(other, &got);
    CHECK(got == 11);
    hnb_scenario_free(other);
}

TEST_CASE("bootstrap CSV is deterministic") {
    ScenarioFixture fx;
    const std::string p1 = fx.dir.file("h1.csv"), p2 = fx.dir.file("h2.csv");
    const uint64_t seed = 5;
    REQUIRE(hnb_bootstrap_csv(fx.scenario, 0.5, 10, &seed, p1.c_str()) == HNB_OK);
    REQUIRE(hnb_bootstrap_csv(fx.scenario, 0.5, 10, &seed, p2.c_str()) == HNB_OK);
    const std::string t1 = slurp(p1);
    CHECK(t1 == slurp(p2));
    CHECK(t1.starts_with("sp_id,sp_kind,rate_mbps,price,bandwidth_mhz,guarantee,accepted\n"));
    CHECK(line_count(t1) > 1);
}

TEST_CASE("train, save, load, and reuse a model") {
    ScenarioFixture fx;
    hnb_train_summary summary{};
    hnb_model* model = nullptr;
    REQUIRE(hnb_model_train(fx.scenario, std::nan(""), 0, nullptr, &summary, &model) == HNB_OK);
    CHECK(summary.samples > 0);
    CHECK(summary.accepted + summary.rejected == summary.samples);
    CHECK(summary.training_accuracy > 0.5);

    const std::string path = fx.dir.file("model.txt");
    REQUIRE(hnb_model_save(model, path.c_str()) == HNB_OK);
    hnb_model* loaded = nullptr;
    REQUIRE(hnb_model_load(path.c_str(), &loaded) == HNB_OK);

    // a sweep per mode set, exercising the loaded model
    const int loads[] = {10};
    const std::string out = fx.dir.file("sweep.csv");
    CHECK(hnb_sweep_csv(fx.scenario, "dpob", loads, 1, std::nan(""), 0, 0, loaded, nullptr,
                        out.c_str()) == HNB_OK);
    CHECK(line_count(slurp(out)) == 2); // header + one row

    hnb_model_free(loaded);
    hnb_model_free(model);
}

TEST_CASE("a garbled model file is a data error") {
    TempDir dir;
    const std::string path = dir.file("model.txt");
    std::ofstream(path) << "hetnetbid-svm v1\nw 1 2\n";
    hnb_model* model = nullptr;
    CHECK(hnb_model_load(path.c_str(), &model) == HNB_ERROR_DATA);
}

TEST_CASE("sweep honors overrides and validates dpob prerequisites") {
    ScenarioFixture fx;
    const std::string out = fx.dir.file("sweep.csv");

    // dpob without a model is a configuration error
    CHECK(hnb_sweep_csv(fx.scenario, "eut,dpob", nullptr, 0, std::nan(""), 0, 0, nullptr, nullptr,
                        out.c_str()) == HNB_ERROR_CONFIG);
    CHECK(std::string(hnb_last_error()).find("model") != std::string::npos);

    const int loads[] = {10, 20, 30};
    REQUIRE(hnb_sweep_csv(fx.scenario, "eut,pt_deviation", loads, 3, 0.6, 0, 0, nullptr, nullptr,
                          out.c_str()) == HNB_OK);
    const std::string text = slurp(out);
    CHECK(line_count(text) == 1 + 2 * 3);
    CHECK(text.find(",eut,") != std::string::npos);
    CHECK(text.find(",pt_deviation,") != std::string::npos);
    CHECK(text.find("0.6") != std::string::npos);

    CHECK(hnb_sweep_csv(fx.scenario, "bogus", loads, 3, std::nan(""), 0, 0, nullptr, nullptr,
                        out.c_str()) == HNB_ERROR_CONFIG);
}

TEST_CASE("simulate runs the configured experiment and reruns byte-identically") {
    ScenarioFixture fx;
    const std::string o1 = fx.dir.file("sim1.csv"), o2 = fx.dir.file("sim2.csv");
    REQUIRE(hnb_simulate_csv(fx.scenario, nullptr, nullptr, o1.c_str()) == HNB_OK);
    REQUIRE(hnb_simulate_csv(fx.scenario, nullptr, nullptr, o2.c_str()) == HNB_OK);
    const std::string t1 = slurp(o1);
    CHECK(t1 == slurp(o2));
    CHECK(line_count(t1) == 1 + 3 * 2); // configured: three modes, two loads
}

TEST_CASE("convergence CSV") {
    TempDir dir;
    const std::string out = dir.file("conv.csv");
    const size_t sizes[] = {16, 64};
    REQUIRE(hnb_convergence_csv(sizes, 2, 40, 7, out.c_str()) == HNB_OK);
    const std::string text = slurp(out);
    CHECK(text.starts_with("state_count,mean_iterations,max_iterations,trials\n"));
    CHECK(line_count(text) == 3);

    CHECK(hnb_convergence_csv(nullptr, 0, 40, 7, out.c_str()) == HNB_ERROR);
}

TEST_CASE("unwritable output paths are IO errors") {
    ScenarioFixture fx;
    CHECK(hnb_scenario_save(fx.scenario, "/nonexistent/dir/out.json") == HNB_ERROR_IO);
    const uint64_t seed = 1;
    CHECK(hnb_bootstrap_csv(fx.scenario, 0.5, 5, &seed, "/nonexistent/dir/h.csv") ==
          HNB_ERROR_IO);
}
