// Acceptance suite: prints one pass/fail line per criterion and exits
// nonzero if any criterion fails. Expects an optimized build; several
// criteria carry wall-clock budgets.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "hetnetbid/behavior.hpp"
#include "hetnetbid/dpob.hpp"
#include "hetnetbid/guarantee.hpp"
#include "hetnetbid/learn.hpp"
#include "hetnetbid/market.hpp"
#include "hetnetbid/rng.hpp"
#include "hetnetbid/sim.hpp"

using namespace hetnetbid;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void fail(const std::string& msg) {
        ok = false;
        if (detail.empty())
            detail = msg;
    }
    void require(bool cond, const std::string& msg) {
        if (!cond)
            fail(msg);
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ------------------------------------------------------------------ C1

void prelec_properties(Check& c) {
    const double fixed = std::exp(-1.0);
    for (int a = 1; a <= 9; ++a) {
        const double alpha = a / 10.0;
        c.require(std::abs(behavior::prelec(fixed, alpha) - fixed) <= 1e-12,
                  "w(1/e) != 1/e at alpha " + std::to_string(alpha));
    }
    for (double alpha : {0.3, 0.5, 0.8}) {
        for (int i = 1; i <= 1000; ++i) {
            const double below = fixed * i / 1001.0;
            c.require(behavior::prelec(below, alpha) > below, "no overweighting below 1/e");
            const double above = fixed + (1.0 - fixed) * i / 1001.0;
            if (above < 1.0)
                c.require(behavior::prelec(above, alpha) < above, "no underweighting above 1/e");
        }
    }
}

// ------------------------------------------------------------------ C2

struct Max2Instance {
    double snr, b_min, b_max, bw_max;
    PricingParams pricing;
    CostParams cost;
};

void theorem1_tightness(Check& c) {
    auto engine = make_engine(20240811);
    std::uniform_real_distribution<double> usnr(0.5, 50.0), ubmin(0.5, 4.0), uf(1.5, 8.0),
        ubw(2.0, 50.0), ualpha(0.05, 1.5), ubeta(1.5, 3.0), ucost(0.0, 0.1);
    const int grid = 200;
    int solved = 0;
    int attempts = 0;
    while (solved < 100 && attempts < 2000) {
        ++attempts;
        const Max2Instance inst{usnr(engine),
                                ubmin(engine),
                                0.0,
                                ubw(engine),
                                {ualpha(engine), ubeta(engine)},
                                {ucost(engine), ucost(engine)}};
        const double b_min = inst.b_min;
        const double b_max = b_min * uf(engine);
        guarantee::RayleighGuarantee model(inst.snr);

        // 2-D brute force over the constrained bid box
        double best_u = -std::numeric_limits<double>::infinity();
        double best_b = 0, best_bw = 0;
        bool found = false;
        for (int i = 1; i <= grid; ++i) {
            const double b = b_min + (b_max - b_min) * i / grid;
            for (int j = 1; j <= grid; ++j) {
                const double bw = inst.bw_max * j / grid;
                if (b * model.tail(b, bw) < b_min)
                    continue;
                const double u = market::price(b, inst.pricing) -
                                 market::sp_cost(b, bw, inst.cost);
                if (!found || u > best_u) {
                    best_u = u;
                    best_b = b;
                    best_bw = bw;
                    found = true;
                }
            }
        }
        if (!found)
            continue; // infeasible draw, not one of the 100 instances
        ++solved;

        // |b F(b,BW) - b_min| within one grid step of zero: the bandwidth one
        // step below the maximizer must violate the rate constraint.
        const double bw_step = inst.bw_max / grid;
        if (best_bw - bw_step > 0.0)
            c.require(best_b * model.tail(best_b, best_bw - bw_step) < b_min,
                      "brute-force maximizer is not on the tight-constraint boundary");

        const auto got = market::solve_sp_best_response(model, inst.pricing, inst.cost,
                                                        inst.bw_max, b_max, b_min, grid);
        c.require(got.has_value(), "1-D solver found no bid on a feasible instance");
        if (!got)
            continue;
        const double b_step = (b_max - b_min) / grid;
        const double slack = market::price(best_b + b_step, inst.pricing) -
                             market::price(best_b, inst.pricing) +
                             inst.cost.per_mbps * b_step + inst.cost.per_mhz * bw_step;
        c.require(std::abs(got->utility - best_u) <= slack,
                  "1-D Theorem-1 solver disagrees with the 2-D brute force");
        c.require(std::abs(got->rate_mbps * model.tail(got->rate_mbps, got->bandwidth_mhz) -
                           b_min) <= 1e-6 * b_min,
                  "returned best response is not constraint-tight");
    }
    c.require(solved == 100, "could not generate 100 feasible Max2 instances");
}

// ------------------------------------------------------------------ C3

void guarantee_round_trip(Check& c) {
    auto engine = make_engine(333);
    std::uniform_real_distribution<double> usnr(0.05, 50.0), ub(0.1, 100.0), uf(1.01, 50.0);
    for (int i = 0; i < 10000; ++i) {
        const double snr = usnr(engine), b_min = ub(engine), b = b_min * uf(engine);
        guarantee::RayleighGuarantee model(snr);
        const double bw = guarantee::min_bw_for_rate_constraint(model, b, b_min);
        c.require(std::abs(b * model.tail(b, bw) - b_min) <= 1e-9 * b_min,
                  "round trip error above 1e-9 relative");
    }
}

// ------------------------------------------------------------------ C4

struct DpobInstance {
    dpob::BidGrid grid{{1.0}, {1.0}};
    dpob::Classifier classifier;
    PricingParams pricing;
    CostParams cost;
};

// Monotone-consistent staircase classifier; reward increasing in rate
// inside the accept region (the paper's assumption on SP utilities), and
// the instance is never all-accept with a negative optimum.
DpobInstance random_dpob_instance(std::uint64_t seed, std::size_t max_side, Check& c) {
    auto engine = make_engine(seed);
    std::uniform_int_distribution<std::size_t> uside(1, max_side);
    std::uniform_real_distribution<double> uval(0.2, 30.0), ualpha(0.2, 2.0), ubeta(1.1, 3.0),
        ufrac(0.0, 0.9);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const std::size_t m = uside(engine), n = uside(engine);
        const double b_hi = uval(engine) + 1.0, bw_hi = uval(engine) + 1.0;
        dpob::BidGrid grid = dpob::BidGrid::uniform(b_hi * 0.05, b_hi, m, bw_hi, n);

        std::vector<std::size_t> steps(m);
        std::uniform_int_distribution<std::size_t> ustep(0, n);
        for (auto& s : steps)
            s = ustep(engine);
        std::sort(steps.begin(), steps.end());
        std::vector<double> min_bw(m);
        for (std::size_t i = 0; i < m; ++i)
            min_bw[i] = steps[i] >= n ? std::numeric_limits<double>::infinity()
                                      : grid.bandwidths_mhz[steps[i]];
        const std::vector<double> rates = grid.rates_mbps;
        dpob::Classifier classifier = [rates, min_bw](double rate, double, double bw) {
            const auto it = std::lower_bound(rates.begin(), rates.end(), rate - 1e-12);
            const std::size_t idx =
                std::min(static_cast<std::size_t>(it - rates.begin()), rates.size() - 1);
            return bw >= min_bw[idx];
        };
        const PricingParams pricing{ualpha(engine), ubeta(engine)};
        const double slope =
            pricing.alpha * pricing.beta * std::pow(grid.rates_mbps.front(), pricing.beta - 1.0);
        const CostParams cost{ufrac(engine) * slope, ufrac(engine) * 0.1};
        const auto [state, utility] = dpob::brute_force_best_bid(grid, classifier, pricing, cost);
        if (utility >= 0.0)
            return {std::move(grid), std::move(classifier), pricing, cost};
    }
    c.fail("no viable DPOB instance after 100 attempts");
    return {};
}

void dpob_oracle_equivalence(Check& c) {
    int matches = 0;
    const int trials = 120;
    for (int t = 0; t < trials && c.ok; ++t) {
        const DpobInstance inst = random_dpob_instance(mix_seed({4242, (std::uint64_t)t}), 32, c);
        if (!c.ok)
            break;
        const auto [bstate, butil] =
            dpob::brute_force_best_bid(inst.grid, inst.classifier, inst.pricing, inst.cost);
        dpob::DpobConfig cfg;
        cfg.seed = mix_seed({17, (std::uint64_t)t});
        const auto res = dpob::run(inst.grid, 0, inst.classifier, inst.pricing, inst.cost, cfg);
        if (res.utility == butil)
            ++matches;
        else
            c.fail("trial " + std::to_string(t) + ": dpob " + std::to_string(res.utility) +
                   " != brute force " + std::to_string(butil));
    }
    c.require(matches == trials, "oracle equivalence below 100%");
    c.detail = c.ok ? std::to_string(matches) + "/" + std::to_string(trials) + " exact matches"
                    : c.detail;
}

// ------------------------------------------------------------------ C5

void theorem2_rate(Check& c) {
    const std::vector<std::size_t> sizes{64, 256, 1024, 4096};
    const auto rows = dpob::measure_convergence(sizes, 100, 97531);
    const double log43 = std::log(4.0 / 3.0);
    std::string summary;
    for (const auto& row : rows) {
        const double bound = 3.0 * std::log(static_cast<double>(row.state_count)) / log43;
        summary += "|S|=" + std::to_string(row.state_count) + " mean=" +
                   std::to_string(row.mean_iterations) + " bound=" + std::to_string(bound) + "; ";
        c.require(row.mean_iterations <= bound,
                  "mean iterations exceed 3*log_{4/3}|S| at |S|=" +
                      std::to_string(row.state_count));
    }
    c.require(rows.front().mean_iterations > 0.0, "degenerate measurement");
    c.require(rows[0].mean_iterations <= 43.0, "mean at |S|=64 above 43");
    c.require(rows[3].mean_iterations <= 87.0, "mean at |S|=4096 above 87");
    const double ratio = rows[3].mean_iterations / rows[0].mean_iterations;
    c.require(ratio < 8.0, "growth ratio mean(4096)/mean(64) not sublinear: " +
                               std::to_string(ratio));
    if (c.ok)
        c.detail = summary + "ratio=" + std::to_string(ratio);
}

// ------------------------------------------------------------------ C6

void svm_criteria(Check& c) {
    // (a) separable synthetic sets: perfect training accuracy
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto engine = make_engine(mix_seed({555, seed}));
        std::uniform_real_distribution<double> ux(-5.0, 5.0);
        std::vector<learn::Sample> data;
        while (data.size() < 200) {
            const std::array<double, 3> x{ux(engine), ux(engine), ux(engine)};
            const double v = 0.9 * x[0] - 0.4 * x[1] + 1.2 * x[2] - 0.2;
            if (std::abs(v) < 0.4)
                continue;
            data.push_back({x, v > 0 ? +1 : -1});
        }
        learn::SvmConfig cfg;
        cfg.C = 10.0;
        cfg.seed = seed;
        const auto model = learn::train_svm(data, cfg);
        c.require(learn::training_accuracy(model, data) == 1.0,
                  "separable set not perfectly fit at seed " + std::to_string(seed));
    }

    // (b) held-out accuracy on PT decisions from 500 bootstrap samples
    double worst = 1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        sim::Config cfg;
        const sim::Scenario scenario = sim::generate_scenario(cfg, mix_seed({777, seed}));
        const double alpha = cfg.experiment.prelec_alpha;

        auto train_hist = sim::bootstrap_history(scenario, alpha, 7, mix_seed({1, seed}));
        auto train_samples = learn::collect_samples(train_hist);
        if (train_samples.size() > 500)
            train_samples.resize(500);
        c.require(train_samples.size() == 500, "bootstrap did not yield 500 samples");

        const auto test_hist = sim::bootstrap_history(scenario, alpha, 14, mix_seed({2, seed}));
        const auto test_samples = learn::collect_samples(test_hist);

        const auto model = learn::train_svm(train_samples, cfg.experiment.svm);
        std::size_t correct = 0;
        for (const auto& s : test_samples)
            correct += learn::classify(model, s.x).accepted == (s.y > 0) ? 1 : 0;
        const double accuracy =
            static_cast<double>(correct) / static_cast<double>(test_samples.size());
        worst = std::min(worst, accuracy);
        c.require(accuracy >= 0.90, "held-out accuracy " + std::to_string(accuracy) +
                                        " below 0.90 at seed " + std::to_string(seed));
    }
    if (c.ok)
        c.detail = "worst held-out accuracy " + std::to_string(worst);
}

// ------------------------------------------------------------- C7 + C8

struct SweepStats {
    // [load index] means over seeds
    std::vector<double> eut_sp, pt_sp, dpob_sp;
    std::vector<double> eut_user, pt_user, dpob_user;
    std::vector<double> median_guarantee;
    std::vector<int> loads;
    double pt05_sp_total = 0.0, pt05_user_total = 0.0; // for criterion 8
    double first_sweep_seconds = 0.0;
};

SweepStats run_paired_sweeps(int n_seeds) {
    sim::Config cfg; // the shipped defaults
    SweepStats st;
    st.loads = cfg.experiment.loads;
    const std::size_t L = st.loads.size();
    st.eut_sp.assign(L, 0.0);
    st.pt_sp.assign(L, 0.0);
    st.dpob_sp.assign(L, 0.0);
    st.eut_user.assign(L, 0.0);
    st.pt_user.assign(L, 0.0);
    st.dpob_user.assign(L, 0.0);
    st.median_guarantee.assign(L, 0.0);

    sim::ExperimentConfig pt05 = cfg.experiment;
    pt05.modes = {sim::Mode::pt_deviation};
    pt05.prelec_alpha = 0.5;

    for (int s = 0; s < n_seeds; ++s) {
        const sim::Scenario scenario = sim::generate_scenario(cfg, mix_seed({31337, (std::uint64_t)s}));

        const auto t0 = std::chrono::steady_clock::now();
        const auto rows = sim::run_experiment(scenario, cfg.experiment);
        if (s == 0)
            st.first_sweep_seconds = seconds_since(t0);

        for (const auto& row : rows) {
            const auto it = std::find(st.loads.begin(), st.loads.end(), row.load);
            const std::size_t li = static_cast<std::size_t>(it - st.loads.begin());
            switch (row.mode) {
            case sim::Mode::eut:
                st.eut_sp[li] += row.sum_sp_utility / n_seeds;
                st.eut_user[li] += row.sum_user_utility / n_seeds;
                break;
            case sim::Mode::pt_deviation:
                st.pt_sp[li] += row.sum_sp_utility / n_seeds;
                st.pt_user[li] += row.sum_user_utility / n_seeds;
                break;
            case sim::Mode::dpob:
                st.dpob_sp[li] += row.sum_sp_utility / n_seeds;
                st.dpob_user[li] += row.sum_user_utility / n_seeds;
                break;
            }
        }

        for (std::size_t li = 0; li < L; ++li) {
            auto gs = sim::advertised_guarantees(scenario, st.loads[li],
                                                 cfg.experiment.rate_grid_size);
            double median = 0.0;
            if (!gs.empty()) {
                std::sort(gs.begin(), gs.end());
                median = gs[gs.size() / 2];
            }
            st.median_guarantee[li] += median / n_seeds;
        }

        const auto rows05 = sim::run_experiment(scenario, pt05);
        for (const auto& row : rows05) {
            st.pt05_sp_total += row.sum_sp_utility / n_seeds;
            st.pt05_user_total += row.sum_user_utility / n_seeds;
        }
    }
    return st;
}

void directional_reproduction(Check& c, const SweepStats& st) {
    c.require(st.first_sweep_seconds < 300.0, "full sweep exceeded 5 minutes");

    const double inv_e = std::exp(-1.0);
    int regime_loads = 0;
    for (std::size_t li = 0; li < st.loads.size(); ++li) {
        if (st.median_guarantee[li] > inv_e) {
            ++regime_loads;
            c.require(st.eut_sp[li] >= st.pt_sp[li],
                      "eut < pt_deviation SP sum in the underweighting regime at U=" +
                          std::to_string(st.loads[li]));
        }
        c.require(st.dpob_sp[li] >= st.pt_sp[li],
                  "dpob < pt_deviation SP sum at U=" + std::to_string(st.loads[li]));
        c.require(st.dpob_user[li] >= st.pt_user[li],
                  "dpob < pt_deviation user sum at U=" + std::to_string(st.loads[li]));
    }
    c.require(regime_loads > 0, "no load with median advertised guarantee above 1/e");

    const double eut_avg = std::accumulate(st.eut_sp.begin(), st.eut_sp.end(), 0.0);
    const double dpob_avg = std::accumulate(st.dpob_sp.begin(), st.dpob_sp.end(), 0.0);
    c.require(dpob_avg >= eut_avg, "dpob below eut on sweep-average SP sum");

    const double eut_user_avg = std::accumulate(st.eut_user.begin(), st.eut_user.end(), 0.0);
    const double dpob_user_avg = std::accumulate(st.dpob_user.begin(), st.dpob_user.end(), 0.0);
    const double sp_ratio = eut_avg > 0.0 ? dpob_avg / eut_avg : 0.0;
    const double user_ratio = eut_user_avg > 0.0 ? dpob_user_avg / eut_user_avg : 0.0;
    if (c.ok)
        c.detail = "regime loads: " + std::to_string(regime_loads) +
                   "; measured dpob/eut SP-sum ratio " + std::to_string(sp_ratio) +
                   " (paper reports 3.27), user-sum ratio " + std::to_string(user_ratio) +
                   " (paper reports 1.65); first sweep " +
                   std::to_string(st.first_sweep_seconds) + " s";
}

// A sharper Prelec deviation must widen the eut-minus-pt gap in realized
// user utility. The SP-side revenue gap cannot carry this direction here:
// with exactly constraint-tight best responses (criterion 2), w(g) < g for
// every alpha rejects tight above-1/e bids identically, so the only
// alpha-sensitive SP-revenue channel is overweighted acceptance of
// below-1/e bids, which raises pt revenue as alpha falls. The SP gaps are
// therefore reported but not gated.
void pwe_intensity(Check& c, const SweepStats& st) {
    const double eut_sp = std::accumulate(st.eut_sp.begin(), st.eut_sp.end(), 0.0);
    const double eut_user = std::accumulate(st.eut_user.begin(), st.eut_user.end(), 0.0);
    const double pt08_sp = std::accumulate(st.pt_sp.begin(), st.pt_sp.end(), 0.0);
    const double pt08_user = std::accumulate(st.pt_user.begin(), st.pt_user.end(), 0.0);

    const double gap08_sp = eut_sp - pt08_sp;
    const double gap05_sp = eut_sp - st.pt05_sp_total;
    const double gap08_user = eut_user - pt08_user;
    const double gap05_user = eut_user - st.pt05_user_total;

    const double slack_user = 1e-9 * std::max(1.0, std::abs(gap08_user));
    c.require(gap05_user >= gap08_user - slack_user,
              "user-sum eut-pt gap smaller at alpha 0.5 than at 0.8: " +
                  std::to_string(gap05_user) + " < " + std::to_string(gap08_user));
    if (c.ok)
        c.detail = "user gap " + std::to_string(gap08_user) + " (alpha 0.8) -> " +
                   std::to_string(gap05_user) + " (alpha 0.5); ungated SP gap " +
                   std::to_string(gap08_sp) + " -> " + std::to_string(gap05_sp);
}

// ------------------------------------------------------------------ C9

void determinism(Check& c) {
    sim::Config cfg;
    const sim::Scenario scenario = sim::generate_scenario(cfg, 424242);
    const auto r1 = sim::run_experiment(scenario, cfg.experiment);
    const auto r2 = sim::run_experiment(scenario, cfg.experiment);
    c.require(sim::sweep_report(r1) == sim::sweep_report(r2),
              "two identically seeded sweeps differ");
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<void(Check&)> body;
};

} // namespace

int main() {
    SweepStats stats; // shared by criteria 7 and 8
    bool stats_ready = false;
    auto ensure_stats = [&] {
        if (!stats_ready) {
            stats = run_paired_sweeps(20);
            stats_ready = true;
        }
    };

    const std::vector<Criterion> criteria{
        {1, "Prelec weighting properties", 1.0, prelec_properties},
        {2, "Theorem-1 tightness of SP best responses", 30.0, theorem1_tightness},
        {3, "guarantee bandwidth round-trip", 1.0, guarantee_round_trip},
        {4, "DPOB equals the brute-force oracle", 10.0, dpob_oracle_equivalence},
        {5, "Theorem-2 logarithmic convergence rate", 60.0, theorem2_rate},
        {6, "SVM training and held-out accuracy", 30.0, svm_criteria},
        {7, "directional reproduction of the load sweeps", 300.0,
         [&](Check& c) {
             ensure_stats();
             directional_reproduction(c, stats);
         }},
        {8, "stronger PWE at alpha 0.5", 300.0,
         [&](Check& c) {
             ensure_stats();
             pwe_intensity(c, stats);
         }},
        {9, "byte-identical sweeps under a fixed master seed", 300.0, determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Check check;
        try {
            criterion.body(check);
        } catch (const std::exception& e) {
            check.fail(std::string("exception: ") + e.what());
        }
        double elapsed = seconds_since(start);
        // criteria 7/8 share one batch; bill its cost to the first consumer
        if (elapsed > criterion.budget_seconds)
            check.fail("runtime " + std::to_string(elapsed) + " s over the " +
                       std::to_string(criterion.budget_seconds) + " s budget");
        std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n", check.ok ? "PASS" : "FAIL",
                    criterion.id, criterion.name, elapsed, check.detail.empty() ? "" : " -- ",
                    check.detail.c_str());
        failures += check.ok ? 0 : 1;
    }
    std::printf("%d/%zu acceptance criteria passed\n",
                static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
