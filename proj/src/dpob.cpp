#include "hetnetbid/dpob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hetnetbid/csv.hpp"
#include "hetnetbid/errors.hpp"
#include "hetnetbid/market.hpp"
#include "hetnetbid/rng.hpp"

namespace hetnetbid::dpob {
namespace {

void check_axis(const std::vector<double>& values, const char* name) {
    if (values.empty())
        throw error(errc::invalid_parameter, std::string("BidGrid: empty ") + name + " axis");
    double prev = 0.0;
    for (double v : values) {
        if (!(v > prev))
            throw error(errc::invalid_parameter,
                        std::string("BidGrid: ") + name + " axis must be positive and strictly increasing");
        prev = v;
    }
}

std::size_t nearest_on_axis(const std::vector<double>& values, double x) {
    std::size_t best = 0;
    double best_d = std::abs(values[0] - x);
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = std::abs(values[i] - x);
        if (d < best_d) { // ties keep the lower index
            best = i;
            best_d = d;
        }
    }
    return best;
}

} // namespace

BidGrid BidGrid::make(std::vector<double> rates, std::vector<double> bandwidths) {
    check_axis(rates, "rate");
    check_axis(bandwidths, "bandwidth");
    return BidGrid{std::move(rates), std::move(bandwidths)};
}

BidGrid BidGrid::uniform(double min_rate_mbps, double max_rate_mbps, std::size_t m,
                         double max_bandwidth_mhz, std::size_t n) {
    if (m == 0 || n == 0)
        throw error(errc::invalid_parameter, "BidGrid::uniform: grid dimensions must be >= 1");
    if (!(max_rate_mbps > min_rate_mbps) || !(max_bandwidth_mhz > 0.0) || !(min_rate_mbps >= 0.0))
        throw error(errc::invalid_parameter, "BidGrid::uniform: empty value range");
    std::vector<double> rates(m), bandwidths(n);
    for (std::size_t i = 0; i < m; ++i)
        rates[i] = min_rate_mbps +
                   (max_rate_mbps - min_rate_mbps) * static_cast<double>(i + 1) / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j)
        bandwidths[j] = max_bandwidth_mhz * static_cast<double>(j + 1) / static_cast<double>(n);
    return make(std::move(rates), std::move(bandwidths));
}

std::size_t BidGrid::nearest_state(double rate_mbps, double bandwidth_mhz) const {
    // Axes are scored independently; the metric is separable, so the
    // span-normalized Euclidean minimum is the per-axis minimum.
    return index(nearest_on_axis(rates_mbps, rate_mbps),
                 nearest_on_axis(bandwidths_mhz, bandwidth_mhz));
}

double reward(const State& dest, const Classifier& classifier, const PricingParams& pricing,
              const CostParams& cost) {
    const double p = market::price(dest.rate_mbps, pricing);
    if (!classifier(dest.rate_mbps, p, dest.bandwidth_mhz))
        return 0.0;
    return p - market::sp_cost(dest.rate_mbps, dest.bandwidth_mhz, cost);
}

DpobResult run(const BidGrid& grid, std::size_t initial_state, const Classifier& classifier,
               const PricingParams& pricing, const CostParams& cost, const DpobConfig& config) {
    const std::size_t total = grid.size();
    if (total == 0)
        throw error(errc::invalid_parameter, "dpob: empty grid");
    if (initial_state >= total)
        throw error(errc::invalid_parameter, "dpob: initial state outside the grid");

    std::vector<std::size_t> actions(total);
    std::iota(actions.begin(), actions.end(), 0);
    auto engine = make_engine(mix_seed({config.seed, 0x64706f62ULL}));

    DpobResult result;
    while (!actions.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, actions.size() - 1);
        const std::size_t s = actions[pick(engine)];
        const double b = grid.rate(s);
        const double bw = grid.bandwidth(s);
        const double p = market::price(b, pricing);
        const bool accepted = classifier(b, p, bw);
        const double r = accepted ? p - market::sp_cost(b, bw, cost) : 0.0;
        ++result.iterations;

        // Only a predicted-accepted bid can displace the incumbent; the
        // (0,0) sentinel survives an all-reject classifier. Non-strict >=
        // lets later ties overwrite earlier ones.
        if (accepted && r >= result.utility) {
            result.utility = r;
            result.best = State{s, b, bw};
            result.has_best = true;
        }

        if (accepted) {
            // The SP will not trade down: drop lower-rate, higher-bandwidth bids.
            std::erase_if(actions, [&](std::size_t k) {
                return grid.rate(k) <= b && grid.bandwidth(k) >= bw;
            });
        } else {
            // The user will not trade up: drop higher-rate, lower-bandwidth bids.
            std::erase_if(actions, [&](std::size_t k) {
                return grid.rate(k) >= b && grid.bandwidth(k) <= bw;
            });
        }

        if (config.record_trace)
            result.trace.push_back({result.iterations, s, b, bw, r, accepted, actions.size()});
    }
    return result;
}

std::pair<State, double> brute_force_best_bid(const BidGrid& grid, const Classifier& classifier,
                                              const PricingParams& pricing,
                                              const CostParams& cost) {
    if (grid.size() == 0)
        throw error(errc::invalid_parameter, "brute_force_best_bid: empty grid");
    State best;
    double best_reward = -std::numeric_limits<double>::infinity();
    for (std::size_t ri = 0; ri < grid.rates_mbps.size(); ++ri) {
        for (std::size_t bi = 0; bi < grid.bandwidths_mhz.size(); ++bi) {
            const State s{grid.index(ri, bi), grid.rates_mbps[ri], grid.bandwidths_mhz[bi]};
            const double r = reward(s, classifier, pricing, cost);
            // Ties break toward larger rate, then larger bandwidth; the scan
            // order makes that the last equal-reward state.
            if (r >= best_reward) {
                best = s;
                best_reward = r;
            }
        }
    }
    return {best, best_reward};
}

std::string trace_csv(const DpobResult& result) {
    std::string out = "iteration,state_index,rate_mbps,bandwidth_mhz,reward,predicted_accept,"
                      "remaining_actions\n";
    for (const TraceRow& row : result.trace) {
        out += std::to_string(row.iteration) + ',' + std::to_string(row.state_index) + ',' +
               format_double(row.rate_mbps) + ',' + format_double(row.bandwidth_mhz) + ',' +
               format_double(row.reward) + ',' + (row.predicted_accept ? "1" : "0") + ',' +
               std::to_string(row.remaining_actions) + '\n';
    }
    return out;
}

std::vector<ConvergenceRow> measure_convergence(std::span<const std::size_t> state_counts,
                                                int trials, std::uint64_t seed) {
    if (trials < 1)
        throw error(errc::invalid_parameter, "measure_convergence: trials must be >= 1");

    std::vector<ConvergenceRow> rows;
    rows.reserve(state_counts.size());
    for (std::size_t target : state_counts) {
        if (target == 0)
            throw error(errc::invalid_parameter, "measure_convergence: state count must be >= 1");
        // Closest M x N factorization: largest divisor <= sqrt.
        std::size_t m = 1;
        for (std::size_t d = 1; d * d <= target; ++d)
            if (target % d == 0)
                m = d;
        const std::size_t n = target / m;
        const BidGrid grid = BidGrid::uniform(0.0, static_cast<double>(m), m,
                                              static_cast<double>(n), n);

        double total_iters = 0.0;
        std::size_t max_iters = 0;
        for (int t = 0; t < trials; ++t) {
            auto engine = make_engine(mix_seed({seed, target, static_cast<std::uint64_t>(t)}));
            // Random monotone-consistent accept region: rate at most some
            // threshold and bandwidth at least another (either may exclude
            // everything). Value thresholds, drawn from the grid axes.
            std::uniform_int_distribution<int> rate_cut(-1, static_cast<int>(m) - 1);
            std::uniform_int_distribution<std::size_t> bw_cut(0, n);
            const int rc = rate_cut(engine);
            const std::size_t wc = bw_cut(engine);
            const double max_accept_rate =
                rc < 0 ? -1.0 : grid.rates_mbps[static_cast<std::size_t>(rc)];
            const double min_accept_bw = wc >= n ? std::numeric_limits<double>::infinity()
                                                 : grid.bandwidths_mhz[wc];
            Classifier classifier = [=](double rate, double, double bw) {
                return rate <= max_accept_rate && bw >= min_accept_bw;
            };
            DpobConfig cfg;
            cfg.seed = mix_seed({seed, target, static_cast<std::uint64_t>(t), 0x72756eULL});
            const DpobResult res =
                run(grid, 0, classifier, PricingParams{1.0, 2.0}, CostParams{}, cfg);
            total_iters += static_cast<double>(res.iterations);
            max_iters = std::max(max_iters, res.iterations);
        }
        rows.push_back({target, total_iters / trials, max_iters, trials});
    }
    return rows;
}

std::string convergence_csv(std::span<const ConvergenceRow> rows) {
    std::string out = "state_count,mean_iterations,max_iterations,trials\n";
    for (const ConvergenceRow& row : rows) {
        out += std::to_string(row.state_count) + ',' + format_double(row.mean_iterations) + ',' +
               std::to_string(row.max_iterations) + ',' + std::to_string(row.trials) + '\n';
    }
    return out;
}

} // namespace hetnetbid::dpob
