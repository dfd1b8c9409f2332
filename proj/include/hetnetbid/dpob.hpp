#ifndef HETNETBID_DPOB_HPP
#define HETNETBID_DPOB_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hetnetbid/types.hpp"

namespace hetnetbid::dpob {

/// Quantized bid space: M strictly increasing rates x N strictly
/// increasing bandwidths, all positive. State index = rate_idx * N + bw_idx.
struct BidGrid {
    std::vector<double> rates_mbps;
    std::vector<double> bandwidths_mhz;

    /// Throws errc::invalid_parameter unless both axes are non-empty,
    /// positive and strictly increasing.
    static BidGrid make(std::vector<double> rates, std::vector<double> bandwidths);

    /// M x N grid spanning (min_rate, max_rate] x (0, max_bw] with uniform
    /// spacing; point i gets value min + (i+1)/count * (max - min).
    static BidGrid uniform(double min_rate_mbps, double max_rate_mbps, std::size_t m,
                           double max_bandwidth_mhz, std::size_t n);

    std::size_t size() const { return rates_mbps.size() * bandwidths_mhz.size(); }
    std::size_t index(std::size_t rate_idx, std::size_t bw_idx) const {
        return rate_idx * bandwidths_mhz.size() + bw_idx;
    }
    double rate(std::size_t state_idx) const {
        return rates_mbps[state_idx / bandwidths_mhz.size()];
    }
    double bandwidth(std::size_t state_idx) const {
        return bandwidths_mhz[state_idx % bandwidths_mhz.size()];
    }

    /// Nearest grid state to (rate, bw), Euclidean in span-normalized
    /// coordinates; ties go to the lower index.
    std::size_t nearest_state(double rate_mbps, double bandwidth_mhz) const;
};

struct State {
    std::size_t index = 0;
    double rate_mbps = 0.0;
    double bandwidth_mhz = 0.0;
};

/// Predicted accept/reject for a bid given (rate, price, bandwidth).
using Classifier = std::function<bool(double rate_mbps, double price, double bandwidth_mhz)>;

/// Immediate reward of landing on dest: d * (r(b) - cost(b, BW)) where d is
/// the predicted decision on the destination bid. Depends only on dest.
double reward(const State& dest, const Classifier& classifier, const PricingParams& pricing,
              const CostParams& cost);

struct DpobConfig {
    std::uint64_t seed = 0;
    bool record_trace = false;
};

struct TraceRow {
    std::size_t iteration = 0; // 1-based
    std::size_t state_index = 0;
    double rate_mbps = 0.0;
    double bandwidth_mhz = 0.0;
    double reward = 0.0;
    bool predicted_accept = false;
    std::size_t remaining_actions = 0; // after this iteration's pruning
};

struct DpobResult {
    bool has_best = false; // false = the (0,0) sentinel: make no bid
    State best;
    double utility = 0.0;
    std::size_t iterations = 0;
    std::vector<TraceRow> trace;
};

/// The optimized-bidding loop: sample a random remaining action, evaluate
/// its reward, keep the best predicted-accepted one, then prune the action
/// set by Pareto dominance (acceptance removes lower-rate/higher-bandwidth
/// states, rejection removes higher-rate/lower-bandwidth states; both
/// remove the sampled state itself). Runs until the action set is empty.
/// initial_state seeds the trace only; transitions reach every state.
/// Throws errc::invalid_parameter on an empty grid.
DpobResult run(const BidGrid& grid, std::size_t initial_state, const Classifier& classifier,
               const PricingParams& pricing, const CostParams& cost, const DpobConfig& config);

/// Exhaustive oracle: the reward-maximizing state over the whole grid.
/// Ties break toward larger rate, then larger bandwidth.
std::pair<State, double> brute_force_best_bid(const BidGrid& grid, const Classifier& classifier,
                                              const PricingParams& pricing,
                                              const CostParams& cost);

std::string trace_csv(const DpobResult& result);

struct ConvergenceRow {
    std::size_t state_count = 0;
    double mean_iterations = 0.0;
    std::size_t max_iterations = 0;
    int trials = 0;
};

/// Empirical convergence study: for each |S|, runs `trials` DPOB searches
/// against randomized monotone-consistent classifiers (accept regions
/// upward-closed in bandwidth, downward-closed in rate) and reports
/// mean/max iteration counts. Requires trials >= 1.
std::vector<ConvergenceRow> measure_convergence(std::span<const std::size_t> state_counts,
                                                int trials, std::uint64_t seed);

std::string convergence_csv(std::span<const ConvergenceRow> rows);

} // namespace hetnetbid::dpob

#endif
