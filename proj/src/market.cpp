#include "hetnetbid/market.hpp"

#include <array>
#include <cmath>

#include "hetnetbid/errors.hpp"

namespace hetnetbid::market {

double price(double rate_mbps, const PricingParams& params) {
    return params.alpha * std::pow(rate_mbps, params.beta);
}

double sp_cost(double rate_mbps, double bandwidth_mhz, const CostParams& params) {
    return params.per_mbps * rate_mbps + params.per_mhz * bandwidth_mhz;
}

Bid make_bid(int sp_id, StationKind kind, double rate_mbps, double bandwidth_mhz,
             const PricingParams& pricing, const guarantee::GuaranteeModel& model) {
    Bid bid;
    bid.sp_id = sp_id;
    bid.sp_kind = kind;
    bid.rate_mbps = rate_mbps;
    bid.price = price(rate_mbps, pricing);
    bid.bandwidth_mhz = bandwidth_mhz;
    bid.guarantee = guarantee::service_guarantee(model, rate_mbps, bandwidth_mhz);
    return bid;
}

double joint_rate(const std::optional<Bid>& cellular, const std::optional<Bid>& wifi,
                  UserStrategy strategy, const WeightingFn& weighting) {
    double rate = 0.0;
    if (strategy.cellular && cellular)
        rate += cellular->rate_mbps * weighting(cellular->guarantee);
    if (strategy.wifi && wifi)
        rate += wifi->rate_mbps * weighting(wifi->guarantee);
    return rate;
}

double user_utility(const std::optional<Bid>& cellular, const std::optional<Bid>& wifi,
                    UserStrategy strategy, const UserNode& user, const WeightingFn& weighting) {
    const bool pays_cellular = strategy.cellular && cellular;
    const bool pays_wifi = strategy.wifi && wifi;
    if (!pays_cellular && !pays_wifi)
        return 0.0; // outside option: no rate, no payment
    const double rate = joint_rate(cellular, wifi, strategy, weighting);
    const double benefit = user.benefit_scale * std::pow(rate, 1.0 / user.benefit_curvature);
    const double paid = (pays_cellular ? cellular->price : 0.0) + (pays_wifi ? wifi->price : 0.0);
    return benefit - paid;
}

UserStrategy solve_max1(const std::optional<Bid>& cellular, const std::optional<Bid>& wifi,
                        const UserNode& user, const WeightingFn& weighting) {
    // Candidates in lexicographic (p_c, p_w) order so full ties keep the
    // smallest strategy.
    constexpr std::array<UserStrategy, 4> strategies{
        UserStrategy{false, false}, UserStrategy{false, true}, UserStrategy{true, false},
        UserStrategy{true, true}};

    UserStrategy best{false, false};
    bool found = false;
    double best_utility = 0.0;
    double best_paid = 0.0;
    for (const UserStrategy& s : strategies) {
        if (s.cellular && !cellular)
            continue; // a missing bid forces p = 0
        if (s.wifi && !wifi)
            continue;
        if (!s.cellular && !s.wifi)
            continue; // (0,0) is the fallback, never a feasible candidate
        const double rate = joint_rate(cellular, wifi, s, weighting);
        if (rate < user.min_rate_mbps)
            continue;
        const double utility = user_utility(cellular, wifi, s, user, weighting);
        if (utility < 0.0)
            continue;
        const double paid =
            (s.cellular ? cellular->price : 0.0) + (s.wifi ? wifi->price : 0.0);
        if (!found || utility > best_utility ||
            (utility == best_utility && paid < best_paid)) {
            best = s;
            best_utility = utility;
            best_paid = paid;
            found = true;
        }
    }
    return best;
}

std::optional<BestResponse> solve_sp_best_response(const guarantee::GuaranteeModel& model,
                                                   const PricingParams& pricing,
                                                   const CostParams& cost, double bw_max_mhz,
                                                   double max_rate_mbps, double min_rate_mbps,
                                                   int rate_grid_size) {
    if (rate_grid_size < 1)
        throw error(errc::invalid_parameter, "solve_sp_best_response: rate_grid_size must be >= 1");
    if (!(bw_max_mhz > 0.0) || !(max_rate_mbps > min_rate_mbps))
        return std::nullopt; // empty search interval

    std::optional<BestResponse> best;
    const double span = max_rate_mbps - min_rate_mbps;
    for (int i = 1; i <= rate_grid_size; ++i) {
        const double b = min_rate_mbps + span * static_cast<double>(i) / rate_grid_size;
        double bw;
        try {
            bw = model.min_bandwidth(b, min_rate_mbps);
        } catch (const error&) {
            continue; // no finite bandwidth makes this rate feasible
        }
        // Pad the exactly-tight bandwidth a hair so the advertised rate
        // clears b_min under floating-point re-evaluation of the guarantee.
        bw *= 1.0 + 1e-9;
        if (bw > bw_max_mhz)
            continue;
        const double utility = price(b, pricing) - sp_cost(b, bw, cost);
        if (!best || utility > best->utility)
            best = BestResponse{b, bw, utility};
    }
    return best;
}

GameOutcome stackelberg_round(const UserNode& user, std::span<const SpContext> stations,
                              const WeightingFn& weighting, const BidFn& bid_fn) {
    GameOutcome outcome;
    outcome.sp_utilities.reserve(stations.size());

    struct Offer {
        const SpContext* ctx;
        Bid bid;
    };
    std::optional<Offer> cellular;
    std::optional<Offer> best_wifi;
    double best_wifi_value = 0.0;

    std::vector<Offer> offers;
    offers.reserve(stations.size());
    for (const SpContext& ctx : stations) {
        outcome.sp_utilities.emplace_back(ctx.sp_id, 0.0);
        if (auto bid = bid_fn(ctx))
            offers.push_back({&ctx, *bid});
    }
    for (const Offer& offer : offers) {
        if (offer.ctx->kind == StationKind::macro_cell) {
            cellular = offer;
            continue;
        }
        // "best serving WiFi SP": the bid with the highest evaluated
        // standalone utility for this user; ties to the lower sp_id.
        const double value =
            user_utility(std::nullopt, offer.bid, UserStrategy{false, true}, user, weighting);
        if (!best_wifi || value > best_wifi_value ||
            (value == best_wifi_value && offer.ctx->sp_id < best_wifi->ctx->sp_id)) {
            best_wifi = offer;
            best_wifi_value = value;
        }
    }

    if (cellular)
        outcome.cellular_bid = cellular->bid;
    if (best_wifi)
        outcome.wifi_bid = best_wifi->bid;

    outcome.strategy = solve_max1(outcome.cellular_bid, outcome.wifi_bid, user, weighting);
    outcome.user_utility = user_utility(outcome.cellular_bid, outcome.wifi_bid, outcome.strategy,
                                        user, WeightingFn::identity());
    outcome.feasible = outcome.strategy.cellular || outcome.strategy.wifi;

    auto credit = [&outcome](const Offer& offer) {
        const double utility = offer.bid.price -
                               sp_cost(offer.bid.rate_mbps, offer.bid.bandwidth_mhz,
                                       offer.ctx->cost);
        for (auto& [id, u] : outcome.sp_utilities)
            if (id == offer.ctx->sp_id)
                u = utility;
    };
    // Resources are committed only on acceptance; rejected and unselected
    // bids cost their SPs nothing.
    if (outcome.strategy.cellular && cellular)
        credit(*cellular);
    if (outcome.strategy.wifi && best_wifi)
        credit(*best_wifi);
    return outcome;
}

} // namespace hetnetbid::market
