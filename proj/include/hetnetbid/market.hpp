#ifndef HETNETBID_MARKET_HPP
#define HETNETBID_MARKET_HPP

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hetnetbid/guarantee.hpp"
#include "hetnetbid/types.hpp"

namespace hetnetbid::market {

/// Convex price r(b) = alpha * b^beta.
double price(double rate_mbps, const PricingParams& params);

/// Linear service cost per bid.
double sp_cost(double rate_mbps, double bandwidth_mhz, const CostParams& params);

/// Builds a bid with the guarantee computed from the link's model, so the
/// Bid invariant g = service_guarantee(model, b, BW) holds at construction.
Bid make_bid(int sp_id, StationKind kind, double rate_mbps, double bandwidth_mhz,
             const PricingParams& pricing, const guarantee::GuaranteeModel& model);

/// User's expected aggregate rate B_joint = b_c*w(g_c)*p_c + b_w*w(g_w)*p_w.
/// A missing bid contributes nothing regardless of the strategy flag.
double joint_rate(const std::optional<Bid>& cellular, const std::optional<Bid>& wifi,
                  UserStrategy strategy, const WeightingFn& weighting);

/// delta * B_joint^(1/theta) - paid prices. Strategy (0,0) yields 0.
double user_utility(const std::optional<Bid>& cellular, const std::optional<Bid>& wifi,
                    UserStrategy strategy, const UserNode& user, const WeightingFn& weighting);

/// The user's optimization: enumerate the four strategies, keep those with
/// B_joint >= b_min and utility >= 0, return the best. Falls back to (0,0)
/// (the outside option, utility 0) when nothing is feasible. Ties resolve
/// to the lower total price, then to the lexicographically smallest
/// (p_c, p_w).
UserStrategy solve_max1(const std::optional<Bid>& cellular, const std::optional<Bid>& wifi,
                        const UserNode& user, const WeightingFn& weighting);

struct BestResponse {
    double rate_mbps = 0.0;
    double bandwidth_mhz = 0.0;
    double utility = 0.0; // r(b) - cost(b, BW) anticipating acceptance
};

/// SP best response: 1-D grid search over b in (b_min, b_max], each rate
/// paired with the tight bandwidth b*F(b,BW) = b_min. Candidates needing
/// more than bw_max are infeasible. nullopt = no feasible bid (abstain).
std::optional<BestResponse> solve_sp_best_response(const guarantee::GuaranteeModel& model,
                                                   const PricingParams& pricing,
                                                   const CostParams& cost, double bw_max_mhz,
                                                   double max_rate_mbps, double min_rate_mbps,
                                                   int rate_grid_size = 512);

/// One covered station as seen by one user: link quality plus the per-user
/// resource caps of this load point.
struct SpContext {
    int sp_id = -1;
    StationKind kind = StationKind::macro_cell;
    double mean_snr = 0.0;
    double bw_max_mhz = 0.0;   // per-user bandwidth budget
    double max_rate_mbps = 0.0;
    PricingParams pricing;
    CostParams cost;
};

/// Produces a station's bid to the user, or nullopt to abstain. The EUT
/// policy wraps solve_sp_best_response; the learning policy runs DPOB.
using BidFn = std::function<std::optional<Bid>(const SpContext&)>;

struct GameOutcome {
    std::optional<Bid> cellular_bid;
    std::optional<Bid> wifi_bid; // best serving WiFi SP's bid
    UserStrategy strategy;
    /// Utility of the chosen strategy at face-value guarantees. The
    /// strategy itself is chosen on perceived (weighted) values, so a
    /// biased user can end up below zero here.
    double user_utility = 0.0;
    std::vector<std::pair<int, double>> sp_utilities; // sp_id -> realized utility
    bool feasible = false;                            // a non-(0,0) strategy was chosen
};

/// Plays one leader-follower round: every station bids via bid_fn, the
/// WiFi bid with the highest standalone evaluated utility for this user is
/// selected (ties to the lower sp_id), the user solves Max1 on (cellular,
/// best WiFi). Accepted bids earn r - cost; rejected or unselected SPs
/// earn 0 (no resources committed).
GameOutcome stackelberg_round(const UserNode& user, std::span<const SpContext> stations,
                              const WeightingFn& weighting, const BidFn& bid_fn);

} // namespace hetnetbid::market

#endif
