#ifndef HETNETBID_BEHAVIOR_HPP
#define HETNETBID_BEHAVIOR_HPP

#include <optional>

#include "hetnetbid/types.hpp"

namespace hetnetbid::behavior {

/// Prelec probability weighting w(p) = exp(-(-ln p)^alpha), alpha in (0,1),
/// extended by continuity with w(0) = 0 and w(1) = 1. Overweights p < 1/e,
/// underweights p > 1/e, fixes p = 1/e.
/// Throws errc::invalid_parameter for alpha outside (0,1) or p outside [0,1].
double prelec(double p, double alpha);

/// The bid as the user perceives it: guarantee replaced by its weighted
/// value, everything else untouched.
Bid perceive(const Bid& bid, const WeightingFn& weighting);

/// User decision: Max1 on the perceived bids. Identity weighting makes this
/// the EUT decision exactly.
UserStrategy decide(const UserNode& user, const std::optional<Bid>& cellular,
                    const std::optional<Bid>& wifi, const WeightingFn& weighting);

} // namespace hetnetbid::behavior

#endif
