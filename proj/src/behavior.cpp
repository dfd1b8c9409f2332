#include "hetnetbid/behavior.hpp"

#include <cmath>

#include "hetnetbid/errors.hpp"
#include "hetnetbid/market.hpp"

namespace hetnetbid {

WeightingFn WeightingFn::prelec(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw error(errc::invalid_parameter, "WeightingFn: Prelec alpha must lie in (0,1)");
    WeightingFn w;
    w.kind = Kind::prelec;
    w.alpha = alpha;
    return w;
}

double WeightingFn::operator()(double p) const {
    return kind == Kind::identity ? p : behavior::prelec(p, alpha);
}

namespace behavior {

double prelec(double p, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw error(errc::invalid_parameter, "prelec: alpha must lie in (0,1)");
    if (!(p >= 0.0) || !(p <= 1.0))
        throw error(errc::invalid_parameter, "prelec: p must lie in [0,1]");
    if (p == 0.0 || p == 1.0)
        return p; // continuous extension; ln is singular at the boundary
    return std::exp(-std::pow(-std::log(p), alpha));
}

Bid perceive(const Bid& bid, const WeightingFn& weighting) {
    Bid perceived = bid;
    perceived.guarantee = weighting(bid.guarantee);
    return perceived;
}

UserStrategy decide(const UserNode& user, const std::optional<Bid>& cellular,
                    const std::optional<Bid>& wifi, const WeightingFn& weighting) {
    return market::solve_max1(cellular, wifi, user, weighting);
}

} // namespace behavior
} // namespace hetnetbid
