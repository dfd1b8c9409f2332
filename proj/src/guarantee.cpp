#include "hetnetbid/guarantee.hpp"

#include <cmath>

#include "hetnetbid/errors.hpp"

namespace hetnetbid::guarantee {

double RayleighGuarantee::tail(double rate_mbps, double bandwidth_mhz) const {
    if (rate_mbps <= 0.0)
        return 1.0; // Pr(B >= 0) = 1
    if (mean_snr_ <= 0.0)
        return 0.0;
    return std::exp(-(std::exp2(rate_mbps / bandwidth_mhz) - 1.0) / mean_snr_);
}

double RayleighGuarantee::min_bandwidth(double rate_mbps, double min_rate_mbps) const {
    const double s = mean_snr_ * std::log(rate_mbps / min_rate_mbps);
    if (!(s > 0.0))
        throw error(errc::infeasible,
                    "min_bandwidth: tight rate constraint needs positive snr and b > b_min");
    return rate_mbps / std::log2(1.0 + s);
}

double service_guarantee(const GuaranteeModel& model, double rate_mbps, double bandwidth_mhz) {
    if (!(bandwidth_mhz > 0.0))
        throw error(errc::invalid_parameter, "service_guarantee: bandwidth must be positive");
    if (rate_mbps < 0.0)
        throw error(errc::invalid_parameter, "service_guarantee: rate must be nonnegative");
    return model.tail(rate_mbps, bandwidth_mhz);
}

double min_bw_for_rate_constraint(const GuaranteeModel& model, double rate_mbps,
                                  double min_rate_mbps) {
    if (!(min_rate_mbps > 0.0))
        throw error(errc::invalid_parameter, "min_bw_for_rate_constraint: b_min must be positive");
    if (!(rate_mbps > min_rate_mbps))
        throw error(errc::infeasible,
                    "min_bw_for_rate_constraint: b <= b_min needs a guarantee of 1, "
                    "unreachable with finite bandwidth");
    return model.min_bandwidth(rate_mbps, min_rate_mbps);
}

} // namespace hetnetbid::guarantee
