#ifndef HETNETBID_GUARANTEE_HPP
#define HETNETBID_GUARANTEE_HPP

namespace hetnetbid::guarantee {

/// Probabilistic service guarantee Pr(B >= b | BW) and its bandwidth
/// inverse. Implementations must be strictly decreasing in b and strictly
/// increasing in BW.
class GuaranteeModel {
public:
    virtual ~GuaranteeModel() = default;

    /// Tail probability that the realized rate meets the advertised rate.
    virtual double tail(double rate_mbps, double bandwidth_mhz) const = 0;

    /// The unique BW with rate * tail(rate, BW) = min_rate.
    /// Throws errc::infeasible when no finite BW achieves it.
    virtual double min_bandwidth(double rate_mbps, double min_rate_mbps) const = 0;
};

/// Shannon rate under unit-mean exponential channel power (Rayleigh
/// fading): B = BW * log2(1 + snr * X), X ~ Exp(1). Closed forms:
///   tail(b, BW)        = exp(-(2^(b/BW) - 1) / mean_snr)
///   min_bandwidth(b,m) = b / log2(1 + mean_snr * ln(b/m))
class RayleighGuarantee final : public GuaranteeModel {
public:
    explicit RayleighGuarantee(double mean_snr) : mean_snr_(mean_snr) {}

    double tail(double rate_mbps, double bandwidth_mhz) const override;
    double min_bandwidth(double rate_mbps, double min_rate_mbps) const override;
    double mean_snr() const { return mean_snr_; }

private:
    double mean_snr_;
};

/// Validating wrappers over the model virtuals.
/// service_guarantee throws errc::invalid_parameter for bw <= 0 or b < 0;
/// min_bw_for_rate_constraint requires b > b_min > 0 (else errc::infeasible
/// or errc::invalid_parameter).
double service_guarantee(const GuaranteeModel& model, double rate_mbps, double bandwidth_mhz);
double min_bw_for_rate_constraint(const GuaranteeModel& model, double rate_mbps,
                                  double min_rate_mbps);

} // namespace hetnetbid::guarantee

#endif
