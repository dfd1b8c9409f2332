#ifndef HETNETBID_TYPES_HPP
#define HETNETBID_TYPES_HPP

#include <cmath>
#include <cstdint>

namespace hetnetbid {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance_m(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class StationKind { macro_cell, wifi };

/// Convex pricing r(b) = alpha * b^beta with beta > 1.
struct PricingParams {
    double alpha = 1.0;
    double beta = 2.0;
};

/// Linear service cost C(b, BW) = per_mbps * b + per_mhz * BW.
struct CostParams {
    double per_mbps = 0.0;
    double per_mhz = 0.0;
};

struct Station {
    int id = 0;
    StationKind kind = StationKind::macro_cell;
    Vec2 position;
    double tx_power_dbm = 0.0;
    double carrier_freq_mhz = 900.0;
    double antenna_height_m = 30.0;
    double total_bandwidth_mhz = 100.0;
    double alloc_gain = 1.0;        // G_BA in (0, 1]
    double coverage_radius_m = 0.0; // nominal footprint; placement and power calibration only
    PricingParams pricing;
    CostParams cost;
};

struct UserNode {
    int id = 0;
    Vec2 position;
    bool active = true;             // a_j
    double min_rate_mbps = 1.0;     // b_min
    double benefit_scale = 1.0;     // delta
    double benefit_curvature = 2.0; // theta > 1
    double antenna_height_m = 1.5;
};

struct LinkBudget {
    double path_loss_db = 0.0;
    double mean_channel_gain = 1.0; // 10^(-path_loss/10)
    double noise_variance = 1.0;    // linear (mW)
    double mean_snr = 0.0;          // tx_power_linear * gain / noise
    bool covered = false;           // c_j: mean SNR in dB >= threshold (boundary inclusive)
};

/// Probability weighting applied by the user to advertised service
/// guarantees: identity under EUT, Prelec(alpha) under prospect theory.
struct WeightingFn {
    enum class Kind { identity, prelec };
    Kind kind = Kind::identity;
    double alpha = 1.0; // Prelec parameter, in (0,1) when kind == prelec

    static WeightingFn identity() { return {}; }
    static WeightingFn prelec(double alpha); // validates alpha
    double operator()(double p) const;       // defined in behavior.cpp
};

/// One SP offer: advertised rate, its price, the bandwidth backing it and
/// the resulting service guarantee Pr(B >= rate | bandwidth).
struct Bid {
    int sp_id = -1;
    StationKind sp_kind = StationKind::macro_cell;
    double rate_mbps = 0.0;
    double price = 0.0;
    double bandwidth_mhz = 0.0;
    double guarantee = 0.0;
};

/// Binary accept decisions (p_c, p_w) for the cellular and the WiFi bid.
struct UserStrategy {
    bool cellular = false;
    bool wifi = false;

    friend bool operator==(const UserStrategy&, const UserStrategy&) = default;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double v) { return 10.0 * std::log10(v); }

} // namespace hetnetbid

#endif
