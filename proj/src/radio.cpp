#include "hetnetbid/radio.hpp"

#include <algorithm>
#include <cmath>

#include "hetnetbid/errors.hpp"

namespace hetnetbid::radio {

double hata_path_loss(double freq_mhz, double base_height_m, double mobile_height_m,
                      double distance_km) {
    if (!(freq_mhz > 0.0))
        throw error(errc::invalid_parameter, "hata_path_loss: carrier frequency must be positive");
    if (!(distance_km > 0.0))
        throw error(errc::invalid_parameter, "hata_path_loss: distance must be positive");
    if (!(base_height_m > 0.0) || !(mobile_height_m > 0.0))
        throw error(errc::invalid_parameter, "hata_path_loss: antenna heights must be positive");

    const double lf = std::log10(freq_mhz);
    const double lhb = std::log10(base_height_m);
    // small/medium-city mobile antenna correction
    const double a_hm = (1.1 * lf - 0.7) * mobile_height_m - (1.56 * lf - 0.8);
    return 69.55 + 26.16 * lf - 13.82 * lhb + (44.9 - 6.55 * lhb) * std::log10(distance_km) - a_hm;
}

LinkBudget link_budget(const Station& station, const UserNode& user, double noise_variance,
                       double sinr_threshold_db) {
    // Hata is singular at d = 0; a user standing on the mast is 1 m away.
    const double d_m = std::max(distance_m(station.position, user.position), 1.0);
    LinkBudget link;
    link.path_loss_db = hata_path_loss(station.carrier_freq_mhz, station.antenna_height_m,
                                       user.antenna_height_m, d_m / 1000.0);
    link.mean_channel_gain = std::pow(10.0, -link.path_loss_db / 10.0);
    link.noise_variance = noise_variance;
    link.mean_snr = db_to_linear(station.tx_power_dbm) * link.mean_channel_gain / noise_variance;
    link.covered = linear_to_db(link.mean_snr) >= sinr_threshold_db;
    return link;
}

double bw_per_user(const Station& station, std::span<const std::pair<bool, bool>> users) {
    std::size_t served = 0;
    for (const auto& [active, covered] : users)
        served += (active && covered) ? 1 : 0;
    if (served == 0)
        throw error(errc::no_demand, "bw_per_user: no active covered user at this station");
    return station.alloc_gain * station.total_bandwidth_mhz / static_cast<double>(served);
}

double max_rate(double bw_max_mhz, const LinkBudget& link, bool active, bool covered) {
    if (!active || !covered)
        return 0.0;
    return bw_max_mhz * std::log2(1.0 + link.mean_snr);
}

} // namespace hetnetbid::radio
