#ifndef HETNETBID_RADIO_HPP
#define HETNETBID_RADIO_HPP

#include <span>
#include <utility>

#include "hetnetbid/types.hpp"

namespace hetnetbid::radio {

/// Urban Hata median path loss with the small/medium-city mobile antenna
/// correction, in dB.
///
/// Classical validity: f in [150, 1500] MHz, h_b in [30, 200] m, h_m in
/// [1, 10] m, d in [1, 20] km. Inputs outside that range are evaluated
/// with the same formula, not clamped; callers own the modeling liberty.
/// Throws errc::invalid_parameter for non-positive f or d.
double hata_path_loss(double freq_mhz, double base_height_m, double mobile_height_m,
                      double distance_km);

/// Assembles the link budget between a station and a user: Hata path loss
/// over the station/user geometry, mean channel gain 10^(-PL/10), mean SNR
/// and the coverage flag (SNR in dB >= sinr_threshold_db, inclusive).
/// Distances shorter than 1 m are evaluated at 1 m.
LinkBudget link_budget(const Station& station, const UserNode& user,
                       double noise_variance, double sinr_threshold_db);

/// Proportionally fair per-user bandwidth cap: G_BA * BW / sum(a_j * c_j).
/// users holds (active, covered) flags. Throws errc::no_demand when no
/// user is both active and covered.
double bw_per_user(const Station& station, std::span<const std::pair<bool, bool>> users);

/// Maximum achievable rate b_max = bw_max * log2(1 + snr * a * c), Mbps.
/// Base-2 log so MHz times bits/s/Hz gives Mbps.
double max_rate(double bw_max_mhz, const LinkBudget& link, bool active, bool covered);

} // namespace hetnetbid::radio

#endif
