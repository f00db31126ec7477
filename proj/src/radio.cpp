#include "ehrp/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ehrp/rng.hpp"

namespace ehrp {

double log_distance_rssi(double distance_m, const PropagationParams& p) {
    if (distance_m <= 0.0)
        throw std::invalid_argument("log_distance_rssi: distance must be positive");
    return p.tx_power_dbm - p.ref_loss_db -
           10.0 * p.path_loss_exponent * std::log10(distance_m);
}

double RadioModel::pair_shadow(NodeId a, NodeId b) const {
    if (params_.shadowing_sigma_db <= 0.0) return 0.0;
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return keyed_normal(shadow_seed_, lo, hi, params_.shadowing_sigma_db);
}

double RadioModel::rssi(NodeId a, NodeId b, Position pa, Position pb) const {
    const double d = euclidean_distance(pa, pb);
    if (d <= 0.0) throw std::invalid_argument("rssi: coincident positions");
    return log_distance_rssi(d, params_) + pair_shadow(a, b);
}

double RadioModel::rssi_to_point(Position a, Position b) const {
    const double d = euclidean_distance(a, b);
    if (d <= 0.0) return params_.tx_power_dbm;  // on top of the sink: best case
    return log_distance_rssi(d, params_);
}

double RadioModel::delivery_probability(double rssi_dbm) const {
    const double z = (rssi_dbm - params_.sensitivity_dbm) / params_.loss_slope_db;
    return 1.0 / (1.0 + std::exp(-z));
}

double RadioModel::shifted_rssi(double rssi_dbm) const {
    return std::max(0.0, rssi_dbm - params_.sensitivity_dbm);
}

}  // namespace ehrp
