#pragma once

#include <cstdint>

#include "ehrp/geometry.hpp"
#include "ehrp/node.hpp"

namespace ehrp {

/// Log-distance path-loss model with optional static log-normal shadowing.
/// The paper-level heuristic consumes RSSI; this model is what gives RSSI
/// information beyond bare distance (the shadow term).
struct PropagationParams {
    double tx_power_dbm = 0.0;
    double ref_loss_db = 40.0;         // loss at 1 m
    double path_loss_exponent = 2.7;
    double shadowing_sigma_db = 4.0;
    double sensitivity_dbm = -100.0;   // receiver floor
    double loss_slope_db = 2.0;        // logistic slope of the loss curve
};

/// Deterministic RSSI at distance `d` with zero shadowing.
double log_distance_rssi(double distance_m, const PropagationParams& p);

class RadioModel {
public:
    RadioModel() = default;
    RadioModel(PropagationParams p, std::uint64_t shadow_seed)
        : params_(p), shadow_seed_(shadow_seed) {}

    /// RSSI between two node positions. The shadowing draw is zero-mean
    /// Gaussian, frozen per unordered node pair for the whole run, so
    /// repeated queries (and both directions) return the same value.
    /// Coincident positions are rejected.
    double rssi(NodeId a, NodeId b, Position pa, Position pb) const;

    /// RSSI from a node to an arbitrary point (a mobile sink). No shadow
    /// term: the static per-pair shadow model assumes fixed endpoints.
    double rssi_to_point(Position a, Position b) const;

    /// Probability that a transmission at the given RSSI is received:
    /// logistic in (rssi - sensitivity) with slope loss_slope_db.
    double delivery_probability(double rssi_dbm) const;

    /// Heuristic preprocessing: max(0, rssi - sensitivity). Keeps the ACO
    /// heuristic base nonnegative so beta-exponentiation is well defined.
    double shifted_rssi(double rssi_dbm) const;

    const PropagationParams& params() const { return params_; }

private:
    double pair_shadow(NodeId a, NodeId b) const;

    PropagationParams params_{};
    std::uint64_t shadow_seed_ = 0;
};

}  // namespace ehrp
