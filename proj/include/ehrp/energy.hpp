#pragma once

#include <cmath>

namespace ehrp {

/// First-order radio energy model constants. Defaults are the standard
/// 50 nJ/bit electronics, 10 pJ/bit/m² free-space and 0.0013 pJ/bit/m⁴
/// two-ray amplifier coefficients, and 5 nJ/bit aggregation cost.
///
/// d0 defaults to the exact crossover sqrt(eps_freespace/eps_tworay)
/// (~87.7058 m) so the two amplifier branches meet continuously.
struct RadioParams {
    double e_elec = 50e-9;          // J/bit
    double eps_freespace = 10e-12;  // J/bit/m^2
    double eps_tworay = 0.0013e-12; // J/bit/m^4
    double e_da = 5e-9;             // J/bit aggregation
    double d0 = default_crossover();

    static double crossover(double eps_fs, double eps_mp) {
        return std::sqrt(eps_fs / eps_mp);
    }
    static double default_crossover() { return crossover(10e-12, 0.0013e-12); }
};

/// Energy to transmit `bits` over `distance` meters: electronics plus the
/// free-space (d²) or two-ray (d⁴) amplifier term depending on the crossover.
/// Throws std::invalid_argument on negative inputs.
double tx_energy(double bits, double distance, const RadioParams& p);

/// Energy to receive `bits`: e_elec per bit.
double rx_energy(double bits, const RadioParams& p);

/// Energy to aggregate `total_bits` of received payload: e_da per bit.
double aggregation_energy(double total_bits, const RadioParams& p);

/// A node battery. `consumed` is the single source of truth; residual energy
/// is derived, and a draining debit lands on exactly zero residual. The
/// simulation keeps an independent mirror of these accounts as its debit
/// ledger, so the two must evolve identically — all mutation goes through
/// apply().
class EnergyAccount {
public:
    EnergyAccount() = default;
    explicit EnergyAccount(double initial) : initial_(initial) {}

    double initial() const { return initial_; }
    double consumed() const { return consumed_; }
    double residual() const { return initial_ - consumed_; }
    bool alive() const { return consumed_ < initial_; }

    /// Debits up to `amount`, clamped at the remaining charge.
    /// Returns the amount actually debited.
    double apply(double amount) {
        const double remaining = initial_ - consumed_;
        const double applied = amount < remaining ? amount : remaining;
        consumed_ = (applied == remaining) ? initial_ : consumed_ + applied;
        return applied;
    }

private:
    double initial_ = 0.0;
    double consumed_ = 0.0;
};

}  // namespace ehrp
