#include "ehrp/energy.hpp"

#include <stdexcept>

namespace ehrp {

double tx_energy(double bits, double distance, const RadioParams& p) {
    if (bits < 0.0) throw std::invalid_argument("tx_energy: negative bit count");
    if (distance < 0.0) throw std::invalid_argument("tx_energy: negative distance");
    const double amp = distance < p.d0
                           ? p.eps_freespace * distance * distance
                           : p.eps_tworay * distance * distance * distance * distance;
    return bits * p.e_elec + bits * amp;
}

double rx_energy(double bits, const RadioParams& p) {
    if (bits < 0.0) throw std::invalid_argument("rx_energy: negative bit count");
    return p.e_elec * bits;
}

double aggregation_energy(double total_bits, const RadioParams& p) {
    if (total_bits < 0.0) throw std::invalid_argument("aggregation_energy: negative bit count");
    return p.e_da * total_bits;
}

}  // namespace ehrp
