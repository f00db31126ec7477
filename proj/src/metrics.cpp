#include "ehrp/metrics.hpp"

#include <cassert>
#include <stdexcept>

namespace ehrp {

LifetimeResult lifetime_hna(std::span<const int> alive_series, int node_count) {
    const int threshold = (node_count + 1) / 2;  // ceil(N/2)
    for (std::size_t r = 0; r < alive_series.size(); ++r)
        if (alive_series[r] < threshold) return {static_cast<int>(r), true};
    return {static_cast<int>(alive_series.size()), false};
}

LifetimeResult lifetime_fnd(std::span<const int> alive_series, int node_count) {
    for (std::size_t r = 0; r < alive_series.size(); ++r)
        if (alive_series[r] < node_count) return {static_cast<int>(r), true};
    return {static_cast<int>(alive_series.size()), false};
}

double wasted_energy(std::span<const NodeState> nodes) {
    double sum = 0.0;
    for (const auto& n : nodes) sum += n.residual_energy();
    return sum;
}

double analytic_lifetime(int node_count, double e_init, double e_rate,
                         double e_wasted) {
    if (e_rate <= 0.0)
        throw std::invalid_argument("analytic_lifetime: e_rate must be positive");
    return (node_count * e_init - e_wasted) / e_rate;
}

double pdr(std::int64_t delivered, std::int64_t generated) {
    assert(delivered <= generated && "delivered packets exceed generated");
    if (generated == 0) return 1.0;
    return static_cast<double>(delivered) / static_cast<double>(generated);
}

double packet_delay(const Packet& p, double hop_time_s, double round_duration_s) {
    if (!p.delivered) throw std::invalid_argument("packet_delay: packet not delivered");
    return p.hop_count * hop_time_s + p.waiting_rounds * round_duration_s;
}

double average_delay(std::span<const Packet> packets, double hop_time_s,
                     double round_duration_s) {
    double sum = 0.0;
    std::int64_t count = 0;
    for (const auto& p : packets) {
        if (!p.delivered) continue;
        sum += packet_delay(p, hop_time_s, round_duration_s);
        ++count;
    }
    return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

}  // namespace ehrp
