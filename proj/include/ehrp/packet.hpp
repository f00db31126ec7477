#pragma once

#include <cstdint>

#include "ehrp/node.hpp"

namespace ehrp {

/// One aggregated data unit: a grid's per-round message, created at its
/// cluster head. Exactly one of delivered/dropped is eventually set; until
/// then the packet is in flight (held in a grid queue in wait-for-sink mode).
struct Packet {
    std::int64_t id = -1;
    NodeId source = kNoNode;      // cluster head that formed the aggregate
    int origin_grid = -1;
    int created_round = -1;
    double size_bits = 0.0;
    int hop_count = 0;
    bool delivered = false;
    int delivered_round = -1;
    int waiting_rounds = 0;       // rounds held at a CH before service
    bool dropped = false;
};

}  // namespace ehrp
