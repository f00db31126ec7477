#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "ehrp/aco.hpp"
#include "ehrp/energy.hpp"
#include "ehrp/radio.hpp"

namespace ehrp {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Protocol { Ehrp, WaitForSink };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

/// Full scenario description. Defaults are the paper-scale operating point:
/// 900 nodes on 1000x1000 m², two sinks at 9 km/h, 4000-bit messages,
/// 200-bit control packets, 0.5 J batteries, 25 repetitions.
struct ScenarioConfig {
    int node_count = 900;
    double area_width = 1000.0;
    double area_height = 1000.0;
    int sink_count = 2;
    double sink_speed_kmh = 9.0;
    double message_size_bits = 4000.0;
    double control_packet_bits = 200.0;
    double initial_energy = 0.5;
    double comm_range = 100.0;
    int refresh_period = 10;
    Protocol protocol = Protocol::Ehrp;
    int repetitions = 25;
    std::uint64_t seed = 1;
    int max_rounds = 2000;
    int post_lifetime_rounds = 0;  // overrun past half-nodes-dead
    double hop_time_s = 0.01;
    double idle_drain = 0.0;       // joules per alive node per round
    bool lossless = false;         // force per-hop delivery probability to 1

    RadioParams radio{};
    PropagationParams prop{};
    aco::AcoParams aco{};
    bool aco_persist = false;      // carry pheromones across routing requests

    double sink_speed_mps() const { return sink_speed_kmh / 3.6; }
};

/// Applies one `key = value` assignment (dotted section keys). Throws
/// ConfigError naming the key on unknown keys or unparsable values. Shared
/// by the file parser and the sweep harness.
void apply_config_key(ScenarioConfig& cfg, const std::string& key,
                      const std::string& value);

/// Validates every field constraint; throws ConfigError naming the first
/// violated field.
void validate_config(const ScenarioConfig& cfg);

/// Parses config text: one `key = value` per line, '#' comments, blank lines
/// ignored, unknown keys rejected. Empty text yields the full default config.
ScenarioConfig parse_config(const std::string& text);

/// Loads and validates a config file.
ScenarioConfig load_config(const std::string& path);

}  // namespace ehrp
