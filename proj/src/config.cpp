#include "ehrp/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace ehrp {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config key '" + key + "': trailing junk in '" + value + "'");
    if (!std::isfinite(v))
        throw ConfigError("config key '" + key + "': value must be finite");
    return v;
}

long parse_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse integer '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config key '" + key + "': trailing junk in '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse seed '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config key '" + key + "': trailing junk in '" + value + "'");
    return v;
}

void require(bool ok, const std::string& field, const std::string& constraint) {
    if (!ok) throw ConfigError("config field '" + field + "' violates: " + constraint);
}

}  // namespace

std::string to_string(Protocol p) {
    return p == Protocol::Ehrp ? "ehrp" : "wait_for_sink";
}

Protocol protocol_from_string(const std::string& s) {
    if (s == "ehrp") return Protocol::Ehrp;
    if (s == "wait_for_sink") return Protocol::WaitForSink;
    throw ConfigError("config key 'protocol': expected ehrp or wait_for_sink, got '" + s + "'");
}

void apply_config_key(ScenarioConfig& c, const std::string& key,
                      const std::string& value) {
    if (key == "node_count") c.node_count = static_cast<int>(parse_int(key, value));
    else if (key == "area_width") c.area_width = parse_double(key, value);
    else if (key == "area_height") c.area_height = parse_double(key, value);
    else if (key == "sink_count") c.sink_count = static_cast<int>(parse_int(key, value));
    else if (key == "sink_speed_kmh") c.sink_speed_kmh = parse_double(key, value);
    else if (key == "message_size_bits") c.message_size_bits = parse_double(key, value);
    else if (key == "control_packet_bits") c.control_packet_bits = parse_double(key, value);
    else if (key == "initial_energy") c.initial_energy = parse_double(key, value);
    else if (key == "comm_range") c.comm_range = parse_double(key, value);
    else if (key == "refresh_period") c.refresh_period = static_cast<int>(parse_int(key, value));
    else if (key == "protocol") c.protocol = protocol_from_string(value);
    else if (key == "repetitions") c.repetitions = static_cast<int>(parse_int(key, value));
    else if (key == "seed") c.seed = parse_u64(key, value);
    else if (key == "max_rounds") c.max_rounds = static_cast<int>(parse_int(key, value));
    else if (key == "post_lifetime_rounds") c.post_lifetime_rounds = static_cast<int>(parse_int(key, value));
    else if (key == "hop_time_s") c.hop_time_s = parse_double(key, value);
    else if (key == "idle_drain") c.idle_drain = parse_double(key, value);
    else if (key == "lossless") c.lossless = parse_bool(key, value);
    else if (key == "radio.e_elec") c.radio.e_elec = parse_double(key, value);
    else if (key == "radio.eps_freespace") c.radio.eps_freespace = parse_double(key, value);
    else if (key == "radio.eps_tworay") c.radio.eps_tworay = parse_double(key, value);
    else if (key == "radio.e_da") c.radio.e_da = parse_double(key, value);
    else if (key == "radio.d0") c.radio.d0 = parse_double(key, value);
    else if (key == "prop.tx_power_dbm") c.prop.tx_power_dbm = parse_double(key, value);
    else if (key == "prop.ref_loss_db") c.prop.ref_loss_db = parse_double(key, value);
    else if (key == "prop.path_loss_exponent") c.prop.path_loss_exponent = parse_double(key, value);
    else if (key == "prop.shadowing_sigma_db") c.prop.shadowing_sigma_db = parse_double(key, value);
    else if (key == "prop.sensitivity_dbm") c.prop.sensitivity_dbm = parse_double(key, value);
    else if (key == "prop.loss_slope_db") c.prop.loss_slope_db = parse_double(key, value);
    else if (key == "aco.alpha") c.aco.alpha = parse_double(key, value);
    else if (key == "aco.beta") c.aco.beta = parse_double(key, value);
    else if (key == "aco.rho") c.aco.rho = parse_double(key, value);
    else if (key == "aco.q") c.aco.q_deposit = parse_double(key, value);
    else if (key == "aco.ant_count") c.aco.ant_count = static_cast<int>(parse_int(key, value));
    else if (key == "aco.max_iterations") c.aco.max_iterations = static_cast<int>(parse_int(key, value));
    else if (key == "aco.tau_init") c.aco.tau_init = parse_double(key, value);
    else if (key == "aco.tau_min") c.aco.tau_min = parse_double(key, value);
    else if (key == "aco.persist_pheromones") c.aco_persist = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void validate_config(const ScenarioConfig& c) {
    require(c.node_count >= 5, "node_count", ">= 5");
    require(c.node_count % 5 == 0, "node_count", "divisible by 5 (five nodes per grid)");
    require(c.area_width > 0.0, "area_width", "> 0");
    require(c.area_height > 0.0, "area_height", "> 0");
    require(c.sink_count >= 1, "sink_count", ">= 1");
    require(c.sink_count <= c.node_count / 5, "sink_count", "<= grid count (node_count/5)");
    require(c.sink_speed_kmh > 0.0, "sink_speed_kmh", "> 0");
    require(c.message_size_bits > 0.0, "message_size_bits", "> 0");
    require(c.control_packet_bits > 0.0, "control_packet_bits", "> 0");
    require(c.initial_energy >= 0.0, "initial_energy", ">= 0");
    require(c.comm_range > 0.0, "comm_range", "> 0");
    require(c.refresh_period >= 1, "refresh_period", ">= 1");
    require(c.repetitions >= 1, "repetitions", ">= 1");
    require(c.max_rounds >= 1, "max_rounds", ">= 1");
    require(c.post_lifetime_rounds >= 0, "post_lifetime_rounds", ">= 0");
    require(c.hop_time_s > 0.0, "hop_time_s", "> 0");
    require(c.idle_drain >= 0.0, "idle_drain", ">= 0");

    require(c.radio.e_elec > 0.0, "radio.e_elec", "> 0");
    require(c.radio.eps_freespace > 0.0, "radio.eps_freespace", "> 0");
    require(c.radio.eps_tworay > 0.0, "radio.eps_tworay", "> 0");
    require(c.radio.e_da > 0.0, "radio.e_da", "> 0");
    require(c.radio.d0 > 0.0, "radio.d0", "> 0");
    const double d0_ref = RadioParams::crossover(c.radio.eps_freespace, c.radio.eps_tworay);
    require(std::abs(c.radio.d0 - d0_ref) <= 1e-3 * d0_ref, "radio.d0",
            "within 1e-3 relative of sqrt(eps_freespace/eps_tworay)");

    require(c.prop.path_loss_exponent >= 1.0, "prop.path_loss_exponent", ">= 1");
    require(c.prop.shadowing_sigma_db >= 0.0, "prop.shadowing_sigma_db", ">= 0");
    require(c.prop.sensitivity_dbm < c.prop.tx_power_dbm - c.prop.ref_loss_db,
            "prop.sensitivity_dbm", "< tx_power - ref_loss");
    require(c.prop.loss_slope_db > 0.0, "prop.loss_slope_db", "> 0");

    require(c.aco.alpha >= 0.0, "aco.alpha", ">= 0");
    require(c.aco.beta >= 0.0, "aco.beta", ">= 0");
    require(c.aco.rho >= 0.0 && c.aco.rho <= 1.0, "aco.rho", "in [0, 1]");
    require(c.aco.q_deposit > 0.0, "aco.q", "> 0");
    require(c.aco.ant_count >= 1, "aco.ant_count", ">= 1");
    require(c.aco.max_iterations >= 1, "aco.max_iterations", ">= 1");
    require(c.aco.tau_min > 0.0, "aco.tau_min", "> 0");
    require(c.aco.tau_init >= c.aco.tau_min, "aco.tau_init", ">= aco.tau_min");
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key or value");
        apply_config_key(cfg, key, value);
    }
    validate_config(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_config(buf.str());
}

}  // namespace ehrp
