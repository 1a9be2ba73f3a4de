#include "embb/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace embb {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "num_antennas",        "num_embb",          "num_urllc",
        "total_power_dbm",     "total_bandwidth_hz", "noise_psd_dbm_per_hz",
        "target_rate_bps",     "frame_duration_s",   "tx_duration_s",
        "max_delay_s",         "packet_loss",        "packet_loss_c",
        "packet_loss_q",       "arrival_rate",       "packet_size_bits",
        "pathloss_exponent",   "reference_distance_m", "min_distance_m",
        "max_distance_m",      "channel_gain_model", "split_mode",
        "embb_bandwidth_fraction", "uniform_urllc_bandwidth", "delta",
        "stop_threshold",      "admit_tolerance",    "max_outer_iters",
        "anchor_damping"};
    return keys;
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

SystemConfig config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known_keys().count(key)) throw std::invalid_argument("unknown config key: " + key);

    SystemConfig c;
    try {
        read(j, "num_antennas", c.num_antennas);
        read(j, "num_embb", c.num_embb);
        read(j, "num_urllc", c.num_urllc);
        if (j.contains("total_power_dbm")) c.total_power_w = dbm_to_watts(j["total_power_dbm"].get<double>());
        read(j, "total_bandwidth_hz", c.total_bandwidth_hz);
        if (j.contains("noise_psd_dbm_per_hz"))
            c.noise_psd_w_per_hz = dbm_to_watts(j["noise_psd_dbm_per_hz"].get<double>());
        read(j, "target_rate_bps", c.target_rate_bps);
        read(j, "frame_duration_s", c.frame_duration_s);
        read(j, "tx_duration_s", c.tx_duration_s);
        read(j, "max_delay_s", c.max_delay_s);
        read(j, "packet_loss", c.packet_loss);
        // The split defaults to half/half of whatever packet_loss says.
        c.packet_loss_c = c.packet_loss / 2.0;
        c.packet_loss_q = c.packet_loss / 2.0;
        read(j, "packet_loss_c", c.packet_loss_c);
        read(j, "packet_loss_q", c.packet_loss_q);
        read(j, "arrival_rate", c.arrival_rate);
        read(j, "packet_size_bits", c.packet_size_bits);
        read(j, "pathloss_exponent", c.pathloss_exponent);
        read(j, "reference_distance_m", c.reference_distance_m);
        read(j, "min_distance_m", c.min_distance_m);
        read(j, "max_distance_m", c.max_distance_m);
        if (j.contains("channel_gain_model")) {
            auto m = j["channel_gain_model"].get<std::string>();
            if (m == "power") c.gain_model = ChannelGainModel::Power;
            else if (m == "amplitude") c.gain_model = ChannelGainModel::Amplitude;
            else throw std::invalid_argument("channel_gain_model must be \"power\" or \"amplitude\"");
        }
        std::string mode = "fixed";
        read(j, "split_mode", mode);
        if (mode == "fixed") {
            FixedSplit fs;
            read(j, "embb_bandwidth_fraction", fs.embb_fraction);
            c.split = fs;
        } else if (mode == "free") {
            if (j.contains("embb_bandwidth_fraction"))
                throw std::invalid_argument("embb_bandwidth_fraction is only meaningful with split_mode \"fixed\"");
            c.split = FreeAllocation{};
        } else {
            throw std::invalid_argument("split_mode must be \"fixed\" or \"free\"");
        }
        read(j, "uniform_urllc_bandwidth", c.uniform_urllc_bandwidth);
        read(j, "delta", c.delta);
        read(j, "stop_threshold", c.stop_threshold);
        read(j, "admit_tolerance", c.admit_tolerance);
        read(j, "max_outer_iters", c.max_outer_iters);
        read(j, "anchor_damping", c.anchor_damping);
    } catch (const json::type_error& e) {
        throw std::invalid_argument(std::string("config type error: ") + e.what());
    }
    require_valid(c);
    return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

std::string config_to_json_text(const SystemConfig& c) {
    json j;
    j["num_antennas"] = c.num_antennas;
    j["num_embb"] = c.num_embb;
    j["num_urllc"] = c.num_urllc;
    j["total_power_dbm"] = watts_to_dbm(c.total_power_w);
    j["total_bandwidth_hz"] = c.total_bandwidth_hz;
    j["noise_psd_dbm_per_hz"] = watts_to_dbm(c.noise_psd_w_per_hz);
    j["target_rate_bps"] = c.target_rate_bps;
    j["frame_duration_s"] = c.frame_duration_s;
    j["tx_duration_s"] = c.tx_duration_s;
    j["max_delay_s"] = c.max_delay_s;
    j["packet_loss"] = c.packet_loss;
    j["packet_loss_c"] = c.packet_loss_c;
    j["packet_loss_q"] = c.packet_loss_q;
    j["arrival_rate"] = c.arrival_rate;
    j["packet_size_bits"] = c.packet_size_bits;
    j["pathloss_exponent"] = c.pathloss_exponent;
    j["reference_distance_m"] = c.reference_distance_m;
    j["min_distance_m"] = c.min_distance_m;
    j["max_distance_m"] = c.max_distance_m;
    j["channel_gain_model"] = c.gain_model == ChannelGainModel::Power ? "power" : "amplitude";
    if (const auto* fs = std::get_if<FixedSplit>(&c.split)) {
        j["split_mode"] = "fixed";
        j["embb_bandwidth_fraction"] = fs->embb_fraction;
    } else {
        j["split_mode"] = "free";
    }
    j["uniform_urllc_bandwidth"] = c.uniform_urllc_bandwidth;
    j["delta"] = c.delta;
    j["stop_threshold"] = c.stop_threshold;
    j["admit_tolerance"] = c.admit_tolerance;
    j["max_outer_iters"] = c.max_outer_iters;
    j["anchor_damping"] = c.anchor_damping;
    return j.dump(2);
}

}  // namespace embb
