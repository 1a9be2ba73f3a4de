#include "embb/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace embb {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

std::optional<double> SystemConfig::fixed_embb_bandwidth_hz() const {
    if (const auto* fs = std::get_if<FixedSplit>(&split)) return fs->embb_fraction * total_bandwidth_hz;
    return std::nullopt;
}

std::vector<ConfigViolation> validate_config(const SystemConfig& c) {
    std::vector<ConfigViolation> out;
    auto bad = [&](const char* field, std::string msg) { out.push_back({field, std::move(msg)}); };
    auto positive = [&](const char* field, double v) {
        if (!(std::isfinite(v) && v > 0.0)) bad(field, "must be finite and > 0");
    };

    if (c.num_antennas < 1) bad("num_antennas", "must be >= 1");
    if (c.num_embb < 0) bad("num_embb", "must be >= 0");
    if (c.num_urllc < 0) bad("num_urllc", "must be >= 0");

    positive("total_power_w", c.total_power_w);
    positive("total_bandwidth_hz", c.total_bandwidth_hz);
    positive("noise_psd_w_per_hz", c.noise_psd_w_per_hz);
    if (!(std::isfinite(c.target_rate_bps) && c.target_rate_bps >= 0.0))
        bad("target_rate_bps", "must be finite and >= 0");

    positive("frame_duration_s", c.frame_duration_s);
    positive("tx_duration_s", c.tx_duration_s);
    positive("max_delay_s", c.max_delay_s);
    if (c.tx_duration_s > c.frame_duration_s) bad("tx_duration_s", "must not exceed frame_duration_s");
    if (!(c.queueing_delay_s() > 0.0)) bad("max_delay_s", "queueing delay max_delay_s - 2*frame_duration_s must be > 0");

    if (!(c.packet_loss_c > 0.0 && c.packet_loss_c < 1.0)) bad("packet_loss_c", "must lie in (0,1)");
    if (!(c.packet_loss_q > 0.0 && c.packet_loss_q < 1.0)) bad("packet_loss_q", "must lie in (0,1)");
    if (!(c.packet_loss > 0.0 && c.packet_loss <= 1.0)) bad("packet_loss", "must lie in (0,1]");
    if (!(std::abs(c.packet_loss_c + c.packet_loss_q - c.packet_loss) <= 1e-9 * c.packet_loss))
        bad("packet_loss", "packet_loss_c + packet_loss_q must equal packet_loss");

    positive("arrival_rate", c.arrival_rate);
    positive("packet_size_bits", c.packet_size_bits);

    if (!(std::isfinite(c.pathloss_exponent) && c.pathloss_exponent >= 0.0))
        bad("pathloss_exponent", "must be finite and >= 0");
    positive("reference_distance_m", c.reference_distance_m);
    if (!(c.min_distance_m >= c.reference_distance_m)) bad("min_distance_m", "must be >= reference_distance_m");
    if (!(c.max_distance_m >= c.min_distance_m)) bad("max_distance_m", "must be >= min_distance_m");

    if (const auto* fs = std::get_if<FixedSplit>(&c.split)) {
        if (!(fs->embb_fraction > 0.0 && fs->embb_fraction < 1.0))
            bad("embb_bandwidth_fraction", "must lie in (0,1)");
    } else if (c.uniform_urllc_bandwidth) {
        bad("uniform_urllc_bandwidth", "requires a fixed bandwidth split");
    }

    positive("delta", c.delta);
    positive("stop_threshold", c.stop_threshold);
    positive("admit_tolerance", c.admit_tolerance);
    if (c.max_outer_iters < 1) bad("max_outer_iters", "must be >= 1");
    if (!(c.anchor_damping >= 0.0 && c.anchor_damping < 1.0)) bad("anchor_damping", "must lie in [0,1)");
    return out;
}

void require_valid(const SystemConfig& config) {
    auto v = validate_config(config);
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid config:";
    for (const auto& e : v) os << "\n  " << e.field << ": " << e.message;
    throw std::invalid_argument(os.str());
}

void require_consistent(const Scenario& s, const SystemConfig& c) {
    if (s.num_embb() != c.num_embb || s.num_urllc() != c.num_urllc)
        throw std::invalid_argument("scenario user counts do not match config");
    if (s.num_antennas != c.num_antennas) throw std::invalid_argument("scenario antenna count does not match config");
    auto check = [&](const ComplexVector& h) {
        if (h.size() != s.num_antennas) throw std::invalid_argument("channel vector has wrong length");
        if (!h.allFinite() || h.squaredNorm() == 0.0)
            throw std::invalid_argument("channel vectors must be finite and nonzero");
    };
    for (const auto& h : s.embb_channels) check(h);
    for (const auto& h : s.urllc_channels) check(h);
}

double SolutionPoint::total_power_w() const {
    double p = 0.0;
    for (const auto& m : embb_beamformers) p += m.squaredNorm();
    for (const auto& m : urllc_beamformers) p += m.squaredNorm();
    return p;
}

double SolutionPoint::total_bandwidth_hz() const {
    double b = embb_bandwidth_hz;
    for (double x : urllc_bandwidths_hz) b += x;
    return b;
}

}  // namespace embb
