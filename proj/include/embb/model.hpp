#pragma once

// Domain types shared by every module. All quantities are SI (W, Hz, s, bits);
// dBm and friends only appear at the config boundary.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace embb {

using ComplexVector = Eigen::VectorXcd;

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// eMBB users get a fixed fraction of the total bandwidth; URLLC users share the rest.
struct FixedSplit {
    double embb_fraction = 0.5;
};

/// eMBB bandwidth is an optimization variable alongside the URLLC bandwidths.
struct FreeAllocation {};

using SplitMode = std::variant<FixedSplit, FreeAllocation>;

/// How the distance-dependent factor (r/r0)^(-alpha) enters the channel.
///  Power:     |h|^2 scales with (r/r0)^(-alpha)
///  Amplitude: h itself scales with (r/r0)^(-alpha), i.e. |h|^2 with (r/r0)^(-2 alpha)
enum class ChannelGainModel { Power, Amplitude };

struct SystemConfig {
    int num_antennas = 4;
    int num_embb = 8;
    int num_urllc = 8;

    double total_power_w = dbm_to_watts(33.0);
    double total_bandwidth_hz = 200e6;
    double noise_psd_w_per_hz = dbm_to_watts(-83.98);
    double target_rate_bps = 200e6;

    double frame_duration_s = 0.1e-3;
    double tx_duration_s = 0.05e-3;
    double max_delay_s = 1e-3;
    double packet_loss = 1e-5;
    double packet_loss_c = 5e-6;  // transmission error
    double packet_loss_q = 5e-6;  // queueing-delay violation
    double arrival_rate = 0.2;    // packets per frame
    double packet_size_bits = 160.0;

    double pathloss_exponent = 2.0;
    double reference_distance_m = 1.0;
    double min_distance_m = 10.0;
    double max_distance_m = 100.0;
    ChannelGainModel gain_model = ChannelGainModel::Power;

    SplitMode split = FixedSplit{0.5};
    // URLLC users split their pool evenly instead of optimizing b_j (FixedSplit only).
    bool uniform_urllc_bandwidth = false;

    double delta = 1e-3;
    double stop_threshold = 1e-3;
    double admit_tolerance = 1e-4;
    int max_outer_iters = 30;
    // Fraction of the step toward the subproblem solution that is NOT taken. 0 = full update.
    double anchor_damping = 0.0;

    double queueing_delay_s() const { return max_delay_s - 2.0 * frame_duration_s; }
    bool fixed_split() const { return std::holds_alternative<FixedSplit>(split); }
    /// eMBB bandwidth under FixedSplit; nullopt under FreeAllocation.
    std::optional<double> fixed_embb_bandwidth_hz() const;
};

struct ConfigViolation {
    std::string field;
    std::string message;
};

/// Every violated invariant; empty means the config is usable.
std::vector<ConfigViolation> validate_config(const SystemConfig& config);

/// Throws std::invalid_argument listing all violations.
void require_valid(const SystemConfig& config);

struct Scenario {
    int num_antennas = 0;
    std::vector<ComplexVector> embb_channels;
    std::vector<ComplexVector> urllc_channels;
    std::vector<double> distances_m;  // eMBB users first, then URLLC users
    std::uint64_t seed = 0;

    int num_embb() const { return static_cast<int>(embb_channels.size()); }
    int num_urllc() const { return static_cast<int>(urllc_channels.size()); }
};

/// Checks channel shapes and finiteness, and counts against the config.
void require_consistent(const Scenario& scenario, const SystemConfig& config);

/// One SCP iterate in SI units.
struct SolutionPoint {
    std::vector<ComplexVector> embb_beamformers;   // sqrt(W)
    std::vector<ComplexVector> urllc_beamformers;  // sqrt(W)
    double embb_bandwidth_hz = 0.0;
    std::vector<double> urllc_bandwidths_hz;
    std::vector<double> interference_w;  // beta_k
    std::vector<double> slack;           // s_k, SINR units

    double total_power_w() const;
    double total_bandwidth_hz() const;
};

}  // namespace embb
