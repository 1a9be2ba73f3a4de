#pragma once

// Closed-form QoS relations for eMBB and URLLC users.

#include <vector>

#include "embb/model.hpp"

namespace embb {

/// |h_k^H m_k|^2 / (sum_{i != k} |h_k^H m_i|^2 + N0 b^e)
double embb_sinr(const SolutionPoint& point, int k, const Scenario& scenario, const SystemConfig& config);

/// |h_j^H m_j|^2 / (N0 b_j^u)
double urllc_snr(const SolutionPoint& point, int j, const Scenario& scenario, const SystemConfig& config);

/// Shannon rate b log2(1 + sinr) in bits/s.
double embb_rate(double sinr, double bandwidth_hz);

/// 2^(rate/b) - 1, the SINR at which embb_rate hits `rate_bps`.
double embb_target_sinr(double rate_bps, double bandwidth_hz);

/// Standard normal upper tail Q(x) = P(Z > x).
double q_function(double x);

/// Inverse of q_function on (0,1).
double q_inv(double p);

/// Effective bandwidth (bits/frame) of a Poisson source with the given
/// queueing-delay bound and violation probability.
double effective_bandwidth(double packet_bits, double frame_s, double violation_prob, double queue_delay_s,
                           double arrival_rate);
double effective_bandwidth(const SystemConfig& config);

/// SNR needed so that the finite-blocklength rate (dispersion taken as 1)
/// reaches `eb_bits` per frame.
double urllc_snr_threshold(double eb_bits, double tx_s, double bandwidth_hz, double error_prob);

/// Finite-blocklength rate in bits/frame. Can be negative for tiny SNR.
double urllc_rate_fbl(double snr, double tx_s, double bandwidth_hz, double error_prob);

/// Same, clamped at zero. Reporting only.
double urllc_rate_fbl_reported(double snr, double tx_s, double bandwidth_hz, double error_prob);

/// Channel dispersion 1 - (1+snr)^-2.
double channel_dispersion(double snr);

struct UrllcQosTargets {
    double effective_bandwidth_bits = 0.0;
    std::vector<double> snr_thresholds;
    std::vector<double> dispersion;  // evaluated at each threshold
};

UrllcQosTargets urllc_qos_targets(const SystemConfig& config, const std::vector<double>& bandwidths_hz);

}  // namespace embb
