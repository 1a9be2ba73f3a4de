#include "embb/qos.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace embb {

double embb_sinr(const SolutionPoint& point, int k, const Scenario& scenario, const SystemConfig& config) {
    if (!(point.embb_bandwidth_hz > 0.0)) throw std::domain_error("embb_sinr: eMBB bandwidth must be > 0");
    const auto& h = scenario.embb_channels.at(k);
    double interference = 0.0;
    for (int i = 0; i < static_cast<int>(point.embb_beamformers.size()); ++i)
        if (i != k) interference += std::norm(h.dot(point.embb_beamformers[i]));
    const double signal = std::norm(h.dot(point.embb_beamformers.at(k)));
    return signal / (interference + config.noise_psd_w_per_hz * point.embb_bandwidth_hz);
}

double urllc_snr(const SolutionPoint& point, int j, const Scenario& scenario, const SystemConfig& config) {
    const double b = point.urllc_bandwidths_hz.at(j);
    if (!(b > 0.0)) throw std::domain_error("urllc_snr: URLLC bandwidth must be > 0");
    const double signal = std::norm(scenario.urllc_channels.at(j).dot(point.urllc_beamformers.at(j)));
    return signal / (config.noise_psd_w_per_hz * b);
}

double embb_rate(double sinr, double bandwidth_hz) { return bandwidth_hz * std::log2(1.0 + sinr); }

double embb_target_sinr(double rate_bps, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0)) throw std::domain_error("embb_target_sinr: bandwidth must be > 0");
    return std::expm1(std::numbers::ln2 * rate_bps / bandwidth_hz);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {

// Acklam's rational approximation to the lower-tail normal quantile
// (relative error ~1e-9), used as the starting point for refinement.
double acklam_quantile(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: probability must lie in (0,1)");
    if (p == 0.5) return 0.0;
    // Work in the upper tail of whichever side is smaller so Q is evaluated
    // without cancellation, then mirror.
    const bool upper = p < 0.5;
    const double tail = upper ? p : 1.0 - p;
    double x = -acklam_quantile(tail);  // Q(x) = tail, x > 0
    for (int it = 0; it < 2; ++it) {
        // Halley step on Q(x) - tail = 0, Q'(x) = -phi(x).
        const double err = q_function(x) - tail;
        const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        const double u = -err / phi;
        x = x - u / (1.0 + 0.5 * x * u);
    }
    return upper ? x : -x;
}

double effective_bandwidth(double packet_bits, double frame_s, double violation_prob, double queue_delay_s,
                           double arrival_rate) {
    if (!(packet_bits > 0.0 && frame_s > 0.0 && violation_prob > 0.0 && violation_prob < 1.0 &&
          queue_delay_s > 0.0 && arrival_rate > 0.0))
        throw std::domain_error("effective_bandwidth: arguments must be positive and violation_prob < 1");
    const double log_inv = -std::log(violation_prob);
    const double frames_ratio = frame_s / queue_delay_s;
    return packet_bits * frames_ratio * log_inv / std::log1p(frames_ratio * log_inv / arrival_rate);
}

double effective_bandwidth(const SystemConfig& c) {
    return effective_bandwidth(c.packet_size_bits, c.frame_duration_s, c.packet_loss_q, c.queueing_delay_s(),
                               c.arrival_rate);
}

double urllc_snr_threshold(double eb_bits, double tx_s, double bandwidth_hz, double error_prob) {
    const double n = tx_s * bandwidth_hz;
    if (!(n > 0.0)) throw std::domain_error("urllc_snr_threshold: blocklength must be > 0");
    return std::expm1(eb_bits * std::numbers::ln2 / n + std::sqrt(1.0 / n) * q_inv(error_prob));
}

double channel_dispersion(double snr) { return 1.0 - 1.0 / ((1.0 + snr) * (1.0 + snr)); }

double urllc_rate_fbl(double snr, double tx_s, double bandwidth_hz, double error_prob) {
    const double n = tx_s * bandwidth_hz;
    if (!(n > 0.0)) throw std::domain_error("urllc_rate_fbl: blocklength must be > 0");
    const double v = channel_dispersion(snr);
    return n / std::numbers::ln2 * (std::log1p(snr) - std::sqrt(v / n) * q_inv(error_prob));
}

double urllc_rate_fbl_reported(double snr, double tx_s, double bandwidth_hz, double error_prob) {
    return std::max(0.0, urllc_rate_fbl(snr, tx_s, bandwidth_hz, error_prob));
}

UrllcQosTargets urllc_qos_targets(const SystemConfig& config, const std::vector<double>& bandwidths_hz) {
    UrllcQosTargets t;
    t.effective_bandwidth_bits = effective_bandwidth(config);
    for (double b : bandwidths_hz) {
        const double g = urllc_snr_threshold(t.effective_bandwidth_bits, config.tx_duration_s, b, config.packet_loss_c);
        t.snr_thresholds.push_back(g);
        t.dispersion.push_back(channel_dispersion(g));
    }
    return t;
}

}  // namespace embb
