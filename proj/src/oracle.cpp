#include "embb/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "embb/qos.hpp"

namespace embb {

std::string to_string(SubsetVerdict v) {
    switch (v) {
        case SubsetVerdict::Feasible: return "feasible";
        case SubsetVerdict::Infeasible: return "infeasible";
        case SubsetVerdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

MinPowerBeamforming min_power_beamforming(const std::vector<ComplexVector>& channels, double sinr_target,
                                          double noise_power_w, double power_cap_w, int max_iterations) {
    MinPowerBeamforming out;
    const int K = static_cast<int>(channels.size());
    if (K == 0) {
        out.converged = true;
        return out;
    }
    const Eigen::Index T = channels[0].size();
    // Work with unit noise; powers then come out in watts.
    std::vector<ComplexVector> h;
    for (const auto& c : channels) h.push_back(c / std::sqrt(noise_power_w));

    // Dual uplink powers: lambda_k = gamma / (h_k^H (I + sum_{i != k} lambda_i h_i h_i^H)^-1 h_k),
    // increasing monotonically from zero to the least fixed point.
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(K), next(K);
    auto covariance = [&](const Eigen::VectorXd& lam, int skip) {
        Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(T, T);
        for (int i = 0; i < K; ++i)
            if (i != skip) S.noalias() += lam[i] * h[i] * h[i].adjoint();
        return S;
    };
    for (out.iterations = 1; out.iterations <= max_iterations; ++out.iterations) {
        for (int k = 0; k < K; ++k) {
            const Eigen::MatrixXcd S = covariance(lambda, k);
            const double q = std::real(h[k].dot(S.ldlt().solve(h[k])));
            next[k] = sinr_target / q;
        }
        const double change = ((next - lambda).array().abs() / next.array()).maxCoeff();
        lambda = next;
        if (!(lambda.sum() <= power_cap_w)) {
            out.exceeded_cap = true;
            out.total_power = lambda.sum();
            return out;
        }
        if (change < 1e-14) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged) {
        out.total_power = lambda.sum();
        return out;
    }

    // Receive directions from the dual solution, then downlink powers from the
    // K linear SINR equalities.
    const Eigen::MatrixXcd S = covariance(lambda, -1);
    const auto ldlt = S.ldlt();
    std::vector<ComplexVector> u;
    for (int k = 0; k < K; ++k) {
        ComplexVector v = ldlt.solve(h[k]);
        u.push_back(v / v.norm());
    }
    Eigen::MatrixXd D(K, K);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < K; ++i) {
            const double g = std::norm(h[k].dot(u[i]));
            D(k, i) = i == k ? g / sinr_target : -g;
        }
    const Eigen::VectorXd p = D.partialPivLu().solve(Eigen::VectorXd::Ones(K));
    if (!p.allFinite() || p.minCoeff() < 0.0) {
        out.converged = false;
        out.total_power = lambda.sum();
        return out;
    }
    out.total_power = p.sum();
    for (int k = 0; k < K; ++k) out.beamformers.push_back(u[k] * std::sqrt(p[k]));
    return out;
}

SubsetCheck subset_feasible(const std::vector<int>& subset, const Scenario& scenario, const SystemConfig& config) {
    if (!config.fixed_split()) throw std::invalid_argument("subset_feasible: needs a fixed eMBB/URLLC split");
    require_consistent(scenario, config);
    const int K = scenario.num_embb();
    const int J = scenario.num_urllc();
    const int T = scenario.num_antennas;
    for (int k : subset)
        if (k < 0 || k >= K) throw std::invalid_argument("subset_feasible: user index out of range");

    SubsetCheck out;
    SolutionPoint& w = out.witness;
    w.embb_bandwidth_hz = *config.fixed_embb_bandwidth_hz();
    const double urllc_band = config.total_bandwidth_hz - w.embb_bandwidth_hz;
    const double N0 = config.noise_psd_w_per_hz;

    // URLLC users see no interference, so maximum-ratio transmission at the
    // threshold SNR is their cheapest option.
    const double eb = effective_bandwidth(config);
    for (int j = 0; j < J; ++j) {
        const double b = urllc_band / J;
        const auto& h = scenario.urllc_channels[j];
        const double gamma = urllc_snr_threshold(eb, config.tx_duration_s, b, config.packet_loss_c);
        const double p = gamma * N0 * b / h.squaredNorm();
        out.urllc_power_w += p;
        w.urllc_bandwidths_hz.push_back(b);
        w.urllc_beamformers.push_back(h * (std::sqrt(p) / h.norm()));
    }
    const double remaining = config.total_power_w - out.urllc_power_w;
    if (remaining < 0.0) {
        out.verdict = SubsetVerdict::Infeasible;
        out.embb_power_w = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    std::vector<ComplexVector> channels;
    for (int k : subset) channels.push_back(scenario.embb_channels[k]);
    const double gamma = embb_target_sinr(config.target_rate_bps, w.embb_bandwidth_hz);
    const auto mp = min_power_beamforming(channels, gamma, N0 * w.embb_bandwidth_hz, remaining);
    out.fixed_point_iterations = mp.iterations;
    out.embb_power_w = mp.total_power;
    if (mp.exceeded_cap) {
        out.verdict = SubsetVerdict::Infeasible;
        return out;
    }
    if (!mp.converged) {
        out.verdict = SubsetVerdict::Indeterminate;
        return out;
    }
    if (!(mp.total_power <= remaining)) {
        out.verdict = SubsetVerdict::Infeasible;
        return out;
    }

    w.embb_beamformers.assign(K, ComplexVector::Zero(T));
    for (std::size_t i = 0; i < subset.size(); ++i) w.embb_beamformers[subset[i]] = mp.beamformers[i];
    for (int k = 0; k < K; ++k) {
        const auto& h = scenario.embb_channels[k];
        double beta = N0 * w.embb_bandwidth_hz;
        for (int i = 0; i < K; ++i)
            if (i != k) beta += std::norm(h.dot(w.embb_beamformers[i]));
        w.interference_w.push_back(beta);
        const bool member = std::find(subset.begin(), subset.end(), k) != subset.end();
        w.slack.push_back(member ? 0.0 : std::max(0.0, gamma - std::norm(h.dot(w.embb_beamformers[k])) / beta));
    }
    out.verdict = SubsetVerdict::Feasible;
    return out;
}

namespace {

std::vector<int> members(std::uint32_t mask) {
    std::vector<int> v;
    for (int k = 0; mask; ++k, mask >>= 1)
        if (mask & 1u) v.push_back(k);
    return v;
}

}  // namespace

OracleResult exhaustive_max_admitted(const Scenario& scenario, const SystemConfig& config,
                                     const OracleOptions& options) {
    if (!config.fixed_split()) throw std::invalid_argument("exhaustive search needs a fixed eMBB/URLLC split");
    const int K = scenario.num_embb();
    if (K > options.max_users)
        throw std::invalid_argument("exhaustive search limited to " + std::to_string(options.max_users) +
                                    " eMBB users, got " + std::to_string(K));
    OracleResult res;
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::uint32_t banned = 0;  // users infeasible even alone
    if (options.prune && K > 0) {
        for (int k = 0; k < K; ++k) {
            const auto c = subset_feasible({k}, scenario, config);
            res.records.push_back({1u << k, c.verdict, c.verdict == SubsetVerdict::Feasible
                                                           ? c.embb_power_w + c.urllc_power_w
                                                           : nan});
            if (c.verdict == SubsetVerdict::Infeasible) banned |= 1u << k;
        }
    }

    for (int size = K; size >= 0; --size) {
        std::vector<std::uint32_t> masks;
        for (std::uint32_t m = 0; m < (1u << K); ++m)
            if (std::popcount(m) == size && !(m & banned)) masks.push_back(m);
        if (masks.empty()) continue;

        std::vector<SubsetCheck> checks(masks.size());
        const auto n = static_cast<std::int64_t>(masks.size());
#pragma omp parallel for schedule(dynamic) if (options.parallel)
        for (std::int64_t i = 0; i < n; ++i) checks[i] = subset_feasible(members(masks[i]), scenario, config);

        int best = -1;
        for (std::size_t i = 0; i < masks.size(); ++i) {
            const auto& c = checks[i];
            const double power = c.embb_power_w + c.urllc_power_w;
            if (!(options.prune && size == 1))
                res.records.push_back({masks[i], c.verdict, c.verdict == SubsetVerdict::Feasible ? power : nan});
            if (c.verdict == SubsetVerdict::Indeterminate) ++res.indeterminate;
            if (c.verdict != SubsetVerdict::Feasible) continue;
            const double best_power =
                best < 0 ? 0.0 : checks[best].embb_power_w + checks[best].urllc_power_w;
            if (best < 0 || power < best_power) best = static_cast<int>(i);
        }
        if (best >= 0) {
            res.size = size;
            res.subset = members(masks[best]);
            res.witness = checks[best].witness;
            res.witness_power_w = checks[best].embb_power_w + checks[best].urllc_power_w;
            return res;
        }
        if (size == 0) res.urllc_infeasible = true;
    }
    // Only reached when every subset, the empty one included, failed.
    res.urllc_infeasible = true;
    return res;
}

}  // namespace embb
