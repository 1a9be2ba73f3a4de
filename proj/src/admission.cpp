#include "embb/admission.hpp"

#include <cmath>

#include "embb/qos.hpp"

namespace embb {

std::string to_string(AdmissionStatus s) {
    switch (s) {
        case AdmissionStatus::Converged: return "converged";
        case AdmissionStatus::MaxIters: return "max_iters";
        case AdmissionStatus::UrllcInfeasible: return "urllc_infeasible";
        case AdmissionStatus::SolverTrouble: return "solver_trouble";
    }
    return "unknown";
}

ExpansionPoint initialize(const Scenario& scenario, const SystemConfig& config) {
    require_consistent(scenario, config);
    const int K = scenario.num_embb();
    const int J = scenario.num_urllc();
    ExpansionPoint a;
    const double per_user = K + J > 0 ? config.total_power_w / (K + J) : 0.0;
    auto mrt = [&](const ComplexVector& h) -> ComplexVector {
        const double n = h.norm();
        if (n == 0.0) return ComplexVector::Zero(h.size());
        return h * (std::sqrt(per_user) / n);
    };
    for (const auto& h : scenario.embb_channels) a.embb_beamformers.push_back(mrt(h));
    for (const auto& h : scenario.urllc_channels) a.urllc_beamformers.push_back(mrt(h));

    double urllc_total;
    if (config.fixed_split()) {
        a.embb_bandwidth_hz = *config.fixed_embb_bandwidth_hz();
        urllc_total = config.total_bandwidth_hz - a.embb_bandwidth_hz;
    } else {
        a.embb_bandwidth_hz = 0.5 * config.total_bandwidth_hz;
        urllc_total = 0.5 * config.total_bandwidth_hz;
    }
    a.urllc_bandwidths_hz.assign(J, J > 0 ? urllc_total / J : 0.0);

    const double gamma = embb_target_sinr(config.target_rate_bps, a.embb_bandwidth_hz);
    for (int k = 0; k < K; ++k) {
        const auto& h = scenario.embb_channels[k];
        double beta = config.noise_psd_w_per_hz * a.embb_bandwidth_hz;
        for (int i = 0; i < K; ++i)
            if (i != k) beta += std::norm(h.dot(a.embb_beamformers[i]));
        a.interference_w.push_back(beta);
        const double sinr = std::norm(h.dot(a.embb_beamformers[k])) / beta;
        a.slack.push_back(std::max(0.0, gamma - sinr));
    }
    return a;
}

std::vector<int> count_admitted(const std::vector<double>& s, double tolerance) {
    std::vector<int> idx;
    for (int k = 0; k < static_cast<int>(s.size()); ++k)
        if (s[k] <= tolerance) idx.push_back(k);
    return idx;
}

namespace {

ExpansionPoint blend(const ExpansionPoint& old_anchor, const ExpansionPoint& fresh, double keep) {
    if (keep == 0.0) return fresh;
    ExpansionPoint a = fresh;
    const double w = 1.0 - keep;
    for (std::size_t k = 0; k < a.embb_beamformers.size(); ++k) {
        a.embb_beamformers[k] = w * fresh.embb_beamformers[k] + keep * old_anchor.embb_beamformers[k];
        a.interference_w[k] = w * fresh.interference_w[k] + keep * old_anchor.interference_w[k];
        a.slack[k] = w * fresh.slack[k] + keep * old_anchor.slack[k];
    }
    for (std::size_t j = 0; j < a.urllc_beamformers.size(); ++j) {
        a.urllc_beamformers[j] = w * fresh.urllc_beamformers[j] + keep * old_anchor.urllc_beamformers[j];
        a.urllc_bandwidths_hz[j] = w * fresh.urllc_bandwidths_hz[j] + keep * old_anchor.urllc_bandwidths_hz[j];
    }
    return a;
}

}  // namespace

AdmissionResult run_admission(const Scenario& scenario, const SystemConfig& config, const AdmissionOptions& options) {
    require_valid(config);
    AdmissionResult res;
    ExpansionPoint anchor = initialize(scenario, config);
    res.initial_objective = surrogate_objective(anchor.slack, config.delta);
    double f_prev = res.initial_objective;
    bool have_point = false;

    for (int p = 1; p <= config.max_outer_iters; ++p) {
        const auto rep = solve_subproblem(scenario, config, anchor, options.subproblem);
        if (rep.status != SubproblemStatus::Optimal) {
            if (rep.status == SubproblemStatus::Infeasible && p == 1) {
                res.status = AdmissionStatus::UrllcInfeasible;
                res.message = "URLLC constraints cannot be met within the power and bandwidth budgets";
            } else {
                res.status = AdmissionStatus::SolverTrouble;
                res.message = "subproblem " + std::to_string(p) + " ended with status " + to_string(rep.status);
            }
            res.outer_iterations = p - 1;
            if (!have_point) return res;
            break;
        }

        SolutionPoint x = rep.solution;
        double f = surrogate_objective(x.slack, config.delta);
        // The previous iterate is feasible for this subproblem, so a worse
        // answer is solver round-off; keep the previous iterate instead.
        if (have_point && f > f_prev) {
            x = res.final_point;
            f = f_prev;
        }
        const auto audit = check_feasibility(x, scenario, config, anchor);
        res.trace.push_back({p, f, static_cast<int>(count_admitted(x.slack, config.admit_tolerance).size()),
                             std::max(0.0, -audit.min_slack())});
        res.final_point = x;
        res.outer_iterations = p;
        have_point = true;

        if (std::abs(f - f_prev) < config.stop_threshold) {
            res.status = AdmissionStatus::Converged;
            break;
        }
        if (p == config.max_outer_iters) res.status = AdmissionStatus::MaxIters;
        f_prev = f;
        anchor = blend(anchor, anchor_from(x), config.anchor_damping);
    }

    const SolutionPoint& x = res.final_point;
    res.admitted = count_admitted(x.slack, config.admit_tolerance);
    for (int k = 0; k < scenario.num_embb(); ++k) res.per_user_sinr.push_back(embb_sinr(x, k, scenario, config));
    for (int j = 0; j < scenario.num_urllc(); ++j) res.per_user_snr.push_back(urllc_snr(x, j, scenario, config));
    return res;
}

}  // namespace embb
