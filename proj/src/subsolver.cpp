#include "embb/subsolver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "embb/qos.hpp"
#include "subproblem_program.hpp"

namespace embb {

std::string to_string(SubproblemStatus s) {
    switch (s) {
        case SubproblemStatus::Optimal: return "optimal";
        case SubproblemStatus::Infeasible: return "infeasible";
        case SubproblemStatus::MaxIters: return "max_iters";
        case SubproblemStatus::NumericalTrouble: return "numerical_trouble";
    }
    return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
using detail::SubproblemProgram;

SubproblemStatus from_barrier(BarrierStatus s) {
    switch (s) {
        case BarrierStatus::Optimal: return SubproblemStatus::Optimal;
        case BarrierStatus::MaxIters: return SubproblemStatus::MaxIters;
        default: return SubproblemStatus::NumericalTrouble;
    }
}

}  // namespace

SubproblemReport solve_subproblem(const Scenario& scenario, const SystemConfig& config, const ExpansionPoint& anchor,
                                  const SubproblemOptions& options) {
    require_valid(config);
    require_consistent(scenario, config);
    require_valid(anchor);
    if (static_cast<int>(anchor.embb_beamformers.size()) != config.num_embb ||
        static_cast<int>(anchor.urllc_beamformers.size()) != config.num_urllc)
        throw std::invalid_argument("solve_subproblem: anchor size does not match config");

    SubproblemProgram program(scenario, config, anchor, options);
    SubproblemReport report;

    BarrierOptions bopt;
    bopt.mu = options.mu;
    bopt.max_newton_per_stage = options.max_newton;
    bopt.gap_abs = options.gap_tol;
    bopt.accept_gap_abs = options.gap_tol;
    bopt.accept_gap_rel = options.accept_gap_rel;

    // Phase 1.
    program.use_slack_objective();
    const Eigen::VectorXd x0 = program.initial_point(anchor);
    program.cap_slacks(x0);
    BarrierOptions p1opt = bopt;
    p1opt.gap_abs = 1e-10;
    const auto phase1 = find_strictly_feasible(program, x0, p1opt);
    report.phase1_sigma = phase1.best_sigma;
    report.inner_iterations += phase1.solve.newton_steps;
    report.log = phase1.solve.stages;
    if (!phase1.feasible) {
        report.status = SubproblemStatus::Infeasible;
        report.solution = program.to_solution(phase1.x);
        report.max_constraint_violation = std::max(0.0, phase1.best_sigma);
        return report;
    }

    program.use_slack_objective();

    // Phase 2: weighted slack.
    const double m = program.num_constraints();
    bopt.initial_t = m / std::max(program.objective(phase1.x), 1e-6);
    const auto main = barrier_solve(program, phase1.x, bopt);
    report.inner_iterations += main.newton_steps;
    report.log.insert(report.log.end(), main.stages.begin(), main.stages.end());
    report.kkt_residual = main.kkt_residual;
    report.duality_gap = main.duality_gap;
    report.status = from_barrier(main.status);
    if (report.status == SubproblemStatus::Optimal && main.kkt_residual > options.kkt_tol)
        report.status = SubproblemStatus::NumericalTrouble;
    Eigen::VectorXd x = main.x;

    // Selection pass: least power among points within `selection_slack` of the optimum.
    if (options.min_power_selection && report.status == SubproblemStatus::Optimal) {
        program.use_power_objective(program.weighted_slack(x) + options.selection_slack);
        BarrierOptions sopt = bopt;
        sopt.gap_abs = 1e-14;
        sopt.gap_rel = 1e-9;
        sopt.initial_t = program.num_constraints() / std::max(program.scaled_power(x), 1e-9);
        Eigen::VectorXd fcheck;
        if (program.constraint_values(x, fcheck) && fcheck.maxCoeff() < 0.0) {
            const auto sel = barrier_solve(program, x, sopt);
            report.inner_iterations += sel.newton_steps;
            report.log.insert(report.log.end(), sel.stages.begin(), sel.stages.end());
            x = sel.x;
        }
        program.use_slack_objective();
        report.duality_gap += options.selection_slack;
    }

    Eigen::VectorXd f;
    program.constraint_values(x, f);
    report.max_constraint_violation = std::max(0.0, f.maxCoeff());
    report.objective = program.weighted_slack(x);
    report.solution = program.to_solution(x);
    return report;
}

// ---------------------------------------------------------------------------

double FeasibilityReport::min_slack() const {
    double m = kInf;
    for (const auto& e : entries) m = std::min(m, e.slack);
    return m;
}

std::vector<ConstraintSlack> FeasibilityReport::violated(double tol) const {
    std::vector<ConstraintSlack> out;
    for (const auto& e : entries)
        if (!(e.slack >= -tol)) out.push_back(e);
    return out;
}

double FeasibilityReport::worst(const std::string& prefix) const {
    double w = 0.0;
    for (const auto& e : entries)
        if (e.name.rfind(prefix, 0) == 0) w = std::max(w, -e.slack);
    return w;
}

FeasibilityReport check_feasibility(const SolutionPoint& p, const Scenario& sc, const SystemConfig& cfg,
                                    const ExpansionPoint& anchor) {
    FeasibilityReport r;
    const double N0 = cfg.noise_psd_w_per_hz;
    const double noise_full = N0 * cfg.total_bandwidth_hz;
    const int K = sc.num_embb();
    const int J = sc.num_urllc();
    const double gamma_e = p.embb_bandwidth_hz > 0.0 ? embb_target_sinr(cfg.target_rate_bps, p.embb_bandwidth_hz) : kInf;

    for (int k = 0; k < K; ++k) {
        const double beta = p.interference_w.at(k);
        const double s = p.slack.at(k);
        const auto& h = sc.embb_channels[k];
        const auto& m = p.embb_beamformers.at(k);
        const double g_sur = g_lin(m, beta, anchor.embb_beamformers.at(k), anchor.interference_w.at(k), h);
        const double g_true = beta > 0.0 ? g_value(m, beta, h) : 0.0;
        r.entries.push_back({"surrogate_sinr", k, -(gamma_e - s - g_sur)});
        r.entries.push_back({"relaxed_sinr", k, -(gamma_e - s - g_true)});
        double interf = 0.0;
        for (int i = 0; i < K; ++i)
            if (i != k) interf += std::norm(h.dot(p.embb_beamformers.at(i)));
        r.entries.push_back({"interference", k, -(interf + N0 * p.embb_bandwidth_hz - beta) / noise_full});
        r.entries.push_back({"slack_nonneg", k, s});
    }
    const double eb = effective_bandwidth(cfg);
    for (int j = 0; j < J; ++j) {
        const double b = p.urllc_bandwidths_hz.at(j);
        const auto& h = sc.urllc_channels[j];
        const auto& m = p.urllc_beamformers.at(j);
        const double gamma_u = b > 0.0 ? urllc_snr_threshold(eb, cfg.tx_duration_s, b, cfg.packet_loss_c) : kInf;
        const double z_sur =
            b > 0.0 ? z_lin(m, b, anchor.urllc_beamformers.at(j), anchor.urllc_bandwidths_hz.at(j), h, N0) : 0.0;
        const double z_true = b > 0.0 ? z_value(m, b, h, N0) : 0.0;
        r.entries.push_back({"surrogate_snr", j, -(gamma_u - z_sur)});
        r.entries.push_back({"urllc_snr", j, -(gamma_u - z_true)});
        r.entries.push_back({"urllc_bandwidth_nonneg", j, b / cfg.total_bandwidth_hz});
    }
    r.entries.push_back({"bandwidth", -1, (cfg.total_bandwidth_hz - p.total_bandwidth_hz()) / cfg.total_bandwidth_hz});
    r.entries.push_back({"power", -1, (cfg.total_power_w - p.total_power_w()) / cfg.total_power_w});
    r.entries.push_back({"embb_bandwidth_nonneg", -1, p.embb_bandwidth_hz / cfg.total_bandwidth_hz});
    return r;
}

void write_debug_dump(std::ostream& os, const Scenario& sc, const SystemConfig& cfg, const ExpansionPoint& anchor,
                      const SubproblemReport& rep) {
    os << "subproblem:\n";
    os << "  embb_users: " << sc.num_embb() << "\n  urllc_users: " << sc.num_urllc()
       << "\n  antennas: " << sc.num_antennas << "\n  split: " << (cfg.fixed_split() ? "fixed" : "free")
       << "\n  uniform_urllc_bandwidth: " << (cfg.uniform_urllc_bandwidth ? "true" : "false") << '\n';
    os << "anchor:\n";
    for (int k = 0; k < sc.num_embb(); ++k)
        os << "  embb[" << k << "]: power_w=" << anchor.embb_beamformers[k].squaredNorm()
           << " interference_w=" << anchor.interference_w[k] << " slack=" << anchor.slack[k] << '\n';
    for (int j = 0; j < sc.num_urllc(); ++j)
        os << "  urllc[" << j << "]: power_w=" << anchor.urllc_beamformers[j].squaredNorm()
           << " bandwidth_hz=" << anchor.urllc_bandwidths_hz[j] << '\n';
    os << "result:\n  status: " << to_string(rep.status) << "\n  objective: " << rep.objective
       << "\n  max_violation: " << rep.max_constraint_violation << "\n  kkt_residual: " << rep.kkt_residual
       << "\n  duality_gap: " << rep.duality_gap << "\n  phase1_sigma: " << rep.phase1_sigma
       << "\n  newton_steps: " << rep.inner_iterations << '\n';
    os << "stages:\n";
    for (const auto& s : rep.log)
        os << "  - t=" << s.t << " newton=" << s.newton_steps << " objective=" << s.objective
           << " decrement=" << s.decrement << '\n';
}

}  // namespace embb
