// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "embb/admission.hpp"
#include "embb/harness.hpp"
#include "embb/linearize.hpp"
#include "embb/oracle.hpp"
#include "embb/qos.hpp"
#include "embb/subsolver.hpp"
#include "support.hpp"

using namespace embb;
using testing_support::random_cvec;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double q_inv_bisect(double p) {
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        (0.5 * std::erfc(mid / std::sqrt(2.0)) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SystemConfig default_case2() { return apply_case(SystemConfig{}, 2); }

// Shared by criteria 6 and 7.
std::vector<RunOutcome>& default_runs() {
    static std::vector<RunOutcome> runs = [] {
        std::vector<RunOutcome> r(50);
        const auto cfg = default_case2();
        parallel_for_jobs(50, 1, [&](int i) { r[i] = run_seed(cfg, static_cast<std::uint64_t>(i + 1)); });
        return r;
    }();
    return runs;
}

Verdict c1() {
    const SystemConfig c;
    const double u = std::log(1.0 / c.packet_loss_q) * c.frame_duration_s / c.queueing_delay_s();
    const double by_hand = c.packet_size_bits * u / std::log(1.0 + u / c.arrival_rate);
    const double eb = effective_bandwidth(c);
    return {std::abs(eb - 113.27) <= 0.05 && std::abs(eb - by_hand) <= 1e-9 * by_hand,
            fmt("E=%.6f bits/frame, independent %.6f, target 113.27 +- 0.05", eb, by_hand)};
}

Verdict c2() {
    const double q = q_inv(5e-6);
    const double ref = q_inv_bisect(5e-6);
    double worst = 0.0;
    for (double e = -7.0; e <= std::log10(0.5) + 1e-12; e += 0.1) {
        const double p = std::min(0.5, std::pow(10.0, e));
        worst = std::max(worst, std::abs(q_function(q_inv(p)) - p) / p);
    }
    worst = std::max(worst, std::abs(q_function(q_inv(0.5)) - 0.5) / 0.5);
    const bool ok = std::abs(q - 4.4172) <= 1e-3 && std::abs(q - ref) <= 1e-3 && worst <= 1e-6;
    return {ok, fmt("q_inv(5e-6)=%.6f, bisection %.6f, worst round-trip rel err %.2e", q, ref, worst)};
}

template <class F>
Eigen::VectorXd numeric_gradient(F f, const ComplexVector& m, double d) {
    const Eigen::Index T = m.size();
    Eigen::VectorXd g(2 * T + 1);
    const Eigen::VectorXd x = to_real(m);
    for (Eigen::Index i = 0; i < 2 * T; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
        Eigen::VectorXd xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(from_real(xp), d) - f(from_real(xm), d)) / (2 * h);
    }
    const double h = 1e-6 * d;
    g[2 * T] = (f(m, d + h) - f(m, d - h)) / (2 * h);
    return g;
}

double block_rel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index n = a.size() - 1;
    const double rm = (a.head(n) - b.head(n)).cwiseAbs().maxCoeff() / b.head(n).cwiseAbs().maxCoeff();
    const double rd = std::abs(a[n] - b[n]) / std::abs(b[n]);
    return std::max(rm, rd);
}

Verdict c3() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> U(0.2, 5.0), B(1e5, 5e7);
    const double N0 = 4e-12;
    double worst_g = 0.0, worst_z = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int T = 1 + trial % 6;
        const auto h = random_cvec(rng, T);
        const auto m = random_cvec(rng, T);
        const double beta = U(rng);
        const auto tg = quad_over_linear_tangent(h, m, beta);
        Eigen::VectorXd ag(2 * T + 1);
        ag << tg.grad_m, tg.grad_d;
        worst_g = std::max(worst_g, block_rel(ag, numeric_gradient([&](const ComplexVector& x, double d) {
                                                     return g_value(x, d, h);
                                                 }, m, beta)));
        const auto hz = random_cvec(rng, T, 1e-2);
        const auto mz = random_cvec(rng, T, 0.3);
        const double b = B(rng);
        const auto tz = z_tangent(hz, mz, b, N0);
        Eigen::VectorXd az(2 * T + 1);
        az << tz.grad_m, tz.grad_d;
        worst_z = std::max(worst_z, block_rel(az, numeric_gradient([&](const ComplexVector& x, double d) {
                                                     return z_value(x, d, hz, N0);
                                                 }, mz, b)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {worst_g <= 1e-5 && worst_z <= 1e-5 && secs < 1.0,
            fmt("worst rel err g %.2e, z %.2e over 100 anchors each, %.3f s", worst_g, worst_z, secs)};
}

Verdict c4() {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> U(0.01, 10.0);
    const double N0 = 4e-12;
    int violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int T = 1 + trial % 4;
        const auto h = random_cvec(rng, T);
        const auto m_hat = random_cvec(rng, T);
        const auto m = random_cvec(rng, T, U(rng));
        const double d_hat = U(rng), d = U(rng);
        const double g = g_value(m, d, h);
        if (g_lin(m, d, m_hat, d_hat, h) > g + 1e-12 * std::max(1.0, g)) ++violations;
        const double b_hat = 1e6 * U(rng), b = 1e6 * U(rng);
        const double z = z_value(m, b, h, N0);
        if (z_lin(m, b, m_hat, b_hat, h, N0) > z + 1e-12 * std::max(1.0, z)) ++violations;
    }
    return {violations == 0, fmt("%.0f violations in 10000 pairs each for g and z", violations)};
}

Verdict c5() {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg1 = testing_support::small_config(1, 0, 4);
    std::mt19937_64 rng(505);
    Scenario one;
    one.num_antennas = 4;
    one.embb_channels = {random_cvec(rng, 4, 0.05)};
    // Each solve re-anchors at the previous answer; the fixed point is the least-power beam.
    auto anchor1 = initialize(one, cfg1);
    SubproblemReport r1;
    for (int i = 0; i < 20; ++i) {
        r1 = solve_subproblem(one, cfg1, anchor1);
        if (r1.status != SubproblemStatus::Optimal) break;
        anchor1 = anchor_from(r1.solution);
    }
    const double gamma = embb_target_sinr(cfg1.target_rate_bps, *cfg1.fixed_embb_bandwidth_hz());
    const double closed = gamma * cfg1.noise_psd_w_per_hz * *cfg1.fixed_embb_bandwidth_hz() /
                          one.embb_channels[0].squaredNorm();
    const double rel = std::abs(r1.solution.total_power_w() - closed) / closed;
    bool ok = r1.status == SubproblemStatus::Optimal && rel <= 1e-4;

    int bad = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        auto cfg = testing_support::small_config(1 + i % 6, (i / 6) % 4, 4);
        if (i % 5 == 4) cfg.split = FreeAllocation{};
        const Scenario sc = generate_scenario(cfg, 5000 + i);
        const auto anchor = initialize(sc, cfg);
        const auto rep = solve_subproblem(sc, cfg, anchor);
        if (rep.status != SubproblemStatus::Optimal) {
            ++bad;
            continue;
        }
        const auto audit = check_feasibility(rep.solution, sc, cfg, anchor);
        worst = std::max(worst, -audit.min_slack());
        if (!audit.violated(1e-6).empty()) ++bad;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ok = ok && bad == 0 && secs < 30.0;
    return {ok, fmt("single-user power rel err %.2e; %.0f of 50 instances failed, worst violation %.2e", rel, bad,
                    worst) +
                    fmt(", %.1f s", secs)};
}

Verdict c6() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& runs = default_runs();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int converged = 0, ascents = 0;
    double iters = 0.0;
    for (const auto& r : runs) {
        if (!r.error.empty()) continue;
        double prev = r.result.initial_objective;
        for (const auto& t : r.result.trace) {
            if (t.objective > prev + 1e-9) ++ascents;
            prev = t.objective;
        }
        if (r.result.status == AdmissionStatus::Converged && r.result.outer_iterations <= 30) {
            ++converged;
            iters += r.result.outer_iterations;
        }
    }
    const bool ok = ascents == 0 && converged >= 48;
    return {ok, fmt("%.0f/50 converged, mean %.2f iterations, %.0f ascents", converged,
                    converged ? iters / converged : 0.0, ascents) +
                    fmt(", %.1f s", secs)};
}

Verdict c7() {
    const auto cfg = default_case2();
    const double eb = effective_bandwidth(cfg);
    int audited = 0, violations = 0;
    for (const auto& run : default_runs()) {
        const auto& r = run.result;
        if (!run.error.empty() || r.status != AdmissionStatus::Converged) continue;
        ++audited;
        const auto& x = r.final_point;
        const double gamma = embb_target_sinr(cfg.target_rate_bps, x.embb_bandwidth_hz);
        for (int k : r.admitted)
            if (r.per_user_sinr[k] < gamma - cfg.admit_tolerance) ++violations;
        for (std::size_t j = 0; j < r.per_user_snr.size(); ++j) {
            const double gu = urllc_snr_threshold(eb, cfg.tx_duration_s, x.urllc_bandwidths_hz[j], cfg.packet_loss_c);
            if (r.per_user_snr[j] < gu * (1.0 - 1e-6)) ++violations;
        }
        if ((x.total_power_w() - cfg.total_power_w) / cfg.total_power_w > 1e-6) ++violations;
        if ((x.total_bandwidth_hz() - cfg.total_bandwidth_hz) / cfg.total_bandwidth_hz > 1e-6) ++violations;
    }
    return {violations == 0 && audited > 0, fmt("%.0f converged runs audited, %.0f violations", audited, violations)};
}

Verdict c8() {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = testing_support::small_config(6, 3, 4);
    cfg.uniform_urllc_bandwidth = true;
    CompareSpec spec;
    spec.seeds = parse_seed_list("1..50");
    spec.workers = 1;
    const auto s = summarize(run_oracle_compare(cfg, spec));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double frac = s.fraction_within_one.value_or(0.0);
    return {s.compared == 50 && frac >= 0.8 && secs < 600.0,
            fmt("fraction within 1: %.2f, mean |diff| %.2f, %.1f s", frac, s.mean_abs_diff.value_or(NAN), secs)};
}

bool non_increasing(const std::vector<SweepMean>& means, double slack) {
    for (std::size_t i = 1; i < means.size(); ++i)
        if (!means[i].admitted_algo || !means[i - 1].admitted_algo ||
            *means[i].admitted_algo > *means[i - 1].admitted_algo + slack)
            return false;
    return true;
}

std::string means_text(const std::vector<SweepMean>& means) {
    std::string s;
    for (const auto& m : means) s += (s.empty() ? "" : " ") + format_number(m.admitted_algo.value_or(NAN));
    return s;
}

Verdict c9() {
    SweepSpec spec;
    spec.axis = SweepAxis::RTarget;
    spec.grid = {100, 150, 200, 250, 300};
    spec.seeds = parse_seed_list("1..20");
    spec.workers = 1;
    const auto t1 = run_sweep(apply_case(SystemConfig{}, 1), spec);
    const auto t2 = run_sweep(apply_case(SystemConfig{}, 2), spec);
    SweepSpec js = spec;
    js.axis = SweepAxis::JCount;
    js.grid = {2, 4, 6, 8};
    const auto tj = run_sweep(default_case2(), js);
    const bool ok = non_increasing(t1.means, 0.2) && non_increasing(t2.means, 0.2) && non_increasing(tj.means, 0.2) &&
                    t1.means.back().admitted_algo.value_or(-1) >= t2.means.back().admitted_algo.value_or(1e9);
    return {ok, "case1 [" + means_text(t1.means) + "], case2 [" + means_text(t2.means) + "], J [" +
                    means_text(tj.means) + "]"};
}

Verdict c10() {
    auto render = [] {
        std::ostringstream os;
        const auto cfg = default_case2();
        write_trace_csv(os, cfg, run_seed(cfg, 9));
        SweepSpec spec;
        spec.grid = {150, 250};
        spec.seeds = {1, 2};
        write_sweep_csv(os, cfg, spec, run_sweep(cfg, spec));
        auto small = testing_support::small_config(5, 2, 4);
        small.uniform_urllc_bandwidth = true;
        CompareSpec cs;
        cs.seeds = {1, 2, 3};
        write_compare_csv(os, small, cs, run_oracle_compare(small, cs));
        return os.str();
    };
    const std::string a = render(), b = render();
    return {a == b && !a.empty(), fmt("%.0f bytes per run, identical: ", static_cast<double>(a.size())) +
                                      (a == b ? "yes" : "no")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"effective bandwidth", c1},
        {"tail quantile", c2},
        {"gradient suite", c3},
        {"under-estimator suite", c4},
        {"subproblem correctness", c5},
        {"descent and convergence", c6},
        {"output feasibility audit", c7},
        {"near-optimality vs exhaustive search", c8},
        {"trend reproduction", c9},
        {"determinism", c10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        if (!v.pass) ++failed;
        std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
