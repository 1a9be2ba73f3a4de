#include <doctest.h>

#include <bit>
#include <random>

#include "embb/admission.hpp"
#include "embb/oracle.hpp"
#include "embb/qos.hpp"
#include "support.hpp"

using namespace embb;

namespace {

std::vector<int> members(std::uint32_t mask) {
    std::vector<int> v;
    for (int k = 0; k < 32; ++k)
        if (mask & (1u << k)) v.push_back(k);
    return v;
}

// Least power achieving every SINR target with fixed unit directions u:
// solve the K linear equalities; nullopt when some power would be negative.
std::optional<double> power_for_directions(const std::vector<ComplexVector>& h, const std::vector<ComplexVector>& u,
                                           double gamma, double noise) {
    const int K = static_cast<int>(h.size());
    Eigen::MatrixXd D(K, K);
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < K; ++i) {
            const double g = std::norm(h[k].dot(u[i]));
            D(k, i) = i == k ? g / gamma : -g;
        }
    const Eigen::VectorXd p = D.partialPivLu().solve(Eigen::VectorXd::Constant(K, noise));
    if (!p.allFinite() || p.minCoeff() < 0.0) return std::nullopt;
    return p.sum();
}

double embb_noise(const SystemConfig& cfg) { return cfg.noise_psd_w_per_hz * *cfg.fixed_embb_bandwidth_hz(); }

}  // namespace

TEST_CASE("one user needs gamma N0 b / |h|^2") {
    std::mt19937_64 rng(1);
    const ComplexVector h = testing_support::random_cvec(rng, 4, 0.1);
    const auto r = min_power_beamforming({h}, 3.0, 2e-4, 10.0);
    REQUIRE(r.converged);
    CHECK(r.total_power == doctest::Approx(3.0 * 2e-4 / h.squaredNorm()).epsilon(1e-12));
    CHECK(std::abs(h.dot(r.beamformers[0])) == doctest::Approx(h.norm() * r.beamformers[0].norm()).epsilon(1e-12));
}

TEST_CASE("no other beam direction choice does better") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int K = 2 + trial % 3;
        std::vector<ComplexVector> h;
        for (int k = 0; k < K; ++k) h.push_back(testing_support::random_cvec(rng, 4, 0.1));
        const double gamma = 1.0 + trial % 4;
        const auto opt = min_power_beamforming(h, gamma, 1e-4, 1e6);
        REQUIRE(opt.converged);

        // Witness meets every target with equality.
        for (int k = 0; k < K; ++k) {
            double interf = 1e-4;
            for (int i = 0; i < K; ++i)
                if (i != k) interf += std::norm(h[k].dot(opt.beamformers[i]));
            CHECK(std::norm(h[k].dot(opt.beamformers[k])) / interf == doctest::Approx(gamma).epsilon(1e-8));
        }
        double p = 0.0;
        for (const auto& m : opt.beamformers) p += m.squaredNorm();
        CHECK(p == doctest::Approx(opt.total_power).epsilon(1e-10));

        // Zero-forcing and random perturbations of the optimal directions.
        Eigen::MatrixXcd H(K, 4);
        for (int k = 0; k < K; ++k) H.row(k) = h[k].adjoint();
        const Eigen::MatrixXcd Z = H.completeOrthogonalDecomposition().pseudoInverse();
        std::vector<ComplexVector> zf;
        for (int k = 0; k < K; ++k) zf.push_back(Z.col(k) / Z.col(k).norm());
        const auto pz = power_for_directions(h, zf, gamma, 1e-4);
        REQUIRE(pz.has_value());
        CHECK(*pz >= opt.total_power * (1.0 - 1e-9));
        for (int r = 0; r < 50; ++r) {
            std::vector<ComplexVector> u;
            for (int k = 0; k < K; ++k) {
                ComplexVector v = opt.beamformers[k] / opt.beamformers[k].norm() +
                                  testing_support::random_cvec(rng, 4, 0.05);
                u.push_back(v / v.norm());
            }
            const auto pr = power_for_directions(h, u, gamma, 1e-4);
            if (pr) CHECK(*pr >= opt.total_power * (1.0 - 1e-9));
        }
    }
}

TEST_CASE("aligned users with a high target cannot be served") {
    ComplexVector h(2);
    h << 1.0, 0.0;
    // Same channel twice: SINR of both at most 1 when powers are equal, so a target of 2 is impossible.
    const auto r = min_power_beamforming({h, h}, 2.0, 1e-4, 1e9);
    CHECK(!r.converged);
}

TEST_CASE("subset witness is feasible in every constraint") {
    auto cfg = testing_support::small_config(5, 2, 4);
    cfg.uniform_urllc_bandwidth = true;
    const Scenario sc = generate_scenario(cfg, 3);
    const double gamma = embb_target_sinr(cfg.target_rate_bps, *cfg.fixed_embb_bandwidth_hz());
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
        const auto sub = members(mask);
        const auto c = subset_feasible(sub, sc, cfg);
        if (c.verdict != SubsetVerdict::Feasible) continue;
        const auto& w = c.witness;
        CHECK(w.total_power_w() <= cfg.total_power_w * (1.0 + 1e-12));
        CHECK(w.total_power_w() == doctest::Approx(c.embb_power_w + c.urllc_power_w).epsilon(1e-9));
        for (int k : sub) CHECK(embb_sinr(w, k, sc, cfg) >= gamma * (1.0 - 1e-8));
        for (int j = 0; j < 2; ++j) {
            const double gu = urllc_snr_threshold(effective_bandwidth(cfg), cfg.tx_duration_s,
                                                  w.urllc_bandwidths_hz[j], cfg.packet_loss_c);
            CHECK(urllc_snr(w, j, sc, cfg) == doctest::Approx(gu).epsilon(1e-10));
        }
    }
}

TEST_CASE("empty subset costs only the URLLC power") {
    auto cfg = testing_support::small_config(3, 2, 4);
    const Scenario sc = generate_scenario(cfg, 4);
    const auto c = subset_feasible({}, sc, cfg);
    REQUIRE(c.verdict == SubsetVerdict::Feasible);
    CHECK(c.embb_power_w == 0.0);
    const double b = 50e6;
    const double gu = urllc_snr_threshold(effective_bandwidth(cfg), cfg.tx_duration_s, b, cfg.packet_loss_c);
    double expected = 0.0;
    for (const auto& h : sc.urllc_channels) expected += gu * cfg.noise_psd_w_per_hz * b / h.squaredNorm();
    CHECK(c.urllc_power_w == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("URLLC users alone over budget") {
    auto cfg = testing_support::small_config(3, 2, 4);
    cfg.total_power_w = 1e-10;
    const Scenario sc = generate_scenario(cfg, 4);
    CHECK(subset_feasible({}, sc, cfg).verdict == SubsetVerdict::Infeasible);
    const auto r = exhaustive_max_admitted(sc, cfg);
    CHECK(r.urllc_infeasible);
    CHECK(r.size == 0);
    CHECK(r.subset.empty());
}

TEST_CASE("feasibility is closed under removing users and power is monotone") {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto cfg = testing_support::small_config(6, 2, 4);
        const Scenario sc = generate_scenario(cfg, seed);
        std::vector<SubsetCheck> all;
        for (std::uint32_t mask = 0; mask < 64; ++mask) all.push_back(subset_feasible(members(mask), sc, cfg));
        for (std::uint32_t mask = 0; mask < 64; ++mask) {
            if (all[mask].verdict != SubsetVerdict::Feasible) continue;
            for (int k = 0; k < 6; ++k) {
                if (!(mask & (1u << k))) continue;
                const auto& smaller = all[mask & ~(1u << k)];
                CAPTURE(mask);
                CHECK(smaller.verdict == SubsetVerdict::Feasible);
                CHECK(smaller.embb_power_w <= all[mask].embb_power_w * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("pruned, naive, serial and parallel searches agree") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto cfg = testing_support::small_config(6, 3, 4);
        cfg.target_rate_bps = seed % 2 ? 200e6 : 400e6;
        const Scenario sc = generate_scenario(cfg, seed);
        const auto a = exhaustive_max_admitted(sc, cfg, {true, true, 12});
        const auto b = exhaustive_max_admitted(sc, cfg, {false, true, 12});
        const auto c = exhaustive_max_admitted(sc, cfg, {true, false, 12});
        CAPTURE(seed);
        CHECK(a.size == b.size);
        CHECK(a.subset == b.subset);
        CHECK(a.subset == c.subset);
        CHECK(a.witness_power_w == c.witness_power_w);

        // Naive scan over every mask.
        int best = -1;
        double best_power = 0.0;
        std::uint32_t best_mask = 0;
        for (std::uint32_t mask = 0; mask < 64; ++mask) {
            const auto chk = subset_feasible(members(mask), sc, cfg);
            if (chk.verdict != SubsetVerdict::Feasible) continue;
            const int n = std::popcount(mask);
            const double p = chk.embb_power_w + chk.urllc_power_w;
            if (n > best || (n == best && p < best_power)) {
                best = n;
                best_power = p;
                best_mask = mask;
            }
        }
        CHECK(a.size == best);
        CHECK(a.subset == members(best_mask));
        CHECK(a.indeterminate == 0);
    }
}

TEST_CASE("search guards") {
    auto cfg = testing_support::small_config(3, 1, 4);
    const Scenario sc = generate_scenario(cfg, 1);
    CHECK_THROWS_AS(subset_feasible({3}, sc, cfg), std::invalid_argument);
    CHECK_THROWS_AS(exhaustive_max_admitted(sc, cfg, {true, true, 2}), std::invalid_argument);
    auto free_cfg = cfg;
    free_cfg.split = FreeAllocation{};
    CHECK_THROWS_AS(exhaustive_max_admitted(sc, free_cfg), std::invalid_argument);

    auto none = testing_support::small_config(0, 2, 4);
    const auto r = exhaustive_max_admitted(generate_scenario(none, 2), none);
    CHECK(r.size == 0);
    CHECK(!r.urllc_infeasible);
}

TEST_CASE("the search admits at least as many users as the iterative method") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto cfg = testing_support::small_config(5, 2, 4);
        cfg.uniform_urllc_bandwidth = true;
        const Scenario sc = generate_scenario(cfg, seed);
        const auto algo = run_admission(sc, cfg);
        const auto best = exhaustive_max_admitted(sc, cfg);
        CAPTURE(seed);
        REQUIRE(algo.status == AdmissionStatus::Converged);
        CHECK(best.size >= static_cast<int>(algo.admitted.size()));
    }
}
