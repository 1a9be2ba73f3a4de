#pragma once

// Scaled barrier form of the SCP subproblem. Internal to the library; the
// tests include it to check derivatives against finite differences.

#include <cmath>
#include <numbers>
#include <vector>

#include "embb/barrier.hpp"
#include "embb/linearize.hpp"
#include "embb/model.hpp"
#include "embb/qos.hpp"
#include "embb/subsolver.hpp"

namespace embb::detail {

// Real 2 x 2T map R with R [Re m; Im m] = [Re h^H m; Im h^H m], so that
// |h^H m|^2 = |R x|^2, its gradient is 2 R^T R x and its Hessian 2 R^T R.
using Projection = Eigen::Matrix<double, 2, Eigen::Dynamic>;

inline Projection real_projection(const ComplexVector& h) {
    const Eigen::Index T = h.size();
    Projection R(2, 2 * T);
    R.row(0) << h.real().transpose(), h.imag().transpose();
    R.row(1) << -h.imag().transpose(), h.real().transpose();
    return R;
}

struct SparseGrad {
    std::vector<int> idx;
    std::vector<double> val;
    void clear() {
        idx.clear();
        val.clear();
    }
    void push(int i, double v) {
        idx.push_back(i);
        val.push_back(v);
    }
};

inline void add_outer(Eigen::Ref<Eigen::MatrixXd> H, const SparseGrad& g, double w) {
    if (w == 0.0) return;
    const std::size_t n = g.idx.size();
    for (std::size_t a = 0; a < n; ++a) {
        const double wa = w * g.val[a];
        for (std::size_t b = 0; b < n; ++b) H(g.idx[a], g.idx[b]) += wa * g.val[b];
    }
}

enum class Objective { WeightedSlack, Power };

// Scaled problem data. Powers by P, bandwidths by B, interference by N0 B,
// channels by sqrt(P / (N0 B)) so that every ratio is an SNR.
class SubproblemProgram final : public ConvexProgram {
public:
    SubproblemProgram(const Scenario& sc, const SystemConfig& cfg, const ExpansionPoint& anchor,
                      const SubproblemOptions& opt)
        : K_(sc.num_embb()), J_(sc.num_urllc()), T_(sc.num_antennas) {
        power_ = cfg.total_power_w;
        bandwidth_ = cfg.total_bandwidth_hz;
        noise_ = cfg.noise_psd_w_per_hz * cfg.total_bandwidth_hz;
        const double chan_scale = std::sqrt(power_ / noise_);
        for (const auto& h : sc.embb_channels) he_.push_back(h * chan_scale);
        for (const auto& h : sc.urllc_channels) hu_.push_back(h * chan_scale);

        free_be_ = !cfg.fixed_split();
        uniform_bu_ = cfg.uniform_urllc_bandwidth;
        rate_ratio_ = cfg.target_rate_bps / bandwidth_;
        if (!free_be_) {
            be_fixed_ = *cfg.fixed_embb_bandwidth_hz() / bandwidth_;
            gamma_e_fixed_ = std::expm1(std::numbers::ln2 * rate_ratio_ / be_fixed_);
        }
        if (uniform_bu_ && J_ > 0) bu_fixed_ = (1.0 - be_fixed_) / J_;
        bmin_ = opt.min_bandwidth_hz / bandwidth_;

        const double n_sym = cfg.tx_duration_s * bandwidth_;
        urllc_a_ = effective_bandwidth(cfg) * std::numbers::ln2 / n_sym;
        urllc_c_ = q_inv(cfg.packet_loss_c) / std::sqrt(n_sym);

        for (int k = 0; k < K_; ++k) {
            weights_.push_back(1.0 / (anchor.slack.at(k) + cfg.delta));
            const ComplexVector m_hat = anchor.embb_beamformers.at(k) / std::sqrt(power_);
            auto tan = quad_over_linear_tangent(he_[k], m_hat, anchor.interference_w.at(k) / noise_);
            g_tan_.push_back(tan);
            g_const_.push_back(tan.value - tan.grad_m.dot(to_real(m_hat)) - tan.grad_d * tan.anchor_d);
            proj_.push_back(real_projection(he_[k]));
            gram_.push_back(proj_.back().transpose() * proj_.back());
            beta_cap_.push_back(1e3 * (he_[k].squaredNorm() + 1.0));
        }
        for (int j = 0; j < J_; ++j) {
            const ComplexVector m_hat = anchor.urllc_beamformers.at(j) / std::sqrt(power_);
            auto tan = quad_over_linear_tangent(hu_[j], m_hat, anchor.urllc_bandwidths_hz.at(j) / bandwidth_);
            z_tan_.push_back(tan);
            z_const_.push_back(tan.value - tan.grad_m.dot(to_real(m_hat)) - tan.grad_d * tan.anchor_d);
        }

        // Layout: s | beta | m^e | m^u | b^u | b^e
        off_beta_ = K_;
        off_me_ = 2 * K_;
        off_mu_ = off_me_ + 2 * T_ * K_;
        off_bu_ = off_mu_ + 2 * T_ * J_;
        off_be_ = off_bu_ + (uniform_bu_ ? 0 : J_);
        n_ = off_be_ + (free_be_ ? 1 : 0);

        has_bandwidth_row_ = free_be_ || (!uniform_bu_ && J_ > 0);
        c_sinr_ = 0;
        c_interf_ = K_;
        c_urllc_ = 2 * K_;
        c_power_ = 2 * K_ + J_;
        c_band_ = c_power_ + 1;
        c_slack_ = c_band_ + (has_bandwidth_row_ ? 1 : 0);
        c_bu_ = c_slack_ + K_;
        c_be_ = c_bu_ + (uniform_bu_ ? 0 : J_);
        c_cap_ = c_be_ + (free_be_ ? 1 : 0);
        c_bound_ = c_cap_ + K_;
        m_base_ = c_bound_;
    }

    // --- mode switches -------------------------------------------------
    void use_slack_objective() {
        objective_ = Objective::WeightedSlack;
        bound_active_ = false;
        slack_caps_.clear();
    }
    // Phase 1 only: without an objective nothing stops s from running off.
    void cap_slacks(const Eigen::VectorXd& x0) {
        slack_caps_.resize(K_);
        for (int k = 0; k < K_; ++k) slack_caps_[k] = x0[k] + 1e3 * (1.0 + std::abs(x0[k]));
    }
    void use_power_objective(double slack_bound) {
        objective_ = Objective::Power;
        bound_active_ = K_ > 0;
        slack_bound_ = slack_bound;
        slack_caps_.clear();
    }

    // --- scaled <-> SI ---------------------------------------------------
    Eigen::VectorXd initial_point(const ExpansionPoint& a) const {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
        const double sp = std::sqrt(power_);
        for (int k = 0; k < K_; ++k) x.segment(me(k), 2 * T_) = to_real(a.embb_beamformers[k] / sp);
        for (int j = 0; j < J_; ++j) x.segment(mu(j), 2 * T_) = to_real(a.urllc_beamformers[j] / sp);
        if (!uniform_bu_)
            for (int j = 0; j < J_; ++j) x[off_bu_ + j] = std::max(a.urllc_bandwidths_hz[j] / bandwidth_, 2.0 * bmin_);
        if (free_be_) {
            double be = a.embb_bandwidth_hz > 0.0 ? a.embb_bandwidth_hz / bandwidth_ : 0.5;
            x[off_be_] = std::max(be, 2.0 * bmin_);
        }
        const double be = embb_bw(x);
        const double gamma = gamma_e(be);
        for (int k = 0; k < K_; ++k) {
            double interf = 0.0;
            for (int i = 0; i < K_; ++i)
                if (i != k) interf += quad(x, k, i);
            x[off_beta_ + k] = std::min(1.25 * (interf + be), 0.5 * beta_cap_[k]);
            const double ghat = g_lin_value(x, k);
            x[k] = std::max(0.0, gamma - ghat) + 1.0;
        }
        return x;
    }

    SolutionPoint to_solution(const Eigen::VectorXd& x) const {
        SolutionPoint p;
        const double sp = std::sqrt(power_);
        for (int k = 0; k < K_; ++k) p.embb_beamformers.push_back(beam(x, me(k)) * sp);
        for (int j = 0; j < J_; ++j) p.urllc_beamformers.push_back(beam(x, mu(j)) * sp);
        p.embb_bandwidth_hz = embb_bw(x) * bandwidth_;
        for (int j = 0; j < J_; ++j) p.urllc_bandwidths_hz.push_back(urllc_bw(x, j) * bandwidth_);
        for (int k = 0; k < K_; ++k) p.interference_w.push_back(x[off_beta_ + k] * noise_);
        for (int k = 0; k < K_; ++k) p.slack.push_back(std::max(0.0, x[k]));
        return p;
    }

    double weighted_slack(const Eigen::VectorXd& x) const {
        double acc = 0.0;
        for (int k = 0; k < K_; ++k) acc += weights_[k] * x[k];
        return acc;
    }

    double scaled_power(const Eigen::VectorXd& x) const {
        return x.segment(off_me_, 2 * T_ * (K_ + J_)).squaredNorm();
    }

    // --- ConvexProgram ---------------------------------------------------
    int num_variables() const override { return n_; }
    int num_constraints() const override {
        return m_base_ + (bound_active_ ? 1 : 0) + static_cast<int>(slack_caps_.size());
    }

    double objective(const Eigen::VectorXd& x) const override {
        return objective_ == Objective::WeightedSlack ? weighted_slack(x) : scaled_power(x);
    }

    void add_objective_derivatives(const Eigen::VectorXd& x, double scale, Eigen::Ref<Eigen::VectorXd> grad,
                                   Eigen::Ref<Eigen::MatrixXd> hess) const override {
        if (objective_ == Objective::WeightedSlack) {
            for (int k = 0; k < K_; ++k) grad[k] += scale * weights_[k];
            return;
        }
        const int nm = 2 * T_ * (K_ + J_);
        grad.segment(off_me_, nm) += (2.0 * scale) * x.segment(off_me_, nm);
        hess.block(off_me_, off_me_, nm, nm).diagonal().array() += 2.0 * scale;
    }

    bool constraint_values(const Eigen::VectorXd& x, Eigen::VectorXd& f) const override {
        f.resize(num_constraints());
        const double be = embb_bw(x);
        if (!(be > 0.0)) return false;
        const double gamma = gamma_e(be);
        if (!std::isfinite(gamma)) return false;

        for (int k = 0; k < K_; ++k) {
            f[c_sinr_ + k] = gamma - x[k] - g_lin_value(x, k);
            double interf = 0.0;
            for (int i = 0; i < K_; ++i)
                if (i != k) interf += quad(x, k, i);
            f[c_interf_ + k] = interf + be - x[off_beta_ + k];
            f[c_slack_ + k] = -x[k];
            f[c_cap_ + k] = x[off_beta_ + k] - beta_cap_[k];
        }
        double band = free_be_ ? be : 0.0;
        for (int j = 0; j < J_; ++j) {
            const double b = urllc_bw(x, j);
            if (!(b > 0.0)) return false;
            const double gu = gamma_u(b);
            if (!std::isfinite(gu)) return false;
            f[c_urllc_ + j] = gu - z_lin_value(x, j);
            if (!uniform_bu_) {
                f[c_bu_ + j] = bmin_ - b;
                band += b;
            }
        }
        f[c_power_] = scaled_power(x) - 1.0;
        if (has_bandwidth_row_) f[c_band_] = band - (free_be_ ? 1.0 : 1.0 - be_fixed_);
        if (free_be_) f[c_be_] = bmin_ - be;
        if (bound_active_) f[c_bound_] = weighted_slack(x) - slack_bound_;
        for (std::size_t k = 0; k < slack_caps_.size(); ++k) f[m_base_ + k] = x[k] - slack_caps_[k];
        return f.allFinite();
    }

    void add_constraint_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                                 Eigen::Ref<Eigen::VectorXd> grad) const override {
        const double be = embb_bw(x);
        const double dgamma = free_be_ ? gamma_e_d1(be) : 0.0;
        for (int k = 0; k < K_; ++k) {
            // SINR surrogate
            double ws = w[c_sinr_ + k];
            grad[k] -= ws;
            grad.segment(me(k), 2 * T_) -= ws * g_tan_[k].grad_m;
            grad[off_beta_ + k] -= ws * g_tan_[k].grad_d;
            if (free_be_) grad[off_be_] += ws * dgamma;
            // interference epigraph
            const double wi = w[c_interf_ + k];
            for (int i = 0; i < K_; ++i) {
                if (i == k) continue;
                grad.segment(me(i), 2 * T_).noalias() += (2.0 * wi) * (gram_[k] * x.segment(me(i), 2 * T_));
            }
            grad[off_beta_ + k] -= wi;
            if (free_be_) grad[off_be_] += wi;
            grad[k] -= w[c_slack_ + k];
            grad[off_beta_ + k] += w[c_cap_ + k];
            if (bound_active_) grad[k] += w[c_bound_] * weights_[k];
            if (!slack_caps_.empty()) grad[k] += w[m_base_ + k];
        }
        for (int j = 0; j < J_; ++j) {
            const double wu = w[c_urllc_ + j];
            grad.segment(mu(j), 2 * T_) -= wu * z_tan_[j].grad_m;
            if (!uniform_bu_) {
                const double b = urllc_bw(x, j);
                grad[off_bu_ + j] += wu * (gamma_u_d1(b) - z_tan_[j].grad_d);
                grad[off_bu_ + j] -= w[c_bu_ + j];
                if (has_bandwidth_row_) grad[off_bu_ + j] += w[c_band_];
            }
        }
        const int nm = 2 * T_ * (K_ + J_);
        grad.segment(off_me_, nm) += (2.0 * w[c_power_]) * x.segment(off_me_, nm);
        if (free_be_) {
            if (has_bandwidth_row_) grad[off_be_] += w[c_band_];
            grad[off_be_] -= w[c_be_];
        }
    }

    void add_constraint_hessian(const Eigen::VectorXd& x, const Eigen::VectorXd& cw, const Eigen::VectorXd& ow,
                                Eigen::Ref<Eigen::MatrixXd> H) const override {
        const double be = embb_bw(x);
        SparseGrad g;
        for (int k = 0; k < K_; ++k) {
            // SINR surrogate: linear except through b^e.
            g.clear();
            g.push(k, -1.0);
            g.push(off_beta_ + k, -g_tan_[k].grad_d);
            for (int r = 0; r < 2 * T_; ++r) g.push(me(k) + r, -g_tan_[k].grad_m[r]);
            if (free_be_) {
                g.push(off_be_, gamma_e_d1(be));
                H(off_be_, off_be_) += cw[c_sinr_ + k] * gamma_e_d2(be);
            }
            add_outer(H, g, ow[c_sinr_ + k]);

            // Interference epigraph: quadratic in the other users' beams.
            g.clear();
            Eigen::VectorXd gi(2 * T_);
            for (int i = 0; i < K_; ++i) {
                if (i == k) continue;
                gi.noalias() = 2.0 * (gram_[k] * x.segment(me(i), 2 * T_));
                for (int r = 0; r < 2 * T_; ++r) g.push(me(i) + r, gi[r]);
                H.block(me(i), me(i), 2 * T_, 2 * T_) += (2.0 * cw[c_interf_ + k]) * gram_[k];
            }
            g.push(off_beta_ + k, -1.0);
            if (free_be_) g.push(off_be_, 1.0);
            add_outer(H, g, ow[c_interf_ + k]);

            H(k, k) += ow[c_slack_ + k];
            if (!slack_caps_.empty()) H(k, k) += ow[m_base_ + k];
            H(off_beta_ + k, off_beta_ + k) += ow[c_cap_ + k];
        }
        for (int j = 0; j < J_; ++j) {
            g.clear();
            for (int r = 0; r < 2 * T_; ++r) g.push(mu(j) + r, -z_tan_[j].grad_m[r]);
            if (!uniform_bu_) {
                const double b = urllc_bw(x, j);
                g.push(off_bu_ + j, gamma_u_d1(b) - z_tan_[j].grad_d);
                H(off_bu_ + j, off_bu_ + j) += cw[c_urllc_ + j] * gamma_u_d2(b) + ow[c_bu_ + j];
            }
            add_outer(H, g, ow[c_urllc_ + j]);
        }
        // Power budget.
        const int nm = 2 * T_ * (K_ + J_);
        if (nm > 0) {
            const auto xm = x.segment(off_me_, nm);
            auto block = H.block(off_me_, off_me_, nm, nm);
            block.noalias() += (4.0 * ow[c_power_]) * xm * xm.transpose();
            block.diagonal().array() += 2.0 * cw[c_power_];
        }
        // Bandwidth budget: all-ones gradient over the bandwidth variables.
        if (has_bandwidth_row_) {
            const int first = off_bu_;
            const int count = n_ - off_bu_;
            H.block(first, first, count, count).array() += ow[c_band_];
        }
        if (free_be_) H(off_be_, off_be_) += ow[c_be_];
        if (bound_active_) {
            g.clear();
            for (int k = 0; k < K_; ++k) g.push(k, weights_[k]);
            add_outer(H, g, ow[c_bound_]);
        }
    }

    int K() const { return K_; }
    int J() const { return J_; }
    int base_constraints() const { return m_base_; }

private:
    int me(int k) const { return off_me_ + 2 * T_ * k; }
    int mu(int j) const { return off_mu_ + 2 * T_ * j; }

    // |h_k^H m_i|^2 for eMBB channel k and eMBB beamformer i.
    double quad(const Eigen::VectorXd& x, int k, int i) const {
        return (proj_[k] * x.segment(me(i), 2 * T_)).squaredNorm();
    }

    ComplexVector beam(const Eigen::VectorXd& x, int off) const {
        ComplexVector m(T_);
        m.real() = x.segment(off, T_);
        m.imag() = x.segment(off + T_, T_);
        return m;
    }
    double embb_bw(const Eigen::VectorXd& x) const { return free_be_ ? x[off_be_] : be_fixed_; }
    double urllc_bw(const Eigen::VectorXd& x, int j) const { return uniform_bu_ ? bu_fixed_ : x[off_bu_ + j]; }

    double g_lin_value(const Eigen::VectorXd& x, int k) const {
        return g_const_[k] + g_tan_[k].grad_m.dot(x.segment(me(k), 2 * T_)) + g_tan_[k].grad_d * x[off_beta_ + k];
    }
    double z_lin_value(const Eigen::VectorXd& x, int j) const {
        return z_const_[j] + z_tan_[j].grad_m.dot(x.segment(mu(j), 2 * T_)) + z_tan_[j].grad_d * urllc_bw(x, j);
    }

    // eMBB target SINR 2^(rho/b) - 1 and derivatives in scaled bandwidth.
    double gamma_e(double b) const { return free_be_ ? std::expm1(std::numbers::ln2 * rate_ratio_ / b) : gamma_e_fixed_; }
    double gamma_e_d1(double b) const {
        const double c = std::numbers::ln2 * rate_ratio_;
        return -std::exp(c / b) * c / (b * b);
    }
    double gamma_e_d2(double b) const {
        const double c = std::numbers::ln2 * rate_ratio_;
        return std::exp(c / b) * (c * c / (b * b * b * b) + 2.0 * c / (b * b * b));
    }
    // URLLC SNR threshold exp(A/b + C/sqrt(b)) - 1 and derivatives.
    double gamma_u(double b) const { return std::expm1(urllc_a_ / b + urllc_c_ / std::sqrt(b)); }
    double gamma_u_d1(double b) const {
        const double e = std::exp(urllc_a_ / b + urllc_c_ / std::sqrt(b));
        return e * (-urllc_a_ / (b * b) - 0.5 * urllc_c_ / (b * std::sqrt(b)));
    }
    double gamma_u_d2(double b) const {
        const double e = std::exp(urllc_a_ / b + urllc_c_ / std::sqrt(b));
        const double u1 = -urllc_a_ / (b * b) - 0.5 * urllc_c_ / (b * std::sqrt(b));
        const double u2 = 2.0 * urllc_a_ / (b * b * b) + 0.75 * urllc_c_ / (b * b * std::sqrt(b));
        return e * (u1 * u1 + u2);
    }

    int K_, J_, T_;
    double power_ = 0, bandwidth_ = 0, noise_ = 0;
    std::vector<ComplexVector> he_, hu_;
    bool free_be_ = false, uniform_bu_ = false, has_bandwidth_row_ = false;
    double rate_ratio_ = 0, be_fixed_ = 0, gamma_e_fixed_ = 0, bu_fixed_ = 0, bmin_ = 0;
    double urllc_a_ = 0, urllc_c_ = 0;
    std::vector<double> weights_, g_const_, z_const_, beta_cap_;
    std::vector<QuadOverLinearTangent> g_tan_, z_tan_;
    std::vector<Projection> proj_;
    std::vector<Eigen::MatrixXd> gram_;

    int off_beta_ = 0, off_me_ = 0, off_mu_ = 0, off_bu_ = 0, off_be_ = 0, n_ = 0;
    int c_sinr_ = 0, c_interf_ = 0, c_urllc_ = 0, c_power_ = 0, c_band_ = 0, c_slack_ = 0, c_bu_ = 0, c_be_ = 0,
        c_cap_ = 0, c_bound_ = 0, m_base_ = 0;

    Objective objective_ = Objective::WeightedSlack;
    bool bound_active_ = false;
    std::vector<double> slack_caps_;
    double slack_bound_ = 0.0;
};

}  // namespace embb::detail
