#include "embb/linearize.hpp"

#include <cmath>
#include <stdexcept>

namespace embb {

void require_valid(const ExpansionPoint& a) {
    if (a.interference_w.size() != a.embb_beamformers.size() || a.slack.size() != a.embb_beamformers.size())
        throw std::domain_error("expansion point: eMBB block sizes disagree");
    if (a.urllc_bandwidths_hz.size() != a.urllc_beamformers.size())
        throw std::domain_error("expansion point: URLLC block sizes disagree");
    for (double b : a.interference_w)
        if (!(b > 0.0)) throw std::domain_error("expansion point: interference must be > 0");
    for (double b : a.urllc_bandwidths_hz)
        if (!(b > 0.0)) throw std::domain_error("expansion point: URLLC bandwidth must be > 0");
    for (double s : a.slack)
        if (!(s >= 0.0)) throw std::domain_error("expansion point: slack must be >= 0");
}

ExpansionPoint anchor_from(const SolutionPoint& p) {
    ExpansionPoint a;
    a.embb_beamformers = p.embb_beamformers;
    a.interference_w = p.interference_w;
    a.urllc_beamformers = p.urllc_beamformers;
    a.urllc_bandwidths_hz = p.urllc_bandwidths_hz;
    a.slack = p.slack;
    for (double& s : a.slack) s = std::max(s, 0.0);
    a.embb_bandwidth_hz = p.embb_bandwidth_hz;
    return a;
}

Eigen::VectorXd to_real(const ComplexVector& v) {
    Eigen::VectorXd r(2 * v.size());
    r.head(v.size()) = v.real();
    r.tail(v.size()) = v.imag();
    return r;
}

ComplexVector from_real(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size() / 2;
    ComplexVector c(n);
    c.real() = v.head(n);
    c.imag() = v.tail(n);
    return c;
}

double QuadOverLinearTangent::operator()(const ComplexVector& m, double d) const {
    return value + grad_m.dot(to_real(m - anchor_m)) + grad_d * (d - anchor_d);
}

QuadOverLinearTangent quad_over_linear_tangent(const ComplexVector& h, const ComplexVector& m_hat, double d_hat) {
    if (!(d_hat > 0.0)) throw std::domain_error("linearization anchor denominator must be > 0");
    const std::complex<double> a = h.dot(m_hat);  // h^H m̂
    const double quad = std::norm(a);
    QuadOverLinearTangent t;
    t.value = quad / d_hat;
    t.grad_m = to_real(ComplexVector(h * a)) * (2.0 / d_hat);
    t.grad_d = -quad / (d_hat * d_hat);
    t.anchor_m = m_hat;
    t.anchor_d = d_hat;
    return t;
}

double g_value(const ComplexVector& m, double beta, const ComplexVector& h) {
    if (!(beta > 0.0)) throw std::domain_error("g_value: beta must be > 0");
    return std::norm(h.dot(m)) / beta;
}

double g_lin(const ComplexVector& m, double beta, const ComplexVector& m_hat, double beta_hat,
             const ComplexVector& h) {
    return quad_over_linear_tangent(h, m_hat, beta_hat)(m, beta);
}

double z_value(const ComplexVector& m, double bandwidth_hz, const ComplexVector& h, double noise_psd) {
    if (!(noise_psd > 0.0)) throw std::domain_error("z_value: noise density must be > 0");
    if (!(bandwidth_hz > 0.0)) throw std::domain_error("z_value: bandwidth must be > 0");
    return std::norm(h.dot(m)) / (noise_psd * bandwidth_hz);
}

QuadOverLinearTangent z_tangent(const ComplexVector& h, const ComplexVector& m_hat, double bandwidth_hat,
                                double noise_psd) {
    if (!(noise_psd > 0.0)) throw std::domain_error("z_tangent: noise density must be > 0");
    if (!(bandwidth_hat > 0.0)) throw std::domain_error("z_tangent: anchor bandwidth must be > 0");
    // z is g with denominator N0 b; chain rule through d = N0 b.
    auto t = quad_over_linear_tangent(h, m_hat, noise_psd * bandwidth_hat);
    t.grad_d *= noise_psd;
    t.anchor_d = bandwidth_hat;
    return t;
}

double z_lin(const ComplexVector& m, double bandwidth_hz, const ComplexVector& m_hat, double bandwidth_hat,
             const ComplexVector& h, double noise_psd) {
    return z_tangent(h, m_hat, bandwidth_hat, noise_psd)(m, bandwidth_hz);
}

double objective_lin(const std::vector<double>& s, const std::vector<double>& s_hat, double delta) {
    double acc = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) acc += s[k] / (s_hat.at(k) + delta);
    return acc;
}

double surrogate_objective(const std::vector<double>& s, double delta) {
    double acc = 0.0;
    for (double v : s) acc += std::log(std::max(v, 0.0) + delta);
    return acc;
}

}  // namespace embb
