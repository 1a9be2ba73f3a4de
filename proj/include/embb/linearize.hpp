#pragma once

// First-order surrogates used by the SCP loop.
//
// Complex beamformers are treated as 2T real coordinates (real parts, then
// imaginary parts). The gradient of m -> |h^H m|^2 in those coordinates is
// 2 h h^H m split into real and imaginary parts, so the Taylor term is
// 2 Re(m̂^H h h^H (m - m̂)).

#include <vector>

#include "embb/model.hpp"

namespace embb {

/// Anchor of one SCP iteration. Bandwidths and interference levels must be > 0.
struct ExpansionPoint {
    std::vector<ComplexVector> embb_beamformers;
    std::vector<double> interference_w;
    std::vector<ComplexVector> urllc_beamformers;
    std::vector<double> urllc_bandwidths_hz;
    std::vector<double> slack;
    // Not linearized around; under FreeAllocation it only seeds the solver.
    double embb_bandwidth_hz = 0.0;
};

/// Throws std::domain_error when an invariant of ExpansionPoint is broken.
void require_valid(const ExpansionPoint& anchor);

ExpansionPoint anchor_from(const SolutionPoint& point);

Eigen::VectorXd to_real(const ComplexVector& v);
ComplexVector from_real(const Eigen::VectorXd& v);

/// Tangent plane of (m, d) -> |h^H m|^2 / d at (m̂, d̂).
struct QuadOverLinearTangent {
    double value = 0.0;          // function value at the anchor
    Eigen::VectorXd grad_m;      // 2T real coordinates
    double grad_d = 0.0;
    ComplexVector anchor_m;
    double anchor_d = 0.0;

    double operator()(const ComplexVector& m, double d) const;
};

QuadOverLinearTangent quad_over_linear_tangent(const ComplexVector& h, const ComplexVector& m_hat, double d_hat);

/// g(m, beta) = |h^H m|^2 / beta
double g_value(const ComplexVector& m, double beta, const ComplexVector& h);
double g_lin(const ComplexVector& m, double beta, const ComplexVector& m_hat, double beta_hat, const ComplexVector& h);

/// z(m, b) = |h^H m|^2 / (N0 b)
double z_value(const ComplexVector& m, double bandwidth_hz, const ComplexVector& h, double noise_psd);
double z_lin(const ComplexVector& m, double bandwidth_hz, const ComplexVector& m_hat, double bandwidth_hat,
             const ComplexVector& h, double noise_psd);

/// Gradient of z at (m̂, b̂) with respect to (m in real coordinates, b).
QuadOverLinearTangent z_tangent(const ComplexVector& h, const ComplexVector& m_hat, double bandwidth_hat,
                                double noise_psd);

/// sum_k s_k / (ŝ_k + delta); the linearized reweighted objective without constants.
double objective_lin(const std::vector<double>& s, const std::vector<double>& s_hat, double delta);

/// sum_k log(s_k + delta)
double surrogate_objective(const std::vector<double>& s, double delta);

}  // namespace embb
