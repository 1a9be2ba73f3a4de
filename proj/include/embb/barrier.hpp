#pragma once

// Primal log-barrier interior-point method for
//
//     minimize f0(x)  subject to  f_i(x) <= 0,  i = 1..m
//
// with smooth convex f0 and f_i. Each centering step runs damped Newton on
// t f0(x) - sum_i log(-f_i(x)); t grows by `mu` until m/t meets the gap target.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace embb {

class ConvexProgram {
public:
    virtual ~ConvexProgram() = default;

    virtual int num_variables() const = 0;
    virtual int num_constraints() const = 0;

    virtual double objective(const Eigen::VectorXd& x) const = 0;
    /// grad += scale * grad f0(x); hess += scale * hess f0(x)
    virtual void add_objective_derivatives(const Eigen::VectorXd& x, double scale, Eigen::Ref<Eigen::VectorXd> grad,
                                           Eigen::Ref<Eigen::MatrixXd> hess) const = 0;

    /// Writes f_i(x) into `values`. Returns false if x is outside the domain
    /// of some constraint (values are then unspecified).
    virtual bool constraint_values(const Eigen::VectorXd& x, Eigen::VectorXd& values) const = 0;

    /// grad += sum_i w[i] * grad f_i(x)
    virtual void add_constraint_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                                         Eigen::Ref<Eigen::VectorXd> grad) const = 0;

    /// hess += sum_i outer_w[i] * grad f_i grad f_i^T + sum_i curv_w[i] * hess f_i(x)
    virtual void add_constraint_hessian(const Eigen::VectorXd& x, const Eigen::VectorXd& curv_w,
                                        const Eigen::VectorXd& outer_w, Eigen::Ref<Eigen::MatrixXd> hess) const = 0;
};

enum class BarrierStatus { Optimal, MaxIters, NumericalTrouble, StoppedEarly };

std::string to_string(BarrierStatus s);

struct BarrierOptions {
    double initial_t = 1.0;
    double mu = 10.0;
    double gap_abs = 1e-10;          // stop when m/t <= gap_abs + gap_rel * |f0|
    double gap_rel = 0.0;
    // If a later stage fails to center, the last centered point is returned as
    // Optimal when its gap is within accept_gap_abs + accept_gap_rel * |f0|.
    double accept_gap_abs = 0.0;
    double accept_gap_rel = 0.0;
    double newton_tol = 1e-10;       // lambda^2 / 2 at which a centering step ends
    int max_newton_per_stage = 200;
    int max_stages = 60;
    // Called after each centering stage; returning true stops with StoppedEarly.
    std::function<bool(const Eigen::VectorXd&)> stop_after_stage;
};

struct BarrierStageLog {
    double t = 0.0;
    int newton_steps = 0;
    double objective = 0.0;
    double decrement = 0.0;  // lambda^2 / 2 at the end of the stage
};

struct BarrierResult {
    Eigen::VectorXd x;
    BarrierStatus status = BarrierStatus::NumericalTrouble;
    double t = 0.0;
    double duality_gap = 0.0;     // m / t at the last centered point
    double kkt_residual = 0.0;    // max_j |grad_j f0 + sum lambda_i grad_j f_i| / (1 + |grad_j f0| + sum lambda_i |grad_j f_i|)
    double max_constraint = 0.0;  // max_i f_i(x)
    int newton_steps = 0;
    std::vector<BarrierStageLog> stages;
};

/// x0 must be strictly feasible (all f_i(x0) < 0).
BarrierResult barrier_solve(const ConvexProgram& program, const Eigen::VectorXd& x0, const BarrierOptions& options);

/// Phase-1 wrapper: variables (x, sigma), minimize sigma s.t. f_i(x) <= sigma.
class PhaseOneProgram final : public ConvexProgram {
public:
    explicit PhaseOneProgram(const ConvexProgram& inner) : inner_(inner) {}

    int num_variables() const override { return inner_.num_variables() + 1; }
    int num_constraints() const override { return inner_.num_constraints(); }
    double objective(const Eigen::VectorXd& x) const override { return x[x.size() - 1]; }
    void add_objective_derivatives(const Eigen::VectorXd& x, double scale, Eigen::Ref<Eigen::VectorXd> grad,
                                   Eigen::Ref<Eigen::MatrixXd> hess) const override;
    bool constraint_values(const Eigen::VectorXd& x, Eigen::VectorXd& values) const override;
    void add_constraint_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                                 Eigen::Ref<Eigen::VectorXd> grad) const override;
    void add_constraint_hessian(const Eigen::VectorXd& x, const Eigen::VectorXd& curv_w, const Eigen::VectorXd& outer_w,
                                Eigen::Ref<Eigen::MatrixXd> hess) const override;

private:
    const ConvexProgram& inner_;
};

struct PhaseOneResult {
    bool feasible = false;
    Eigen::VectorXd x;        // strictly feasible point when feasible
    double best_sigma = 0.0;  // smallest max_i f_i found
    BarrierResult solve;
};

/// Finds a strictly feasible point starting from any x0 in the domain.
/// Declares infeasibility when the phase-1 optimum is not strictly negative.
PhaseOneResult find_strictly_feasible(const ConvexProgram& program, const Eigen::VectorXd& x0,
                                      const BarrierOptions& options);

}  // namespace embb
