#include "embb/barrier.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace embb {

std::string to_string(BarrierStatus s) {
    switch (s) {
        case BarrierStatus::Optimal: return "optimal";
        case BarrierStatus::MaxIters: return "max_iters";
        case BarrierStatus::NumericalTrouble: return "numerical_trouble";
        case BarrierStatus::StoppedEarly: return "stopped_early";
    }
    return "unknown";
}

namespace {

// A point barely inside leaves the main solve no room for Newton steps. Phase 1
// stops early only with this much depth; otherwise it runs to its optimum.
constexpr double kPhaseOneDepth = 1e-6;

bool strictly_feasible(const ConvexProgram& p, const Eigen::VectorXd& x, Eigen::VectorXd& f) {
    if (!p.constraint_values(x, f)) return false;
    for (Eigen::Index i = 0; i < f.size(); ++i)
        if (!(f[i] < 0.0)) return false;  // also rejects NaN
    return true;
}

Eigen::VectorXd solve_newton(Eigen::MatrixXd& hess, const Eigen::VectorXd& grad) {
    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() == Eigen::Success) return -llt.solve(grad);
    // Semidefinite directions: add a small multiple of the diagonal scale.
    const double scale = std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1.0);
    for (double reg = 1e-14; reg < 1e-2; reg *= 100.0) {
        Eigen::MatrixXd shifted = hess;
        shifted.diagonal().array() += reg * scale;
        Eigen::LLT<Eigen::MatrixXd> l2(shifted);
        if (l2.info() == Eigen::Success) return -l2.solve(grad);
    }
    return Eigen::VectorXd::Constant(grad.size(), std::numeric_limits<double>::quiet_NaN());
}

// Multipliers lambda_i = (1 - grad f_i . dx / f_i) / (-t f_i), i.e. the central-path
// estimate corrected by the Newton step dx. This cancels the 1/f_i^2 terms that
// otherwise leave a residual of order sqrt(decrement) at large t.
double kkt_residual(const ConvexProgram& p, const Eigen::VectorXd& x, const Eigen::VectorXd& f, double t) {
    const Eigen::Index n = x.size();
    const Eigen::Index m = f.size();
    Eigen::VectorXd g0 = Eigen::VectorXd::Zero(n);
    Eigen::MatrixXd h0 = Eigen::MatrixXd::Zero(n, n);
    p.add_objective_derivatives(x, 1.0, g0, h0);

    Eigen::VectorXd grad = t * g0;
    Eigen::MatrixXd hess = t * h0;
    const Eigen::VectorXd curv_w = (-1.0 / f.array()).matrix();
    const Eigen::VectorXd outer_w = (1.0 / f.array().square()).matrix();
    p.add_constraint_gradient(x, curv_w, grad);
    p.add_constraint_hessian(x, curv_w, outer_w, hess);
    Eigen::VectorXd dx = solve_newton(hess, grad);
    if (!dx.allFinite()) dx.setZero();

    Eigen::VectorXd lambda(m), mag = g0.cwiseAbs();
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        unit[i] = 1.0;
        Eigen::VectorXd gi = Eigen::VectorXd::Zero(n);
        p.add_constraint_gradient(x, unit, gi);
        unit[i] = 0.0;
        lambda[i] = (1.0 - gi.dot(dx) / f[i]) / (-t * f[i]);
        mag += std::abs(lambda[i]) * gi.cwiseAbs();
    }
    Eigen::VectorXd r = g0;
    p.add_constraint_gradient(x, lambda, r);
    if (r.size() == 0) return 0.0;
    return (r.cwiseAbs().array() / (1.0 + mag.array())).maxCoeff();
}

}  // namespace

BarrierResult barrier_solve(const ConvexProgram& program, const Eigen::VectorXd& x0, const BarrierOptions& opt) {
    const int n = program.num_variables();
    const int m = program.num_constraints();
    if (x0.size() != n) throw std::invalid_argument("barrier_solve: x0 has wrong dimension");

    BarrierResult res;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd f(m), f_new(m);
    if (!strictly_feasible(program, x, f)) throw std::invalid_argument("barrier_solve: x0 is not strictly feasible");

    Eigen::VectorXd grad(n), dx(n), x_new(n), curv_w(m), outer_w(m);
    Eigen::MatrixXd hess(n, n);
    double t = opt.initial_t;
    bool hit_max = false;
    // Last point that finished a centering stage, for fallback.
    Eigen::VectorXd x_centered = x, f_centered = f;
    double t_centered = 0.0;

    for (int stage = 0; stage < opt.max_stages; ++stage) {
        int steps = 0;
        double decrement = std::numeric_limits<double>::infinity();
        double best_decrement = decrement;
        int stalled = 0;
        bool trouble = false;

        for (;;) {
            grad.setZero();
            hess.setZero();
            program.add_objective_derivatives(x, t, grad, hess);
            curv_w = (-1.0 / f.array()).matrix();
            outer_w = (1.0 / f.array().square()).matrix();
            program.add_constraint_gradient(x, curv_w, grad);
            program.add_constraint_hessian(x, curv_w, outer_w, hess);

            dx = solve_newton(hess, grad);
            if (!dx.allFinite()) {
                trouble = true;
                break;
            }
            decrement = -0.5 * grad.dot(dx);
            if (decrement <= opt.newton_tol) break;
            // At large t the decrement bottoms out at rounding level; stop once it no longer falls.
            if (decrement < 0.5 * best_decrement) {
                best_decrement = decrement;
                stalled = 0;
            } else if (decrement <= 1e-6 && ++stalled >= 5) {
                break;
            }
            if (steps >= opt.max_newton_per_stage) {
                if (decrement > 1e-6) hit_max = true;
                break;
            }

            // Backtracking: stay in the domain, then Armijo on the barrier.
            // Near the center (lambda^2 < 1/16) the full feasible step is taken;
            // Armijo there would only measure rounding noise of t*f0.
            const double slope = grad.dot(dx);
            const double f0 = program.objective(x);
            const bool near_center = 2.0 * decrement < 1.0 / 16.0;
            double step = 1.0;
            bool accepted = false;
            while (step > 1e-20) {
                x_new = x + step * dx;
                if (strictly_feasible(program, x_new, f_new)) {
                    if (near_center) {
                        accepted = true;
                        break;
                    }
                    const double dphi = t * (program.objective(x_new) - f0) - (f_new.array() / f.array()).log().sum();
                    if (dphi <= 0.01 * step * slope) {
                        accepted = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if (!accepted) {
                // Stalled on rounding noise close to the center is fine; anything else is not.
                if (decrement > 1e-6) trouble = true;
                break;
            }
            x = x_new;
            f = f_new;
            ++steps;
        }

        res.newton_steps += steps;
        res.stages.push_back({t, steps, program.objective(x), decrement});
        if (trouble || hit_max) {
            res.status = trouble ? BarrierStatus::NumericalTrouble : BarrierStatus::MaxIters;
            if (t_centered > 0.0) {
                const double gap = static_cast<double>(m) / t_centered;
                x = x_centered;
                f = f_centered;
                t = t_centered;
                if (gap <= opt.accept_gap_abs + opt.accept_gap_rel * std::abs(program.objective(x)))
                    res.status = BarrierStatus::Optimal;
            }
            break;
        }
        x_centered = x;
        f_centered = f;
        t_centered = t;
        const double gap = static_cast<double>(m) / t;
        if (gap <= opt.gap_abs + opt.gap_rel * std::abs(program.objective(x))) {
            res.status = BarrierStatus::Optimal;
            break;
        }
        if (opt.stop_after_stage && opt.stop_after_stage(x)) {
            res.status = BarrierStatus::StoppedEarly;
            break;
        }
        if (stage + 1 == opt.max_stages) res.status = BarrierStatus::MaxIters;
        t *= opt.mu;
    }

    res.x = x;
    res.t = t;
    res.duality_gap = static_cast<double>(m) / t;
    res.kkt_residual = m > 0 ? kkt_residual(program, x, f, t) : 0.0;
    res.max_constraint = m > 0 ? f.maxCoeff() : -std::numeric_limits<double>::infinity();
    return res;
}

void PhaseOneProgram::add_objective_derivatives(const Eigen::VectorXd& x, double scale,
                                                Eigen::Ref<Eigen::VectorXd> grad, Eigen::Ref<Eigen::MatrixXd>) const {
    grad[x.size() - 1] += scale;
}

bool PhaseOneProgram::constraint_values(const Eigen::VectorXd& x, Eigen::VectorXd& values) const {
    const Eigen::Index n = inner_.num_variables();
    if (!inner_.constraint_values(x.head(n), values)) return false;
    values.array() -= x[n];
    return values.allFinite();
}

void PhaseOneProgram::add_constraint_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                                              Eigen::Ref<Eigen::VectorXd> grad) const {
    const Eigen::Index n = inner_.num_variables();
    inner_.add_constraint_gradient(x.head(n), w, grad.head(n));
    grad[n] -= w.sum();
}

void PhaseOneProgram::add_constraint_hessian(const Eigen::VectorXd& x, const Eigen::VectorXd& curv_w,
                                             const Eigen::VectorXd& outer_w, Eigen::Ref<Eigen::MatrixXd> hess) const {
    const Eigen::Index n = inner_.num_variables();
    const Eigen::VectorXd xi = x.head(n);
    inner_.add_constraint_hessian(xi, curv_w, outer_w, hess.topLeftCorner(n, n));
    // grad of f_i - sigma is (grad f_i, -1): cross terms come from sum outer_w grad f_i.
    Eigen::VectorXd cross = Eigen::VectorXd::Zero(n);
    inner_.add_constraint_gradient(xi, outer_w, cross);
    hess.col(n).head(n) -= cross;
    hess.row(n).head(n) -= cross.transpose();
    hess(n, n) += outer_w.sum();
}

PhaseOneResult find_strictly_feasible(const ConvexProgram& program, const Eigen::VectorXd& x0,
                                      const BarrierOptions& options) {
    const int n = program.num_variables();
    const int m = program.num_constraints();
    PhaseOneResult out;
    Eigen::VectorXd f(m);
    if (!program.constraint_values(x0, f) || !f.allFinite())
        throw std::invalid_argument("find_strictly_feasible: x0 outside the constraint domain");
    const double worst = m > 0 ? f.maxCoeff() : -1.0;
    if (worst < -kPhaseOneDepth) {
        out.feasible = true;
        out.x = x0;
        out.best_sigma = worst;
        return out;
    }

    PhaseOneProgram phase1(program);
    Eigen::VectorXd z(n + 1);
    z.head(n) = x0;
    z[n] = worst + std::max(1.0, 0.1 * std::abs(worst));

    BarrierOptions opt = options;
    opt.initial_t = 1.0;
    opt.gap_rel = 0.0;
    opt.stop_after_stage = [n](const Eigen::VectorXd& zz) { return zz[n] < -kPhaseOneDepth; };
    out.solve = barrier_solve(phase1, z, opt);
    const Eigen::VectorXd& zs = out.solve.x;
    Eigen::VectorXd fi(m);
    program.constraint_values(zs.head(n), fi);
    out.best_sigma = fi.maxCoeff();
    out.x = zs.head(n);
    out.feasible = out.best_sigma < 0.0;
    return out;
}

}  // namespace embb
