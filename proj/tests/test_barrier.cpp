#include <doctest.h>

#include "embb/barrier.hpp"

using namespace embb;

namespace {

// minimize c^T x + 0.5 q ||x||^2  subject to  A x <= b  and  ||x||^2 <= r^2
class SmallProgram final : public ConvexProgram {
public:
    Eigen::VectorXd c;
    double q = 0.0;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    double radius = 0.0;  // ball constraint off when 0

    int num_variables() const override { return static_cast<int>(c.size()); }
    int num_constraints() const override { return static_cast<int>(A.rows()) + (radius > 0 ? 1 : 0); }
    double objective(const Eigen::VectorXd& x) const override { return c.dot(x) + 0.5 * q * x.squaredNorm(); }
    void add_objective_derivatives(const Eigen::VectorXd& x, double s, Eigen::Ref<Eigen::VectorXd> g,
                                   Eigen::Ref<Eigen::MatrixXd> H) const override {
        g += s * (c + q * x);
        H.diagonal().array() += s * q;
    }
    bool constraint_values(const Eigen::VectorXd& x, Eigen::VectorXd& f) const override {
        f.resize(num_constraints());
        f.head(A.rows()) = A * x - b;
        if (radius > 0) f[A.rows()] = x.squaredNorm() - radius * radius;
        return true;
    }
    void add_constraint_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& w,
                                 Eigen::Ref<Eigen::VectorXd> g) const override {
        g += A.transpose() * w.head(A.rows());
        if (radius > 0) g += 2.0 * w[A.rows()] * x;
    }
    void add_constraint_hessian(const Eigen::VectorXd& x, const Eigen::VectorXd& cw, const Eigen::VectorXd& ow,
                                Eigen::Ref<Eigen::MatrixXd> H) const override {
        H += A.transpose() * ow.head(A.rows()).asDiagonal() * A;
        if (radius > 0) {
            H += 4.0 * ow[A.rows()] * x * x.transpose();
            H.diagonal().array() += 2.0 * cw[A.rows()];
        }
    }
};

}  // namespace

TEST_CASE("linear program on a box") {
    // min x + y  s.t.  x >= 1, y >= 2, x + y <= 10
    SmallProgram p;
    p.c = Eigen::Vector2d(1.0, 1.0);
    p.A.resize(3, 2);
    p.A << -1, 0, 0, -1, 1, 1;
    p.b = Eigen::Vector3d(-1.0, -2.0, 10.0);
    const auto r = barrier_solve(p, Eigen::Vector2d(3.0, 3.0), {});
    CHECK(r.status == BarrierStatus::Optimal);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(r.x[1] == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.duality_gap <= 1e-10);
    CHECK(r.kkt_residual <= 1e-8);
    CHECK(r.max_constraint < 0.0);
}

TEST_CASE("projection onto a ball") {
    // min 0.5||x - c||^2 over ||x|| <= 1: answer c / ||c||.
    SmallProgram p;
    const Eigen::Vector3d target(3.0, -4.0, 12.0);
    p.c = -target;
    p.q = 1.0;
    p.A.resize(0, 3);
    p.b.resize(0);
    p.radius = 1.0;
    const auto r = barrier_solve(p, Eigen::Vector3d::Zero(), {});
    CHECK(r.status == BarrierStatus::Optimal);
    CHECK((r.x - target / 13.0).norm() <= 1e-8);
}

TEST_CASE("phase one finds a strictly feasible point") {
    SmallProgram p;
    p.c = Eigen::Vector2d(1.0, 0.0);
    p.A.resize(2, 2);
    p.A << -1, 0, 0, -1;
    p.b = Eigen::Vector2d(-5.0, -7.0);  // x >= 5, y >= 7
    p.radius = 10.0;
    const auto ph = find_strictly_feasible(p, Eigen::Vector2d(0.0, 0.0), {});
    REQUIRE(ph.feasible);
    Eigen::VectorXd f;
    p.constraint_values(ph.x, f);
    CHECK(f.maxCoeff() < 0.0);
    const auto r = barrier_solve(p, ph.x, {});
    CHECK(r.x[0] == doctest::Approx(5.0).epsilon(1e-7));
}

TEST_CASE("phase one reports infeasibility") {
    SmallProgram p;
    p.c = Eigen::Vector2d(0.0, 0.0);
    p.A.resize(2, 2);
    p.A << 1, 0, -1, 0;
    p.b = Eigen::Vector2d(-1.0, -1.0);  // x <= -1 and x >= 1
    p.radius = 5.0;
    const auto ph = find_strictly_feasible(p, Eigen::Vector2d(0.0, 0.0), {});
    CHECK_FALSE(ph.feasible);
    CHECK(ph.best_sigma == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("already feasible start is returned as is") {
    SmallProgram p;
    p.c = Eigen::Vector2d(0.0, 0.0);
    p.A.resize(1, 2);
    p.A << 1, 1;
    p.b = Eigen::VectorXd::Constant(1, 1.0);
    const auto ph = find_strictly_feasible(p, Eigen::Vector2d(0.1, 0.1), {});
    CHECK(ph.feasible);
    CHECK(ph.x == Eigen::Vector2d(0.1, 0.1));
}

TEST_CASE("infeasible start is rejected by the main solver") {
    SmallProgram p;
    p.c = Eigen::Vector2d(0.0, 0.0);
    p.A.resize(1, 2);
    p.A << 1, 1;
    p.b = Eigen::VectorXd::Constant(1, 1.0);
    CHECK_THROWS_AS(barrier_solve(p, Eigen::Vector2d(1.0, 1.0), {}), std::invalid_argument);
}

TEST_CASE("stage budget exhaustion is reported") {
    SmallProgram p;
    p.c = Eigen::Vector2d(1.0, 1.0);
    p.A.resize(2, 2);
    p.A << -1, 0, 0, -1;
    p.b = Eigen::Vector2d(0.0, 0.0);
    BarrierOptions o;
    o.max_stages = 2;
    const auto r = barrier_solve(p, Eigen::Vector2d(1.0, 1.0), o);
    CHECK(r.status == BarrierStatus::MaxIters);
    CHECK(r.stages.size() == 2);
}
