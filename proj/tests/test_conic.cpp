#include "support.hpp"

#include "pptdisc/conic.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

using namespace pptdisc;
using namespace pptdisc::conic;

namespace {

Constraint trace_row(int block, int n, double rhs) {
    Constraint c{{}, rhs};
    for (int a = 0; a < n; ++a) c.terms.push_back({block, a, a, 1.0});
    return c;
}

}  // namespace

TEST_SUITE("conic") {

TEST_CASE("minimum eigenvalue as a trace-one program") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd c(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s) c(r, s) = normal(rng);
    c = (c + c.transpose()).eval();
    ConicProgram program{{4}, {c}, {trace_row(0, 4, 1.0)}};
    const ConicSolution sol = solve(program);
    REQUIRE(sol.status == Status::Optimal);
    const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues()(0);
    CHECK(sol.primal_objective == doctest::Approx(lowest).epsilon(1e-6));
    CHECK(sol.dual_objective == doctest::Approx(lowest).epsilon(1e-6));
    CHECK(sol.multipliers(0) == doctest::Approx(lowest).epsilon(1e-6));
    CHECK((apply_constraints(program, sol.primal) - Eigen::VectorXd::Ones(1)).norm() < 1e-6);
    CHECK((c - adjoint_block(program, sol.multipliers, 0) - sol.slack[0]).norm() < 1e-5);
}

TEST_CASE("two blocks with a coupling constraint") {
    // min X_00 + 2 Y_00  s.t.  X_00 + Y_00 = 1, X_11 = 1, Y_11 = 1  ->  value 1 at X_00 = 1
    Eigen::MatrixXd cx = Eigen::MatrixXd::Zero(2, 2), cy = Eigen::MatrixXd::Zero(2, 2);
    cx(0, 0) = 1.0;
    cy(0, 0) = 2.0;
    ConicProgram program{{2, 2},
                         {cx, cy},
                         {{{{0, 0, 0, 1.0}, {1, 0, 0, 1.0}}, 1.0}, {{{0, 1, 1, 1.0}}, 1.0}, {{{1, 1, 1, 1.0}}, 1.0}}};
    const ConicSolution sol = solve(program);
    REQUIRE(sol.status == Status::Optimal);
    CHECK(sol.primal_objective == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(sol.primal[0](0, 0) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("infeasible program yields a verified ray") {
    ConicProgram program{{3}, {Eigen::MatrixXd::Identity(3, 3)}, {trace_row(0, 3, -1.0)}};
    const ConicSolution sol = solve(program);
    REQUIRE(sol.status == Status::Infeasible);
    REQUIRE(sol.infeasibility_ray);
    CHECK(verify_infeasibility_ray(program, *sol.infeasibility_ray, 1e-6));
}

TEST_CASE("unbounded program yields an improving ray") {
    // min -Tr X  s.t.  X_01 = 0
    ConicProgram program{{2}, {-Eigen::MatrixXd::Identity(2, 2)}, {{{{0, 0, 1, 1.0}}, 0.0}}};
    const ConicSolution sol = solve(program);
    REQUIRE(sol.status == Status::Unbounded);
    REQUIRE(sol.unbounded_ray);
    const Eigen::MatrixXd& x = sol.unbounded_ray->front();
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x).eigenvalues()(0) > -1e-8);
    CHECK(-x.trace() < 0.0);
    CHECK(std::abs(x(0, 1)) < 1e-6 * x.norm());
}

TEST_CASE("structural validation") {
    // Zero and dependent rows are only detectable once the constraint matrix is assembled.
    ConicProgram empty{{2}, {Eigen::MatrixXd::Zero(2, 2)}, {}};
    CHECK_THROWS_AS(empty.validate(), InvalidArgument);
    ConicProgram zero_row{{2}, {Eigen::MatrixXd::Zero(2, 2)}, {{{{0, 0, 0, 0.0}}, 1.0}}};
    CHECK_THROWS_AS(solve(zero_row), InvalidArgument);
    ConicProgram dependent{{2}, {Eigen::MatrixXd::Zero(2, 2)}, {trace_row(0, 2, 1.0), trace_row(0, 2, 2.0)}};
    CHECK_THROWS_AS(solve(dependent), InvalidArgument);
    ConicProgram bad_index{{2}, {Eigen::MatrixXd::Zero(2, 2)}, {{{{0, 2, 0, 1.0}}, 1.0}}};
    CHECK_THROWS_AS(bad_index.validate(), InvalidArgument);
}

TEST_CASE("adjoint is consistent with the constraint map") {
    ConicProgram program{{2, 3},
                         {Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)},
                         {{{{0, 0, 1, 0.7}, {1, 2, 2, -1.0}}, 0.0}, {{{1, 0, 2, 2.0}, {0, 1, 1, 1.0}}, 0.0}}};
    std::mt19937_64 rng(22);
    std::normal_distribution<double> normal;
    std::vector<Eigen::MatrixXd> x{Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)};
    for (auto& b : x) {
        for (int r = 0; r < b.rows(); ++r)
            for (int s = 0; s < b.cols(); ++s) b(r, s) = normal(rng);
        b = (b + b.transpose()).eval();
    }
    const Eigen::VectorXd y = Eigen::VectorXd::Random(2);
    double lhs = y.dot(apply_constraints(program, x));
    double rhs = 0.0;
    for (int b = 0; b < 2; ++b) rhs += (adjoint_block(program, y, b).array() * x[b].array()).sum();
    CHECK(lhs == doctest::Approx(rhs));
}

}  // TEST_SUITE
