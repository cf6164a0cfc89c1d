#pragma once

// Linear optimization over a product of real PSD cones:
//
//     minimize    sum_b <C_b, X_b>
//     subject to  sum_b <A_mb, X_b> = r_m      for every constraint m
//                 X_b PSD
//
// with dual  maximize r^T y  s.t.  S_b = C_b - sum_m y_m A_mb PSD.
//
// Solved by over-relaxed ADMM (Douglas-Rachford) splitting between the affine
// subspace and the cone; the cone projection clips eigenvalues per block.

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace pptdisc::conic {

/// One coefficient of a symmetric constraint matrix: A(row, col) = A(col, row) = value.
struct Entry {
    int block = 0;
    int row = 0;
    int col = 0;
    double value = 0.0;
};

struct Constraint {
    std::vector<Entry> terms;  // duplicates are summed
    double rhs = 0.0;
};

struct ConicProgram {
    std::vector<int> block_sizes;
    std::vector<Eigen::MatrixXd> objective;  // symmetric, one per block
    std::vector<Constraint> constraints;

    /// Throws InvalidArgument when the program is structurally invalid.
    void validate() const;
};

enum class Status { Optimal, Infeasible, Unbounded, MaxIter };

std::string to_string(Status status);

struct Residuals {
    double primal = 0.0;  // ||A x - r|| / (1 + ||r||)
    double dual = 0.0;    // ||C - A^T y - S|| / (1 + ||C||)
    double gap = 0.0;     // |pobj - dobj| / (1 + |pobj| + |dobj|)
};

struct SolverOptions {
    double eps_feas = 1e-7;
    double eps_gap = 1e-7;
    int max_iter = 200000;
    double alpha = 1.6;              // over-relaxation
    double rho = 1.0;                // initial penalty
    int rebalance_interval = 100;
    double rebalance_ratio = 10.0;
    int check_interval = 10;
    int infeasibility_window = 1000;
};

struct ConicSolution {
    Status status = Status::MaxIter;
    std::vector<Eigen::MatrixXd> primal;  // X_b
    std::vector<Eigen::MatrixXd> slack;   // S_b, PSD by construction
    Eigen::VectorXd multipliers;          // y
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    Residuals residuals;
    int iterations = 0;
    double final_rho = 0.0;

    // Infeasible: y with sum_m y_m A_mb NSD on every block and r^T y > 0.
    std::optional<Eigen::VectorXd> infeasibility_ray;
    // Unbounded: X PSD with A X = 0 and <C, X> < 0.
    std::optional<std::vector<Eigen::MatrixXd>> unbounded_ray;
};

ConicSolution solve(const ConicProgram& program, const SolverOptions& options = {});

/// sum_m y_m A_mb for one block, as a dense symmetric matrix.
Eigen::MatrixXd adjoint_block(const ConicProgram& program, const Eigen::VectorXd& y, int block);

/// sum_b <A_mb, X_b> for every constraint m.
Eigen::VectorXd apply_constraints(const ConicProgram& program, const std::vector<Eigen::MatrixXd>& x);

/// Checks an infeasibility ray independently of the solver: every block of
/// sum y_m A_mb has largest eigenvalue <= tolerance * r^T y, and r^T y > 0.
bool verify_infeasibility_ray(const ConicProgram& program, const Eigen::VectorXd& y, double tolerance);

}  // namespace pptdisc::conic
