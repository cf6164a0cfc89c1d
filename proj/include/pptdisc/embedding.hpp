#pragma once

// Complex Hermitian programs on top of the real conic solver.
//
// A D x D Hermitian block M is represented by the 2D x 2D real symmetric
// matrix [[Re M, -Im M], [Im M, Re M]]. Coefficients are embedded the same way
// and scaled by 1/2, so real inner products equal the complex trace inner
// products Tr(C M).

#include "pptdisc/conic.hpp"
#include "pptdisc/operator.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace pptdisc::conic {

/// 2D x 2D real symmetric embedding of a Hermitian matrix.
Eigen::MatrixXd embed(const MatrixXc& hermitian);

/// Inverse of embed(); averages the redundant copies. Throws NumericalError
/// when the input is farther than `tolerance` (relative) from the image of
/// embed(), i.e. when it does not commute with the complex structure J.
MatrixXc recover(const Eigen::MatrixXd& real_symmetric, double tolerance);

/// Orthonormal (under Tr(AB)) basis of D x D Hermitian matrices, D^2 elements.
std::vector<MatrixXc> hermitian_basis(int dim);

/// One term coeff * L(M_block) of a Hermitian-valued linear constraint, where
/// L is the identity or the partial transpose over `transpose_dims`.
struct MatrixTerm {
    int block = 0;
    double coeff = 1.0;
    std::optional<SystemDims> transpose_dims;
};

class ComplexProgram {
public:
    /// Adds a Hermitian PSD variable of size dim; returns its block id.
    int add_block(int dim);

    /// Adds Tr(C M_block) to the objective (minimized).
    void add_objective(int block, const MatrixXc& c);

    /// sum_t Tr(G_t M_{b_t}) = rhs. Returns the scalar multiplier index.
    int add_scalar_constraint(const std::vector<std::pair<int, MatrixXc>>& terms, double rhs);

    /// sum_t coeff_t L_t(M_{b_t}) = rhs as D^2 scalar constraints against the
    /// Hermitian basis. Returns a group id for multiplier().
    int add_matrix_constraint(const std::vector<MatrixTerm>& terms, const MatrixXc& rhs);

    [[nodiscard]] const ConicProgram& program() const { return program_; }
    [[nodiscard]] int num_blocks() const { return static_cast<int>(dims_.size()); }
    [[nodiscard]] int block_dim(int block) const { return dims_.at(block); }

    /// Complex primal block M_b.
    [[nodiscard]] MatrixXc primal(const ConicSolution& solution, int block, double tolerance = 1e-7) const;
    /// Complex dual slack S_b = C_b - sum_m y_m G_mb.
    [[nodiscard]] MatrixXc slack(const ConicSolution& solution, int block, double tolerance = 1e-7) const;
    /// Hermitian multiplier sum_k y_k B_k of a matrix constraint group.
    [[nodiscard]] MatrixXc multiplier(const ConicSolution& solution, int group) const;
    /// Multiplier of a scalar constraint.
    [[nodiscard]] double scalar_multiplier(const ConicSolution& solution, int index) const;

private:
    void append_coefficient(conic::Constraint& row, int block, const MatrixXc& g) const;

    struct Group {
        int first_row = 0;
        int dim = 0;
    };

    ConicProgram program_;
    std::vector<int> dims_;
    std::vector<Group> groups_;
};

}  // namespace pptdisc::conic
