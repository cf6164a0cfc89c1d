#include "pptdisc/embedding.hpp"

#include <cmath>

namespace pptdisc::conic {

Eigen::MatrixXd embed(const MatrixXc& hermitian) {
    const int d = static_cast<int>(hermitian.rows());
    if (hermitian.cols() != d) throw InvalidArgument("embed: matrix is not square");
    if ((hermitian - hermitian.adjoint()).norm() > tol::herm * (1.0 + hermitian.norm())) {
        throw InvalidArgument("embed: matrix is not Hermitian");
    }
    Eigen::MatrixXd out(2 * d, 2 * d);
    const Eigen::MatrixXd re = hermitian.real();
    const Eigen::MatrixXd im = hermitian.imag();
    out.topLeftCorner(d, d) = re;
    out.bottomRightCorner(d, d) = re;
    out.topRightCorner(d, d) = -im;
    out.bottomLeftCorner(d, d) = im;
    return out;
}

MatrixXc recover(const Eigen::MatrixXd& x, double tolerance) {
    const int d = static_cast<int>(x.rows()) / 2;
    if (x.rows() != 2 * d || x.cols() != 2 * d) throw InvalidArgument("recover: expected a 2D x 2D block");
    const auto x11 = x.topLeftCorner(d, d);
    const auto x22 = x.bottomRightCorner(d, d);
    const auto x12 = x.topRightCorner(d, d);
    const auto x21 = x.bottomLeftCorner(d, d);
    // ||XJ - JX||_F for J = [[0, -I], [I, 0]] equals sqrt(2) * sqrt(||X11 - X22||^2 + ||X12 + X21||^2).
    const double defect = std::sqrt(2.0 * ((x11 - x22).squaredNorm() + (x12 + x21).squaredNorm()));
    if (defect > tolerance * (1.0 + x.norm())) {
        throw NumericalError("recover: embedded block does not commute with the complex structure (defect " +
                             std::to_string(defect) + ")");
    }
    MatrixXc out(d, d);
    const Eigen::MatrixXd re = 0.5 * (x11 + x22);
    const Eigen::MatrixXd im = 0.5 * (x21 - x12);
    out.real() = 0.5 * (re + re.transpose());
    out.imag() = 0.5 * (im - im.transpose());
    return out;
}

std::vector<MatrixXc> hermitian_basis(int dim) {
    std::vector<MatrixXc> basis;
    basis.reserve(static_cast<std::size_t>(dim) * dim);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < dim; ++a) {
        MatrixXc e = MatrixXc::Zero(dim, dim);
        e(a, a) = 1.0;
        basis.push_back(std::move(e));
    }
    for (int a = 0; a < dim; ++a) {
        for (int b = a + 1; b < dim; ++b) {
            MatrixXc sym = MatrixXc::Zero(dim, dim);
            sym(a, b) = inv_sqrt2;
            sym(b, a) = inv_sqrt2;
            basis.push_back(std::move(sym));
            MatrixXc anti = MatrixXc::Zero(dim, dim);
            anti(a, b) = std::complex<double>(0.0, inv_sqrt2);
            anti(b, a) = std::complex<double>(0.0, -inv_sqrt2);
            basis.push_back(std::move(anti));
        }
    }
    return basis;
}

int ComplexProgram::add_block(int dim) {
    if (dim < 1) throw InvalidArgument("ComplexProgram::add_block: dim must be positive");
    dims_.push_back(dim);
    program_.block_sizes.push_back(2 * dim);
    program_.objective.push_back(Eigen::MatrixXd::Zero(2 * dim, 2 * dim));
    return static_cast<int>(dims_.size()) - 1;
}

void ComplexProgram::add_objective(int block, const MatrixXc& c) {
    if (c.rows() != block_dim(block) || c.cols() != block_dim(block)) {
        throw InvalidArgument("ComplexProgram::add_objective: size mismatch on block " + std::to_string(block));
    }
    program_.objective[block] += 0.5 * embed(c);
}

void ComplexProgram::append_coefficient(conic::Constraint& row, int block, const MatrixXc& g) const {
    const int d = block_dim(block);
    if (g.rows() != d || g.cols() != d) {
        throw InvalidArgument("ComplexProgram: coefficient size mismatch on block " + std::to_string(block));
    }
    for (int c = 0; c < d; ++c) {
        for (int r = 0; r < d; ++r) {
            const double re = 0.5 * g(r, c).real();
            const double im = 0.5 * g(r, c).imag();
            if (r >= c && re != 0.0) {
                row.terms.push_back({block, r, c, re});
                row.terms.push_back({block, d + r, d + c, re});
            }
            if (im != 0.0) row.terms.push_back({block, d + r, c, im});
        }
    }
}

int ComplexProgram::add_scalar_constraint(const std::vector<std::pair<int, MatrixXc>>& terms, double rhs) {
    conic::Constraint row;
    row.rhs = rhs;
    for (const auto& [block, g] : terms) {
        if ((g - g.adjoint()).norm() > tol::herm * (1.0 + g.norm())) {
            throw InvalidArgument("ComplexProgram: scalar constraint coefficient is not Hermitian");
        }
        append_coefficient(row, block, g);
    }
    program_.constraints.push_back(std::move(row));
    return static_cast<int>(program_.constraints.size()) - 1;
}

int ComplexProgram::add_matrix_constraint(const std::vector<MatrixTerm>& terms, const MatrixXc& rhs) {
    if (terms.empty()) throw InvalidArgument("ComplexProgram: matrix constraint without terms");
    const int d = static_cast<int>(rhs.rows());
    if (rhs.cols() != d || (rhs - rhs.adjoint()).norm() > tol::herm * (1.0 + rhs.norm())) {
        throw InvalidArgument("ComplexProgram: matrix constraint rhs must be square Hermitian");
    }
    for (const MatrixTerm& t : terms) {
        if (block_dim(t.block) != d) {
            throw InvalidArgument("ComplexProgram: matrix constraint term on block " + std::to_string(t.block) +
                                  " has mismatched size");
        }
        if (t.transpose_dims && t.transpose_dims->total() != d) {
            throw InvalidArgument("ComplexProgram: partial transpose dims do not match block size");
        }
    }
    const Group group{static_cast<int>(program_.constraints.size()), d};
    for (const MatrixXc& basis : hermitian_basis(d)) {
        conic::Constraint row;
        // Tr(B rhs), real for Hermitian B and rhs.
        row.rhs = (basis.array() * rhs.transpose().array()).sum().real();
        for (const MatrixTerm& t : terms) {
            // Tr(B L(M)) = Tr(L^*(B) M); the partial transpose is self-adjoint.
            const MatrixXc g = t.transpose_dims ? partial_transpose<double>(basis, *t.transpose_dims) : basis;
            append_coefficient(row, t.block, t.coeff * g);
        }
        program_.constraints.push_back(std::move(row));
    }
    groups_.push_back(group);
    return static_cast<int>(groups_.size()) - 1;
}

MatrixXc ComplexProgram::primal(const ConicSolution& solution, int block, double tolerance) const {
    return recover(solution.primal.at(block), tolerance);
}

MatrixXc ComplexProgram::slack(const ConicSolution& solution, int block, double tolerance) const {
    return 2.0 * recover(solution.slack.at(block), tolerance);
}

MatrixXc ComplexProgram::multiplier(const ConicSolution& solution, int group) const {
    const Group& g = groups_.at(group);
    const std::vector<MatrixXc> basis = hermitian_basis(g.dim);
    MatrixXc out = MatrixXc::Zero(g.dim, g.dim);
    for (std::size_t k = 0; k < basis.size(); ++k) {
        out += solution.multipliers(g.first_row + static_cast<int>(k)) * basis[k];
    }
    return out;
}

double ComplexProgram::scalar_multiplier(const ConicSolution& solution, int index) const {
    return solution.multipliers(index);
}

}  // namespace pptdisc::conic
