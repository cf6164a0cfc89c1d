#include "pptdisc/conic.hpp"

#include "pptdisc/operator.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace pptdisc::conic {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SparseCols = Eigen::SparseMatrix<double>;

// Symmetric matrices are flattened block by block into svec form: lower
// triangle, column-major, off-diagonal entries scaled by sqrt(2) so that the
// Euclidean inner product equals the trace inner product.
struct Layout {
    std::vector<int> sizes;
    std::vector<int> offsets;
    int total = 0;

    explicit Layout(const std::vector<int>& block_sizes) : sizes(block_sizes) {
        offsets.reserve(sizes.size());
        for (int n : sizes) {
            offsets.push_back(total);
            total += n * (n + 1) / 2;
        }
    }

    [[nodiscard]] int index(int block, int row, int col) const {
        if (row < col) std::swap(row, col);
        const int n = sizes[block];
        return offsets[block] + col * n - col * (col - 1) / 2 + (row - col);
    }

    void pack(int block, const Eigen::MatrixXd& m, Eigen::VectorXd& out) const {
        const int n = sizes[block];
        int k = offsets[block];
        for (int c = 0; c < n; ++c) {
            out(k++) = m(c, c);
            for (int r = c + 1; r < n; ++r) out(k++) = kSqrt2 * 0.5 * (m(r, c) + m(c, r));
        }
    }

    void unpack(int block, const Eigen::VectorXd& v, Eigen::MatrixXd& m) const {
        const int n = sizes[block];
        m.resize(n, n);
        int k = offsets[block];
        for (int c = 0; c < n; ++c) {
            m(c, c) = v(k++);
            for (int r = c + 1; r < n; ++r) {
                const double value = v(k++) / kSqrt2;
                m(r, c) = value;
                m(c, r) = value;
            }
        }
    }

    [[nodiscard]] std::vector<Eigen::MatrixXd> unpack_all(const Eigen::VectorXd& v) const {
        std::vector<Eigen::MatrixXd> out(sizes.size());
        for (std::size_t b = 0; b < sizes.size(); ++b) unpack(static_cast<int>(b), v, out[b]);
        return out;
    }

    [[nodiscard]] Eigen::VectorXd pack_all(const std::vector<Eigen::MatrixXd>& blocks) const {
        Eigen::VectorXd v(total);
        for (std::size_t b = 0; b < sizes.size(); ++b) pack(static_cast<int>(b), blocks[b], v);
        return v;
    }
};

SparseRows constraint_matrix(const ConicProgram& program, const Layout& layout) {
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t m = 0; m < program.constraints.size(); ++m) {
        for (const Entry& e : program.constraints[m].terms) {
            const double scale = e.row == e.col ? 1.0 : kSqrt2;
            triplets.emplace_back(static_cast<int>(m), layout.index(e.block, e.row, e.col), scale * e.value);
        }
    }
    SparseRows a(static_cast<int>(program.constraints.size()), layout.total);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.prune(0.0);
    return a;
}

struct PsdProjector {
    const Layout& layout;
    std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> solvers;
    std::vector<Eigen::MatrixXd> scratch;

    explicit PsdProjector(const Layout& l) : layout(l), solvers(l.sizes.size()), scratch(l.sizes.size()) {
        for (std::size_t b = 0; b < l.sizes.size(); ++b) {
            solvers[b] = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(l.sizes[b]);
        }
    }

    void project(const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        for (std::size_t b = 0; b < layout.sizes.size(); ++b) {
            const int block = static_cast<int>(b);
            if (layout.sizes[b] == 1) {
                out(layout.offsets[b]) = std::max(0.0, in(layout.offsets[b]));
                continue;
            }
            layout.unpack(block, in, scratch[b]);
            auto& solver = solvers[b];
            solver.compute(scratch[b]);
            if (solver.info() != Eigen::Success) {
                throw NumericalError("conic::solve: eigensolver failed in cone projection");
            }
            const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
            const Eigen::MatrixXd& v = solver.eigenvectors();
            scratch[b].noalias() = v * clipped.asDiagonal() * v.transpose();
            layout.pack(block, scratch[b], out);
        }
    }
};

double min_block_eigenvalue(const Eigen::MatrixXd& m) {
    if (m.rows() == 1) return m(0, 0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double max_block_eigenvalue(const Eigen::MatrixXd& m) {
    if (m.rows() == 1) return m(0, 0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(m.rows() - 1);
}

}  // namespace

std::string to_string(Status status) {
    switch (status) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::MaxIter: return "max_iter";
    }
    return "unknown";
}

void ConicProgram::validate() const {
    if (block_sizes.empty()) throw InvalidArgument("ConicProgram: no blocks");
    if (objective.size() != block_sizes.size()) {
        throw InvalidArgument("ConicProgram: objective has " + std::to_string(objective.size()) +
                              " blocks, expected " + std::to_string(block_sizes.size()));
    }
    for (std::size_t b = 0; b < block_sizes.size(); ++b) {
        const int n = block_sizes[b];
        if (n < 1) throw InvalidArgument("ConicProgram: block " + std::to_string(b) + " has size < 1");
        if (objective[b].rows() != n || objective[b].cols() != n) {
            throw InvalidArgument("ConicProgram: objective block " + std::to_string(b) + " is not " +
                                  std::to_string(n) + "x" + std::to_string(n));
        }
        if ((objective[b] - objective[b].transpose()).norm() > 1e-12 * (1.0 + objective[b].norm())) {
            throw InvalidArgument("ConicProgram: objective block " + std::to_string(b) + " is not symmetric");
        }
    }
    if (constraints.empty()) throw InvalidArgument("ConicProgram: constraint list is empty");
    for (std::size_t m = 0; m < constraints.size(); ++m) {
        if (!std::isfinite(constraints[m].rhs)) {
            throw InvalidArgument("ConicProgram: constraint " + std::to_string(m) + " has non-finite rhs");
        }
        for (const Entry& e : constraints[m].terms) {
            if (e.block < 0 || e.block >= static_cast<int>(block_sizes.size())) {
                throw InvalidArgument("ConicProgram: constraint " + std::to_string(m) + " references block " +
                                      std::to_string(e.block));
            }
            const int n = block_sizes[e.block];
            if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) {
                throw InvalidArgument("ConicProgram: constraint " + std::to_string(m) +
                                      " entry outside block " + std::to_string(e.block));
            }
            if (!std::isfinite(e.value)) {
                throw InvalidArgument("ConicProgram: constraint " + std::to_string(m) + " has non-finite entry");
            }
        }
    }
}

Eigen::MatrixXd adjoint_block(const ConicProgram& program, const Eigen::VectorXd& y, int block) {
    const int n = program.block_sizes.at(block);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t m = 0; m < program.constraints.size(); ++m) {
        for (const Entry& e : program.constraints[m].terms) {
            if (e.block != block) continue;
            out(e.row, e.col) += y(static_cast<int>(m)) * e.value;
            if (e.row != e.col) out(e.col, e.row) += y(static_cast<int>(m)) * e.value;
        }
    }
    return out;
}

Eigen::VectorXd apply_constraints(const ConicProgram& program, const std::vector<Eigen::MatrixXd>& x) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<int>(program.constraints.size()));
    for (std::size_t m = 0; m < program.constraints.size(); ++m) {
        for (const Entry& e : program.constraints[m].terms) {
            const double factor = e.row == e.col ? 1.0 : 2.0;
            out(static_cast<int>(m)) += factor * e.value * 0.5 * (x[e.block](e.row, e.col) + x[e.block](e.col, e.row));
        }
    }
    return out;
}

bool verify_infeasibility_ray(const ConicProgram& program, const Eigen::VectorXd& y, double tolerance) {
    if (y.size() != static_cast<int>(program.constraints.size())) return false;
    double r_dot_y = 0.0;
    for (std::size_t m = 0; m < program.constraints.size(); ++m) r_dot_y += program.constraints[m].rhs * y(static_cast<int>(m));
    if (!(r_dot_y > 0.0)) return false;
    for (std::size_t b = 0; b < program.block_sizes.size(); ++b) {
        const Eigen::MatrixXd block = adjoint_block(program, y, static_cast<int>(b));
        if (max_block_eigenvalue(block) > tolerance * r_dot_y) return false;
    }
    return true;
}

ConicSolution solve(const ConicProgram& program, const SolverOptions& options) {
    program.validate();
    if (options.eps_feas <= 0 || options.eps_gap <= 0 || options.max_iter < 1 || options.alpha <= 0 ||
        options.alpha >= 2 || options.rho <= 0 || options.check_interval < 1 || options.rebalance_interval < 1) {
        throw InvalidArgument("conic::solve: invalid solver options");
    }

    const Layout layout(program.block_sizes);
    const int num_rows = static_cast<int>(program.constraints.size());

    SparseRows a = constraint_matrix(program, layout);
    Eigen::VectorXd b(num_rows);
    for (int m = 0; m < num_rows; ++m) b(m) = program.constraints[m].rhs;

    // Row scaling: every constraint row gets unit norm.
    Eigen::VectorXd row_scale(num_rows);
    for (int m = 0; m < num_rows; ++m) {
        const double norm = a.row(m).norm();
        if (norm == 0.0) {
            if (b(m) != 0.0) {
                throw InvalidArgument("conic::solve: constraint " + std::to_string(m) +
                                      " has zero coefficients and nonzero rhs");
            }
            throw InvalidArgument("conic::solve: constraint " + std::to_string(m) + " has zero coefficients");
        }
        row_scale(m) = 1.0 / norm;
    }
    const SparseRows a_s = row_scale.asDiagonal() * a;
    const Eigen::VectorXd b_s = row_scale.cwiseProduct(b);
    const SparseCols a_s_t = a_s.transpose();

    const Eigen::VectorXd c = layout.pack_all(program.objective);
    const double c_norm = c.norm();
    const double c_scale = c_norm > 0.0 ? 1.0 / std::max(1.0, c_norm) : 1.0;
    const Eigen::VectorXd c_s = c * c_scale;

    SparseCols gram = (a_s * a_s_t).eval();
    Eigen::SimplicialLDLT<SparseCols> ldlt(gram);
    if (ldlt.info() != Eigen::Success) {
        throw InvalidArgument("conic::solve: constraint Gram matrix is singular");
    }
    {
        const Eigen::VectorXd pivots = ldlt.vectorD();
        if (pivots.minCoeff() <= 1e-12 * std::max(1.0, pivots.maxCoeff())) {
            throw InvalidArgument("conic::solve: constraints are linearly dependent (rank deficient)");
        }
    }

    const int n = layout.total;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z_prev(n), v(n), x_hat(n), tmp_rows(num_rows);
    Eigen::VectorXd y_s(num_rows), slack_s(n);
    double rho = options.rho;

    PsdProjector projector(layout);

    auto affine_project = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        tmp_rows.noalias() = a_s * in;
        tmp_rows -= b_s;
        const Eigen::VectorXd w = ldlt.solve(tmp_rows);
        out = in;
        out.noalias() -= a_s_t * w;
    };

    ConicSolution result;
    Eigen::VectorXd y_orig(num_rows);
    double pobj = 0.0, dobj = 0.0;
    Residuals res;

    auto evaluate = [&]() {
        slack_s = -rho * u;
        const Eigen::VectorXd rhs = a_s * (c_s - slack_s);
        y_s = ldlt.solve(rhs);
        const Eigen::VectorXd dual_res = c_s - a_s_t * y_s - slack_s;
        const Eigen::VectorXd primal_res = (a_s * z - b_s).cwiseQuotient(row_scale);
        y_orig = row_scale.cwiseProduct(y_s) / c_scale;
        pobj = c.dot(z);
        dobj = b.dot(y_orig);
        res.primal = primal_res.norm() / (1.0 + b.norm());
        res.dual = (dual_res.norm() / c_scale) / (1.0 + c_norm);
        res.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
    };

    const double stall_level = 1e3 * options.eps_feas;
    int primal_bad_since = -1;
    int dual_bad_since = -1;
    Eigen::VectorXd y_anchor, z_anchor;
    int anchor_iter = -1;
    constexpr int kRayStride = 100;

    int iter = 0;
    result.status = Status::MaxIter;
    for (iter = 1; iter <= options.max_iter; ++iter) {
        v = z - u - c_s / rho;
        affine_project(v, x);
        x_hat = options.alpha * x + (1.0 - options.alpha) * z;
        z_prev = z;
        v = x_hat + u;
        projector.project(v, z);
        u += x_hat - z;

        if (iter % options.rebalance_interval == 0) {
            const double r_primal = (x - z).norm();
            const double r_dual = rho * (z - z_prev).norm();
            if (r_primal > options.rebalance_ratio * r_dual && r_dual > 0.0) {
                rho *= 2.0;
                u *= 0.5;
            } else if (r_dual > options.rebalance_ratio * r_primal && r_primal > 0.0) {
                rho *= 0.5;
                u *= 2.0;
            }
        }

        if (iter % options.check_interval != 0 && iter != options.max_iter) continue;

        evaluate();
        if (res.primal <= options.eps_feas && res.dual <= options.eps_feas && res.gap <= options.eps_gap) {
            result.status = Status::Optimal;
            break;
        }

        primal_bad_since = res.primal > stall_level ? (primal_bad_since < 0 ? iter : primal_bad_since) : -1;
        dual_bad_since = res.dual > stall_level ? (dual_bad_since < 0 ? iter : dual_bad_since) : -1;

        if (iter % kRayStride == 0) {
            if (anchor_iter > 0) {
                if (primal_bad_since > 0 && iter - primal_bad_since >= options.infeasibility_window) {
                    const Eigen::VectorXd ray = y_orig - y_anchor;
                    if (verify_infeasibility_ray(program, ray, options.eps_feas)) {
                        result.status = Status::Infeasible;
                        result.infeasibility_ray = ray / b.dot(ray);
                        break;
                    }
                }
                if (dual_bad_since > 0 && iter - dual_bad_since >= options.infeasibility_window) {
                    Eigen::VectorXd ray = z - z_anchor;
                    const double c_dot = c.dot(ray);
                    if (c_dot < 0.0) {
                        ray /= -c_dot;
                        const std::vector<Eigen::MatrixXd> blocks = layout.unpack_all(ray);
                        bool ok = apply_constraints(program, blocks).norm() <= options.eps_feas;
                        for (const auto& blk : blocks) ok = ok && min_block_eigenvalue(blk) >= -options.eps_feas;
                        if (ok) {
                            result.status = Status::Unbounded;
                            result.unbounded_ray = blocks;
                            break;
                        }
                    }
                }
            }
            y_anchor = y_orig;
            z_anchor = z;
            anchor_iter = iter;
        }
    }

    result.iterations = std::min(iter, options.max_iter);
    result.final_rho = rho;
    result.primal = layout.unpack_all(z);
    result.slack = layout.unpack_all(slack_s / c_scale);
    result.multipliers = y_orig;
    result.primal_objective = pobj;
    result.dual_objective = dobj;
    result.residuals = res;
    return result;
}

}  // namespace pptdisc::conic
