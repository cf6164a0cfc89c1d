#pragma once

// Dense Hermitian operators on C^{d1} (x) C^{d2}.
//
// Basis convention: product basis |a>|b>, second factor fastest, so the
// row/column index of |a b> is a * d2 + b. Every constructor and the partial
// transpose use this single ordering.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace pptdisc {

/// Thrown for malformed inputs: dimension mismatches, non-Hermitian data,
/// out-of-range indices or parameters.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical routine fails (eigensolver, factorization).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double herm = 1e-10;  // Hermiticity assertion
inline constexpr double psd = 1e-8;    // PSD verdicts
inline constexpr double eig = 1e-10;   // eigensolver reconstruction residual
inline constexpr double cert = 1e-6;   // certificate reconstruction residual
inline constexpr double verdict = 1e-5;  // p_PPT vs p_G equality verdicts
}  // namespace tol

struct SystemDims {
    int d1 = 2;
    int d2 = 2;

    SystemDims() = default;
    SystemDims(int first, int second) : d1(first), d2(second) {
        if (d1 < 2 || d2 < 2) {
            throw InvalidArgument("SystemDims: both factors need dimension >= 2, got " +
                                  std::to_string(d1) + "x" + std::to_string(d2));
        }
    }

    [[nodiscard]] int total() const { return d1 * d2; }
    [[nodiscard]] int index(int a, int b) const { return a * d2 + b; }

    friend bool operator==(const SystemDims&, const SystemDims&) = default;
};

inline std::string to_string(const SystemDims& dims) {
    return std::to_string(dims.d1) + "x" + std::to_string(dims.d2);
}

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// Hermitian operator with recorded subsystem dimensions. Immutable; the
/// stored matrix is exactly Hermitian (inputs are checked against tol::herm
/// and then symmetrized).
template <typename Real = double>
class BipartiteOperator {
public:
    using Scalar = std::complex<Real>;
    using Matrix = ComplexMatrix<Real>;

    BipartiteOperator() = default;

    BipartiteOperator(SystemDims dims, Matrix entries) : dims_(dims), entries_(std::move(entries)) {
        const int n = dims_.total();
        if (entries_.rows() != n || entries_.cols() != n) {
            throw InvalidArgument("BipartiteOperator: matrix is " + std::to_string(entries_.rows()) +
                                  "x" + std::to_string(entries_.cols()) + " but dims " +
                                  to_string(dims_) + " require " + std::to_string(n) + "x" +
                                  std::to_string(n));
        }
        const Real asym = (entries_ - entries_.adjoint()).norm();
        if (!(asym <= Real(tol::herm) * (Real(1) + entries_.norm()))) {
            throw InvalidArgument("BipartiteOperator: not Hermitian (||A - A^dag||_F = " +
                                  std::to_string(static_cast<double>(asym)) + ")");
        }
        entries_ = (entries_ + entries_.adjoint()).eval() * Real(0.5);
    }

    static BipartiteOperator identity(SystemDims dims) {
        return BipartiteOperator(dims, Matrix::Identity(dims.total(), dims.total()));
    }

    static BipartiteOperator zero(SystemDims dims) {
        return BipartiteOperator(dims, Matrix::Zero(dims.total(), dims.total()));
    }

    /// Rank-one projector |v><v| (v is not normalized here).
    static BipartiteOperator projector(SystemDims dims, const ComplexVector<Real>& v) {
        return BipartiteOperator(dims, v * v.adjoint());
    }

    [[nodiscard]] const SystemDims& dims() const { return dims_; }
    [[nodiscard]] const Matrix& matrix() const { return entries_; }
    [[nodiscard]] int size() const { return dims_.total(); }

    [[nodiscard]] Real trace() const { return entries_.trace().real(); }
    [[nodiscard]] Real norm() const { return entries_.norm(); }

    BipartiteOperator operator+(const BipartiteOperator& other) const {
        require_same_dims(other, "operator+");
        return from_trusted(dims_, entries_ + other.entries_);
    }
    BipartiteOperator operator-(const BipartiteOperator& other) const {
        require_same_dims(other, "operator-");
        return from_trusted(dims_, entries_ - other.entries_);
    }
    BipartiteOperator operator-() const { return from_trusted(dims_, -entries_); }
    BipartiteOperator operator*(Real s) const { return from_trusted(dims_, entries_ * s); }
    BipartiteOperator operator/(Real s) const { return from_trusted(dims_, entries_ / s); }
    friend BipartiteOperator operator*(Real s, const BipartiteOperator& a) { return a * s; }

    BipartiteOperator& operator+=(const BipartiteOperator& other) {
        require_same_dims(other, "operator+=");
        entries_ += other.entries_;
        return *this;
    }
    BipartiteOperator& operator-=(const BipartiteOperator& other) {
        require_same_dims(other, "operator-=");
        entries_ -= other.entries_;
        return *this;
    }

    void require_same_dims(const BipartiteOperator& other, const char* where) const {
        if (!(dims_ == other.dims_)) {
            throw InvalidArgument(std::string(where) + ": dims mismatch " + to_string(dims_) +
                                  " vs " + to_string(other.dims_));
        }
    }

    /// Skips the Hermiticity check; `entries` must already be Hermitian.
    static BipartiteOperator from_trusted(SystemDims dims, Matrix entries) {
        BipartiteOperator out;
        out.dims_ = dims;
        out.entries_ = std::move(entries);
        return out;
    }

private:
    SystemDims dims_{};
    Matrix entries_{};
};

using Operator = BipartiteOperator<double>;
using MatrixXc = ComplexMatrix<double>;
using VectorXc = ComplexVector<double>;

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
template <typename Real>
struct Spectrum {
    RealVector<Real> eigenvalues;
    ComplexMatrix<Real> eigenvectors;  // orthonormal columns

    [[nodiscard]] Real min() const { return eigenvalues(0); }
    [[nodiscard]] Real max() const { return eigenvalues(eigenvalues.size() - 1); }
};

template <typename Real>
Spectrum<Real> spectrum(const ComplexMatrix<Real>& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(a);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("spectrum: Hermitian eigensolver did not converge");
    }
    Spectrum<Real> out{solver.eigenvalues(), solver.eigenvectors()};
    const ComplexMatrix<Real> rebuilt =
        out.eigenvectors * out.eigenvalues.template cast<std::complex<Real>>().asDiagonal() *
        out.eigenvectors.adjoint();
    const Real residual = (a - rebuilt).norm();
    if (!(residual <= Real(tol::eig) * std::max(Real(1), a.norm()))) {
        throw NumericalError("spectrum: reconstruction residual " +
                             std::to_string(static_cast<double>(residual)) + " exceeds bound");
    }
    return out;
}

template <typename Real>
Spectrum<Real> spectrum(const BipartiteOperator<Real>& a) {
    return spectrum<Real>(a.matrix());
}

template <typename Real>
Real min_eigenvalue(const BipartiteOperator<Real>& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(a.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("min_eigenvalue: Hermitian eigensolver did not converge");
    }
    return solver.eigenvalues()(0);
}

template <typename Real>
bool is_psd(const BipartiteOperator<Real>& a, Real tolerance = Real(tol::psd)) {
    return min_eigenvalue(a) >= -tolerance;
}

/// Partial transpose on the second factor: <a b|A^T2|c e> = <a e|A|c b>.
template <typename Real>
ComplexMatrix<Real> partial_transpose(const ComplexMatrix<Real>& a, SystemDims dims) {
    if (a.rows() != dims.total() || a.cols() != dims.total()) {
        throw InvalidArgument("partial_transpose: matrix size does not match dims " +
                              to_string(dims));
    }
    ComplexMatrix<Real> out(a.rows(), a.cols());
    for (int i = 0; i < dims.d1; ++i) {
        for (int j = 0; j < dims.d2; ++j) {
            for (int k = 0; k < dims.d1; ++k) {
                for (int l = 0; l < dims.d2; ++l) {
                    out(dims.index(i, j), dims.index(k, l)) = a(dims.index(i, l), dims.index(k, j));
                }
            }
        }
    }
    return out;
}

template <typename Real>
BipartiteOperator<Real> partial_transpose(const BipartiteOperator<Real>& a) {
    return BipartiteOperator<Real>::from_trusted(a.dims(), partial_transpose<Real>(a.matrix(), a.dims()));
}

/// Tr(AB) for Hermitian A, B. The imaginary residue is asserted small and dropped.
template <typename Real>
Real trace_inner(const BipartiteOperator<Real>& a, const BipartiteOperator<Real>& b) {
    a.require_same_dims(b, "trace_inner");
    // Tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
    const std::complex<Real> value = (a.matrix().array() * b.matrix().conjugate().array()).sum();
    if (std::abs(value.imag()) > Real(tol::herm) * (Real(1) + a.norm() * b.norm())) {
        throw NumericalError("trace_inner: imaginary residue " +
                             std::to_string(static_cast<double>(value.imag())));
    }
    return value.real();
}

/// Kronecker product X (x) Y of Hermitian factors.
template <typename Real>
BipartiteOperator<Real> tensor(const ComplexMatrix<Real>& x, const ComplexMatrix<Real>& y) {
    if (x.rows() != x.cols() || y.rows() != y.cols()) {
        throw InvalidArgument("tensor: factors must be square");
    }
    const SystemDims dims(static_cast<int>(x.rows()), static_cast<int>(y.rows()));
    ComplexMatrix<Real> out(dims.total(), dims.total());
    for (int a = 0; a < dims.d1; ++a) {
        for (int c = 0; c < dims.d1; ++c) {
            out.block(a * dims.d2, c * dims.d2, dims.d2, dims.d2) = x(a, c) * y;
        }
    }
    return BipartiteOperator<Real>(dims, std::move(out));
}

/// Negative part projector scaled: sum over eigenvalues < 0 of |lambda| |v><v|.
template <typename Real>
BipartiteOperator<Real> negative_part(const BipartiteOperator<Real>& a) {
    const Spectrum<Real> s = spectrum(a);
    ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(a.size(), a.size());
    for (int k = 0; k < s.eigenvalues.size(); ++k) {
        if (s.eigenvalues(k) < Real(0)) {
            out -= s.eigenvalues(k) * s.eigenvectors.col(k) * s.eigenvectors.col(k).adjoint();
        }
    }
    return BipartiteOperator<Real>::from_trusted(a.dims(), (out + out.adjoint()) * Real(0.5));
}

/// Replaces eigenvalues below zero by zero.
template <typename Real>
BipartiteOperator<Real> clip_to_psd(const BipartiteOperator<Real>& a) {
    return a + negative_part(a);
}

/// Trace norm ||A||_1 = sum |lambda_k|.
template <typename Real>
Real trace_norm(const BipartiteOperator<Real>& a) {
    return spectrum(a).eigenvalues.cwiseAbs().sum();
}

}  // namespace pptdisc
