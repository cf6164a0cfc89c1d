#pragma once

// Seeded samplers and independent reference computations for the tests.

#include "pptdisc/discrimination.hpp"

#include <Eigen/SVD>

#include <random>

namespace pptdisc::testing {

using Rng = std::mt19937_64;

inline MatrixXc ginibre(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> normal;
    MatrixXc g(rows, cols);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) g(r, c) = {normal(rng), normal(rng)};
    }
    return g;
}

inline Operator random_hermitian(SystemDims dims, Rng& rng) {
    const MatrixXc g = ginibre(dims.total(), dims.total(), rng);
    return Operator(dims, (g + g.adjoint()) * 0.5);
}

/// G G^dagger / Tr with G of width `rank`.
inline Operator random_density(SystemDims dims, int rank, Rng& rng) {
    const MatrixXc g = ginibre(dims.total(), rank, rng);
    const MatrixXc rho = g * g.adjoint();
    return Operator(dims, rho / rho.trace().real());
}

/// Convex combination of product pure states, hence in PPT+.
inline Operator random_separable(SystemDims dims, int terms, Rng& rng) {
    MatrixXc sum = MatrixXc::Zero(dims.total(), dims.total());
    for (int t = 0; t < terms; ++t) {
        const MatrixXc a = ginibre(dims.d1, 1, rng);
        const MatrixXc b = ginibre(dims.d2, 1, rng);
        const MatrixXc pa = a * a.adjoint();
        const MatrixXc pb = b * b.adjoint();
        sum += tensor<double>(pa, pb).matrix();
    }
    return Operator(dims, sum / sum.trace().real());
}

inline Ensemble random_ensemble(SystemDims dims, int n, Rng& rng) {
    std::exponential_distribution<double> weight;
    std::uniform_int_distribution<int> rank(1, dims.total());
    std::vector<double> eta(n);
    double total = 0.0;
    for (double& e : eta) total += (e = weight(rng) + 0.05);
    std::vector<EnsembleItem> items;
    for (int i = 0; i < n; ++i) items.push_back({eta[i] / total, random_density(dims, rank(rng), rng)});
    return Ensemble(dims, std::move(items));
}

/// Sum of singular values, computed without the library's eigensolver path.
inline double trace_norm_svd(const MatrixXc& a) {
    return Eigen::JacobiSVD<MatrixXc>(a).singularValues().sum();
}

/// Optimal two-state success probability: (1 + ||eta_1 rho_1 - eta_2 rho_2||_1) / 2.
inline double helstrom(const Ensemble& e) {
    return 0.5 * (1.0 + trace_norm_svd(e.weighted(0).matrix() - e.weighted(1).matrix()));
}

/// Swap operator on C^d (x) C^d built entrywise.
inline MatrixXc swap_matrix(int d) {
    MatrixXc s = MatrixXc::Zero(d * d, d * d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) s(a * d + b, b * d + a) = 1.0;
    }
    return s;
}

}  // namespace pptdisc::testing
