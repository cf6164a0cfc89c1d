#pragma once

// Named two-qudit operator families on C^d (x) C^d.

#include "pptdisc/operator.hpp"

#include <cmath>
#include <string_view>

namespace pptdisc {

enum class StateFamily {
    Psi1,          // (|ii> + |jj>)(<ii| + <jj|) / 2
    Psi2,          // (|ii> - |jj>)(<ii| - <jj|) / 2
    Psi3,          // (|ij> + |ji>)(<ij| + <ji|) / 2
    Psi4,          // (|ij> - |ji>)(<ij| - <ji|) / 2
    Pi1,           // |ii><ii| + |jj><jj|
    Pi2,           // |ij><ij| + |ji><ji|
    PiHat1,        // all |aa><aa| minus Pi1
    PiHat2,        // all |ab><ab| with a != b minus Pi2
    IdentityPair,  // (|i><i| + |j><j|) (x) (|i><i| + |j><j|)
    PhiPlus,       // Bell states, d = 2 only
    PhiMinus,
    PsiPlus,
    PsiMinus,
};

std::string_view to_string(StateFamily family);
StateFamily state_family_from_string(std::string_view name);

/// Psi^(k) for k in 1..4.
inline StateFamily psi_family(int k) {
    switch (k) {
        case 1: return StateFamily::Psi1;
        case 2: return StateFamily::Psi2;
        case 3: return StateFamily::Psi3;
        case 4: return StateFamily::Psi4;
        default: throw InvalidArgument("psi_family: k must be in 1..4, got " + std::to_string(k));
    }
}

template <typename Real = double>
BipartiteOperator<Real> state_family(SystemDims dims, StateFamily family, int i = 0, int j = 1) {
    using Matrix = ComplexMatrix<Real>;
    using Vector = ComplexVector<Real>;
    if (dims.d1 != dims.d2) {
        throw InvalidArgument("state_family: requires d1 == d2, got " + to_string(dims));
    }
    const int d = dims.d1;
    if (i < 0 || j < 0 || i >= d || j >= d) {
        throw InvalidArgument("state_family: index out of range for d = " + std::to_string(d));
    }
    if (i >= j) {
        throw InvalidArgument("state_family: need i < j, got i = " + std::to_string(i) +
                              ", j = " + std::to_string(j));
    }
    const bool bell = family == StateFamily::PhiPlus || family == StateFamily::PhiMinus ||
                      family == StateFamily::PsiPlus || family == StateFamily::PsiMinus;
    if (bell && d != 2) {
        throw InvalidArgument("state_family: Bell states require d = 2, got d = " + std::to_string(d));
    }
    const int n = dims.total();
    const Real inv_sqrt2 = Real(1) / std::sqrt(Real(2));
    auto ket = [&](int a, int b) {
        Vector v = Vector::Zero(n);
        v(dims.index(a, b)) = Real(1);
        return v;
    };
    auto diag = [&](int a, int b) {
        Matrix m = Matrix::Zero(n, n);
        m(dims.index(a, b), dims.index(a, b)) = Real(1);
        return m;
    };
    auto pure = [&](const Vector& v) { return BipartiteOperator<Real>(dims, v * v.adjoint()); };

    switch (family) {
        case StateFamily::Psi1:
        case StateFamily::PhiPlus:
            return pure((ket(i, i) + ket(j, j)) * inv_sqrt2);
        case StateFamily::Psi2:
        case StateFamily::PhiMinus:
            return pure((ket(i, i) - ket(j, j)) * inv_sqrt2);
        case StateFamily::Psi3:
        case StateFamily::PsiPlus:
            return pure((ket(i, j) + ket(j, i)) * inv_sqrt2);
        case StateFamily::Psi4:
        case StateFamily::PsiMinus:
            return pure((ket(i, j) - ket(j, i)) * inv_sqrt2);
        case StateFamily::Pi1:
            return BipartiteOperator<Real>(dims, diag(i, i) + diag(j, j));
        case StateFamily::Pi2:
            return BipartiteOperator<Real>(dims, diag(i, j) + diag(j, i));
        case StateFamily::PiHat1: {
            Matrix m = Matrix::Zero(n, n);
            for (int a = 0; a < d; ++a) {
                if (a != i && a != j) m += diag(a, a);
            }
            return BipartiteOperator<Real>(dims, m);
        }
        case StateFamily::PiHat2: {
            Matrix m = Matrix::Zero(n, n);
            for (int a = 0; a < d; ++a) {
                for (int b = 0; b < d; ++b) {
                    if (a == b) continue;
                    if ((a == i && b == j) || (a == j && b == i)) continue;
                    m += diag(a, b);
                }
            }
            return BipartiteOperator<Real>(dims, m);
        }
        case StateFamily::IdentityPair: {
            Matrix local = Matrix::Zero(d, d);
            local(i, i) = Real(1);
            local(j, j) = Real(1);
            return tensor<Real>(local, local);
        }
    }
    throw InvalidArgument("state_family: unknown family");
}

/// Two-qubit Bell projectors.
template <typename Real = double>
BipartiteOperator<Real> bell_state(StateFamily family) {
    return state_family<Real>(SystemDims(2, 2), family, 0, 1);
}

/// |a><a| (x) |b><b| on C^{d1} (x) C^{d2}.
template <typename Real = double>
BipartiteOperator<Real> product_basis_state(SystemDims dims, int a, int b) {
    if (a < 0 || a >= dims.d1 || b < 0 || b >= dims.d2) {
        throw InvalidArgument("product_basis_state: index out of range");
    }
    ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(dims.total(), dims.total());
    m(dims.index(a, b), dims.index(a, b)) = Real(1);
    return BipartiteOperator<Real>(dims, std::move(m));
}

template <typename Real = double>
BipartiteOperator<Real> maximally_mixed(SystemDims dims) {
    return BipartiteOperator<Real>::identity(dims) / Real(dims.total());
}

}  // namespace pptdisc
