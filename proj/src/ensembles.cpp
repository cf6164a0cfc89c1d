#include "pptdisc/ensembles.hpp"

#include "pptdisc/states.hpp"

#include <cmath>

namespace pptdisc {
namespace {

std::vector<std::pair<int, int>> pairs(int d) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) out.emplace_back(i, j);
    }
    return out;
}

void require_d(int d, const char* where) {
    if (d < 2) throw InvalidArgument(std::string(where) + ": d must be >= 2, got " + std::to_string(d));
}

SystemDims square(int d) { return SystemDims(d, d); }

}  // namespace

std::string to_string(ExampleKind kind) {
    switch (kind) {
        case ExampleKind::Ex1: return "example1";
        case ExampleKind::Ex2: return "example2";
        case ExampleKind::Ex3: return "example3";
    }
    return "unknown";
}

void ExampleSpec::validate() const {
    switch (example) {
        case ExampleKind::Ex1:
            require_d(d, "example 1");
            if (!(lambda > 0.0 && lambda <= 1.0)) {
                throw InvalidArgument("example 1: lambda must be in (0, 1], got " + std::to_string(lambda));
            }
            if (sigma) {
                if (!(sigma->dims() == square(d))) throw InvalidArgument("example 1: sigma has wrong dims");
                if (std::abs(sigma->trace() - 1.0) > 1e-10 || !is_psd(*sigma)) {
                    throw InvalidArgument("example 1: sigma is not a density operator");
                }
            }
            break;
        case ExampleKind::Ex2:
            if (t && !(*t >= 0.0 && *t <= 1.0)) {
                throw InvalidArgument("example 2: t must be in [0, 1], got " + std::to_string(*t));
            }
            break;
        case ExampleKind::Ex3:
            require_d(d, "example 3");
            if (!(lambda >= 0.0 && lambda < 1.0)) {
                throw InvalidArgument("example 3: lambda must be in [0, 1), got " + std::to_string(lambda));
            }
            break;
    }
}

Example1Label example1_label(int d, int index) {
    const auto ps = pairs(d);
    if (index < 0 || index >= 4 * static_cast<int>(ps.size())) {
        throw InvalidArgument("example1_label: index " + std::to_string(index) + " out of range");
    }
    const auto [i, j] = ps[index / 4];
    return {i, j, 1 + (index % 4) / 2, 1 + index % 2};
}

int example1_index(int d, const Example1Label& label) {
    const auto ps = pairs(d);
    for (std::size_t p = 0; p < ps.size(); ++p) {
        if (ps[p] == std::make_pair(label.i, label.j)) {
            return static_cast<int>(4 * p) + 2 * (label.k - 1) + (label.l - 1);
        }
    }
    throw InvalidArgument("example1_index: no pair (" + std::to_string(label.i) + ", " + std::to_string(label.j) + ")");
}

Example1 example1(int d, double lambda, const std::optional<Operator>& sigma) {
    ExampleSpec{ExampleKind::Ex1, d, lambda, sigma, std::nullopt}.validate();
    const SystemDims dims = square(d);
    const Operator background = sigma ? *sigma : maximally_mixed(dims);
    const double prior = 1.0 / (2.0 * d * (d - 1));
    std::vector<EnsembleItem> items;
    std::vector<Operator> elements;
    for (const auto& [i, j] : pairs(d)) {
        const Operator pi1 = state_family(dims, StateFamily::Pi1, i, j);
        const Operator pi2 = state_family(dims, StateFamily::Pi2, i, j);
        for (int k = 1; k <= 2; ++k) {
            const Operator psi = state_family(dims, psi_family(k), i, j);
            for (int l = 1; l <= 2; ++l) {
                const Operator& pi = l == 1 ? pi1 : pi2;
                items.push_back({prior, (lambda / 3.0) * (psi + pi) + (1.0 - lambda) * background});
                elements.push_back(l == 1 ? pi1 / (2.0 * (d - 1)) : pi2 / 2.0);
            }
        }
    }
    Measurement measurement(dims, std::move(elements), true);
    if (!measurement.is_ppt()) throw NumericalError("example1: product-basis measurement failed the PPT check");
    return {Ensemble(dims, std::move(items)), std::move(measurement)};
}

double example1_closed_form(int d, double lambda) {
    return (6.0 + lambda * (2.0 * d - 3.0) * (d + 2.0)) / (12.0 * d * (d - 1.0));
}

Ensemble example2() {
    const SystemDims dims(2, 2);
    const double third = 1.0 / 3.0;
    return Ensemble(dims, {{third, product_basis_state(dims, 0, 0)},
                           {third, product_basis_state(dims, 1, 1)},
                           {third, bell_state(StateFamily::PsiPlus)}});
}

Operator example2_dual(double t) {
    ExampleSpec{ExampleKind::Ex2, 2, 0.0, std::nullopt, t}.validate();
    return (bell_state(StateFamily::PhiPlus) + bell_state(StateFamily::PhiMinus)) / 3.0 +
           ((1.0 + t) / 6.0) * bell_state(StateFamily::PsiPlus) + ((1.0 - t) / 6.0) * bell_state(StateFamily::PsiMinus);
}

Ensemble example3(int d, double lambda) {
    ExampleSpec{ExampleKind::Ex3, d, lambda, std::nullopt, std::nullopt}.validate();
    const SystemDims dims = square(d);
    const Operator mixed = maximally_mixed(dims);
    const double denom = 5.0 * d - 4.0;
    std::vector<EnsembleItem> items{{d / denom, mixed}};
    for (const auto& [i, j] : pairs(d)) {
        for (int k = 1; k <= 4; ++k) {
            items.push_back({2.0 / (d * denom), (1.0 - lambda) * state_family(dims, psi_family(k), i, j) + lambda * mixed});
        }
    }
    return Ensemble(dims, std::move(items));
}

Example3Label example3_label(int d, int index) {
    const auto ps = pairs(d);
    if (index < 1 || index > 4 * static_cast<int>(ps.size())) {
        throw InvalidArgument("example3_label: index " + std::to_string(index) + " does not name a Psi state");
    }
    const auto [i, j] = ps[(index - 1) / 4];
    return {i, j, 1 + (index - 1) % 4};
}

double example3_closed_form(int d) { return d / (5.0 * d - 4.0); }

double example3_threshold(int d) { return d * d / (2.0 * (d * d - 1.0)); }

Operator example3_difference(int d, double lambda, int i, int j, int k) {
    const Ensemble e = example3(d, lambda);
    const int pair = [&] {
        const auto ps = pairs(d);
        for (std::size_t p = 0; p < ps.size(); ++p) {
            if (ps[p] == std::make_pair(i, j)) return static_cast<int>(p);
        }
        throw InvalidArgument("example3_difference: no pair (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }();
    psi_family(k);
    return e.weighted(0) - e.weighted(1 + 4 * pair + (k - 1));
}

Operator default_compensator(const Operator& w) {
    const Spectrum<double> s = spectrum(w);
    if (s.min() >= 0.0) return Operator::zero(w.dims());
    MatrixXc projector = MatrixXc::Zero(w.size(), w.size());
    for (int a = 0; a < s.eigenvalues.size(); ++a) {
        if (s.eigenvalues(a) < 0.0) projector += s.eigenvectors.col(a) * s.eigenvectors.col(a).adjoint();
    }
    return Operator(w.dims(), projector * std::abs(s.min()));
}

Construction construct_from_dew(const Operator& w, const std::optional<Operator>& p_in,
                                const conic::SolverOptions& options) {
    WitnessClass witness = classify_witness(w, options);
    if (witness.classification != WitnessKind::DEW) {
        throw PreconditionError("construct_from_dew: W classifies as " + to_string(witness.classification) +
                                    ", expected dew",
                                std::move(witness));
    }
    const Operator p = p_in ? *p_in : default_compensator(w);
    w.require_same_dims(p, "construct_from_dew");
    const double p_min = min_eigenvalue(p);
    if (p_min < -tol::psd) {
        throw PreconditionError("construct_from_dew: P is not PSD (eigenvalue " + std::to_string(p_min) + ")", witness);
    }
    const Operator sum = p + w;
    const double sum_min = min_eigenvalue(sum);
    if (sum_min < -tol::psd) {
        throw PreconditionError("construct_from_dew: P + W is not PSD (eigenvalue " + std::to_string(sum_min) + ")",
                                witness);
    }
    const double total = 2.0 * p.trace() + w.trace();
    if (!(total > 0.0) || !(p.trace() > 0.0)) {
        throw PreconditionError("construct_from_dew: Tr(2P + W) and Tr P must be positive", witness);
    }
    const double t1 = sum.trace();
    const double t2 = p.trace();
    Construction out{Ensemble(w.dims(), {{t1 / total, clip_to_psd(sum) / t1}, {t2 / total, p / t2}}), {}, p};
    out.witnesses.push_back(std::move(witness));
    return out;
}

Construction construct_from_dews(const std::vector<Operator>& ws, const std::vector<double>& lambdas,
                                 const conic::SolverOptions& options) {
    if (ws.empty()) throw InvalidArgument("construct_from_dews: need at least one witness");
    if (ws.size() != lambdas.size()) {
        throw InvalidArgument("construct_from_dews: " + std::to_string(ws.size()) + " witnesses but " +
                              std::to_string(lambdas.size()) + " lambdas");
    }
    const SystemDims dims = ws.front().dims();
    const Operator identity = Operator::identity(dims);
    std::vector<WitnessClass> witnesses;
    std::vector<Operator> shifted;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const std::string where = "construct_from_dews: witness " + std::to_string(i);
        ws[i].require_same_dims(identity, where.c_str());
        if (!(lambdas[i] > 0.0)) throw InvalidArgument(where + " has non-positive lambda");
        WitnessClass witness = classify_witness(ws[i], options);
        if (witness.classification != WitnessKind::DEW) {
            throw PreconditionError(where + " classifies as " + to_string(witness.classification) + ", expected dew",
                                    std::move(witness));
        }
        Operator s = identity - lambdas[i] * ws[i];
        const double lowest = min_eigenvalue(s);
        if (lowest < -tol::psd) {
            throw PreconditionError(where + ": 1 - lambda W is not PSD (eigenvalue " + std::to_string(lowest) + ")",
                                    std::move(witness));
        }
        shifted.push_back(clip_to_psd(s));
        witnesses.push_back(std::move(witness));
    }
    double total = identity.trace();
    for (const Operator& s : shifted) total += s.trace();
    std::vector<EnsembleItem> items{{identity.trace() / total, identity / identity.trace()}};
    for (const Operator& s : shifted) items.push_back({s.trace() / total, s / s.trace()});
    // Normalize the priors exactly so rounding never trips the ensemble check.
    double sum = 0.0;
    for (const auto& item : items) sum += item.eta;
    for (auto& item : items) item.eta /= sum;
    return Construction{Ensemble(dims, std::move(items)), std::move(witnesses), std::nullopt};
}

}  // namespace pptdisc
