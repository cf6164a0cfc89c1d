#pragma once

// The concrete ensembles of the three worked examples and the builders that
// turn decomposable entanglement witnesses into ensembles with p_PPT < p_G.

#include "pptdisc/cone.hpp"
#include "pptdisc/discrimination.hpp"
#include "pptdisc/operator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pptdisc {

enum class ExampleKind { Ex1, Ex2, Ex3 };
std::string to_string(ExampleKind kind);

struct ExampleSpec {
    ExampleKind example = ExampleKind::Ex1;
    int d = 2;
    double lambda = 1.0;
    std::optional<Operator> sigma;  // Ex1 background state
    std::optional<double> t;        // Ex2 dual family

    /// Ex1: 0 < lambda <= 1, Ex3: 0 <= lambda < 1, d >= 2 for both; Ex2: t in [0, 1].
    void validate() const;
};

/// Flat index of rho^{(k,l)}_{i,j}: pairs i < j in lexicographic order, then
/// k in {1,2}, then l in {1,2}.
struct Example1Label {
    int i, j, k, l;
};
Example1Label example1_label(int d, int index);
int example1_index(int d, const Example1Label& label);

struct Example1 {
    Ensemble ensemble;
    Measurement measurement;  // local measurement in the product basis, flagged LOCC
};

/// 2d(d-1) states lambda/3 (Psi^(k) + Pi^(l)) + (1 - lambda) sigma with equal
/// priors; sigma defaults to 1/d^2.
Example1 example1(int d, double lambda, const std::optional<Operator>& sigma = std::nullopt);

/// Success probability of the optimal PPT measurement for example1 with any sigma.
double example1_closed_form(int d, double lambda);

/// {1/3, |00><00|}, {1/3, |11><11|}, {1/3, Psi+}.
Ensemble example2();

/// H(t) = (Phi+ + Phi-)/3 + (1+t)/6 Psi+ + (1-t)/6 Psi-, t in [0, 1].
Operator example2_dual(double t);

/// Index 0 is 1/d^2 with prior d/(5d-4); index 1 + 4 p + (k-1) is
/// (1-lambda) Psi^(k)_{i,j} + lambda 1/d^2 for the p-th pair i < j.
Ensemble example3(int d, double lambda);

struct Example3Label {
    int i, j, k;
};
Example3Label example3_label(int d, int index);

double example3_closed_form(int d);

/// lambda above which p_PPT = p_G: d^2 / (2 (d^2 - 1)).
double example3_threshold(int d);

/// eta_1 rho_1 - eta^(k)_{i,j} rho^(k)_{i,j}, a DEW whenever lambda is below the threshold.
Operator example3_difference(int d, double lambda, int i, int j, int k);

/// Thrown when a construction precondition fails; carries the failing certificate.
class PreconditionError : public InvalidArgument {
public:
    PreconditionError(const std::string& what, std::optional<WitnessClass> witness = std::nullopt)
        : InvalidArgument(what), witness_(std::move(witness)) {}
    [[nodiscard]] const std::optional<WitnessClass>& witness() const { return witness_; }

private:
    std::optional<WitnessClass> witness_;
};

struct Construction {
    Ensemble ensemble;
    std::vector<WitnessClass> witnesses;  // classification of each input W
    std::optional<Operator> p;            // single-witness construction only
    /// The guarantee the construction carries, checkable with theorem4_classify.
    std::string claim = "p_PPT < p_G";
    int pivot = 0;  // every eta_0 rho_0 - eta_i rho_i is proportional to an input witness
};

/// |lambda_min(W)| times the projector onto the negative eigenspace of W.
Operator default_compensator(const Operator& w);

/// Two-state ensemble with eta_1 rho_1 - eta_2 rho_2 = W / Tr(2P + W).
Construction construct_from_dew(const Operator& w, const std::optional<Operator>& p = std::nullopt,
                                const conic::SolverOptions& options = decomposability_solver_defaults());

/// n = Ws.size() + 1 states with rho_1 = 1/D and rho_i proportional to 1 - lambda_i W_i.
Construction construct_from_dews(const std::vector<Operator>& ws, const std::vector<double>& lambdas,
                                 const conic::SolverOptions& options = decomposability_solver_defaults());

}  // namespace pptdisc
