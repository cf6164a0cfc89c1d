#pragma once

// Minimum-error discrimination of bipartite ensembles: the optimal success
// probability over all measurements (p_G), over PPT measurements (p_PPT), the
// dual bound q_PPT = min Tr H over H with every H - eta_i rho_i decomposable,
// and the optimality certificates that tie them together.

#include "pptdisc/cone.hpp"
#include "pptdisc/conic.hpp"
#include "pptdisc/operator.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pptdisc {

struct EnsembleItem {
    double eta = 0.0;
    Operator rho;
};

/// Priors sum to one (1e-12), states are unit-trace (1e-10) and PSD (tol::psd).
class Ensemble {
public:
    Ensemble(SystemDims dims, std::vector<EnsembleItem> items);

    [[nodiscard]] const SystemDims& dims() const { return dims_; }
    [[nodiscard]] const std::vector<EnsembleItem>& items() const { return items_; }
    [[nodiscard]] int size() const { return static_cast<int>(items_.size()); }
    [[nodiscard]] double eta(int i) const { return items_.at(i).eta; }
    [[nodiscard]] const Operator& rho(int i) const { return items_.at(i).rho; }
    /// eta_i rho_i
    [[nodiscard]] Operator weighted(int i) const { return items_.at(i).rho * items_.at(i).eta; }

private:
    SystemDims dims_;
    std::vector<EnsembleItem> items_;
};

/// POVM: every element PSD (tol::psd) and sum M_i = 1 to 1e-8 in Frobenius norm.
class Measurement {
public:
    Measurement(SystemDims dims, std::vector<Operator> elements, bool locc_by_construction = false);

    [[nodiscard]] const SystemDims& dims() const { return dims_; }
    [[nodiscard]] const std::vector<Operator>& elements() const { return elements_; }
    [[nodiscard]] int size() const { return static_cast<int>(elements_.size()); }
    [[nodiscard]] const Operator& operator[](int i) const { return elements_.at(i); }

    /// Every element has a PSD partial transpose (to tol::psd).
    [[nodiscard]] bool is_ppt() const;
    /// Index and value of the most negative eigenvalue over all M_i^T2.
    [[nodiscard]] std::pair<int, double> worst_partial_transpose() const;

    /// Metadata only: set by constructors that build the POVM from local
    /// operations and classical communication. Never verified.
    [[nodiscard]] bool locc_by_construction() const { return locc_; }

private:
    SystemDims dims_;
    std::vector<Operator> elements_;
    bool locc_ = false;
};

enum class Mode { Global, PPT, DualOnly };
std::string to_string(Mode mode);

struct SolveStats {
    conic::Status status = conic::Status::Optimal;
    int iterations = 0;
    conic::Residuals residuals;
    double wall_ms = 0.0;
    int solves = 0;

    void absorb(const conic::ConicSolution& solution, double ms);
};

struct DiscriminationResult {
    Mode mode = Mode::Global;
    double value = 0.0;
    std::optional<Measurement> measurement;
    Operator dual_h;
    /// Tr[M_i (H - eta_i rho_i)] per index (empty in DualOnly mode).
    std::vector<double> slackness;
    /// PPT / DualOnly: decomposition of H - eta_i rho_i. Global: PSD certificate.
    std::vector<ConeCertificate> certificates;
    /// Global: min_i lambda_min(sum_j eta_j rho_j M_j - eta_i rho_i).
    double optimality_margin = 0.0;
    /// |Tr H - value|
    double duality_residual = 0.0;
    SolveStats stats;
    /// Solver reached Optimal and every certificate re-verified.
    bool certified = false;
    std::string note;
};

struct DiscriminationOptions {
    conic::SolverOptions solver = default_solver();
    conic::SolverOptions decomposability = decomposability_solver_defaults();

    static conic::SolverOptions default_solver() {
        conic::SolverOptions options;
        options.eps_feas = 1e-9;
        options.eps_gap = 1e-9;
        return options;
    }
};

/// Success probability sum_i eta_i Tr(rho_i M_i) of a fixed measurement.
double evaluate_measurement(const Ensemble& ensemble, const Measurement& measurement);

DiscriminationResult optimal_global(const Ensemble& ensemble, const DiscriminationOptions& options = {});
DiscriminationResult optimal_ppt(const Ensemble& ensemble, const DiscriminationOptions& options = {});
DiscriminationResult dual_qppt(const Ensemble& ensemble, const DiscriminationOptions& options = {});

/// min Tr H s.t. H - eta_i rho_i PSD for all i (the dual of p_G). DualOnly mode;
/// certificates are PSD checks of each difference.
DiscriminationResult psd_restricted_dual(const Ensemble& ensemble, const DiscriminationOptions& options = {});

enum class Decision { Holds, Fails, Unknown };
std::string to_string(Decision decision);

struct JointOptimalityReport {
    Decision verdict = Decision::Unknown;  // Holds: optimal pair
    std::vector<double> residuals;          // Tr[M_i (H - eta_i rho_i)]
    double max_abs_residual = 0.0;
    bool measurement_is_ppt = false;
    std::vector<ConeCertificate> certificates;
    std::vector<std::string> failures;  // one entry per failed precondition or residual
};

/// Complementary slackness check for a PPT measurement M and H in H_PPT(E).
/// Certificates for H - eta_i rho_i are computed when not supplied, otherwise
/// re-verified arithmetically.
JointOptimalityReport verify_joint_optimality(const Ensemble& ensemble, const Measurement& measurement,
                                              const Operator& h,
                                              const std::vector<ConeCertificate>& certificates = {},
                                              const DiscriminationOptions& options = {});

struct Corollary1Result {
    Decision holds = Decision::Unknown;
    double value = 0.0;  // eta_pivot when holds
    int pivot = 0;
    std::vector<ConeCertificate> certificates;  // index i != pivot, slot pivot left Unknown
    std::optional<int> failing_index;
};

/// Every eta_p rho_p - eta_i rho_i (i != p) decomposable  =>  p_PPT = eta_p.
Corollary1Result corollary1_check(const Ensemble& ensemble, int pivot, const DiscriminationOptions& options = {});

enum class Outcome { Equal, NotEqual, Indeterminate };
enum class Evidence { NoDewDualFound, DewObstruction, NumericGap };
std::string to_string(Outcome outcome);
std::string to_string(Evidence evidence);

struct EqualityVerdict {
    Outcome outcome = Outcome::Indeterminate;
    Evidence evidence = Evidence::NumericGap;
    double p_ppt = 0.0;
    std::optional<double> p_g;
    double margin = 0.0;
    std::optional<int> dew_index;
    std::string note;

    [[nodiscard]] bool equal() const { return outcome == Outcome::Equal; }
};

/// Given the Corollary 1 condition for `pivot`, p_PPT = p_G iff no difference
/// eta_p rho_p - eta_i rho_i is a DEW, i.e. iff all of them are PSD. Throws
/// InvalidArgument when the precondition does not hold.
EqualityVerdict corollary2_classify(const Ensemble& ensemble, int pivot, const DiscriminationOptions& options = {});

struct Theorem3Result {
    Decision condition = Decision::Unknown;
    std::optional<double> p_ppt;
    std::vector<int> dew_indices;
    std::vector<WitnessClass> classes;
    Operator h;
    double hermitization_residual = 0.0;
    std::string note;
};

/// With H = sum_i eta_i rho_i M_i (Hermitized): the condition holds when every
/// H - eta_i rho_i is decomposable and at least one is a DEW. Then
/// p_PPT = sum_i eta_i Tr(rho_i M_i) < p_G. Rejects non-PPT measurements.
Theorem3Result theorem3_witness_check(const Ensemble& ensemble, const Measurement& measurement,
                                      const DiscriminationOptions& options = {});

struct Theorem4Result {
    EqualityVerdict verdict;
    double q_ppt = 0.0;
    double psd_dual_value = 0.0;
    double p_global = 0.0;
    double p_ppt = 0.0;
    bool cross_checks_pass = false;
    std::vector<std::string> cross_check_failures;
    DiscriminationResult qppt;
    DiscriminationResult psd_dual;
    DiscriminationResult global;
    DiscriminationResult ppt;
};

/// p_PPT = p_G iff some H attaining q_PPT has every H - eta_i rho_i PSD.
Theorem4Result theorem4_classify(const Ensemble& ensemble, const DiscriminationOptions& options = {});

}  // namespace pptdisc
