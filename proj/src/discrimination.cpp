#include "pptdisc/discrimination.hpp"

#include "pptdisc/embedding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace pptdisc {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<int> active_indices(const Ensemble& ensemble) {
    std::vector<int> out;
    for (int i = 0; i < ensemble.size(); ++i) {
        if (ensemble.eta(i) > 0.0) out.push_back(i);
    }
    return out;
}

int largest_prior(const Ensemble& ensemble, const std::vector<int>& active) {
    return *std::max_element(active.begin(), active.end(),
                             [&](int a, int b) { return ensemble.eta(a) < ensemble.eta(b); });
}

Operator hermitian_part(SystemDims dims, const MatrixXc& m) {
    return Operator::from_trusted(dims, (m + m.adjoint()) * 0.5);
}

// Turns raw solver blocks into an exact POVM: clip to PSD, restore
// completeness by the congruence G^{-1/2} M_i G^{-1/2} with G = sum M_i, and
// for PPT measurements mix with 1/n just enough to make every M_i^T2 PSD.
Measurement repair_measurement(SystemDims dims, const std::vector<int>& active, int total,
                               std::vector<MatrixXc> raw, bool ppt) {
    const int d = dims.total();
    std::vector<Operator> elements(total, Operator::zero(dims));
    MatrixXc sum = MatrixXc::Zero(d, d);
    for (std::size_t k = 0; k < active.size(); ++k) {
        elements[active[k]] = clip_to_psd(hermitian_part(dims, raw[k]));
        sum += elements[active[k]].matrix();
    }
    const Spectrum<double> g = spectrum<double>(hermitian_part(dims, sum).matrix());
    if (g.min() <= 0.0) throw NumericalError("repair_measurement: POVM elements do not span the space");
    const MatrixXc g_inv_sqrt = g.eigenvectors *
                                g.eigenvalues.cwiseSqrt().cwiseInverse().cast<std::complex<double>>().asDiagonal() *
                                g.eigenvectors.adjoint();
    for (int i : active) {
        elements[i] = hermitian_part(dims, g_inv_sqrt * elements[i].matrix() * g_inv_sqrt);
    }
    if (ppt) {
        double worst = 0.0;
        for (int i : active) worst = std::max(worst, -min_eigenvalue(partial_transpose(elements[i])));
        if (worst > 0.0) {
            const double n = static_cast<double>(active.size());
            const double mix = n * worst / (1.0 + n * worst);
            const Operator uniform = Operator::identity(dims) / n;
            for (int i : active) elements[i] = (1.0 - mix) * elements[i] + mix * uniform;
        }
    }
    return Measurement(dims, std::move(elements));
}

std::vector<double> slackness_residuals(const Ensemble& ensemble, const Measurement& m, const Operator& h) {
    std::vector<double> out;
    out.reserve(ensemble.size());
    for (int i = 0; i < ensemble.size(); ++i) out.push_back(trace_inner(m[i], h - ensemble.weighted(i)));
    return out;
}

void require_matching(const Ensemble& ensemble, const Measurement& measurement, const char* where) {
    if (!(ensemble.dims() == measurement.dims())) {
        throw InvalidArgument(std::string(where) + ": measurement dims " + to_string(measurement.dims()) +
                              " do not match ensemble dims " + to_string(ensemble.dims()));
    }
    if (ensemble.size() != measurement.size()) {
        throw InvalidArgument(std::string(where) + ": measurement has " + std::to_string(measurement.size()) +
                              " elements, ensemble has " + std::to_string(ensemble.size()) + " states");
    }
}

// Certificate for an index with zero prior: H itself, decomposed through an
// active index j as (P_j + eta_j rho_j) + Q_j^T2.
ConeCertificate zero_prior_certificate(const Ensemble& ensemble, const Operator& h, int j,
                                       const ConeCertificate& active_cert) {
    if (active_cert.p && active_cert.q) {
        return verify_decomposition(h, *active_cert.p + ensemble.weighted(j), *active_cert.q);
    }
    ConeCertificate unknown;
    unknown.cone = Cone::PPTPlusDual;
    unknown.note = "no certificate available for the active index";
    return unknown;
}

bool all_members(const std::vector<ConeCertificate>& certs) {
    return std::all_of(certs.begin(), certs.end(), [](const ConeCertificate& c) { return c.is_member(); });
}

DiscriminationResult single_state_result(const Ensemble& ensemble, int only, Mode mode) {
    const SystemDims dims = ensemble.dims();
    DiscriminationResult out;
    out.mode = mode;
    out.dual_h = ensemble.weighted(only);
    out.value = out.dual_h.trace();
    if (mode != Mode::DualOnly) {
        std::vector<Operator> elements(ensemble.size(), Operator::zero(dims));
        elements[only] = Operator::identity(dims);
        out.measurement = Measurement(dims, std::move(elements));
        out.value = evaluate_measurement(ensemble, *out.measurement);
        out.slackness = slackness_residuals(ensemble, *out.measurement, out.dual_h);
    }
    for (int i = 0; i < ensemble.size(); ++i) {
        const Operator diff = out.dual_h - ensemble.weighted(i);
        out.certificates.push_back(verify_decomposition(diff, diff, Operator::zero(dims)));
    }
    out.duality_residual = std::abs(out.dual_h.trace() - out.value);
    out.certified = all_members(out.certificates);
    out.note = "single state with nonzero prior";
    return out;
}

DiscriminationResult solve_measurement_program(const Ensemble& ensemble, bool ppt, const DiscriminationOptions& options) {
    const SystemDims dims = ensemble.dims();
    const std::vector<int> active = active_indices(ensemble);
    const Mode mode = ppt ? Mode::PPT : Mode::Global;
    if (active.size() == 1) return single_state_result(ensemble, active.front(), mode);

    const int d = dims.total();
    const auto start = Clock::now();
    conic::ComplexProgram program;
    std::vector<int> m_blocks, n_blocks;
    for (int i : active) {
        const int block = program.add_block(d);
        program.add_objective(block, -ensemble.weighted(i).matrix());
        m_blocks.push_back(block);
        if (ppt) n_blocks.push_back(program.add_block(d));
    }
    std::vector<conic::MatrixTerm> completeness;
    for (int block : m_blocks) completeness.push_back({block, 1.0, std::nullopt});
    const int group = program.add_matrix_constraint(completeness, MatrixXc::Identity(d, d));
    if (ppt) {
        for (std::size_t k = 0; k < active.size(); ++k) {
            program.add_matrix_constraint({{n_blocks[k], 1.0, std::nullopt}, {m_blocks[k], -1.0, dims}},
                                          MatrixXc::Zero(d, d));
        }
    }
    const conic::ConicSolution solution = conic::solve(program.program(), options.solver);

    DiscriminationResult out;
    out.mode = mode;
    out.stats.absorb(solution, elapsed_ms(start));
    if (solution.status == conic::Status::Infeasible || solution.status == conic::Status::Unbounded) {
        throw NumericalError("measurement program reported " + conic::to_string(solution.status));
    }

    std::vector<MatrixXc> raw;
    for (int block : m_blocks) raw.push_back(program.primal(solution, block, 1e-6));
    out.measurement = repair_measurement(dims, active, ensemble.size(), std::move(raw), ppt);
    out.value = evaluate_measurement(ensemble, *out.measurement);
    out.dual_h = hermitian_part(dims, -program.multiplier(solution, group));
    out.duality_residual = std::abs(out.dual_h.trace() - out.value);
    out.slackness = slackness_residuals(ensemble, *out.measurement, out.dual_h);

    out.certificates.resize(ensemble.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
        const int i = active[k];
        const Operator diff = out.dual_h - ensemble.weighted(i);
        const Operator p = hermitian_part(dims, program.slack(solution, m_blocks[k], 1e-6));
        const Operator q = ppt ? hermitian_part(dims, program.slack(solution, n_blocks[k], 1e-6)) : Operator::zero(dims);
        ConeCertificate cert = verify_decomposition(diff, p, q);
        if (!cert.is_member()) {
            cert = ppt ? check_decomposable(diff, options.decomposability)
                       : verify_decomposition(diff, clip_to_psd(diff), Operator::zero(dims));
        }
        out.certificates[i] = std::move(cert);
    }
    for (int i = 0; i < ensemble.size(); ++i) {
        if (ensemble.eta(i) > 0.0) continue;
        out.certificates[i] = zero_prior_certificate(ensemble, out.dual_h, active.front(), out.certificates[active.front()]);
    }

    if (!ppt) {
        // sum_j eta_j rho_j M_j - eta_i rho_i >= 0 for all i.
        MatrixXc weighted_sum = MatrixXc::Zero(d, d);
        for (int j = 0; j < ensemble.size(); ++j) {
            weighted_sum += ensemble.weighted(j).matrix() * (*out.measurement)[j].matrix();
        }
        const Operator lagrange = hermitian_part(dims, weighted_sum);
        double margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < ensemble.size(); ++i) {
            margin = std::min(margin, min_eigenvalue(lagrange - ensemble.weighted(i)));
        }
        out.optimality_margin = margin;
    }

    // Weak duality: a feasible measurement and a verified dual with matching value certify optimality,
    // whatever the stopping status.
    out.certified = all_members(out.certificates) && out.duality_residual <= tol::cert &&
                    (ppt || out.optimality_margin >= -tol::cert);
    if (ppt && !out.measurement->is_ppt()) out.certified = false;
    if (!out.certified) {
        out.note = "solver status " + conic::to_string(solution.status) + "; certificate check failed";
    } else if (solution.status != conic::Status::Optimal) {
        out.note = "solver status " + conic::to_string(solution.status) + "; optimality verified a posteriori";
    }
    return out;
}

// min Tr H over H = eta_p rho_p + P_p (+ Q_p^T2) with H - eta_i rho_i = P_i (+ Q_i^T2).
DiscriminationResult solve_dual_program(const Ensemble& ensemble, bool decomposable, const DiscriminationOptions& options) {
    const SystemDims dims = ensemble.dims();
    const std::vector<int> active = active_indices(ensemble);
    if (active.size() == 1) return single_state_result(ensemble, active.front(), Mode::DualOnly);

    const int d = dims.total();
    const int pivot = largest_prior(ensemble, active);
    const auto start = Clock::now();
    conic::ComplexProgram program;
    std::vector<int> p_blocks(ensemble.size(), -1), q_blocks(ensemble.size(), -1);
    for (int i : active) {
        p_blocks[i] = program.add_block(d);
        if (decomposable) q_blocks[i] = program.add_block(d);
    }
    const MatrixXc identity = MatrixXc::Identity(d, d);
    program.add_objective(p_blocks[pivot], identity);
    if (decomposable) program.add_objective(q_blocks[pivot], identity);
    for (int i : active) {
        if (i == pivot) continue;
        std::vector<conic::MatrixTerm> terms{{p_blocks[pivot], 1.0, std::nullopt}, {p_blocks[i], -1.0, std::nullopt}};
        if (decomposable) {
            terms.push_back({q_blocks[pivot], 1.0, dims});
            terms.push_back({q_blocks[i], -1.0, dims});
        }
        program.add_matrix_constraint(terms, (ensemble.weighted(i) - ensemble.weighted(pivot)).matrix());
    }
    const conic::ConicSolution solution = conic::solve(program.program(), options.solver);

    DiscriminationResult out;
    out.mode = Mode::DualOnly;
    out.stats.absorb(solution, elapsed_ms(start));
    if (solution.status == conic::Status::Infeasible || solution.status == conic::Status::Unbounded) {
        throw NumericalError("dual program reported " + conic::to_string(solution.status));
    }

    auto block_op = [&](int block) {
        return block < 0 ? Operator::zero(dims) : clip_to_psd(hermitian_part(dims, program.primal(solution, block, 1e-6)));
    };
    std::vector<Operator> ps(ensemble.size(), Operator::zero(dims)), qs(ensemble.size(), Operator::zero(dims));
    for (int i : active) {
        ps[i] = block_op(p_blocks[i]);
        qs[i] = block_op(q_blocks[i]);
    }
    out.dual_h = ensemble.weighted(pivot) + ps[pivot] + partial_transpose(qs[pivot]);
    out.value = out.dual_h.trace();
    out.certificates.resize(ensemble.size());
    for (int i : active) {
        const Operator diff = out.dual_h - ensemble.weighted(i);
        ConeCertificate cert = verify_decomposition(diff, ps[i], qs[i]);
        if (!cert.is_member() && decomposable) cert = check_decomposable(diff, options.decomposability);
        out.certificates[i] = std::move(cert);
    }
    for (int i = 0; i < ensemble.size(); ++i) {
        if (ensemble.eta(i) > 0.0) continue;
        out.certificates[i] = zero_prior_certificate(ensemble, out.dual_h, pivot, out.certificates[pivot]);
    }
    out.duality_residual = 0.0;
    out.certified = solution.status == conic::Status::Optimal && all_members(out.certificates);
    if (!out.certified) out.note = "solver status " + conic::to_string(solution.status) + "; certificate check failed";
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Ensemble::Ensemble(SystemDims dims, std::vector<EnsembleItem> items) : dims_(dims), items_(std::move(items)) {
    if (items_.empty()) throw InvalidArgument("Ensemble: no states");
    double total = 0.0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const std::string where = "Ensemble: item " + std::to_string(i);
        const EnsembleItem& item = items_[i];
        if (!(item.rho.dims() == dims_)) {
            throw InvalidArgument(where + " has dims " + to_string(item.rho.dims()) + ", expected " + to_string(dims_));
        }
        if (!(item.eta >= 0.0 && item.eta <= 1.0)) {
            throw InvalidArgument(where + " has prior " + std::to_string(item.eta) + " outside [0, 1]");
        }
        if (std::abs(item.rho.trace() - 1.0) > 1e-10) {
            throw InvalidArgument(where + " has trace " + std::to_string(item.rho.trace()) + ", expected 1");
        }
        const double lowest = min_eigenvalue(item.rho);
        if (lowest < -tol::psd) {
            throw InvalidArgument(where + " is not PSD (eigenvalue " + std::to_string(lowest) + ")");
        }
        total += item.eta;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidArgument("Ensemble: priors sum to " + std::to_string(total) + ", expected 1");
    }
}

Measurement::Measurement(SystemDims dims, std::vector<Operator> elements, bool locc_by_construction)
    : dims_(dims), elements_(std::move(elements)), locc_(locc_by_construction) {
    if (elements_.empty()) throw InvalidArgument("Measurement: no elements");
    MatrixXc sum = MatrixXc::Zero(dims_.total(), dims_.total());
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        if (!(elements_[i].dims() == dims_)) {
            throw InvalidArgument("Measurement: element " + std::to_string(i) + " has dims " +
                                  to_string(elements_[i].dims()));
        }
        const double lowest = min_eigenvalue(elements_[i]);
        if (lowest < -tol::psd) {
            throw InvalidArgument("Measurement: element " + std::to_string(i) + " is not PSD (eigenvalue " +
                                  std::to_string(lowest) + ")");
        }
        sum += elements_[i].matrix();
    }
    const double defect = (sum - MatrixXc::Identity(dims_.total(), dims_.total())).norm();
    if (defect > 1e-8) {
        throw InvalidArgument("Measurement: elements sum to identity only within " + std::to_string(defect));
    }
}

std::pair<int, double> Measurement::worst_partial_transpose() const {
    std::pair<int, double> worst{0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < size(); ++i) {
        const double lowest = min_eigenvalue(partial_transpose(elements_[i]));
        if (lowest < worst.second) worst = {i, lowest};
    }
    return worst;
}

bool Measurement::is_ppt() const { return worst_partial_transpose().second >= -tol::psd; }

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::Global: return "global";
        case Mode::PPT: return "ppt";
        case Mode::DualOnly: return "dual";
    }
    return "unknown";
}

std::string to_string(Decision decision) {
    switch (decision) {
        case Decision::Holds: return "holds";
        case Decision::Fails: return "fails";
        case Decision::Unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::Equal: return "equal";
        case Outcome::NotEqual: return "not_equal";
        case Outcome::Indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

std::string to_string(Evidence evidence) {
    switch (evidence) {
        case Evidence::NoDewDualFound: return "no_dew_dual_found";
        case Evidence::DewObstruction: return "dew_obstruction";
        case Evidence::NumericGap: return "numeric_gap";
    }
    return "numeric_gap";
}

void SolveStats::absorb(const conic::ConicSolution& solution, double ms) {
    if (solves == 0 || solution.status != conic::Status::Optimal) status = solution.status;
    iterations += solution.iterations;
    residuals.primal = std::max(residuals.primal, solution.residuals.primal);
    residuals.dual = std::max(residuals.dual, solution.residuals.dual);
    residuals.gap = std::max(residuals.gap, solution.residuals.gap);
    wall_ms += ms;
    ++solves;
}

double evaluate_measurement(const Ensemble& ensemble, const Measurement& measurement) {
    require_matching(ensemble, measurement, "evaluate_measurement");
    double value = 0.0;
    for (int i = 0; i < ensemble.size(); ++i) value += ensemble.eta(i) * trace_inner(ensemble.rho(i), measurement[i]);
    return value;
}

DiscriminationResult optimal_global(const Ensemble& ensemble, const DiscriminationOptions& options) {
    return solve_measurement_program(ensemble, false, options);
}

DiscriminationResult optimal_ppt(const Ensemble& ensemble, const DiscriminationOptions& options) {
    return solve_measurement_program(ensemble, true, options);
}

DiscriminationResult dual_qppt(const Ensemble& ensemble, const DiscriminationOptions& options) {
    return solve_dual_program(ensemble, true, options);
}

DiscriminationResult psd_restricted_dual(const Ensemble& ensemble, const DiscriminationOptions& options) {
    return solve_dual_program(ensemble, false, options);
}

JointOptimalityReport verify_joint_optimality(const Ensemble& ensemble, const Measurement& measurement,
                                              const Operator& h, const std::vector<ConeCertificate>& certificates,
                                              const DiscriminationOptions& options) {
    require_matching(ensemble, measurement, "verify_joint_optimality");
    ensemble.rho(0).require_same_dims(h, "verify_joint_optimality");
    JointOptimalityReport report;
    bool unknown = false;

    const auto [worst_index, worst_value] = measurement.worst_partial_transpose();
    report.measurement_is_ppt = worst_value >= -tol::psd;
    if (!report.measurement_is_ppt) {
        report.failures.push_back("measurement element " + std::to_string(worst_index) +
                                  " is not PPT (partial transpose eigenvalue " + std::to_string(worst_value) + ")");
    }

    if (!certificates.empty() && static_cast<int>(certificates.size()) != ensemble.size()) {
        throw InvalidArgument("verify_joint_optimality: expected " + std::to_string(ensemble.size()) + " certificates");
    }
    for (int i = 0; i < ensemble.size(); ++i) {
        const Operator diff = h - ensemble.weighted(i);
        ConeCertificate cert;
        if (!certificates.empty() && certificates[i].p && certificates[i].q) {
            cert = verify_decomposition(diff, *certificates[i].p, *certificates[i].q);
        }
        if (!cert.is_member()) cert = check_decomposable(diff, options.decomposability);
        if (cert.verdict == Verdict::NonMember) {
            report.failures.push_back("H - eta_" + std::to_string(i) + " rho_" + std::to_string(i) + " is not decomposable");
        } else if (cert.verdict == Verdict::Unknown) {
            unknown = true;
            report.failures.push_back("decomposability of H - eta_" + std::to_string(i) + " rho_" + std::to_string(i) +
                                      " is undetermined: " + cert.note);
        }
        report.certificates.push_back(std::move(cert));
    }

    report.residuals = slackness_residuals(ensemble, measurement, h);
    for (std::size_t i = 0; i < report.residuals.size(); ++i) {
        const double r = report.residuals[i];
        report.max_abs_residual = std::max(report.max_abs_residual, std::abs(r));
        if (std::abs(r) > tol::cert) {
            report.failures.push_back("slackness residual " + std::to_string(i) + " = " + std::to_string(r));
        }
    }

    if (report.failures.empty()) {
        report.verdict = Decision::Holds;
    } else {
        const bool only_unknown = unknown && report.measurement_is_ppt && report.max_abs_residual <= tol::cert &&
                                  std::none_of(report.certificates.begin(), report.certificates.end(),
                                               [](const ConeCertificate& c) { return c.verdict == Verdict::NonMember; });
        report.verdict = only_unknown ? Decision::Unknown : Decision::Fails;
    }
    return report;
}

Corollary1Result corollary1_check(const Ensemble& ensemble, int pivot, const DiscriminationOptions& options) {
    if (pivot < 0 || pivot >= ensemble.size()) {
        throw InvalidArgument("corollary1_check: pivot " + std::to_string(pivot) + " out of range");
    }
    Corollary1Result out;
    out.pivot = pivot;
    out.certificates.resize(ensemble.size());
    bool unknown = false;
    for (int i = 0; i < ensemble.size(); ++i) {
        if (i == pivot) continue;
        const Operator diff = ensemble.weighted(pivot) - ensemble.weighted(i);
        out.certificates[i] = check_decomposable(diff, options.decomposability);
        if (out.certificates[i].verdict == Verdict::NonMember && !out.failing_index) out.failing_index = i;
        if (out.certificates[i].verdict == Verdict::Unknown) unknown = true;
    }
    if (out.failing_index) {
        out.holds = Decision::Fails;
    } else if (unknown) {
        out.holds = Decision::Unknown;
    } else {
        out.holds = Decision::Holds;
        out.value = ensemble.eta(pivot);
    }
    return out;
}

EqualityVerdict corollary2_classify(const Ensemble& ensemble, int pivot, const DiscriminationOptions& options) {
    const Corollary1Result pre = corollary1_check(ensemble, pivot, options);
    EqualityVerdict out;
    if (pre.holds == Decision::Unknown) {
        out.outcome = Outcome::Indeterminate;
        out.note = "decomposability of a pivot difference is undetermined";
        return out;
    }
    if (pre.holds != Decision::Holds) {
        throw InvalidArgument("corollary2_classify: pivot differences are not all decomposable (index " +
                              std::to_string(*pre.failing_index) + ")");
    }
    out.p_ppt = pre.value;
    out.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ensemble.size(); ++i) {
        if (i == pivot) continue;
        const double lowest = min_eigenvalue(ensemble.weighted(pivot) - ensemble.weighted(i));
        if (lowest < out.margin) {
            out.margin = lowest;
            if (lowest < -tol::psd) out.dew_index = i;
        }
    }
    if (ensemble.size() == 1) out.margin = 0.0;
    if (out.dew_index) {
        out.outcome = Outcome::NotEqual;
        out.evidence = Evidence::DewObstruction;
    } else {
        out.outcome = Outcome::Equal;
        out.evidence = Evidence::NoDewDualFound;
        out.p_g = out.p_ppt;
    }
    return out;
}

Theorem3Result theorem3_witness_check(const Ensemble& ensemble, const Measurement& measurement,
                                      const DiscriminationOptions& options) {
    require_matching(ensemble, measurement, "theorem3_witness_check");
    const auto [worst_index, worst_value] = measurement.worst_partial_transpose();
    if (worst_value < -tol::psd) {
        throw InvalidArgument("theorem3_witness_check: measurement element " + std::to_string(worst_index) +
                              " is not PPT (partial transpose eigenvalue " + std::to_string(worst_value) + ")");
    }
    const SystemDims dims = ensemble.dims();
    const int d = dims.total();
    MatrixXc product = MatrixXc::Zero(d, d);
    for (int i = 0; i < ensemble.size(); ++i) product += ensemble.weighted(i).matrix() * measurement[i].matrix();

    Theorem3Result out;
    out.hermitization_residual = 0.5 * (product - product.adjoint()).norm();
    out.h = hermitian_part(dims, product);
    if (out.hermitization_residual > tol::cert) {
        out.condition = Decision::Fails;
        out.note = "sum eta_i rho_i M_i is not Hermitian (residual " + std::to_string(out.hermitization_residual) + ")";
        return out;
    }
    bool unknown = false;
    bool all_decomposable = true;
    for (int i = 0; i < ensemble.size(); ++i) {
        WitnessClass c = classify_witness(out.h - ensemble.weighted(i), options.decomposability);
        if (c.classification == WitnessKind::Unknown) unknown = true;
        if (c.classification == WitnessKind::NonDecomposable) all_decomposable = false;
        if (c.classification == WitnessKind::DEW) out.dew_indices.push_back(i);
        out.classes.push_back(std::move(c));
    }
    if (!all_decomposable) {
        out.condition = Decision::Fails;
        out.note = "some H - eta_i rho_i is not decomposable";
    } else if (unknown) {
        out.condition = Decision::Unknown;
        out.note = "some H - eta_i rho_i could not be classified";
    } else if (out.dew_indices.empty()) {
        out.condition = Decision::Fails;
        out.note = "every H - eta_i rho_i is PSD";
    } else {
        out.condition = Decision::Holds;
        out.p_ppt = evaluate_measurement(ensemble, measurement);
    }
    return out;
}

Theorem4Result theorem4_classify(const Ensemble& ensemble, const DiscriminationOptions& options) {
    Theorem4Result out;
    out.qppt = dual_qppt(ensemble, options);
    out.psd_dual = psd_restricted_dual(ensemble, options);
    out.global = optimal_global(ensemble, options);
    out.ppt = optimal_ppt(ensemble, options);
    out.q_ppt = out.qppt.value;
    out.psd_dual_value = out.psd_dual.value;
    out.p_global = out.global.value;
    out.p_ppt = out.ppt.value;

    EqualityVerdict& v = out.verdict;
    v.p_ppt = out.p_ppt;
    v.p_g = out.p_global;
    v.margin = out.psd_dual_value - out.q_ppt;
    if (v.margin <= tol::cert) {
        v.outcome = Outcome::Equal;
        v.evidence = Evidence::NoDewDualFound;
    } else if (v.margin >= tol::verdict) {
        v.outcome = Outcome::NotEqual;
        v.evidence = Evidence::NumericGap;
        // The difference H - eta_i rho_i that is furthest from PSD at the q_PPT optimum.
        double lowest = std::numeric_limits<double>::infinity();
        for (int i = 0; i < ensemble.size(); ++i) {
            const double e = min_eigenvalue(out.qppt.dual_h - ensemble.weighted(i));
            if (e < lowest) {
                lowest = e;
                v.dew_index = i;
            }
        }
    } else {
        v.outcome = Outcome::Indeterminate;
        v.evidence = Evidence::NumericGap;
        v.note = "margin between certificate and verdict tolerances";
    }

    auto check = [&](bool ok, const std::string& what) {
        if (!ok) out.cross_check_failures.push_back(what);
    };
    check(out.qppt.certified && out.psd_dual.certified && out.global.certified && out.ppt.certified,
          "a component solve was not certified");
    check(std::abs(out.psd_dual_value - out.p_global) <= 2.0 * tol::cert, "PSD-restricted dual differs from p_G");
    check(std::abs(out.q_ppt - out.p_ppt) <= 2.0 * tol::cert, "q_PPT differs from p_PPT");
    const double direct_gap = out.p_global - out.p_ppt;
    if (v.outcome == Outcome::Equal) check(std::abs(direct_gap) <= tol::verdict, "direct gap contradicts equality");
    if (v.outcome == Outcome::NotEqual) check(direct_gap >= tol::verdict, "direct gap contradicts inequality");
    out.cross_checks_pass = out.cross_check_failures.empty();
    if (!out.cross_checks_pass && v.outcome != Outcome::Indeterminate) {
        v.outcome = Outcome::Indeterminate;
        v.note = "cross-check failed: " + out.cross_check_failures.front();
    }
    return out;
}

}  // namespace pptdisc
