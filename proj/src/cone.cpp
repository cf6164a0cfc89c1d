#include "pptdisc/cone.hpp"

#include "pptdisc/embedding.hpp"

#include <algorithm>
#include <limits>
#include <mutex>

namespace pptdisc {
namespace {

std::mutex audit_mutex;
Lemma1Audit audit_state{0, 0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};

void record_lemma1(bool ok, double trace, bool nonzero) {
    std::lock_guard<std::mutex> lock(audit_mutex);
    ++audit_state.checked;
    if (!ok) ++audit_state.violations;
    if (nonzero) audit_state.min_trace = std::min(audit_state.min_trace, trace);
    audit_state.min_trace_any = std::min(audit_state.min_trace_any, trace);
}

// Every Member(PPTPlusDual) certificate passes through here.
ConeCertificate finalize_member(const Operator& w, ConeCertificate cert) {
    if (!assert_lemma1(w, cert)) {
        cert.verdict = Verdict::Unknown;
        cert.note = "trace positivity failed on a decomposable operator";
        cert.p.reset();
        cert.q.reset();
    }
    return cert;
}

}  // namespace

std::string to_string(Cone cone) { return cone == Cone::PPTPlus ? "ppt_plus" : "ppt_plus_dual"; }

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::Member: return "member";
        case Verdict::NonMember: return "non_member";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(FailedTest test) {
    switch (test) {
        case FailedTest::None: return "none";
        case FailedTest::Operator: return "operator";
        case FailedTest::PartialTranspose: return "partial_transpose";
    }
    return "none";
}

std::string to_string(WitnessKind kind) {
    switch (kind) {
        case WitnessKind::PSD: return "psd";
        case WitnessKind::DEW: return "dew";
        case WitnessKind::NonDecomposable: return "non_decomposable";
        case WitnessKind::Unknown: return "unknown";
    }
    return "unknown";
}

conic::SolverOptions decomposability_solver_defaults() {
    conic::SolverOptions options;
    options.eps_feas = 1e-10;
    options.eps_gap = 1e-10;
    return options;
}

ConeCertificate check_ppt_plus(const Operator& e) {
    ConeCertificate cert;
    cert.cone = Cone::PPTPlus;
    const Spectrum<double> direct = spectrum(e);
    if (direct.min() < -tol::psd) {
        cert.verdict = Verdict::NonMember;
        cert.failed_test = FailedTest::Operator;
        cert.violating_eigenvalue = direct.min();
        cert.violating_vector = direct.eigenvectors.col(0);
        return cert;
    }
    const Spectrum<double> transposed = spectrum(partial_transpose(e));
    if (transposed.min() < -tol::psd) {
        cert.verdict = Verdict::NonMember;
        cert.failed_test = FailedTest::PartialTranspose;
        cert.violating_eigenvalue = transposed.min();
        cert.violating_vector = transposed.eigenvectors.col(0);
        return cert;
    }
    cert.verdict = Verdict::Member;
    cert.psd_residual = std::min(direct.min(), transposed.min());
    return cert;
}

ConeCertificate verify_decomposition(const Operator& w, const Operator& p, const Operator& q) {
    w.require_same_dims(p, "verify_decomposition");
    w.require_same_dims(q, "verify_decomposition");
    ConeCertificate cert;
    cert.cone = Cone::PPTPlusDual;
    cert.psd_residual = std::min({0.0, min_eigenvalue(p), min_eigenvalue(q)});
    Operator p_clean = clip_to_psd(p);
    Operator q_clean = clip_to_psd(q);
    cert.reconstruction_residual = (p_clean + partial_transpose(q_clean) - w).norm();
    if (cert.reconstruction_residual <= tol::cert * (1.0 + w.norm())) {
        cert.verdict = Verdict::Member;
        cert.p = std::move(p_clean);
        cert.q = std::move(q_clean);
        return finalize_member(w, std::move(cert));
    }
    cert.verdict = Verdict::Unknown;
    cert.note = "decomposition failed re-verification";
    return cert;
}

ConeCertificate verify_separator(const Operator& w, const Operator& f) {
    w.require_same_dims(f, "verify_separator");
    ConeCertificate cert;
    cert.cone = Cone::PPTPlusDual;
    const double shift = std::max({0.0, -min_eigenvalue(f), -min_eigenvalue(partial_transpose(f))});
    Operator shifted = f + shift * Operator::identity(f.dims());
    const double trace = shifted.trace();
    if (!(trace > 0.0)) {
        cert.verdict = Verdict::Unknown;
        cert.note = "separator candidate has non-positive trace";
        return cert;
    }
    shifted = shifted / trace;
    cert.psd_residual = std::min(min_eigenvalue(shifted), min_eigenvalue(partial_transpose(shifted)));
    cert.separation = trace_inner(w, shifted);
    if (cert.psd_residual >= -tol::psd && cert.separation <= -10.0 * tol::psd * shifted.norm()) {
        cert.verdict = Verdict::NonMember;
        cert.separator = std::move(shifted);
        return cert;
    }
    cert.verdict = Verdict::Unknown;
    cert.note = "separator failed re-verification";
    return cert;
}

ConeCertificate check_decomposable(const Operator& w, const conic::SolverOptions& options) {
    const SystemDims dims = w.dims();
    const double scale = w.norm();
    if (scale == 0.0) {
        return verify_decomposition(w, Operator::zero(dims), Operator::zero(dims));
    }
    if (is_psd(w)) return verify_decomposition(w, w, Operator::zero(dims));
    const Operator w_t = partial_transpose(w);
    if (is_psd(w_t)) return verify_decomposition(w, Operator::zero(dims), w_t);

    // minimize Tr(W F)  s.t.  Tr F = 1, G = F^T2, F >= 0, G >= 0.
    // Dual: maximize t  s.t.  W - t 1 = P + Q^T2 with P = S_F, Q = S_G.
    const int d = dims.total();
    const MatrixXc w_unit = w.matrix() / scale;
    conic::ComplexProgram program;
    const int f_block = program.add_block(d);
    const int g_block = program.add_block(d);
    program.add_objective(f_block, w_unit);
    const int trace_row = program.add_scalar_constraint({{f_block, MatrixXc::Identity(d, d)}}, 1.0);
    program.add_matrix_constraint({{g_block, 1.0, std::nullopt}, {f_block, -1.0, dims}}, MatrixXc::Zero(d, d));

    const conic::ConicSolution solution = conic::solve(program.program(), options);

    ConeCertificate last;
    last.cone = Cone::PPTPlusDual;
    last.verdict = Verdict::Unknown;
    last.note = "solver status " + conic::to_string(solution.status);
    if (solution.status != conic::Status::Optimal && solution.status != conic::Status::MaxIter) {
        last.solver_iterations = solution.iterations;
        return last;
    }

    const double t = program.scalar_multiplier(solution, trace_row);
    const MatrixXc p_unit = program.slack(solution, f_block, 1e-6) + t * MatrixXc::Identity(d, d);
    const MatrixXc q_unit = program.slack(solution, g_block, 1e-6);
    const Operator p(dims, (p_unit + p_unit.adjoint()) * (0.5 * scale));
    const Operator q(dims, (q_unit + q_unit.adjoint()) * (0.5 * scale));
    ConeCertificate member = verify_decomposition(w, p, q);
    if (member.verdict != Verdict::Member) {
        // Absorb the dual residual into one factor; the PSD check in verification still applies.
        const Operator q_clean = clip_to_psd(q);
        member = verify_decomposition(w, w - partial_transpose(q_clean), q_clean);
        if (member.verdict != Verdict::Member) {
            const Operator p_clean = clip_to_psd(p);
            member = verify_decomposition(w, p_clean, partial_transpose(w - p_clean));
        }
    }
    member.solver_iterations = solution.iterations;
    if (member.verdict == Verdict::Member) {
        member.note = "solver status " + conic::to_string(solution.status);
        return member;
    }

    const MatrixXc f_raw = program.primal(solution, f_block, 1e-6);
    ConeCertificate separated = verify_separator(w, Operator(dims, (f_raw + f_raw.adjoint()) * 0.5));
    separated.solver_iterations = solution.iterations;
    if (separated.verdict == Verdict::NonMember) return separated;

    last.solver_iterations = solution.iterations;
    last.reconstruction_residual = member.reconstruction_residual;
    last.psd_residual = member.psd_residual;
    last.separation = separated.separation;
    last.note = "neither decomposition nor separator verified (solver status " + conic::to_string(solution.status) +
                ", t = " + std::to_string(t) + ")";
    return last;
}

WitnessClass classify_witness(const Operator& w, const conic::SolverOptions& options) {
    WitnessClass out;
    out.min_eigenvalue = min_eigenvalue(w);
    out.is_psd = out.min_eigenvalue >= -tol::psd;
    if (out.is_psd) {
        out.is_decomposable = true;
        out.classification = WitnessKind::PSD;
        out.certificate = verify_decomposition(w, w, Operator::zero(w.dims()));
        return out;
    }
    out.certificate = check_decomposable(w, options);
    switch (out.certificate.verdict) {
        case Verdict::Member:
            out.is_decomposable = true;
            out.classification = WitnessKind::DEW;
            break;
        case Verdict::NonMember:
            out.classification = WitnessKind::NonDecomposable;
            break;
        case Verdict::Unknown:
            out.classification = WitnessKind::Unknown;
            break;
    }
    return out;
}

bool assert_lemma1(const Operator& e, const ConeCertificate& certificate) {
    if (certificate.cone != Cone::PPTPlusDual || certificate.verdict != Verdict::Member) {
        throw InvalidArgument("assert_lemma1: requires a Member(PPTPlusDual) certificate");
    }
    const bool nonzero = e.norm() > tol::cert;
    const double trace = e.trace();
    const bool ok = !nonzero || trace > 0.0;
    record_lemma1(ok, trace, nonzero);
    return ok;
}

Lemma1Audit lemma1_audit() {
    std::lock_guard<std::mutex> lock(audit_mutex);
    return audit_state;
}

}  // namespace pptdisc
