#pragma once

// Membership certificates for PPT+ = {E : E >= 0, E^T2 >= 0} and its dual cone
// PPT+* = {W : Tr(WF) >= 0 for all F in PPT+}, which is the set of
// decomposable operators W = P + Q^T2 with P, Q >= 0.

#include "pptdisc/conic.hpp"
#include "pptdisc/operator.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace pptdisc {

enum class Cone { PPTPlus, PPTPlusDual };
enum class Verdict { Member, NonMember, Unknown };
enum class FailedTest { None, Operator, PartialTranspose };

std::string to_string(Cone cone);
std::string to_string(Verdict verdict);
std::string to_string(FailedTest test);

struct ConeCertificate {
    Cone cone = Cone::PPTPlus;
    Verdict verdict = Verdict::Unknown;

    // PPTPlus, NonMember: eigenvector of E or E^T2 with negative eigenvalue.
    FailedTest failed_test = FailedTest::None;
    std::optional<VectorXc> violating_vector;
    double violating_eigenvalue = 0.0;

    // PPTPlusDual, Member: W = P + Q^T2.
    std::optional<Operator> p;
    std::optional<Operator> q;

    // PPTPlusDual, NonMember: unit-trace F in PPT+ with Tr(WF) < 0.
    std::optional<Operator> separator;
    double separation = 0.0;  // Tr(WF)

    double reconstruction_residual = 0.0;  // ||P + Q^T2 - W||_F
    double psd_residual = 0.0;             // most negative eigenvalue seen before clipping
    int solver_iterations = 0;
    std::string note;

    [[nodiscard]] bool is_member() const { return verdict == Verdict::Member; }
};

/// Solver settings used for the decomposability program. The program is
/// small (two D x D blocks), so it is solved well below the generic defaults.
conic::SolverOptions decomposability_solver_defaults();

ConeCertificate check_ppt_plus(const Operator& e);

/// Decides W in PPT+*. Member carries (P, Q), NonMember a separating F; a
/// solver result that does not survive arithmetic re-verification is Unknown.
ConeCertificate check_decomposable(const Operator& w,
                                   const conic::SolverOptions& options = decomposability_solver_defaults());

/// Re-verifies a candidate decomposition: symmetrizes and clips P and Q to the
/// PSD cone, then bounds ||P + Q^T2 - W||_F by tol::cert * (1 + ||W||_F).
ConeCertificate verify_decomposition(const Operator& w, const Operator& p, const Operator& q);

/// Re-verifies a candidate separator F: shifts it into PPT+ if needed,
/// normalizes to unit trace and requires Tr(WF) <= -10 tol::psd ||F||_F.
ConeCertificate verify_separator(const Operator& w, const Operator& f);

enum class WitnessKind { PSD, DEW, NonDecomposable, Unknown };
std::string to_string(WitnessKind kind);

struct WitnessClass {
    bool is_psd = false;
    bool is_decomposable = false;
    WitnessKind classification = WitnessKind::Unknown;
    double min_eigenvalue = 0.0;
    ConeCertificate certificate;
};

WitnessClass classify_witness(const Operator& w,
                              const conic::SolverOptions& options = decomposability_solver_defaults());

/// Trace positivity of nonzero members of PPT+*: true iff ||E||_F <= tol::cert
/// or Tr E > 0. Requires a Member(PPTPlusDual) certificate for E.
bool assert_lemma1(const Operator& e, const ConeCertificate& certificate);

/// Running tally of the trace-positivity check over every Member(PPTPlusDual)
/// certificate produced in this process.
struct Lemma1Audit {
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    double min_trace = 0.0;      // smallest Tr E among nonzero members seen
    double min_trace_any = 0.0;  // smallest Tr E among all members seen
};
Lemma1Audit lemma1_audit();

}  // namespace pptdisc
