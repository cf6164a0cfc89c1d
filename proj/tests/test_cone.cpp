#include "support.hpp"

#include "pptdisc/cone.hpp"
#include "pptdisc/ensembles.hpp"
#include "pptdisc/states.hpp"

#include <doctest.h>

using namespace pptdisc;
using namespace pptdisc::testing;

namespace {

// Choi matrix of the Choi map on M_3: X -> diag(2x00 + x22, 2x11 + x00, 2x22 + x11) - X.
Operator choi_witness() {
    const SystemDims dims(3, 3);
    MatrixXc w = MatrixXc::Zero(9, 9);
    const double weight[3][3] = {{2, 1, 0}, {0, 2, 1}, {1, 0, 2}};  // weight[i][a]: |a><a| in D(|i><i|)
    for (int i = 0; i < 3; ++i) {
        for (int a = 0; a < 3; ++a) w(dims.index(i, a), dims.index(i, a)) += weight[i][a];
        for (int j = 0; j < 3; ++j) w(dims.index(i, i), dims.index(j, j)) -= 1.0;
    }
    return Operator(dims, w);
}

}  // namespace

TEST_SUITE("cone") {

TEST_CASE("PPT+ membership and violating vectors") {
    const SystemDims dims(2, 2);
    CHECK(check_ppt_plus(Operator::identity(dims)).is_member());
    const ConeCertificate phi = check_ppt_plus(bell_state(StateFamily::PhiPlus));
    CHECK(phi.verdict == Verdict::NonMember);
    CHECK(phi.failed_test == FailedTest::PartialTranspose);
    CHECK(phi.violating_eigenvalue == doctest::Approx(-0.5));
    const VectorXc v = *phi.violating_vector;
    CHECK((v.adjoint() * partial_transpose(bell_state(StateFamily::PhiPlus)).matrix() * v)(0, 0).real() ==
          doctest::Approx(-0.5));
    const ConeCertificate neg = check_ppt_plus(-1.0 * Operator::identity(dims));
    CHECK(neg.failed_test == FailedTest::Operator);
}

TEST_CASE("PSD and PT-of-PSD operators are decomposable without a solve") {
    Rng rng(41);
    const Operator rho = random_density(SystemDims(2, 3), 3, rng);
    const ConeCertificate a = check_decomposable(rho);
    REQUIRE(a.is_member());
    CHECK(a.solver_iterations == 0);
    const ConeCertificate b = check_decomposable(partial_transpose(rho));
    REQUIRE(b.is_member());
    CHECK((*b.q - rho).norm() < 1e-12);
}

TEST_CASE("Phi-^T2 has spectrum {1/2, 1/2, 1/2, -1/2} and is a DEW") {
    const Operator w = partial_transpose(bell_state(StateFamily::PhiMinus));
    const Spectrum<double> s = spectrum(w);
    CHECK(s.eigenvalues(0) == doctest::Approx(-0.5));
    for (int k = 1; k < 4; ++k) CHECK(s.eigenvalues(k) == doctest::Approx(0.5));
    const WitnessClass c = classify_witness(w);
    CHECK(c.classification == WitnessKind::DEW);
    CHECK_FALSE(c.is_psd);
    CHECK(c.is_decomposable);
}

TEST_CASE("decomposable witness that needs the solver") {
    // Example 3 difference below the threshold: not PSD, not PT-PSD, but decomposable.
    const Operator w = example3_difference(2, 0.5, 0, 1, 1);
    REQUIRE_FALSE(is_psd(w));
    const ConeCertificate c = check_decomposable(w);
    REQUIRE(c.is_member());
    CHECK(c.reconstruction_residual <= tol::cert * (1.0 + w.norm()));
    CHECK(min_eigenvalue(*c.p) >= -tol::psd);
    CHECK(min_eigenvalue(*c.q) >= -tol::psd);
    CHECK((*c.p + partial_transpose(*c.q) - w).norm() < 1e-6);
}

TEST_CASE("Choi witness is not decomposable and comes with a PPT separator") {
    const Operator w = choi_witness();
    REQUIRE_FALSE(is_psd(w));
    const WitnessClass c = classify_witness(w);
    REQUIRE(c.classification == WitnessKind::NonDecomposable);
    const Operator& f = *c.certificate.separator;
    CHECK(check_ppt_plus(f).is_member());
    CHECK(f.trace() == doctest::Approx(1.0));
    CHECK(trace_inner(w, f) < -1e-6);
    CHECK(verify_separator(w, f).verdict == Verdict::NonMember);
}

TEST_CASE("re-verification rejects wrong certificates") {
    const SystemDims dims(2, 2);
    const Operator w = partial_transpose(bell_state(StateFamily::PhiPlus));
    CHECK(verify_decomposition(w, Operator::zero(dims), bell_state(StateFamily::PhiPlus)).is_member());
    CHECK(verify_decomposition(w, Operator::zero(dims), bell_state(StateFamily::PhiMinus)).verdict == Verdict::Unknown);
    CHECK(verify_separator(Operator::identity(dims), maximally_mixed(dims)).verdict == Verdict::Unknown);
}

TEST_CASE("cone duality: members of PPT+ and PPT+* have non-negative overlap") {
    Rng rng(42);
    for (const SystemDims dims : {SystemDims(2, 2), SystemDims(2, 3)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Operator e = random_separable(dims, 2, rng);
            const Operator p = random_density(dims, 2, rng);
            const Operator q = random_density(dims, 2, rng);
            const Operator w = p + partial_transpose(q);
            REQUIRE(check_ppt_plus(e).is_member());
            CHECK(trace_inner(e, w) >= -1e-12);
        }
    }
}

TEST_CASE("low-rank decomposable operators on 3x3 are certified") {
    // P and Q of rank 2 put W on the cone boundary, where the solver stalls.
    Rng rng(1);
    const SystemDims dims(3, 3);
    for (int trial = 0; trial < 3; ++trial) {
        const Operator w = random_density(dims, 2, rng) + partial_transpose(random_density(dims, 2, rng));
        const ConeCertificate c = check_decomposable(w);
        REQUIRE(c.is_member());
        CHECK(verify_decomposition(w, *c.p, *c.q).is_member());
    }
}

TEST_CASE("trace positivity of decomposable operators") {
    const Operator w = partial_transpose(bell_state(StateFamily::PsiMinus));
    const ConeCertificate c = check_decomposable(w);
    REQUIRE(c.is_member());
    CHECK(assert_lemma1(w, c));
    const Lemma1Audit audit = lemma1_audit();
    CHECK(audit.checked > 0);
    CHECK(audit.violations == 0);
    CHECK_THROWS_AS(assert_lemma1(w, check_ppt_plus(w)), InvalidArgument);
}

}  // TEST_SUITE
