// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include "pptdisc/ensembles.hpp"
#include "pptdisc/io.hpp"
#include "pptdisc/states.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace pptdisc;
using namespace pptdisc::testing;

namespace {

// p_G - p_PPT for example1(2, 1): regression constant from the first verified run.
constexpr double kExample1Gap = 0.0833333333;
constexpr double kExample1GapTolerance = 1e-6;

struct Check {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

struct RandomCase {
    Ensemble ensemble;
    DiscriminationResult ppt;
    DiscriminationResult dual;
};

std::vector<RandomCase>& random_suite() {
    static std::vector<RandomCase> cases = [] {
        std::vector<RandomCase> out;
        Rng rng(20240611);
        for (const SystemDims dims : {SystemDims(2, 2), SystemDims(2, 3), SystemDims(3, 3)}) {
            for (int n : {2, 3, 5}) {
                for (int trial = 0; trial < 50; ++trial) {
                    Ensemble e = random_ensemble(dims, n, rng);
                    DiscriminationResult p = optimal_ppt(e);
                    DiscriminationResult q = dual_qppt(e);
                    out.push_back({std::move(e), std::move(p), std::move(q)});
                }
            }
        }
        return out;
    }();
    return cases;
}

void criterion1(Check& o) {
    double worst = 0.0, slowest = 0.0;
    for (int d : {2, 3}) {
        for (double lambda : {0.25, 0.5, 1.0}) {
            const auto start = std::chrono::steady_clock::now();
            const DiscriminationResult r = optimal_ppt(example1(d, lambda).ensemble);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            const double err = std::abs(r.value - example1_closed_form(d, lambda));
            worst = std::max(worst, err);
            slowest = std::max(slowest, secs);
            o.require(err <= 1e-6, "d=" + std::to_string(d) + " lambda=" + std::to_string(lambda));
            o.require(secs < 60.0, "runtime");
        }
    }
    o.detail << "max |p_PPT - closed form| = " << worst << ", slowest instance " << slowest << " s";
}

void criterion2(Check& o) {
    const Example1 ex = example1(2, 1.0);
    const Theorem3Result t3 = theorem3_witness_check(ex.ensemble, ex.measurement);
    const double gap = optimal_global(ex.ensemble).value - optimal_ppt(ex.ensemble).value;
    o.require(t3.condition == Decision::Holds, "witness condition");
    o.require(gap >= 1e-4, "gap >= 1e-4");
    o.require(std::abs(gap - kExample1Gap) <= kExample1GapTolerance, "gap regression constant");
    o.detail << "condition " << to_string(t3.condition) << ", p_G - p_PPT = " << gap;
}

void criterion3(Check& o) {
    const Ensemble e = example2();
    const double g = optimal_global(e).value, p = optimal_ppt(e).value, q = dual_qppt(e).value;
    o.require(std::abs(g - 1.0) <= 1e-6 && std::abs(p - 1.0) <= 1e-6 && std::abs(q - 1.0) <= 1e-6, "values");
    for (double t : {0.0, 0.5, 0.99}) {
        const Operator h = example2_dual(t);
        o.require(std::abs(h.trace() - 1.0) <= 1e-12, "Tr H");
        for (int i = 0; i < 3; ++i) {
            const WitnessClass c = classify_witness(h - e.weighted(i));
            o.require(c.is_decomposable && c.certificate.is_member(), "H in H_PPT");
            o.require((c.classification == WitnessKind::DEW) == (i == 2), "DEW exactly at index 3");
        }
    }
    const Operator h1 = example2_dual(1.0);
    for (int i = 0; i < 3; ++i) {
        o.require(classify_witness(h1 - e.weighted(i)).classification == WitnessKind::PSD, "t = 1 PSD");
    }
    o.detail << "p_G = " << g << ", p_PPT = " << p << ", q_PPT = " << q;
}

void criterion4(Check& o) {
    double worst = 0.0;
    for (int d : {2, 3}) {
        const DiscriminationResult r = optimal_ppt(example3(d, 0.5));
        worst = std::max(worst, std::abs(r.value - example3_closed_form(d)));
        const double star = example3_threshold(d);
        for (const double lambda : {star - 0.05, star + 0.05}) {
            const bool expect_equal = lambda >= star;
            const Ensemble e = example3(d, lambda);
            const EqualityVerdict c2 = corollary2_classify(e, 0);
            const Theorem4Result t4 = theorem4_classify(e);
            const std::string tag = "d=" + std::to_string(d) + " lambda=" + std::to_string(lambda);
            o.require(c2.outcome == (expect_equal ? Outcome::Equal : Outcome::NotEqual), "corollary 2 " + tag);
            o.require(t4.verdict.outcome == (expect_equal ? Outcome::Equal : Outcome::NotEqual), "theorem 4 " + tag);
            o.detail << tag << ": margin " << t4.verdict.margin << "; ";
        }
    }
    o.require(worst <= 1e-6, "closed form");
    o.detail << "max |p_PPT - d/(5d-4)| = " << worst;
}

void criterion5(Check& o) {
    double worst = 0.0;
    int bad = 0;
    for (const RandomCase& c : random_suite()) {
        const double diff = std::abs(c.ppt.value - c.dual.value);
        const double bound = 2e-7 * (1.0 + c.ppt.value);
        worst = std::max(worst, diff / bound);
        if (diff > bound || !c.ppt.certified || !c.dual.certified) ++bad;
    }
    o.require(bad == 0, std::to_string(bad) + " cases");
    o.detail << random_suite().size() << " ensembles, worst |p_PPT - q_PPT| / bound = " << worst;
}

void criterion6(Check& o) {
    double worst = 0.0;
    int bad = 0;
    for (const RandomCase& c : random_suite()) {
        const JointOptimalityReport r = verify_joint_optimality(c.ensemble, *c.ppt.measurement, c.ppt.dual_h, c.ppt.certificates);
        worst = std::max(worst, r.max_abs_residual);
        if (r.max_abs_residual > 1e-6 || r.verdict != Decision::Holds) ++bad;
    }
    o.require(bad == 0, std::to_string(bad) + " cases");
    o.detail << "max_i |Tr[M_i (H - eta_i rho_i)]| = " << worst;
}

void criterion7(Check& o) {
    Rng rng(7);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const Ensemble e = random_ensemble(SystemDims(2, 2), 2, rng);
        worst = std::max(worst, std::abs(optimal_global(e).value - helstrom(e)));
    }
    o.require(worst <= 1e-6, "Helstrom");
    o.detail << "50 ensembles, max |p_G - Helstrom| = " << worst;
}

void criterion8(Check& o) {
    const Lemma1Audit audit = lemma1_audit();
    o.require(audit.checked > 0, "no certificates audited");
    o.require(audit.violations == 0, "violations");
    o.require(audit.min_trace_any > -1e-8, "Tr E > -1e-8");
    o.require(audit.min_trace > 0.0, "Tr E > 0 for nonzero E");
    o.detail << audit.checked << " member certificates, " << audit.violations << " violations, min Tr E (nonzero) = "
             << audit.min_trace;
}

void criterion9(Check& o) {
    const Operator w1 = example3_difference(2, 0.5, 0, 1, 1);
    const Operator w2 = example3_difference(2, 0.5, 0, 1, 3);
    auto lambda_for = [](const Operator& w) { return 0.9 / spectrum(w).max(); };
    const Construction single = construct_from_dew(w1);
    const Construction several = construct_from_dews({w1, w2}, {lambda_for(w1), lambda_for(w2)});
    for (const auto& [name, c] : {std::pair{"single", &single}, std::pair{"several", &several}}) {
        const Theorem4Result t4 = theorem4_classify(c->ensemble);
        o.require(t4.verdict.outcome == Outcome::NotEqual, std::string(name) + " not-equal");
        o.require(t4.verdict.margin >= 1e-5, std::string(name) + " margin");
        o.detail << name << ": margin " << t4.verdict.margin << "; ";
    }
}

void criterion10(Check& o) {
    Rng rng(10);
    int violations = 0;
    std::map<std::string, int> failed;
    auto count = [&](bool ok, const char* what) {
        if (ok) return;
        ++violations;
        ++failed[what];
    };
    for (const SystemDims dims : {SystemDims(2, 2), SystemDims(2, 3), SystemDims(3, 3)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const Operator a = random_hermitian(dims, rng);
            const Operator b = random_hermitian(dims, rng);
            count((partial_transpose(partial_transpose(a)) - a).norm() <= 1e-13, "involution");
            count((partial_transpose(a + 0.3 * b) - partial_transpose(a) - 0.3 * partial_transpose(b)).norm() <= 1e-13, "linearity");
            count(std::abs(partial_transpose(a).trace() - a.trace()) <= 1e-12, "trace");
            // Cone duality: E in PPT+, W = P + Q^T2.
            const Operator e = random_separable(dims, 3, rng);
            const Operator w = random_density(dims, 2, rng) + partial_transpose(random_density(dims, 2, rng));
            count(check_ppt_plus(e).is_member() && trace_inner(e, w) >= -1e-12, "duality pairing");
            const ConeCertificate cw = check_decomposable(w);
            count(cw.is_member() && trace_inner(e, *cw.p + partial_transpose(*cw.q)) >= -1e-8, "decomposable certificate");
        }
    }
    for (int d : {2, 3, 4}) {
        const Measurement& m = example1(d, 0.5).measurement;
        Operator sum = Operator::zero(m.dims());
        for (const Operator& el : m.elements()) sum += el;
        count((sum - Operator::identity(m.dims())).norm() <= 1e-12, "example completeness");
    }
    for (const RandomCase& c : random_suite()) {
        Operator sum = Operator::zero(c.ensemble.dims());
        for (const Operator& el : c.ppt.measurement->elements()) sum += el;
        count((sum - Operator::identity(sum.dims())).norm() <= 1e-8 && c.ppt.measurement->is_ppt(), "solver measurement");
    }
    // Loader rejections.
    const io::json good = io::to_json(example2());
    auto rejected = [](const io::json& j) {
        try {
            io::ensemble_from_json(j);
            return false;
        } catch (const InvalidArgument&) {
            return true;
        }
    };
    io::json priors = good;
    priors["items"][0]["eta"] = 1.0 / 3.0 - 0.001;
    io::json not_psd = good;
    MatrixXc bad = MatrixXc::Zero(4, 4);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    not_psd["items"][0]["rho"] = io::to_json(Operator(SystemDims(2, 2), bad));
    io::json trace = good;
    trace["items"][1]["rho"] = io::to_json(Operator::identity(SystemDims(2, 2)));
    io::json asym = good;
    asym["items"][2]["rho"]["matrix"][0][1] = io::json::array({0.3, 0.0});
    io::json empty = good;
    empty["items"] = io::json::array();
    for (const io::json* j : {&priors, &not_psd, &trace, &asym, &empty}) count(rejected(*j), "loader rejection");
    count(!rejected(good), "loader acceptance");
    o.require(violations == 0, std::to_string(violations) + " violations");
    o.detail << violations << " violations";
    for (const auto& [what, n] : failed) o.detail << "; " << what << ": " << n;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"Example 1 closed form", criterion1},
        {"Example 1 gap and witness condition", criterion2},
        {"Example 2 values and dual family", criterion3},
        {"Example 3 closed form and threshold", criterion4},
        {"Strong duality on random ensembles", criterion5},
        {"Complementary slackness on random ensembles", criterion6},
        {"Helstrom oracle", criterion7},
        {"Trace positivity of decomposable certificates", criterion8},
        {"Construction guarantee", criterion9},
        {"Structural properties", criterion10},
    };
    // Criterion 8 audits every certificate produced by the others, so it runs last.
    std::vector<Check> outcomes(criteria.size());
    auto run = [&](std::size_t k) {
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[k].second(outcomes[k]);
        } catch (const std::exception& e) {
            outcomes[k].pass = false;
            outcomes[k].detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2zu  %s: %s (%.1f s)\n", outcomes[k].pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    outcomes[k].detail.str().c_str(), secs);
        std::fflush(stdout);
    };
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (k != 7) run(k);
    }
    run(7);
    bool all = true;
    for (const Check& o : outcomes) all = all && o.pass;
    return all ? 0 : 1;
}
