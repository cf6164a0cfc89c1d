#include "commands.hpp"

#include "pptdisc/ensembles.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <sstream>

namespace pptdisc::cli {
namespace {

using io::json;

// FNV-1a over the raw file bytes; identifies inputs in reports.
std::string digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument(path + ": cannot open for reading");
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
        h ^= static_cast<unsigned char>(*it);
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

json base_report(const std::string& command) {
    return {{"tool", {{"name", "pptdisc"}, {"version", kVersion}}},
            {"command", command},
            {"inputs", json::array()},
            {"values", json::object()},
            {"verdicts", json::object()}};
}

void add_input(json& report, const std::string& role, const std::string& path) {
    report["inputs"].push_back({{"role", role}, {"path", path}, {"digest", digest(path)}});
}

int largest_prior(const Ensemble& e) {
    int best = 0;
    for (int i = 1; i < e.size(); ++i) {
        if (e.eta(i) > e.eta(best)) best = i;
    }
    return best;
}

// Guessing the most likely state is LOCC; any PPT bound caps p_L from above.
// The upper end is a numerical optimum and may sit a rounding error below an
// exact lower end.
json p_l_bounds(double lower, double upper) { return json::array({lower, std::max(lower, upper)}); }

int exit_for(bool certified) { return certified ? kCertified : kIndeterminate; }

double now_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct SweepRow {
    double param, closed_form, numeric, abs_err;
    int iterations;
    double wall_ms;
    bool ok;
};

struct ReproduceOutcome {
    json report;
    SweepRow row;
};

ReproduceOutcome reproduce_example1(int d, double lambda, const DiscriminationOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const Example1 ex = example1(d, lambda);
    const double closed = example1_closed_form(d, lambda);
    const DiscriminationResult ppt = optimal_ppt(ex.ensemble, options);
    const DiscriminationResult global = optimal_global(ex.ensemble, options);
    const Theorem3Result witness = theorem3_witness_check(ex.ensemble, ex.measurement, options);
    const double locc_value = evaluate_measurement(ex.ensemble, ex.measurement);
    const double err = std::abs(ppt.value - closed);
    const double gap = global.value - ppt.value;
    const bool ok = err <= 1e-6 && ppt.certified && global.certified && witness.condition == Decision::Holds;

    json r;
    r["parameters"] = {{"example", 1}, {"d", d}, {"lambda", lambda}, {"sigma", "maximally_mixed"}};
    r["values"] = {{"closed_form", closed},
                   {"p_ppt", ppt.value},
                   {"p_g", global.value},
                   {"abs_err", err},
                   {"gap", gap},
                   {"locc_measurement_value", locc_value},
                   {"p_l_bounds", p_l_bounds(locc_value, ppt.value)}};
    r["verdicts"] = {{"witness_condition", to_string(witness.condition)},
                     {"dew_indices", witness.dew_indices},
                     {"hermitization_residual", witness.hermitization_residual},
                     {"p_ppt_certified", ppt.certified},
                     {"p_g_certified", global.certified},
                     {"closed_form_match", err <= 1e-6},
                     {"locc_by_construction", ex.measurement.locc_by_construction()}};
    r["results"] = {{"ppt", io::to_json(ppt)}, {"global", io::to_json(global)}};
    const int iterations = ppt.stats.iterations + global.stats.iterations;
    return {r, {lambda, closed, ppt.value, err, iterations, now_ms(start), ok}};
}

ReproduceOutcome reproduce_example2(double t, const DiscriminationOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const Ensemble e = example2();
    const Operator h = example2_dual(t);
    const DiscriminationResult q = dual_qppt(e, options);
    const DiscriminationResult global = optimal_global(e, options);
    const double err = std::abs(q.value - 1.0);

    json classes = json::array();
    bool all_decomposable = true;
    std::vector<int> dews;
    for (int i = 0; i < e.size(); ++i) {
        const WitnessClass c = classify_witness(h - e.weighted(i), options.decomposability);
        all_decomposable = all_decomposable && c.is_decomposable;
        if (c.classification == WitnessKind::DEW) dews.push_back(i + 1);
        classes.push_back(io::to_json(c));
    }
    const bool expected_dews = t < 1.0 ? dews == std::vector<int>{3} : dews.empty();
    const bool trace_one = std::abs(h.trace() - 1.0) <= 1e-12;
    const bool ok = err <= 1e-6 && q.certified && global.certified && all_decomposable && expected_dews && trace_one;

    json r;
    r["parameters"] = {{"example", 2}, {"t", t}};
    r["values"] = {{"closed_form", 1.0},
                   {"q_ppt", q.value},
                   {"p_g", global.value},
                   {"abs_err", err},
                   {"trace_h", h.trace()},
                   {"p_l_bounds", p_l_bounds(1.0 / 3.0, q.value)}};
    r["verdicts"] = {{"h_in_h_ppt", all_decomposable},
                     {"h_in_h_dew", !dews.empty()},
                     {"dew_indices_one_based", dews},
                     {"q_ppt_certified", q.certified},
                     {"closed_form_match", err <= 1e-6}};
    r["h"] = io::to_json(h);
    r["differences"] = classes;
    r["results"] = {{"q_ppt", io::to_json(q)}, {"global", io::to_json(global)}};
    return {r, {t, 1.0, q.value, err, q.stats.iterations, now_ms(start), ok}};
}

ReproduceOutcome reproduce_example3(int d, double lambda, const DiscriminationOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const Ensemble e = example3(d, lambda);
    const double closed = example3_closed_form(d);
    const DiscriminationResult ppt = optimal_ppt(e, options);
    const double err = std::abs(ppt.value - closed);
    const double threshold = example3_threshold(d);
    const EqualityVerdict verdict = corollary2_classify(e, 0, options);
    const bool expect_equal = lambda >= threshold;
    const bool verdict_ok = verdict.outcome != Outcome::Indeterminate && verdict.equal() == expect_equal;
    const bool ok = err <= 1e-6 && ppt.certified && verdict_ok;

    json r;
    r["parameters"] = {{"example", 3}, {"d", d}, {"lambda", lambda}};
    r["values"] = {{"closed_form", closed},
                   {"p_ppt", ppt.value},
                   {"abs_err", err},
                   {"threshold", threshold},
                   {"p_l_bounds", p_l_bounds(e.eta(0), ppt.value)}};
    r["verdicts"] = {{"equality", io::to_json(verdict)},
                     {"expected_equal", expect_equal},
                     {"threshold_consistent", verdict_ok},
                     {"p_ppt_certified", ppt.certified},
                     {"closed_form_match", err <= 1e-6}};
    r["results"] = {{"ppt", io::to_json(ppt)}};
    return {r, {lambda, closed, ppt.value, err, ppt.stats.iterations, now_ms(start), ok}};
}

std::vector<double> grid(double from, double to, int points) {
    std::vector<double> out;
    for (int k = 0; k < points; ++k) out.push_back(from + (to - from) * k / (points - 1));
    return out;
}

std::string csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << std::setprecision(17) << row.param << ',' << row.closed_form << ',' << row.numeric << ',' << row.abs_err
       << ',' << row.iterations << ',' << std::setprecision(6) << row.wall_ms << '\n';
    return os.str();
}

std::vector<std::string> reverify_result(const json& result, const Ensemble& e, const std::string& where) {
    std::vector<std::string> failures;
    const Operator h = io::operator_from_json(result.at("dual_h"), where + ".dual_h");
    const json& certs = result.at("certificates");
    for (std::size_t i = 0; i < certs.size() && static_cast<int>(i) < e.size(); ++i) {
        const std::string cwhere = where + ".certificates[" + std::to_string(i) + "]";
        const ConeCertificate c = io::certificate_from_json(certs[i], cwhere);
        if (c.verdict != Verdict::Member) continue;
        if (!c.p || !c.q) {
            failures.push_back(cwhere + ": member certificate without P and Q");
            continue;
        }
        const ConeCertificate again = verify_decomposition(h - e.weighted(static_cast<int>(i)), *c.p, *c.q);
        if (!again.is_member()) failures.push_back(cwhere + ": decomposition does not re-verify");
    }
    if (result.at("certified").get<bool>()) {
        for (std::size_t i = 0; i < certs.size(); ++i) {
            if (certs[i].at("verdict") != "member") failures.push_back(where + ": certified with a non-member certificate");
        }
    }
    return failures;
}

}  // namespace

std::pair<double, double> parse_eps_override(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw InvalidArgument("PPTDISC_EPS_OVERRIDE: expected 'feas,gap', got '" + text + "'");
    try {
        std::size_t used1 = 0, used2 = 0;
        const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
        const double feas = std::stod(a, &used1);
        const double gap = std::stod(b, &used2);
        if (used1 != a.size() || used2 != b.size() || !(feas > 0.0) || !(gap > 0.0)) throw std::invalid_argument(text);
        return {feas, gap};
    } catch (const std::exception&) {
        throw InvalidArgument("PPTDISC_EPS_OVERRIDE: expected two positive numbers 'feas,gap', got '" + text + "'");
    }
}

DiscriminationOptions resolve_options(const SolverFlags& flags) {
    DiscriminationOptions options;
    if (flags.eps_feas) options.solver.eps_feas = *flags.eps_feas;
    if (flags.eps_gap) options.solver.eps_gap = *flags.eps_gap;
    if (flags.max_iter) options.solver.max_iter = *flags.max_iter;
    if (const char* env = std::getenv("PPTDISC_EPS_OVERRIDE"); env && *env) {
        const auto [feas, gap] = parse_eps_override(env);
        options.solver.eps_feas = feas;
        options.solver.eps_gap = gap;
    }
    if (!(options.solver.eps_feas > 0.0) || !(options.solver.eps_gap > 0.0) || options.solver.max_iter <= 0) {
        throw InvalidArgument("solver tolerances and iteration limit must be positive");
    }
    return options;
}

CommandOutput cmd_solve(const std::string& ensemble_path, const std::string& mode, const DiscriminationOptions& options) {
    json report = base_report("solve");
    add_input(report, "ensemble", ensemble_path);
    const Ensemble e = io::load_ensemble(ensemble_path);
    report["ensemble"] = io::to_json(e);
    report["mode"] = mode;

    DiscriminationResult result;
    if (mode == "global") {
        result = optimal_global(e, options);
        report["values"]["p_g"] = result.value;
    } else if (mode == "ppt") {
        result = optimal_ppt(e, options);
        report["values"]["p_ppt"] = result.value;
        report["values"]["p_l_bounds"] = p_l_bounds(e.eta(largest_prior(e)), result.value);
    } else if (mode == "dual") {
        result = dual_qppt(e, options);
        report["values"]["q_ppt"] = result.value;
    } else {
        throw InvalidArgument("--mode: expected global, ppt or dual, got '" + mode + "'");
    }
    report["verdicts"] = {{"certified", result.certified},
                          {"duality_residual", result.duality_residual},
                          {"optimality_margin", result.mode == Mode::Global ? json(result.optimality_margin) : json(nullptr)}};
    report["result"] = io::to_json(result);
    report["solver_stats"] = io::to_json(result.stats);
    return {exit_for(result.certified), report, {}};
}

CommandOutput cmd_classify(const std::string& ensemble_path, std::optional<int> pivot_one_based,
                           const DiscriminationOptions& options) {
    json report = base_report("classify");
    add_input(report, "ensemble", ensemble_path);
    const Ensemble e = io::load_ensemble(ensemble_path);
    report["ensemble"] = io::to_json(e);
    const int pivot = pivot_one_based ? *pivot_one_based - 1 : largest_prior(e);
    if (pivot < 0 || pivot >= e.size()) {
        throw InvalidArgument("--pivot: expected 1.." + std::to_string(e.size()) + ", got " +
                              std::to_string(pivot + 1));
    }

    const Theorem4Result t4 = theorem4_classify(e, options);
    report["values"] = {{"p_g", t4.p_global},
                        {"p_ppt", t4.p_ppt},
                        {"q_ppt", t4.q_ppt},
                        {"psd_dual", t4.psd_dual_value},
                        {"p_l_bounds", p_l_bounds(e.eta(largest_prior(e)), t4.p_ppt)}};
    report["theorem4"] = io::to_json(t4);
    json verdicts = {{"outcome", to_string(t4.verdict.outcome)},
                     {"margin", t4.verdict.margin},
                     {"cross_checks_pass", t4.cross_checks_pass},
                     {"dew_index_one_based", t4.verdict.dew_index ? json(*t4.verdict.dew_index + 1) : json(nullptr)}};

    int code = t4.verdict.outcome == Outcome::Indeterminate ? kIndeterminate : kCertified;
    const Corollary1Result c1 = corollary1_check(e, pivot, options);
    verdicts["corollary1"] = {{"pivot_one_based", pivot + 1}, {"holds", to_string(c1.holds)}};
    if (c1.holds == Decision::Holds) {
        const EqualityVerdict c2 = corollary2_classify(e, pivot, options);
        verdicts["corollary2"] = io::to_json(c2);
        if (c2.dew_index && !t4.verdict.dew_index) verdicts["dew_index_one_based"] = *c2.dew_index + 1;
        const bool decisive = t4.verdict.outcome != Outcome::Indeterminate && c2.outcome != Outcome::Indeterminate;
        const bool agree = c2.outcome == t4.verdict.outcome;
        verdicts["corollary2_agrees"] = agree;
        if (decisive && !agree) {
            report["error"] = "corollary 2 and theorem 4 disagree";
            code = kError;
        }
        if (std::abs(c1.value - t4.p_ppt) > 2.0 * tol::cert) {
            report["error"] = "corollary 1 value differs from p_PPT";
            code = kError;
        }
    }
    report["verdicts"] = verdicts;
    SolveStats stats;
    for (const DiscriminationResult* r : {&t4.qppt, &t4.psd_dual, &t4.global, &t4.ppt}) {
        stats.iterations += r->stats.iterations;
        stats.wall_ms += r->stats.wall_ms;
        stats.solves += r->stats.solves;
    }
    report["solver_stats"] = io::to_json(stats);
    return {code, report, {}};
}

CommandOutput cmd_witness(const std::string& operator_path, const std::optional<std::string>& certificate_path,
                          const DiscriminationOptions& options) {
    json report = base_report("witness");
    add_input(report, "operator", operator_path);
    const Operator w = io::load_operator(operator_path);
    report["operator"] = io::to_json(w);
    const WitnessClass c = classify_witness(w, options.decomposability);
    report["verdicts"] = {{"classification", to_string(c.classification)},
                          {"min_eigenvalue", c.min_eigenvalue},
                          {"reconstruction_residual", c.certificate.reconstruction_residual},
                          {"separation", c.certificate.separation}};
    report["witness"] = io::to_json(c);
    report["solver_stats"] = {{"iterations", c.certificate.solver_iterations}};
    if (certificate_path) io::write_json(*certificate_path, io::to_json(c.certificate));
    return {c.classification == WitnessKind::Unknown ? kIndeterminate : kCertified, report, {}};
}

CommandOutput cmd_construct(const std::optional<std::string>& dew_path, const std::optional<std::string>& pos_path,
                            const std::vector<std::string>& dew_paths, const std::vector<double>& lambdas,
                            const std::optional<std::string>& out_path, const DiscriminationOptions& options) {
    json report = base_report("construct");
    if (dew_path.has_value() == !dew_paths.empty()) {
        throw InvalidArgument("construct: give either --dew or --dews with --lambdas");
    }
    std::optional<Construction> built;
    try {
        if (dew_path) {
            add_input(report, "dew", *dew_path);
            std::optional<Operator> p;
            if (pos_path) {
                add_input(report, "pos", *pos_path);
                p = io::load_operator(*pos_path);
            }
            built = construct_from_dew(io::load_operator(*dew_path), p, options.decomposability);
        } else {
            std::vector<Operator> ws;
            for (const auto& path : dew_paths) {
                add_input(report, "dew", path);
                ws.push_back(io::load_operator(path));
            }
            built = construct_from_dews(ws, lambdas, options.decomposability);
        }
    } catch (const PreconditionError& e) {
        report["error"] = e.what();
        if (e.witness()) report["failing_certificate"] = io::to_json(*e.witness());
        return {kError, report, {}};
    }

    report["ensemble"] = io::to_json(built->ensemble);
    report["claim"] = built->claim;
    json witnesses = json::array();
    for (const auto& w : built->witnesses) witnesses.push_back(io::to_json(w));
    report["witnesses"] = witnesses;
    if (out_path) io::save(*out_path, built->ensemble);

    const Theorem4Result t4 = theorem4_classify(built->ensemble, options);
    report["values"] = {{"p_g", t4.p_global}, {"p_ppt", t4.p_ppt}, {"q_ppt", t4.q_ppt}, {"psd_dual", t4.psd_dual_value}};
    const bool claim_holds = t4.verdict.outcome == Outcome::NotEqual;
    report["verdicts"] = {{"outcome", to_string(t4.verdict.outcome)},
                          {"margin", t4.verdict.margin},
                          {"claim_holds", claim_holds},
                          {"cross_checks_pass", t4.cross_checks_pass}};
    report["theorem4"] = io::to_json(t4);
    return {claim_holds ? kCertified : kIndeterminate, report, {}};
}

CommandOutput cmd_reproduce(int example, int d, std::optional<double> lambda, std::optional<double> t, bool table,
                            const DiscriminationOptions& options) {
    json report = base_report("reproduce");
    auto one = [&](double param) {
        switch (example) {
            case 1: return reproduce_example1(d, param, options);
            case 2: return reproduce_example2(param, options);
            case 3: return reproduce_example3(d, param, options);
        }
        throw InvalidArgument("--example: expected 1, 2 or 3, got " + std::to_string(example));
    };
    if (example < 1 || example > 3) throw InvalidArgument("--example: expected 1, 2 or 3, got " + std::to_string(example));

    if (!table) {
        const double param = example == 2 ? t.value_or(0.5) : lambda.value_or(example == 1 ? 1.0 : 0.5);
        ReproduceOutcome r = one(param);
        for (auto& [key, value] : r.report.items()) report[key] = value;
        report["solver_stats"] = {{"iterations", r.row.iterations}, {"wall_ms", r.row.wall_ms}};
        return {exit_for(r.row.ok), report, {}};
    }

    std::vector<double> params;
    switch (example) {
        case 1: params = grid(0.1, 1.0, 10); break;
        case 2: params = grid(0.0, 1.0, 5); break;
        default: params = grid(0.0, 0.9, 10); break;
    }
    std::string csv = "param,closed_form,numeric,abs_err,iterations,wall_ms\n";
    json rows = json::array();
    bool all_ok = true;
    for (double param : params) {
        const ReproduceOutcome r = one(param);
        csv += csv_row(r.row);
        all_ok = all_ok && r.row.ok;
        rows.push_back({{"param", r.row.param},
                        {"closed_form", r.row.closed_form},
                        {"numeric", r.row.numeric},
                        {"abs_err", r.row.abs_err},
                        {"certified", r.row.ok}});
    }
    report["parameters"] = {{"example", example}, {"d", d}};
    report["rows"] = rows;
    report["verdicts"] = {{"all_rows_certified", all_ok}};
    return {exit_for(all_ok), report, csv};
}

std::vector<std::string> reverify_report(const json& report) {
    std::vector<std::string> failures;
    const std::string command = report.at("command").get<std::string>();
    auto append = [&](std::vector<std::string> more) { failures.insert(failures.end(), more.begin(), more.end()); };
    if (command == "solve") {
        const Ensemble e = io::ensemble_from_json(report.at("ensemble"));
        append(reverify_result(report.at("result"), e, "result"));
    } else if (command == "classify") {
        const Ensemble e = io::ensemble_from_json(report.at("ensemble"));
        const json& t4 = report.at("theorem4");
        for (const char* part : {"qppt", "psd_dual", "global", "ppt"}) append(reverify_result(t4.at(part), e, part));
        const double margin = t4.at("psd_dual_value").get<double>() - t4.at("q_ppt").get<double>();
        const std::string outcome = t4.at("verdict").at("outcome").get<std::string>();
        const std::string expected = margin <= tol::cert ? "equal" : margin >= tol::verdict ? "not_equal" : "indeterminate";
        if (outcome != expected && outcome != "indeterminate") {
            failures.push_back("theorem4: recorded outcome " + outcome + " does not follow from the values");
        }
    } else if (command == "witness") {
        const Operator w = io::operator_from_json(report.at("operator"));
        const json& witness = report.at("witness");
        const std::string kind = witness.at("classification").get<std::string>();
        const ConeCertificate c = io::certificate_from_json(witness.at("certificate"));
        if (kind == "psd" && min_eigenvalue(w) < -tol::psd) failures.push_back("witness: PSD verdict does not re-verify");
        if (kind == "psd" || kind == "dew") {
            if (!c.p || !c.q || !verify_decomposition(w, *c.p, *c.q).is_member()) {
                failures.push_back("witness: decomposition does not re-verify");
            }
        }
        if (kind == "dew" && min_eigenvalue(w) >= -tol::psd) failures.push_back("witness: DEW verdict on a PSD operator");
        if (kind == "non_decomposable" &&
            (!c.separator || verify_separator(w, *c.separator).verdict != Verdict::NonMember)) {
            failures.push_back("witness: separator does not re-verify");
        }
    } else {
        failures.push_back("reports of command '" + command + "' carry no certificates to re-verify");
    }
    return failures;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal discrimination of bipartite ensembles under PPT measurements"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SolverFlags flags;
    auto add_solver_flags = [&](CLI::App* sub) {
        sub->add_option("--eps-feas", flags.eps_feas, "Primal/dual feasibility tolerance");
        sub->add_option("--eps-gap", flags.eps_gap, "Relative duality gap tolerance");
        sub->add_option("--max-iter", flags.max_iter, "Iteration limit per conic solve");
        sub->add_option("--seed", flags.seed, "Seed for randomized restarts (unused by default paths)");
    };
    std::optional<std::string> out_path;

    std::string ensemble_path, mode;
    auto* solve = app.add_subcommand("solve", "Optimal success probability of an ensemble");
    solve->add_option("--ensemble", ensemble_path, "Ensemble JSON")->required();
    solve->add_option("--mode", mode, "global, ppt or dual")->required()->check(CLI::IsMember({"global", "ppt", "dual"}));
    solve->add_option("--out", out_path, "Write the report here instead of stdout");
    add_solver_flags(solve);

    std::optional<int> pivot;
    auto* classify = app.add_subcommand("classify", "Decide whether p_PPT equals p_G");
    classify->add_option("--ensemble", ensemble_path, "Ensemble JSON")->required();
    classify->add_option("--pivot", pivot, "1-based pivot index for the corollary path");
    add_solver_flags(classify);

    std::string operator_path;
    std::optional<std::string> certificate_path;
    auto* witness = app.add_subcommand("witness", "Classify an operator as PSD, DEW or non-decomposable");
    witness->add_option("--operator", operator_path, "Operator JSON")->required();
    witness->add_option("--certificate", certificate_path, "Write the certificate JSON here");
    add_solver_flags(witness);

    std::optional<std::string> dew_path, pos_path;
    std::vector<std::string> dew_paths;
    std::vector<double> lambdas;
    auto* construct = app.add_subcommand("construct", "Build an ensemble with p_PPT < p_G from DEWs");
    auto* dew_opt = construct->add_option("--dew", dew_path, "Single DEW operator JSON");
    construct->add_option("--pos", pos_path, "PSD compensator P with P + W >= 0")->needs(dew_opt);
    auto* dews_opt = construct->add_option("--dews", dew_paths, "Several DEW operator JSON files")->excludes(dew_opt);
    construct->add_option("--lambdas", lambdas, "One positive weight per DEW")->needs(dews_opt);
    construct->add_option("--out", out_path, "Write the constructed ensemble here");
    add_solver_flags(construct);

    int example = 0, d = 2;
    std::optional<double> lambda, t;
    bool table = false;
    auto* reproduce = app.add_subcommand("reproduce", "Compare a worked example with its closed form");
    reproduce->add_option("--example", example, "1, 2 or 3")->required()->check(CLI::Range(1, 3));
    reproduce->add_option("--d", d, "Local dimension")->check(CLI::PositiveNumber);
    reproduce->add_option("--lambda", lambda, "Mixing parameter");
    reproduce->add_option("--t", t, "Dual family parameter (example 2)");
    reproduce->add_flag("--table", table, "Sweep a parameter grid and print CSV");
    add_solver_flags(reproduce);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kCertified;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << '\n';
        return kCertified;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }

    try {
        const DiscriminationOptions options = resolve_options(flags);
        CommandOutput result;
        if (*solve) {
            result = cmd_solve(ensemble_path, mode, options);
        } else if (*classify) {
            result = cmd_classify(ensemble_path, pivot, options);
        } else if (*witness) {
            result = cmd_witness(operator_path, certificate_path, options);
        } else if (*construct) {
            result = cmd_construct(dew_path, pos_path, dew_paths, lambdas, out_path, options);
        } else {
            result = cmd_reproduce(example, d, lambda, t, table, options);
        }
        json args_echo = args;
        result.report["command_line"] = args_echo;
        result.report["exit_code"] = result.exit_code;
        if (flags.seed) result.report["seed"] = *flags.seed;
        if (!result.text.empty()) {
            out << result.text;
        } else if (*solve && out_path) {
            io::write_json(*out_path, result.report);
        } else {
            out << result.report.dump(2) << '\n';
        }
        if (result.report.contains("error")) err << "error: " << result.report["error"].get<std::string>() << '\n';
        return result.exit_code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace pptdisc::cli
