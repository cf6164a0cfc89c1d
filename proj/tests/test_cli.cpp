#include "commands.hpp"

#include "pptdisc/ensembles.hpp"
#include "pptdisc/states.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace pptdisc;
using io::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "pptdisc_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

struct Run {
    int code;
    std::string out, err;
    json report() const { return json::parse(out); }
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string saved(const std::string& name, const Ensemble& e) {
    const auto path = scratch(name);
    io::save(path, e);
    return path.string();
}

std::string saved(const std::string& name, const Operator& op) {
    const auto path = scratch(name);
    io::save(path, op);
    return path.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve") {
    const Run ppt = run({"solve", "--ensemble", saved("ex3.json", example3(2, 0.5)), "--mode", "ppt"});
    REQUIRE(ppt.code == 0);
    const json r = ppt.report();
    CHECK(r["values"]["p_ppt"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(r["inputs"][0]["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(cli::reverify_report(r).empty());

    const Run global = run({"solve", "--ensemble", saved("ex2.json", example2()), "--mode", "global"});
    REQUIRE(global.code == 0);
    CHECK(global.report()["values"]["p_g"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

    const auto empty = scratch("empty.json");
    io::write_json(empty, json{{"dims", {2, 2}}, {"items", json::array()}});
    const Run bad = run({"solve", "--ensemble", empty.string(), "--mode", "ppt"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("no states") != std::string::npos);

    CHECK(run({"solve", "--ensemble", empty.string(), "--mode", "local"}).code == 1);
    CHECK(run({"solve"}).code == 1);
}

TEST_CASE("solve writes the report to --out") {
    const auto out = scratch("report.json");
    const Run r = run({"solve", "--ensemble", saved("ex3b.json", example3(2, 0.5)), "--mode", "dual", "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const json report = io::read_json(out);
    CHECK(report["values"]["q_ppt"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("classify") {
    const Run equal = run({"classify", "--ensemble", saved("ex3_08.json", example3(2, 0.8))});
    REQUIRE(equal.code == 0);
    const json eq = equal.report();
    CHECK(eq["verdicts"]["outcome"] == "equal");
    CHECK(eq["verdicts"]["corollary2_agrees"] == true);
    CHECK(cli::reverify_report(eq).empty());

    const Run gap = run({"classify", "--ensemble", saved("ex3_05.json", example3(2, 0.5)), "--pivot", "1"});
    REQUIRE(gap.code == 0);
    const json ne = gap.report();
    CHECK(ne["verdicts"]["outcome"] == "not_equal");
    CHECK(ne["verdicts"]["dew_index_one_based"].is_number_integer());
    CHECK(ne["verdicts"]["margin"].get<double>() >= tol::verdict);

    const Run ex1 = run({"classify", "--ensemble", saved("ex1.json", example1(2, 1.0).ensemble)});
    REQUIRE(ex1.code == 0);
    CHECK(ex1.report()["verdicts"]["outcome"] == "not_equal");

    CHECK(run({"classify", "--ensemble", saved("ex3_05.json", example3(2, 0.5)), "--pivot", "0"}).code == 1);
}

TEST_CASE("witness") {
    const Run id = run({"witness", "--operator", saved("id.json", Operator::identity(SystemDims(2, 2)))});
    REQUIRE(id.code == 0);
    CHECK(id.report()["verdicts"]["classification"] == "psd");

    const auto cert = scratch("cert.json");
    const Run dew = run({"witness", "--operator", saved("w.json", example3_difference(2, 0.5, 0, 1, 1)), "--certificate",
                         cert.string()});
    REQUIRE(dew.code == 0);
    CHECK(dew.report()["verdicts"]["classification"] == "dew");
    CHECK(io::read_json(cert)["verdict"] == "member");
    CHECK(cli::reverify_report(dew.report()).empty());

    const Run phi = run({"witness", "--operator", saved("phi.json", partial_transpose(bell_state(StateFamily::PhiMinus)))});
    CHECK(phi.report()["verdicts"]["classification"] == "dew");
}

TEST_CASE("tampered reports fail re-verification") {
    const Run dew = run({"witness", "--operator", saved("w2.json", example3_difference(2, 0.5, 0, 1, 2))});
    json report = dew.report();
    report["witness"]["certificate"]["q"] = io::to_json(Operator::zero(SystemDims(2, 2)));
    CHECK_FALSE(cli::reverify_report(report).empty());
}

TEST_CASE("construct") {
    const std::string w1 = saved("dew1.json", example3_difference(2, 0.5, 0, 1, 1));
    const std::string w2 = saved("dew2.json", example3_difference(2, 0.5, 0, 1, 3));
    const auto out = scratch("constructed.json");
    const Run single = run({"construct", "--dew", w1, "--out", out.string()});
    REQUIRE(single.code == 0);
    CHECK(single.report()["verdicts"]["outcome"] == "not_equal");
    CHECK(io::load_ensemble(out).size() == 2);

    const Run many = run({"construct", "--dews", w1, w2, "--lambdas", "5", "8"});
    REQUIRE(many.code == 0);
    const json r = many.report();
    double total = 0.0;
    for (const auto& item : r["ensemble"]["items"]) total += item["eta"].get<double>();
    CHECK(r["ensemble"]["items"].size() == 3);
    CHECK(total == doctest::Approx(1.0));

    const Run too_large = run({"construct", "--dews", w1, "--lambdas", "1000"});
    CHECK(too_large.code == 1);
    CHECK(too_large.err.find("eigenvalue") != std::string::npos);

    const Run psd = run({"construct", "--dew", saved("id2.json", Operator::identity(SystemDims(2, 2)))});
    CHECK(psd.code == 1);
    CHECK(psd.report()["failing_certificate"]["classification"] == "psd");
}

TEST_CASE("reproduce") {
    const Run ex1 = run({"reproduce", "--example", "1", "--d", "2", "--lambda", "1"});
    REQUIRE(ex1.code == 0);
    const json r1 = ex1.report();
    CHECK(r1["values"]["closed_form"].get<double>() == doctest::Approx(10.0 / 24.0));
    CHECK(r1["values"]["abs_err"].get<double>() <= 1e-6);

    const Run ex3 = run({"reproduce", "--example", "3", "--d", "3", "--lambda", "0"});
    REQUIRE(ex3.code == 0);
    CHECK(ex3.report()["values"]["closed_form"].get<double>() == doctest::Approx(3.0 / 11.0));

    const Run ex2 = run({"reproduce", "--example", "2", "--t", "0.5"});
    REQUIRE(ex2.code == 0);
    const json r2 = ex2.report();
    CHECK(r2["values"]["q_ppt"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r2["verdicts"]["h_in_h_dew"] == true);

    CHECK(run({"reproduce", "--example", "3", "--d", "2", "--lambda", "1.0"}).code == 1);
    CHECK(run({"reproduce", "--example", "4"}).code == 1);
}

TEST_CASE("reproduce --table emits CSV") {
    const Run table = run({"reproduce", "--example", "2", "--table"});
    REQUIRE(table.code == 0);
    std::istringstream lines(table.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "param,closed_form,numeric,abs_err,iterations,wall_ms");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        CHECK(std::count(line.begin(), line.end(), ',') == 5);
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("solver flags and the tolerance override") {
    CHECK(cli::parse_eps_override("1e-8,1e-9") == std::make_pair(1e-8, 1e-9));
    CHECK_THROWS_AS(cli::parse_eps_override("1e-8"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_eps_override("a,b"), InvalidArgument);
    CHECK_THROWS_AS(cli::parse_eps_override("-1,1e-9"), InvalidArgument);

    cli::SolverFlags flags;
    flags.eps_feas = 1e-6;
    flags.max_iter = 500;
    const DiscriminationOptions options = cli::resolve_options(flags);
    CHECK(options.solver.eps_feas == 1e-6);
    CHECK(options.solver.max_iter == 500);

    setenv("PPTDISC_EPS_OVERRIDE", "1e-10,1e-11", 1);
    const DiscriminationOptions overridden = cli::resolve_options(flags);
    unsetenv("PPTDISC_EPS_OVERRIDE");
    CHECK(overridden.solver.eps_feas == 1e-10);
    CHECK(overridden.solver.eps_gap == 1e-11);

    const Run seeded = run({"reproduce", "--example", "3", "--d", "2", "--lambda", "0.5", "--seed", "7"});
    CHECK(seeded.report()["seed"] == 7);
}

}  // TEST_SUITE
