#include "pptdisc/io.hpp"

#include <fstream>
#include <limits>

namespace pptdisc::io {
namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InvalidArgument(where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

// Non-finite values have no JSON representation; they are written as null.
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vector_to_json(const VectorXc& v) {
    json out = json::array();
    for (Eigen::Index a = 0; a < v.size(); ++a) out.push_back({v(a).real(), v(a).imag()});
    return out;
}

template <typename T>
json optional_to_json(const std::optional<T>& value) {
    return value ? to_json(*value) : json(nullptr);
}

json doubles(const std::vector<double>& values) {
    json out = json::array();
    for (double x : values) out.push_back(finite_or_null(x));
    return out;
}

template <typename T>
json list(const std::vector<T>& values) {
    json out = json::array();
    for (const auto& v : values) out.push_back(to_json(v));
    return out;
}

json residuals_to_json(const conic::Residuals& r) {
    return {{"primal", finite_or_null(r.primal)}, {"dual", finite_or_null(r.dual)}, {"gap", finite_or_null(r.gap)}};
}

}  // namespace

json to_json(const SystemDims& dims) { return json::array({dims.d1, dims.d2}); }

json to_json(const Operator& op) {
    json rows = json::array();
    const MatrixXc& m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return {{"dims", to_json(op.dims())}, {"matrix", std::move(rows)}};
}

json to_json(const Ensemble& ensemble) {
    json items = json::array();
    for (const auto& item : ensemble.items()) items.push_back({{"eta", item.eta}, {"rho", to_json(item.rho)}});
    return {{"dims", to_json(ensemble.dims())}, {"items", std::move(items)}};
}

json to_json(const Measurement& measurement) {
    return {{"dims", to_json(measurement.dims())},
            {"elements", list(measurement.elements())},
            {"locc_by_construction", measurement.locc_by_construction()}};
}

json to_json(const ConeCertificate& c) {
    json out = {{"cone", to_string(c.cone)},
                {"verdict", to_string(c.verdict)},
                {"reconstruction_residual", c.reconstruction_residual},
                {"psd_residual", c.psd_residual},
                {"solver_iterations", c.solver_iterations}};
    if (c.cone == Cone::PPTPlus && c.verdict == Verdict::NonMember) {
        out["failed_test"] = to_string(c.failed_test);
        out["violating_eigenvalue"] = c.violating_eigenvalue;
        if (c.violating_vector) out["violating_vector"] = vector_to_json(*c.violating_vector);
    }
    if (c.p) out["p"] = to_json(*c.p);
    if (c.q) out["q"] = to_json(*c.q);
    if (c.separator) {
        out["separator"] = to_json(*c.separator);
        out["separation"] = c.separation;
    }
    if (!c.note.empty()) out["note"] = c.note;
    return out;
}

json to_json(const WitnessClass& w) {
    return {{"classification", to_string(w.classification)},
            {"is_psd", w.is_psd},
            {"is_decomposable", w.is_decomposable},
            {"min_eigenvalue", w.min_eigenvalue},
            {"certificate", to_json(w.certificate)}};
}

json to_json(const SolveStats& s) {
    return {{"status", conic::to_string(s.status)},
            {"iterations", s.iterations},
            {"residuals", residuals_to_json(s.residuals)},
            {"wall_ms", s.wall_ms},
            {"solves", s.solves}};
}

json to_json(const DiscriminationResult& r) {
    return {{"mode", to_string(r.mode)},
            {"value", r.value},
            {"measurement", optional_to_json(r.measurement)},
            {"dual_h", to_json(r.dual_h)},
            {"slackness", doubles(r.slackness)},
            {"certificates", list(r.certificates)},
            {"optimality_margin", finite_or_null(r.optimality_margin)},
            {"duality_residual", r.duality_residual},
            {"stats", to_json(r.stats)},
            {"certified", r.certified},
            {"note", r.note}};
}

json to_json(const JointOptimalityReport& r) {
    return {{"verdict", to_string(r.verdict)},
            {"residuals", doubles(r.residuals)},
            {"max_abs_residual", r.max_abs_residual},
            {"measurement_is_ppt", r.measurement_is_ppt},
            {"certificates", list(r.certificates)},
            {"failures", r.failures}};
}

json to_json(const Corollary1Result& r) {
    return {{"holds", to_string(r.holds)},
            {"value", r.value},
            {"pivot", r.pivot},
            {"certificates", list(r.certificates)},
            {"failing_index", r.failing_index ? json(*r.failing_index) : json(nullptr)}};
}

json to_json(const EqualityVerdict& v) {
    return {{"outcome", to_string(v.outcome)},
            {"evidence", to_string(v.evidence)},
            {"p_ppt", v.p_ppt},
            {"p_g", v.p_g ? json(*v.p_g) : json(nullptr)},
            {"margin", finite_or_null(v.margin)},
            {"dew_index", v.dew_index ? json(*v.dew_index) : json(nullptr)},
            {"note", v.note}};
}

json to_json(const Theorem3Result& r) {
    return {{"condition", to_string(r.condition)},
            {"p_ppt", r.p_ppt ? json(*r.p_ppt) : json(nullptr)},
            {"dew_indices", r.dew_indices},
            {"classes", list(r.classes)},
            {"h", to_json(r.h)},
            {"hermitization_residual", r.hermitization_residual},
            {"note", r.note}};
}

json to_json(const Theorem4Result& r) {
    return {{"verdict", to_json(r.verdict)},
            {"q_ppt", r.q_ppt},
            {"psd_dual_value", r.psd_dual_value},
            {"p_global", r.p_global},
            {"p_ppt", r.p_ppt},
            {"cross_checks_pass", r.cross_checks_pass},
            {"cross_check_failures", r.cross_check_failures},
            {"qppt", to_json(r.qppt)},
            {"psd_dual", to_json(r.psd_dual)},
            {"global", to_json(r.global)},
            {"ppt", to_json(r.ppt)}};
}

SystemDims dims_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        fail(where, "expected [d1, d2] with integer entries");
    }
    const int d1 = j[0].get<int>();
    const int d2 = j[1].get<int>();
    if (d1 < 2 || d2 < 2) fail(where, "local dimensions must be >= 2");
    return SystemDims(d1, d2);
}

Operator operator_from_json(const json& j, const std::string& where) {
    const SystemDims dims = dims_from_json(field(j, "dims", where), where + ".dims");
    const json& rows = field(j, "matrix", where);
    const int n = dims.total();
    const std::string mwhere = where + ".matrix";
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) fail(mwhere, "expected " + std::to_string(n) + " rows");
    MatrixXc m(n, n);
    for (int r = 0; r < n; ++r) {
        const std::string rwhere = mwhere + "[" + std::to_string(r) + "]";
        if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n) {
            fail(rwhere, "expected " + std::to_string(n) + " entries");
        }
        for (int c = 0; c < n; ++c) {
            const json& z = rows[r][c];
            const std::string cwhere = rwhere + "[" + std::to_string(c) + "]";
            if (!z.is_array() || z.size() != 2) fail(cwhere, "expected [re, im]");
            m(r, c) = {number(z[0], cwhere + "[0]"), number(z[1], cwhere + "[1]")};
        }
    }
    try {
        return Operator(dims, std::move(m));
    } catch (const InvalidArgument& e) {
        fail(where, e.what());
    }
}

Ensemble ensemble_from_json(const json& j, const std::string& where) {
    const SystemDims dims = dims_from_json(field(j, "dims", where), where + ".dims");
    const json& items = field(j, "items", where);
    if (!items.is_array()) fail(where + ".items", "expected an array");
    std::vector<EnsembleItem> parsed;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const std::string iwhere = where + ".items[" + std::to_string(i) + "]";
        parsed.push_back({number(field(items[i], "eta", iwhere), iwhere + ".eta"),
                          operator_from_json(field(items[i], "rho", iwhere), iwhere + ".rho")});
    }
    try {
        return Ensemble(dims, std::move(parsed));
    } catch (const InvalidArgument& e) {
        fail(where, e.what());
    }
}

Measurement measurement_from_json(const json& j, const std::string& where) {
    const SystemDims dims = dims_from_json(field(j, "dims", where), where + ".dims");
    const json& elements = field(j, "elements", where);
    if (!elements.is_array()) fail(where + ".elements", "expected an array");
    std::vector<Operator> parsed;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        parsed.push_back(operator_from_json(elements[i], where + ".elements[" + std::to_string(i) + "]"));
    }
    bool locc = false;
    if (j.contains("locc_by_construction")) {
        if (!j["locc_by_construction"].is_boolean()) fail(where + ".locc_by_construction", "expected a boolean");
        locc = j["locc_by_construction"].get<bool>();
    }
    try {
        return Measurement(dims, std::move(parsed), locc);
    } catch (const InvalidArgument& e) {
        fail(where, e.what());
    }
}

ConeCertificate certificate_from_json(const json& j, const std::string& where) {
    ConeCertificate c;
    const std::string cone = field(j, "cone", where).get<std::string>();
    if (cone == "ppt_plus") {
        c.cone = Cone::PPTPlus;
    } else if (cone == "ppt_plus_dual") {
        c.cone = Cone::PPTPlusDual;
    } else {
        fail(where + ".cone", "unknown cone '" + cone + "'");
    }
    const std::string verdict = field(j, "verdict", where).get<std::string>();
    if (verdict == "member") {
        c.verdict = Verdict::Member;
    } else if (verdict == "non_member") {
        c.verdict = Verdict::NonMember;
    } else if (verdict == "unknown") {
        c.verdict = Verdict::Unknown;
    } else {
        fail(where + ".verdict", "unknown verdict '" + verdict + "'");
    }
    if (j.contains("p")) c.p = operator_from_json(j["p"], where + ".p");
    if (j.contains("q")) c.q = operator_from_json(j["q"], where + ".q");
    if (j.contains("separator")) c.separator = operator_from_json(j["separator"], where + ".separator");
    if (j.contains("note") && j["note"].is_string()) c.note = j["note"].get<std::string>();
    return c;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument(path.string() + ": cannot open for reading");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const json& value) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument(path.string() + ": cannot open for writing");
    out << value.dump(2) << '\n';
    if (!out) throw InvalidArgument(path.string() + ": write failed");
}

Operator load_operator(const std::filesystem::path& path) { return operator_from_json(read_json(path), path.string()); }
Ensemble load_ensemble(const std::filesystem::path& path) { return ensemble_from_json(read_json(path), path.string()); }
Measurement load_measurement(const std::filesystem::path& path) {
    return measurement_from_json(read_json(path), path.string());
}

void save(const std::filesystem::path& path, const Operator& op) { write_json(path, to_json(op)); }
void save(const std::filesystem::path& path, const Ensemble& ensemble) { write_json(path, to_json(ensemble)); }
void save(const std::filesystem::path& path, const Measurement& measurement) {
    write_json(path, to_json(measurement));
}

}  // namespace pptdisc::io
