#pragma once

// JSON serialization. Operators are {"dims":[d1,d2],"matrix":[[[re,im],...],...]}
// (row-major), ensembles {"dims":[d1,d2],"items":[{"eta":x,"rho":{...}},...]},
// measurements {"dims":[d1,d2],"elements":[{...},...],"locc_by_construction":b}.
// Doubles are written with round-trip precision. Loaders re-check every type
// invariant and name the offending field in their errors.

#include "pptdisc/cone.hpp"
#include "pptdisc/discrimination.hpp"
#include "pptdisc/operator.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace pptdisc::io {

using json = nlohmann::json;

json to_json(const SystemDims& dims);
json to_json(const Operator& op);
json to_json(const Ensemble& ensemble);
json to_json(const Measurement& measurement);
json to_json(const ConeCertificate& certificate);
json to_json(const WitnessClass& witness);
json to_json(const SolveStats& stats);
json to_json(const DiscriminationResult& result);
json to_json(const JointOptimalityReport& report);
json to_json(const Corollary1Result& result);
json to_json(const EqualityVerdict& verdict);
json to_json(const Theorem3Result& result);
json to_json(const Theorem4Result& result);

/// `where` prefixes error messages, e.g. "items[2].rho".
SystemDims dims_from_json(const json& j, const std::string& where = "dims");
Operator operator_from_json(const json& j, const std::string& where = "operator");
Ensemble ensemble_from_json(const json& j, const std::string& where = "ensemble");
Measurement measurement_from_json(const json& j, const std::string& where = "measurement");
/// Reads the cone, verdict and any P, Q or separator back; the verdict is not trusted.
ConeCertificate certificate_from_json(const json& j, const std::string& where = "certificate");

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& value);

Operator load_operator(const std::filesystem::path& path);
Ensemble load_ensemble(const std::filesystem::path& path);
Measurement load_measurement(const std::filesystem::path& path);
void save(const std::filesystem::path& path, const Operator& op);
void save(const std::filesystem::path& path, const Ensemble& ensemble);
void save(const std::filesystem::path& path, const Measurement& measurement);

}  // namespace pptdisc::io
