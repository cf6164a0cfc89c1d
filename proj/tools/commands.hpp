#pragma once

// Subcommands of the pptdisc tool. Every command produces a JSON run report;
// the exit code is 0 when every verdict was certified, 2 when a verdict is
// indeterminate or unknown, and 1 on error.

#include "pptdisc/discrimination.hpp"
#include "pptdisc/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pptdisc::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kCertified = 0, kError = 1, kIndeterminate = 2 };

struct SolverFlags {
    std::optional<double> eps_feas;
    std::optional<double> eps_gap;
    std::optional<int> max_iter;
    std::optional<unsigned> seed;  // echoed in reports; every default path is deterministic
};

/// Applies the flags, then PPTDISC_EPS_OVERRIDE ("feas,gap") when set.
DiscriminationOptions resolve_options(const SolverFlags& flags);

/// Parses "feas,gap"; throws InvalidArgument on malformed input.
std::pair<double, double> parse_eps_override(const std::string& text);

struct CommandOutput {
    int exit_code = kError;
    io::json report;
    std::string text;  // CSV for reproduce --table, otherwise empty
};

CommandOutput cmd_solve(const std::string& ensemble_path, const std::string& mode, const DiscriminationOptions& options);
CommandOutput cmd_classify(const std::string& ensemble_path, std::optional<int> pivot_one_based,
                           const DiscriminationOptions& options);
CommandOutput cmd_witness(const std::string& operator_path, const std::optional<std::string>& certificate_path,
                          const DiscriminationOptions& options);
CommandOutput cmd_construct(const std::optional<std::string>& dew_path, const std::optional<std::string>& pos_path,
                            const std::vector<std::string>& dew_paths, const std::vector<double>& lambdas,
                            const std::optional<std::string>& out_path, const DiscriminationOptions& options);
CommandOutput cmd_reproduce(int example, int d, std::optional<double> lambda, std::optional<double> t, bool table,
                            const DiscriminationOptions& options);

/// Re-checks every certificate embedded in a solve, classify or witness
/// report by arithmetic alone. Returns the failures; empty means all verdicts
/// were reproduced.
std::vector<std::string> reverify_report(const io::json& report);

/// Full command line, argv[0] excluded.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pptdisc::cli
