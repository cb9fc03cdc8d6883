#pragma once

// Command dispatch for the famrep front end.
//
// Exit codes: 0 when every verdict is feasible or a value, 1 when some verdict
// is infeasible (its certificate is in the witness), 2 on malformed input.

#include "famrep/cli/json_io.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace famrep::cli {

struct Options {
    /// Sampler seed; overrides a "seed" field in skorohod instances.
    std::optional<std::uint64_t> seed;
    /// Largest accepted reconstruction error for sampled convex functions.
    Rational tolerance = Rational(1, 10000);
    /// Attach the minimal carrying structure to companion verdicts.
    bool emit_minimal_ring = false;
    /// Worker threads for directory inputs.
    std::size_t jobs = 1;
};

struct Verdict {
    Json document;
    int exit_code = 0;
};

const std::vector<std::string>& commands();
bool is_known_command(const std::string& command);

/// Commands that accept instances of `kind`. Every kind accepts "check".
std::vector<std::string> commands_for_kind(const std::string& kind);

/// Solves one parsed instance. Input problems become an "error" verdict with
/// exit code 2 and a path-bearing diagnostic; nothing is thrown.
Verdict run_instance(const std::string& command, const Json& instance, const Options& options);

/// Loads and solves one file.
Verdict run_file(const std::string& command, const std::filesystem::path& path, const Options& options);

/// Re-checks the witness of `verdict` against `instance` by substitution,
/// without trusting any other part of the verdict.
bool reverify(const Json& instance, const Json& verdict, const Options& options);

/// Instance files of a directory, sorted by name; verdict files are skipped.
std::vector<std::filesystem::path> instance_files(const std::filesystem::path& dir);

/// `<stem>.verdict.json` next to the input.
std::filesystem::path verdict_path(const std::filesystem::path& input);

/// Files are answered on `out`; directories are processed in batch mode with
/// each verdict written atomically next to its input. Returns the largest
/// exit code seen.
int run(const std::string& command, const std::vector<std::filesystem::path>& inputs,
        const Options& options, std::ostream& out, std::ostream& err);

}  // namespace famrep::cli
