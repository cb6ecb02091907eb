#pragma once

#include "vblind/config.hpp"
#include "vblind/construction.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace vblind {

inline constexpr const char* tool_version = "0.1.0";

enum class ExitCode { Ok = 0, ConfigFailure = 2, ConstructionFailure = 3, VerificationFailure = 4 };
ExitCode exit_code_for(ErrorCode code);

LineSchedule schedule_for(const RunConfig& config);
Construction run_construction(const RunConfig& config);

// Exact post-build checks: ordering, nesting, projection = interval,
// certificates and persistence. Empty when everything holds.
struct StageCheck {
    std::string name;
    int k = 0;
    std::string detail;
};
std::vector<StageCheck> verify_construction(const Construction& c);

struct Run {
    RunConfig config;
    Construction construction;
};

// Files below the output directory.
void write_stage_jsonl(std::ostream& out, const Stage& stage);
void write_ledger_csv(std::ostream& out, const std::vector<LedgerRow>& ledger);
void write_run(const std::filesystem::path& dir, const RunConfig& config, const Construction& c,
               const std::vector<StageCheck>& failures);
// Rebuilds the run from manifest.json, the stage files and ledger.csv.
// Throws ManifestIncomplete when a file is missing or disagrees.
Run load_run(const std::filesystem::path& dir);

enum class Check { Recursion, Wk, BoxDim, Series, Balls, Energy };
std::string to_string(Check c);
std::set<Check> parse_checks(const std::string& list); // comma separated; "all"

struct CommandResult {
    ExitCode code = ExitCode::Ok;
    std::string message;
};

CommandResult cmd_construct(const RunConfig& config, const std::filesystem::path& out);
CommandResult cmd_analyze(const std::filesystem::path& run_dir, const std::set<Check>& checks,
                          std::optional<std::uint64_t> seed);
CommandResult cmd_planes(const std::filesystem::path& run_dir, const std::string& mode);
CommandResult cmd_export(const std::filesystem::path& run_dir, int stage, const std::filesystem::path& out);

} // namespace vblind
