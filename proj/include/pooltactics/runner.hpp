#pragma once

// Executes a loaded scenario and renders the report as a human table, flat
// CSV or structured JSON.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "pooltactics/fork_sim.hpp"
#include "pooltactics/period_sim.hpp"
#include "pooltactics/scenario.hpp"

namespace pooltactics {

enum class OutputFormat { table, csv, json };

OutputFormat format_from_string(std::string_view text);

/// Command-line overrides applied on top of the scenario file.
struct Overrides {
    std::optional<long> trials;
    std::optional<std::uint64_t> seed;
    bool clamp = false;           // force the [1/4, 4] retarget clamp on
    bool include_at_risk = false; // force at-risk stake accounting on
};

/// One view of a split (either before or after towing is applied).
struct SplitView {
    std::map<std::string, std::string> allocation;
    std::map<std::string, double> branch_hash;
    std::map<std::string, double> win_prob;
    std::map<std::string, double> branch_utility; // BTC
    std::map<std::string, double> pool_utility;   // BTC
};

struct SplitReport {
    SplitScenario scenario; // as configured, pre-towing
    bool include_at_risk = false;
    SplitView before;
    SplitView after; // identical to before when no agreement applies
};

struct RaceReport {
    SplitScenario raced; // the post-towing scenario the race samples
    RaceParams params;
    RaceOutcome outcome;
};

struct RunReport {
    Mode mode = Mode::periods;
    std::optional<ScenarioReport> periods;
    std::optional<SweepResult> sweep;
    std::optional<SplitReport> split;
    std::optional<RaceReport> race;
};

RunReport execute(const ScenarioFile& scenario, const Overrides& overrides = {});

std::string render_table(const RunReport& report);
std::string render_csv(const RunReport& report);
std::string render_json(const RunReport& report);

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitDegenerate = 4;

struct RunOptions {
    OutputFormat format = OutputFormat::table;
    std::optional<std::filesystem::path> out_path;
    std::optional<std::filesystem::path> dump_config_path;
    Overrides overrides;
};

/// The entry point behind the CLI: load, execute, emit. The human table goes
/// to `out` (or the machine format when one is requested without an output
/// file); diagnostics go to `err`. Returns the process exit code.
int run(const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& out, std::ostream& err);

} // namespace pooltactics
