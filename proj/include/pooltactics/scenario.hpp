#pragma once

// JSON scenario files: strict parsing (unknown fields are rejected so typos
// surface), validation, and normalized re-emission.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pooltactics/core.hpp"
#include "pooltactics/fork_sim.hpp"
#include "pooltactics/period_sim.hpp"

namespace pooltactics {

enum class Mode { periods, sweep, split, race };

std::string to_string(Mode mode);
Mode mode_from_string(std::string_view text);

/// "periods" section: the hash-multiplier table plus simulation options.
struct PeriodsConfig {
    int first_period = 1;
    double initial_difficulty = 1.0;
    bool clamp = false;
    std::vector<std::vector<double>> multipliers; // rows = periods, cols = pools
    std::optional<PeriodRange> window;            // defaults to every period
};

/// "sweep" section: which pool dips, when, and over which fractions.
struct SweepConfig {
    std::string pool;
    int dip_period = 0;
    std::vector<double> fractions;
};

/// "split" section: the chain split minus the pool list (shared at top level).
struct SplitConfig {
    std::vector<std::string> branches;
    std::map<std::string, std::string> allocation;
    std::vector<TowingAgreement> agreements;
    std::map<std::string, BranchStake> stakes;
    Btc reward;
    Btc cost;
    bool include_at_risk = false;
};

/// "race" section: Monte Carlo controls on top of the split.
struct RaceSection {
    long trials = 1'000'000;
    std::uint64_t seed = 1;
    std::optional<double> delay_minutes;
    int round_cap = 8;
};

struct ScenarioFile {
    EconomicParams economics;
    std::vector<Pool> pools;
    Mode mode = Mode::periods;
    std::optional<PeriodsConfig> periods; // periods and sweep modes
    std::optional<SweepConfig> sweep;     // sweep mode
    std::optional<SplitConfig> split;     // split and race modes
    std::optional<RaceSection> race;      // race mode
};

/// Parses and validates scenario JSON text. ValidationError names the
/// offending field.
ScenarioFile parse_scenario(const std::string& json_text);

/// Reads and parses a scenario file. IoError if it cannot be read.
ScenarioFile load_scenario(const std::filesystem::path& path);

/// Normalized JSON: defaults materialized, keys in canonical order. Parsing
/// the dump reproduces an identical scenario.
std::string dump_scenario(const ScenarioFile& scenario);

/// Assembles the HashSchedule for periods/sweep modes.
HashSchedule make_schedule(const ScenarioFile& scenario);

/// Assembles (and validates) the SplitScenario for split/race modes.
SplitScenario make_split(const ScenarioFile& scenario);

} // namespace pooltactics
