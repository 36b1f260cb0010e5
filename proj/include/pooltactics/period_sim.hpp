#pragma once

// Multi-period shutdown scenarios: difficulty trajectory across retargets,
// per-pool daily expected utility (DEU), time-weighted window averages with
// improvement values, and the shutdown-fraction sweep.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pooltactics/core.hpp"
#include "pooltactics/difficulty.hpp"

namespace pooltactics {

/// One pool's slice of one mining period.
struct PoolPeriodStats {
    std::string pool_id;
    double multiplier = 1.0;   // scheduled fraction of base_hash left running
    HashRate hash;             // multiplier * base_hash during the period
    double share = 0.0;        // hash / total hash
    double deu = 0.0;          // BTC per day
    double period_total = 0.0; // BTC over the whole period (= deu * duration)
};

/// One simulated mining period.
struct PeriodResult {
    int period = 0; // period label, e.g. 301
    Difficulty difficulty;
    double duration_days = 0.0;
    Btc cost_per_block;
    HashRate total_hash;
    std::vector<PoolPeriodStats> pools; // schedule pool order

    const PoolPeriodStats& pool(std::string_view pool_id) const;
};

/// Daily expected utility: share * (reward - cost) * blocks_per_period / days.
/// Negative when cost exceeds reward. DomainError for a non-positive duration
/// or a share outside [0, 1].
double deu(double share, Btc reward, Btc cost, double duration_days,
           int blocks_per_period);

struct SimulationOptions {
    Difficulty initial_difficulty{}; // difficulty of the first period
    int first_period = 1;            // label given to the first schedule row
    bool clamp = false;              // bound retargets to [1/4, 4]
    int periods = 0;                 // how many rows to run; 0 = all
};

/// Runs the schedule period by period: each period's difficulty comes from
/// retargeting the previous one, duration and cost follow from the period's
/// total hash, and every pool is credited its hash share of the period's net
/// utility. Deterministic; DegenerateNetworkError if any simulated period has
/// zero total hash.
std::vector<PeriodResult> simulate(const HashSchedule& schedule,
                                   const EconomicParams& params,
                                   const SimulationOptions& options = {});

/// Inclusive range of period labels.
struct PeriodRange {
    int first = 0;
    int last = 0;
};

/// Time-weighted average DEU over a window: total BTC earned in the window
/// divided by total days elapsed. Deliberately not the plain mean of the
/// per-period DEUs, which would overweight short periods.
double window_average_deu(std::span<const PeriodResult> results,
                          std::string_view pool_id, PeriodRange window);

/// Percentage gain of an average DEU over a baseline DEU.
double improvement_value(double average_deu, double baseline_deu);

/// Baseline (no-tactic) DEU of one pool: every pool at full capacity at the
/// reference difficulty, so the period lasts exactly target_period_days.
double baseline_deu(const HashSchedule& schedule, const EconomicParams& params,
                    std::string_view pool_id);

/// Per-pool window summary against the no-tactic baseline.
struct PoolWindowStats {
    std::string pool_id;
    double avg_deu = 0.0;
    double baseline_deu = 0.0;
    double improvement_pct = 0.0;
};

struct ScenarioReport {
    std::vector<Pool> pools; // roster with full capacities
    std::vector<PeriodResult> periods;
    PeriodRange window;
    std::vector<PoolWindowStats> window_stats; // schedule pool order
};

/// simulate + window averages in one step.
ScenarioReport run_report(const HashSchedule& schedule,
                          const EconomicParams& params,
                          const SimulationOptions& options, PeriodRange window);

/// One evaluated shutdown fraction.
struct SweepPoint {
    double fraction = 0.0; // capacity switched off during the dip period
    std::vector<PoolWindowStats> pools;
};

struct SweepResult {
    std::string shutdown_pool;
    int dip_period = 0;
    PeriodRange window;
    std::vector<SweepPoint> points; // input fraction order
    double best_fraction = 0.0;     // argmax of the shutdown pool's avg DEU
    double best_avg_deu = 0.0;
};

/// Evaluates the window averages for each shutdown fraction: the base
/// schedule with the shutdown pool's dip-period multiplier replaced by
/// (1 - fraction). Deterministic; fractions must lie in [0, 1].
SweepResult sweep_shutdown_fraction(const HashSchedule& base,
                                    const EconomicParams& params,
                                    const SimulationOptions& options,
                                    std::string_view pool_id, int dip_period,
                                    std::span<const double> fractions,
                                    PeriodRange window);

} // namespace pooltactics
