#pragma once

// Chain splits: branch win probabilities, towing reallocation of pools
// between branches, expected utilities including the contested block's
// at-risk stake, and a seeded Monte Carlo block race with optional
// propagation delay.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pooltactics/core.hpp"

namespace pooltactics {

/// Pact that one pool (the helper) abandons its first-received branch to
/// mine on its accomplice's (the beneficiary's) branch whenever the two end
/// up on different sides of a split.
struct TowingAgreement {
    std::string helper;
    std::string beneficiary;
};

/// The already-mined contested block on one branch: who proposed it and the
/// net utility that orphans with the branch.
struct BranchStake {
    std::string proposer;
    Btc at_risk;
};

/// A chain split about to be resolved by the next block. Two branches in the
/// common case; any number >= 2 is supported.
struct SplitScenario {
    std::vector<std::string> branches;
    std::vector<Pool> pools;
    std::map<std::string, std::string> allocation; // pool id -> branch id
    std::vector<TowingAgreement> agreements;
    std::map<std::string, BranchStake> stakes;     // branch id -> contested block
    Btc reward; // R for the next block
    Btc cost;   // C for the next block
};

/// Structural checks: >= 2 branches, every pool on exactly one known branch,
/// stake proposers sitting on their own branch, and an agreement set whose
/// application is unambiguous (a pool may appear as helper at most once and
/// never as both helper and beneficiary). ValidationError names the problem.
void validate(const SplitScenario& scenario);

/// Hash-rate currently mining each branch.
std::map<std::string, double> branch_hash(const SplitScenario& scenario);

/// P(branch wins the next block) = branch hash / total hash.
/// DegenerateNetworkError when no hash is mining at all.
std::map<std::string, double> branch_win_probability(const SplitScenario& scenario);

/// Applies every agreement whose beneficiary sits on a different branch than
/// its helper: the helper moves to the beneficiary's branch. Returns a new
/// scenario; the input is untouched and a second application changes nothing.
SplitScenario apply_towing(const SplitScenario& scenario);

/// Expected next-block utility collectively earned on each branch:
/// P(branch) * (reward - cost).
std::map<std::string, double> expected_branch_utility(const SplitScenario& scenario);

/// Per-pool expectation: the pool's pro-rata (by hash) slice of its branch's
/// next-block utility. With include_at_risk, each branch's proposer also
/// expects P(branch) * at_risk: the contested block pays off only if its
/// branch wins, and simply pays nothing when it orphans.
std::map<std::string, double> per_pool_expected_utility(
    const SplitScenario& scenario, bool include_at_risk = false);

struct RaceParams {
    long trials = 0;
    std::uint64_t seed = 0;
    /// Tie window in minutes: when the two fastest branches finish closer
    /// than this, the split persists and the round is re-raced.
    std::optional<double> delay_minutes;
    int round_cap = 8; // re-race rounds before the earliest-time tie-break
    /// Block interval calibration: the whole network finds one block every
    /// block_time_ref_minutes * difficulty / total_hash minutes on average.
    double block_time_ref_minutes = 10.0;
    Difficulty difficulty{};
    bool include_at_risk = false;
};

struct RaceOutcome {
    std::map<std::string, double> analytic_win_prob;
    std::map<std::string, double> empirical_win_freq; // sums to exactly 1
    std::map<std::string, long> wins;
    long trials = 0;
    std::uint64_t seed = 0;
    std::map<std::string, double> expected_branch_utility; // analytic, BTC
    std::map<std::string, double> per_pool_expected;       // analytic, BTC
};

/// Samples the race for the next block: every pool's block-finding time is
/// exponential with rate proportional to its hash, each branch finishes at
/// its fastest member's time, and the earliest branch wins. Identical
/// (scenario, params) inputs reproduce bit-identical outcomes, and a longer
/// run agrees with a shorter one on the shared prefix of trials.
RaceOutcome monte_carlo_race(const SplitScenario& scenario,
                             const RaceParams& params);

/// Winning branch (index into scenario.branches) of one indexed trial.
/// monte_carlo_race tallies exactly these outcomes, so a trial's result
/// depends only on (scenario, seed, trial), never on the trial count.
int race_trial_winner(const SplitScenario& scenario, const RaceParams& params,
                      long trial);

} // namespace pooltactics
