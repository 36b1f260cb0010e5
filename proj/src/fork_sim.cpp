#include "pooltactics/fork_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pooltactics/rng.hpp"

namespace pooltactics {

namespace {

const Pool* find_pool(const SplitScenario& scenario, std::string_view id) {
    for (const Pool& pool : scenario.pools) {
        if (pool.id == id) return &pool;
    }
    return nullptr;
}

bool has_branch(const SplitScenario& scenario, std::string_view id) {
    return std::find(scenario.branches.begin(), scenario.branches.end(), id) !=
           scenario.branches.end();
}

double total_allocated_hash(const SplitScenario& scenario) {
    double total = 0.0;
    for (const Pool& pool : scenario.pools) {
        total += pool.base_hash.value();
    }
    return total;
}

} // namespace

void validate(const SplitScenario& scenario) {
    if (scenario.branches.size() < 2) {
        throw ValidationError("a split needs at least two branches");
    }
    std::set<std::string_view> branch_ids;
    for (const std::string& branch : scenario.branches) {
        if (branch.empty()) throw ValidationError("branch id must not be empty");
        if (!branch_ids.insert(branch).second) {
            throw ValidationError("duplicate branch id '" + branch + "'");
        }
    }

    if (scenario.pools.empty()) {
        throw ValidationError("a split needs at least one pool");
    }
    std::set<std::string_view> pool_ids;
    for (const Pool& pool : scenario.pools) {
        if (pool.id.empty()) throw ValidationError("pool id must not be empty");
        if (!pool_ids.insert(pool.id).second) {
            throw ValidationError("duplicate pool id '" + pool.id + "'");
        }
        if (pool.base_hash.value() <= 0.0) {
            throw ValidationError("pool '" + pool.id + "' base_hash must be > 0");
        }
    }

    for (const Pool& pool : scenario.pools) {
        auto it = scenario.allocation.find(pool.id);
        if (it == scenario.allocation.end()) {
            throw ValidationError("pool '" + pool.id + "' is not allocated to a branch");
        }
        if (!has_branch(scenario, it->second)) {
            throw ValidationError("pool '" + pool.id + "' is allocated to unknown branch '" +
                                  it->second + "'");
        }
    }
    for (const auto& [pool_id, branch] : scenario.allocation) {
        if (find_pool(scenario, pool_id) == nullptr) {
            throw ValidationError("allocation references unknown pool '" + pool_id + "'");
        }
    }

    for (const auto& [branch, stake] : scenario.stakes) {
        if (!has_branch(scenario, branch)) {
            throw ValidationError("stake references unknown branch '" + branch + "'");
        }
        if (find_pool(scenario, stake.proposer) == nullptr) {
            throw ValidationError("stake on branch '" + branch +
                                  "' references unknown proposer '" + stake.proposer + "'");
        }
        if (scenario.allocation.at(stake.proposer) != branch) {
            throw ValidationError("proposer '" + stake.proposer +
                                  "' must be allocated to its own branch '" + branch + "'");
        }
    }

    // Agreement application must be unambiguous: each helper tows at most
    // once, and no beneficiary may itself be towed elsewhere.
    std::set<std::string_view> helpers;
    std::set<std::string_view> beneficiaries;
    for (const TowingAgreement& agreement : scenario.agreements) {
        if (agreement.helper == agreement.beneficiary) {
            throw ValidationError("towing agreement for pool '" + agreement.helper +
                                  "' names itself as beneficiary");
        }
        if (find_pool(scenario, agreement.helper) == nullptr) {
            throw ValidationError("towing agreement references unknown helper '" +
                                  agreement.helper + "'");
        }
        if (find_pool(scenario, agreement.beneficiary) == nullptr) {
            throw ValidationError("towing agreement references unknown beneficiary '" +
                                  agreement.beneficiary + "'");
        }
        if (!helpers.insert(agreement.helper).second) {
            throw ValidationError("pool '" + agreement.helper +
                                  "' appears as helper in more than one agreement");
        }
        beneficiaries.insert(agreement.beneficiary);
    }
    for (std::string_view helper : helpers) {
        if (beneficiaries.count(helper)) {
            throw ValidationError("pool '" + std::string(helper) +
                                  "' is both helper and beneficiary across agreements");
        }
    }
}

std::map<std::string, double> branch_hash(const SplitScenario& scenario) {
    validate(scenario);
    std::map<std::string, double> hash;
    for (const std::string& branch : scenario.branches) {
        hash[branch] = 0.0;
    }
    for (const Pool& pool : scenario.pools) {
        hash[scenario.allocation.at(pool.id)] += pool.base_hash.value();
    }
    return hash;
}

std::map<std::string, double> branch_win_probability(const SplitScenario& scenario) {
    const auto hash = branch_hash(scenario);
    const double total = total_allocated_hash(scenario);
    if (total <= 0.0) {
        throw DegenerateNetworkError("no hash-rate is mining on any branch");
    }
    std::map<std::string, double> prob;
    for (const auto& [branch, h] : hash) {
        prob[branch] = h / total;
    }
    return prob;
}

SplitScenario apply_towing(const SplitScenario& scenario) {
    validate(scenario);
    SplitScenario towed = scenario;
    for (const TowingAgreement& agreement : scenario.agreements) {
        const std::string& from = towed.allocation.at(agreement.helper);
        const std::string& to = towed.allocation.at(agreement.beneficiary);
        if (from == to) continue;
        auto stake = towed.stakes.find(from);
        if (stake != towed.stakes.end() && stake->second.proposer == agreement.helper) {
            throw ValidationError("helper '" + agreement.helper +
                                  "' proposed the contested block on branch '" + from +
                                  "' and cannot tow away from it");
        }
        towed.allocation.at(agreement.helper) = to;
    }
    return towed;
}

std::map<std::string, double> expected_branch_utility(const SplitScenario& scenario) {
    const auto prob = branch_win_probability(scenario);
    const double net = (scenario.reward - scenario.cost).btc();
    std::map<std::string, double> utility;
    for (const auto& [branch, p] : prob) {
        utility[branch] = p * net;
    }
    return utility;
}

std::map<std::string, double> per_pool_expected_utility(
    const SplitScenario& scenario, bool include_at_risk) {
    const auto prob = branch_win_probability(scenario);
    const auto hash = branch_hash(scenario);
    const double net = (scenario.reward - scenario.cost).btc();

    std::map<std::string, double> expected;
    for (const Pool& pool : scenario.pools) {
        const std::string& branch = scenario.allocation.at(pool.id);
        const double p = prob.at(branch);
        double value = 0.0;
        if (pool.base_hash.value() > 0.0) {
            value = p * net * pool.base_hash.value() / hash.at(branch);
        }
        if (include_at_risk) {
            auto stake = scenario.stakes.find(branch);
            if (stake != scenario.stakes.end() && stake->second.proposer == pool.id) {
                value += p * stake->second.at_risk.btc();
            }
        }
        expected[pool.id] = value;
    }
    return expected;
}

namespace {

/// Precomputed race: per-pool block-finding rates grouped by branch.
class RaceEngine {
public:
    RaceEngine(const SplitScenario& scenario, const RaceParams& params)
        : delay_(params.delay_minutes), round_cap_(params.round_cap) {
        const double total = total_allocated_hash(scenario);
        // Whole-network block interval at this difficulty and hash-rate.
        const double network_rate =
            total / (params.block_time_ref_minutes * params.difficulty.value());
        member_rates_.resize(scenario.branches.size());
        for (std::size_t b = 0; b < scenario.branches.size(); ++b) {
            for (const Pool& pool : scenario.pools) {
                if (scenario.allocation.at(pool.id) == scenario.branches[b]) {
                    member_rates_[b].push_back(network_rate * pool.base_hash.value() /
                                               total);
                }
            }
        }
    }

    /// Branch index winning the given trial.
    int run_trial(std::uint64_t seed, long trial) const {
        SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(trial));
        int winner = 0;
        for (int round = 1; round <= round_cap_; ++round) {
            double best = std::numeric_limits<double>::infinity();
            double second = best;
            for (std::size_t b = 0; b < member_rates_.size(); ++b) {
                double branch_time = std::numeric_limits<double>::infinity();
                for (double rate : member_rates_[b]) {
                    branch_time = std::min(branch_time, rng.exponential(rate));
                }
                if (branch_time < best) {
                    second = best;
                    best = branch_time;
                    winner = static_cast<int>(b);
                } else if (branch_time < second) {
                    second = branch_time;
                }
            }
            // Outside the tie window (or once the cap is reached) the earliest
            // branch stands; otherwise the split persists and we race again.
            if (!delay_ || second - best >= *delay_) break;
        }
        return winner;
    }

private:
    std::vector<std::vector<double>> member_rates_; // branch -> pool rates
    std::optional<double> delay_;
    int round_cap_;
};

void check_race_params(const RaceParams& params) {
    if (params.trials < 1) {
        throw DomainError("race needs at least one trial");
    }
    if (params.round_cap < 1) {
        throw DomainError("race round cap must be >= 1");
    }
    if (params.delay_minutes &&
        (!std::isfinite(*params.delay_minutes) || *params.delay_minutes < 0.0)) {
        throw DomainError("propagation delay must be finite and >= 0 minutes");
    }
    if (!std::isfinite(params.block_time_ref_minutes) ||
        params.block_time_ref_minutes <= 0.0) {
        throw DomainError("reference block time must be > 0 minutes");
    }
}

} // namespace

int race_trial_winner(const SplitScenario& scenario, const RaceParams& params,
                      long trial) {
    check_race_params(params);
    branch_win_probability(scenario); // validates, rejects zero-hash scenarios
    return RaceEngine(scenario, params).run_trial(params.seed, trial);
}

RaceOutcome monte_carlo_race(const SplitScenario& scenario,
                             const RaceParams& params) {
    check_race_params(params);
    RaceOutcome outcome;
    outcome.analytic_win_prob = branch_win_probability(scenario); // validates
    outcome.trials = params.trials;
    outcome.seed = params.seed;
    outcome.expected_branch_utility = expected_branch_utility(scenario);
    outcome.per_pool_expected =
        per_pool_expected_utility(scenario, params.include_at_risk);

    const RaceEngine engine(scenario, params);
    std::vector<long> wins(scenario.branches.size(), 0);
    for (long trial = 0; trial < params.trials; ++trial) {
        ++wins[engine.run_trial(params.seed, trial)];
    }

    // All but the most-winning branch report wins/trials; the leader absorbs
    // the rounding remainder so the frequencies sum to exactly 1.
    std::size_t leader = 0;
    for (std::size_t b = 1; b < wins.size(); ++b) {
        if (wins[b] > wins[leader]) leader = b;
    }
    double others = 0.0;
    for (std::size_t b = 0; b < wins.size(); ++b) {
        const std::string& branch = scenario.branches[b];
        outcome.wins[branch] = wins[b];
        if (b != leader) {
            const double freq =
                static_cast<double>(wins[b]) / static_cast<double>(params.trials);
            outcome.empirical_win_freq[branch] = freq;
            others += freq;
        }
    }
    outcome.empirical_win_freq[scenario.branches[leader]] = 1.0 - others;
    return outcome;
}

} // namespace pooltactics
