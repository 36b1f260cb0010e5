#pragma once

// The retarget rule, block-time kinematics and the cost model linking
// difficulty to per-block mining cost.
//
// Everything here is a pure function on immutable inputs. At the reference
// point (difficulty 1, total hash 1) blocks take target_block_minutes and a
// period takes target_period_days; away from it, block time scales with
// difficulty and inversely with hash-rate.

#include "pooltactics/core.hpp"

namespace pooltactics {

/// The reference operating point: at hash_rate and difficulty both 1 the
/// network mines one block per target_block_minutes at ref_cost per block.
struct ReferenceFrame {
    HashRate hash_rate{1.0};
    Difficulty difficulty{};
    Btc ref_cost;
    double target_period_days = 14.0;

    static ReferenceFrame of(const EconomicParams& params) {
        return ReferenceFrame{HashRate{1.0}, Difficulty{}, params.reference_cost(),
                              params.target_period_days()};
    }
};

/// Retarget options. The default is the idealized unclamped rule; `clamp`
/// bounds each adjustment ratio to [1/4, 4] the way Bitcoin does, for
/// comparison runs.
struct RetargetPolicy {
    double target_days = 14.0;
    bool clamp = false;
};

/// Next-period difficulty: previous difficulty scaled by target / actual
/// duration. DomainError for a non-positive previous duration.
Difficulty retarget(Difficulty previous, double actual_days,
                    const RetargetPolicy& policy = {});

/// Expected minutes per block at the given difficulty and network hash-rate.
/// DegenerateNetworkError when the hash-rate is zero.
double block_time_minutes(Difficulty d, HashRate total,
                          const EconomicParams& params);

/// Expected days to mine one full period of blocks_per_period blocks.
double period_duration_days(Difficulty d, HashRate total,
                            const EconomicParams& params);

/// Network-wide cost of solving one block, linear in difficulty and rounded
/// to the nearest satoshi.
Btc mining_cost(Difficulty d, const ReferenceFrame& frame);

} // namespace pooltactics
