#include "pooltactics/difficulty.hpp"

#include <algorithm>
#include <cmath>

namespace pooltactics {

Difficulty retarget(Difficulty previous, double actual_days,
                    const RetargetPolicy& policy) {
    if (!std::isfinite(actual_days) || actual_days <= 0.0) {
        throw DomainError("period duration must be > 0 days");
    }
    double ratio = policy.target_days / actual_days;
    if (policy.clamp) {
        ratio = std::clamp(ratio, 0.25, 4.0);
    }
    return Difficulty(previous.value() * ratio);
}

double block_time_minutes(Difficulty d, HashRate total,
                          const EconomicParams& params) {
    if (total.value() <= 0.0) {
        throw DegenerateNetworkError("network hash-rate is zero");
    }
    return params.target_block_minutes() * d.value() / total.value();
}

double period_duration_days(Difficulty d, HashRate total,
                            const EconomicParams& params) {
    return params.blocks_per_period() * block_time_minutes(d, total, params) /
           1440.0;
}

Btc mining_cost(Difficulty d, const ReferenceFrame& frame) {
    const double ratio = d.value() / frame.difficulty.value();
    return Btc::from_btc(frame.ref_cost.btc() * ratio);
}

} // namespace pooltactics
