#include "pooltactics/period_sim.hpp"

#include <cmath>
#include <limits>

namespace pooltactics {

const PoolPeriodStats& PeriodResult::pool(std::string_view pool_id) const {
    for (const PoolPeriodStats& stats : pools) {
        if (stats.pool_id == pool_id) return stats;
    }
    throw ScheduleBoundsError("unknown pool '" + std::string(pool_id) + "'");
}

double deu(double share, Btc reward, Btc cost, double duration_days,
           int blocks_per_period) {
    if (!std::isfinite(duration_days) || duration_days <= 0.0) {
        throw DomainError("period duration must be > 0 days");
    }
    if (!(share >= 0.0 && share <= 1.0)) {
        throw DomainError("hash share must lie in [0, 1]");
    }
    const double net = (reward - cost).btc();
    return share * net * blocks_per_period / duration_days;
}

std::vector<PeriodResult> simulate(const HashSchedule& schedule,
                                   const EconomicParams& params,
                                   const SimulationOptions& options) {
    const int available = schedule.period_count();
    const int count = options.periods == 0 ? available : options.periods;
    if (count < 0 || count > available) {
        throw ScheduleBoundsError("schedule covers " + std::to_string(available) +
                                  " periods, requested " + std::to_string(count));
    }

    const ReferenceFrame frame = ReferenceFrame::of(params);
    const RetargetPolicy policy{params.target_period_days(), options.clamp};

    std::vector<PeriodResult> results;
    results.reserve(count);

    Difficulty difficulty = options.initial_difficulty;
    for (int j = 0; j < count; ++j) {
        const HashRate total = schedule.total_hash(j);
        if (total.value() <= 0.0) {
            throw DegenerateNetworkError(
                "total hash-rate is zero in period " +
                std::to_string(options.first_period + j));
        }

        PeriodResult result;
        result.period = options.first_period + j;
        result.difficulty = difficulty;
        result.duration_days = period_duration_days(difficulty, total, params);
        result.cost_per_block = mining_cost(difficulty, frame);
        result.total_hash = total;

        const Btc net = params.reward() - result.cost_per_block;
        for (std::size_t i = 0; i < schedule.pools().size(); ++i) {
            const Pool& pool = schedule.pools()[i];
            PoolPeriodStats stats;
            stats.pool_id = pool.id;
            stats.multiplier = schedule.multiplier(j, static_cast<int>(i));
            stats.hash = HashRate(stats.multiplier * pool.base_hash.value());
            stats.share = schedule.hash_share(j, static_cast<int>(i));
            stats.period_total =
                stats.share * net.btc() * params.blocks_per_period();
            stats.deu = stats.period_total / result.duration_days;
            result.pools.push_back(std::move(stats));
        }
        results.push_back(std::move(result));

        difficulty = retarget(difficulty, result.duration_days, policy);
    }
    return results;
}

double window_average_deu(std::span<const PeriodResult> results,
                          std::string_view pool_id, PeriodRange window) {
    if (window.first > window.last) {
        throw DomainError("analysis window is empty");
    }
    double total_btc = 0.0;
    double total_days = 0.0;
    int found = 0;
    for (const PeriodResult& result : results) {
        if (result.period < window.first || result.period > window.last) continue;
        total_btc += result.pool(pool_id).period_total;
        total_days += result.duration_days;
        ++found;
    }
    if (found != window.last - window.first + 1) {
        throw DomainError("analysis window " + std::to_string(window.first) + "-" +
                          std::to_string(window.last) +
                          " is not covered by the simulated periods");
    }
    return total_btc / total_days;
}

double improvement_value(double average_deu, double baseline_deu) {
    if (!std::isfinite(baseline_deu) || baseline_deu <= 0.0) {
        throw DomainError("baseline DEU must be > 0");
    }
    return 100.0 * (average_deu / baseline_deu - 1.0);
}

double baseline_deu(const HashSchedule& schedule, const EconomicParams& params,
                    std::string_view pool_id) {
    const int index = schedule.pool_index(pool_id);
    double total = 0.0;
    for (const Pool& pool : schedule.pools()) {
        total += pool.base_hash.value();
    }
    const double share = schedule.pools()[index].base_hash.value() / total;
    return deu(share, params.reward(), params.reference_cost(),
               params.target_period_days(), params.blocks_per_period());
}

ScenarioReport run_report(const HashSchedule& schedule,
                          const EconomicParams& params,
                          const SimulationOptions& options,
                          PeriodRange window) {
    ScenarioReport report;
    report.pools = schedule.pools();
    report.periods = simulate(schedule, params, options);
    report.window = window;
    for (const Pool& pool : schedule.pools()) {
        PoolWindowStats stats;
        stats.pool_id = pool.id;
        stats.avg_deu = window_average_deu(report.periods, pool.id, window);
        stats.baseline_deu = baseline_deu(schedule, params, pool.id);
        stats.improvement_pct = improvement_value(stats.avg_deu, stats.baseline_deu);
        report.window_stats.push_back(std::move(stats));
    }
    return report;
}

SweepResult sweep_shutdown_fraction(const HashSchedule& base,
                                    const EconomicParams& params,
                                    const SimulationOptions& options,
                                    std::string_view pool_id, int dip_period,
                                    std::span<const double> fractions,
                                    PeriodRange window) {
    SweepResult sweep;
    sweep.shutdown_pool = std::string(pool_id);
    sweep.dip_period = dip_period;
    sweep.window = window;

    const int dip_row = dip_period - options.first_period;
    double best = -std::numeric_limits<double>::infinity();
    for (double fraction : fractions) {
        if (!(fraction >= 0.0 && fraction <= 1.0)) {
            throw ValidationError("shutdown fraction must lie in [0, 1]");
        }
        const HashSchedule schedule =
            base.with_multiplier(dip_row, pool_id, 1.0 - fraction);
        const ScenarioReport report = run_report(schedule, params, options, window);

        SweepPoint point;
        point.fraction = fraction;
        point.pools = report.window_stats;
        for (const PoolWindowStats& stats : point.pools) {
            if (stats.pool_id == pool_id && stats.avg_deu > best) {
                best = stats.avg_deu;
                sweep.best_fraction = fraction;
                sweep.best_avg_deu = stats.avg_deu;
            }
        }
        sweep.points.push_back(std::move(point));
    }
    if (sweep.points.empty()) {
        throw DomainError("sweep needs at least one fraction");
    }
    return sweep;
}

} // namespace pooltactics
