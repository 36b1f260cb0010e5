#pragma once

// Shared domain types for the tactic simulators. Hash-rates and difficulties
// are dimensionless multiples of the reference network hash-rate and the
// reference difficulty; absolute hashes/second never enter the model.
// All types are immutable after construction.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pooltactics/errors.hpp"

namespace pooltactics {

/// Monetary amount stored as integer satoshis (1e-8 BTC). Addition,
/// subtraction and integer scaling are exact; conversions to double keep
/// sub-satoshi precision for the magnitudes this tool works at.
class Btc {
public:
    static constexpr std::int64_t kSatsPerCoin = 100'000'000;

    constexpr Btc() = default;

    static constexpr Btc from_sats(std::int64_t sats) { return Btc(sats); }

    /// Rounds to the nearest satoshi; rejects non-finite or out-of-range input.
    static Btc from_btc(double coins);

    /// Parses a plain decimal like "12.5", "-0.00000001" or "40".
    /// At most eight fractional digits are accepted.
    static Btc parse(std::string_view text);

    constexpr std::int64_t sats() const { return sats_; }
    constexpr double btc() const { return static_cast<double>(sats_) / kSatsPerCoin; }

    /// Canonical decimal rendering with trailing zeros trimmed: "11.5", "10.35", "40".
    std::string str() const;

    constexpr Btc operator+(Btc other) const { return Btc(sats_ + other.sats_); }
    constexpr Btc operator-(Btc other) const { return Btc(sats_ - other.sats_); }
    constexpr Btc operator-() const { return Btc(-sats_); }
    constexpr Btc operator*(std::int64_t k) const { return Btc(sats_ * k); }
    friend constexpr Btc operator*(std::int64_t k, Btc b) { return b * k; }
    constexpr auto operator<=>(const Btc&) const = default;

private:
    explicit constexpr Btc(std::int64_t sats) : sats_(sats) {}
    std::int64_t sats_ = 0;
};

/// Non-negative hash-rate, a multiple of the reference total hash-rate.
class HashRate {
public:
    constexpr HashRate() = default;
    explicit HashRate(double multiple);
    constexpr double value() const { return value_; }

private:
    double value_ = 0.0;
};

/// Positive mining difficulty, a multiple of the reference difficulty.
/// Defaults to the reference point itself.
class Difficulty {
public:
    constexpr Difficulty() = default;
    explicit Difficulty(double multiple);
    constexpr double value() const { return value_; }

private:
    double value_ = 1.0;
};

/// One mining pool: stable identifier, display name and full (un-shutdown)
/// hash capacity.
struct Pool {
    std::string id;
    std::string name;
    HashRate base_hash;
};

/// Network economics: block reward, reference per-block cost at the reference
/// difficulty, and the block cadence the retarget rule aims for. The period
/// target duration is derived from the cadence, so it can never fall out of
/// step with blocks_per_period * target_block_minutes.
class EconomicParams {
public:
    /// Defaults: 12.5 BTC reward, 11.5 BTC reference cost, 2016-block periods
    /// at 10 minutes per block (14-day periods).
    EconomicParams();
    EconomicParams(Btc reward, Btc reference_cost,
                   int blocks_per_period = 2016,
                   double target_block_minutes = 10.0);

    Btc reward() const { return reward_; }
    Btc reference_cost() const { return reference_cost_; }
    int blocks_per_period() const { return blocks_per_period_; }
    double target_block_minutes() const { return target_block_minutes_; }
    double target_period_days() const {
        return blocks_per_period_ * target_block_minutes_ / 1440.0;
    }

private:
    Btc reward_;
    Btc reference_cost_;
    int blocks_per_period_ = 2016;
    double target_block_minutes_ = 10.0;
};

/// Piecewise-constant hash plan: during period j, pool i runs at
/// multipliers[j][i] * base_hash. Rows are periods in order; columns follow
/// the pool declaration order. Multipliers live in [0, 1].
class HashSchedule {
public:
    HashSchedule(std::vector<Pool> pools,
                 std::vector<std::vector<double>> multipliers);

    int period_count() const { return static_cast<int>(multipliers_.size()); }
    const std::vector<Pool>& pools() const { return pools_; }

    /// Column of a pool id; ScheduleBoundsError when unknown.
    int pool_index(std::string_view pool_id) const;

    double multiplier(int period, int pool_index) const;

    /// Network hash-rate during a period: sum of multiplier * base_hash.
    HashRate total_hash(int period) const;

    /// Pool's share of the period's total hash. Shares over all pools sum
    /// to 1. DegenerateNetworkError when the period's total hash is zero.
    double hash_share(int period, std::string_view pool_id) const;
    double hash_share(int period, int pool_index) const;

    /// Copy of this schedule with a single multiplier replaced.
    HashSchedule with_multiplier(int period, std::string_view pool_id,
                                 double value) const;

private:
    void check_period(int period) const;

    std::vector<Pool> pools_;
    std::vector<std::vector<double>> multipliers_;
};

} // namespace pooltactics
