#include "pooltactics/core.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

namespace pooltactics {

namespace {

constexpr std::int64_t kMaxSats = std::numeric_limits<std::int64_t>::max() / 2;

[[noreturn]] void bad_amount(std::string_view text) {
    throw ValidationError("invalid BTC amount '" + std::string(text) + "'");
}

} // namespace

Btc Btc::from_btc(double coins) {
    if (!std::isfinite(coins)) {
        throw DomainError("BTC amount must be finite");
    }
    const double sats = coins * static_cast<double>(kSatsPerCoin);
    if (std::abs(sats) > static_cast<double>(kMaxSats)) {
        throw DomainError("BTC amount out of range");
    }
    return Btc(std::llround(sats));
}

Btc Btc::parse(std::string_view text) {
    std::string_view rest = text;
    bool negative = false;
    if (!rest.empty() && (rest.front() == '+' || rest.front() == '-')) {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }
    if (rest.empty()) bad_amount(text);

    std::int64_t whole = 0;
    std::size_t i = 0;
    bool any_digit = false;
    for (; i < rest.size() && rest[i] != '.'; ++i) {
        if (rest[i] < '0' || rest[i] > '9') bad_amount(text);
        any_digit = true;
        whole = whole * 10 + (rest[i] - '0');
        if (whole > kMaxSats / kSatsPerCoin) bad_amount(text);
    }

    std::int64_t frac = 0;
    if (i < rest.size()) { // consume '.'
        ++i;
        int digits = 0;
        for (; i < rest.size(); ++i, ++digits) {
            if (rest[i] < '0' || rest[i] > '9') bad_amount(text);
            if (digits >= 8) bad_amount(text); // finer than satoshi
            any_digit = true;
            frac = frac * 10 + (rest[i] - '0');
        }
        for (; digits < 8; ++digits) frac *= 10;
    }
    if (!any_digit) bad_amount(text);

    const std::int64_t sats = whole * kSatsPerCoin + frac;
    return Btc(negative ? -sats : sats);
}

std::string Btc::str() const {
    const bool negative = sats_ < 0;
    const std::uint64_t magnitude =
        negative ? -static_cast<std::uint64_t>(sats_) : static_cast<std::uint64_t>(sats_);
    const std::uint64_t whole = magnitude / kSatsPerCoin;
    std::uint64_t frac = magnitude % kSatsPerCoin;

    std::string out = negative ? "-" : "";
    out += std::to_string(whole);
    if (frac != 0) {
        std::string digits = std::to_string(frac);
        digits.insert(0, 8 - digits.size(), '0');
        while (digits.back() == '0') digits.pop_back();
        out += '.';
        out += digits;
    }
    return out;
}

HashRate::HashRate(double multiple) : value_(multiple) {
    if (!std::isfinite(multiple) || multiple < 0.0) {
        throw DomainError("hash-rate must be finite and >= 0");
    }
}

Difficulty::Difficulty(double multiple) : value_(multiple) {
    if (!std::isfinite(multiple) || multiple <= 0.0) {
        throw DomainError("difficulty must be finite and > 0");
    }
}

EconomicParams::EconomicParams()
    : EconomicParams(Btc::parse("12.5"), Btc::parse("11.5")) {}

EconomicParams::EconomicParams(Btc reward, Btc reference_cost,
                               int blocks_per_period,
                               double target_block_minutes)
    : reward_(reward),
      reference_cost_(reference_cost),
      blocks_per_period_(blocks_per_period),
      target_block_minutes_(target_block_minutes) {
    if (blocks_per_period_ < 1) {
        throw ValidationError("blocks_per_period must be >= 1");
    }
    if (!std::isfinite(target_block_minutes_) || target_block_minutes_ <= 0.0) {
        throw ValidationError("target_block_minutes must be > 0");
    }
}

HashSchedule::HashSchedule(std::vector<Pool> pools,
                           std::vector<std::vector<double>> multipliers)
    : pools_(std::move(pools)), multipliers_(std::move(multipliers)) {
    if (pools_.empty()) {
        throw ValidationError("schedule needs at least one pool");
    }
    std::set<std::string_view> seen;
    for (const Pool& pool : pools_) {
        if (pool.id.empty()) {
            throw ValidationError("pool id must not be empty");
        }
        if (!seen.insert(pool.id).second) {
            throw ValidationError("duplicate pool id '" + pool.id + "'");
        }
        if (pool.base_hash.value() <= 0.0) {
            throw ValidationError("pool '" + pool.id + "' base_hash must be > 0");
        }
    }
    for (std::size_t j = 0; j < multipliers_.size(); ++j) {
        const auto& row = multipliers_[j];
        if (row.size() != pools_.size()) {
            throw ValidationError("period " + std::to_string(j) + " declares " +
                                  std::to_string(row.size()) + " multipliers for " +
                                  std::to_string(pools_.size()) + " pools");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!(row[i] >= 0.0 && row[i] <= 1.0)) {
                throw ValidationError("multiplier for pool '" + pools_[i].id +
                                      "' in period row " + std::to_string(j) +
                                      " must lie in [0, 1]");
            }
        }
    }
}

void HashSchedule::check_period(int period) const {
    if (period < 0 || period >= period_count()) {
        throw ScheduleBoundsError("period index " + std::to_string(period) +
                                  " outside schedule of " +
                                  std::to_string(period_count()) + " periods");
    }
}

int HashSchedule::pool_index(std::string_view pool_id) const {
    for (std::size_t i = 0; i < pools_.size(); ++i) {
        if (pools_[i].id == pool_id) return static_cast<int>(i);
    }
    throw ScheduleBoundsError("unknown pool '" + std::string(pool_id) + "'");
}

double HashSchedule::multiplier(int period, int pool_index) const {
    check_period(period);
    if (pool_index < 0 || pool_index >= static_cast<int>(pools_.size())) {
        throw ScheduleBoundsError("pool index " + std::to_string(pool_index) +
                                  " outside schedule of " +
                                  std::to_string(pools_.size()) + " pools");
    }
    return multipliers_[period][pool_index];
}

HashRate HashSchedule::total_hash(int period) const {
    check_period(period);
    double total = 0.0;
    for (std::size_t i = 0; i < pools_.size(); ++i) {
        total += multipliers_[period][i] * pools_[i].base_hash.value();
    }
    return HashRate(total);
}

double HashSchedule::hash_share(int period, int pool_index) const {
    const double total = total_hash(period).value();
    const double own = multiplier(period, pool_index) *
                       pools_[pool_index].base_hash.value();
    if (total <= 0.0) {
        throw DegenerateNetworkError("total hash-rate is zero in period row " +
                                     std::to_string(period));
    }
    return own / total;
}

double HashSchedule::hash_share(int period, std::string_view pool_id) const {
    return hash_share(period, pool_index(pool_id));
}

HashSchedule HashSchedule::with_multiplier(int period, std::string_view pool_id,
                                           double value) const {
    check_period(period);
    const int column = pool_index(pool_id);
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError("multiplier must lie in [0, 1]");
    }
    auto rows = multipliers_;
    rows[period][column] = value;
    return HashSchedule(pools_, std::move(rows));
}

} // namespace pooltactics
