#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pooltactics/difficulty.hpp"

using namespace pooltactics;

TEST_CASE("retarget scales inversely with the previous duration") {
    // A 0.9-capacity period stretches to 14/0.9 days and the next difficulty
    // drops to 0.9.
    const double stretched = 14.0 / 0.9;
    CHECK(retarget(Difficulty{}, stretched).value() ==
          doctest::Approx(0.9).epsilon(1e-12));

    // Fixed point at the target duration.
    for (double d : {0.1, 0.9, 1.0, 3.7, 250.0}) {
        CHECK(retarget(Difficulty(d), 14.0).value() == d);
    }

    // Recovery retarget: 0.9 difficulty and a 12.6-day period restore 1.0
    // (the ratio 14/12.6 is 10/9).
    CHECK(retarget(Difficulty(0.9), 12.6).value() ==
          doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(retarget(Difficulty{}, 0.0), DomainError);
    CHECK_THROWS_AS(retarget(Difficulty{}, -2.0), DomainError);
}

TEST_CASE("clamp bounds the adjustment ratio to [1/4, 4]") {
    const RetargetPolicy clamped{14.0, true};
    CHECK(retarget(Difficulty{}, 1400.0, clamped).value() == doctest::Approx(0.25));
    CHECK(retarget(Difficulty{}, 0.014, clamped).value() == doctest::Approx(4.0));
    CHECK(retarget(Difficulty{}, 15.0, clamped).value() ==
          doctest::Approx(14.0 / 15.0).epsilon(1e-15));

    // Unclamped retargets compose multiplicatively.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> days(0.5, 80.0);
    std::uniform_real_distribution<double> diff(0.05, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double d = diff(rng), t1 = days(rng), t2 = days(rng);
        const double twice = retarget(retarget(Difficulty(d), t1), t2).value();
        CHECK(twice == doctest::Approx(d * 14.0 * 14.0 / (t1 * t2)).epsilon(1e-12));
    }
}

TEST_CASE("block time scales with difficulty over hash-rate") {
    const EconomicParams params;
    CHECK(block_time_minutes(Difficulty{}, HashRate(1.0), params) == 10.0);
    CHECK(block_time_minutes(Difficulty{}, HashRate(0.9), params) ==
          doctest::Approx(100.0 / 9.0).epsilon(1e-12)); // 11.111 min
    // 0.9 difficulty at full hash: 9-minute blocks, i.e. 12.6 days / 2016.
    CHECK(block_time_minutes(Difficulty(0.9), HashRate(1.0), params) ==
          doctest::Approx(9.0).epsilon(1e-12));
    CHECK_THROWS_AS(block_time_minutes(Difficulty{}, HashRate(0.0), params),
                    DegenerateNetworkError);
}

TEST_CASE("period duration is block time times the period length") {
    const EconomicParams params;
    CHECK(period_duration_days(Difficulty{}, HashRate(1.0), params) == 14.0);
    CHECK(period_duration_days(Difficulty{}, HashRate(0.9), params) ==
          doctest::Approx(14.0 / 0.9).epsilon(1e-12)); // 15.556 days
    CHECK(period_duration_days(Difficulty(0.9), HashRate(1.0), params) ==
          doctest::Approx(12.6).epsilon(1e-12));

    // Scale invariance: difficulty and hash-rate scale out together.
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> positive(0.05, 40.0);
    for (int i = 0; i < 100; ++i) {
        const double d = positive(rng), h = positive(rng), k = positive(rng);
        CHECK(period_duration_days(Difficulty(k * d), HashRate(k * h), params) ==
              doctest::Approx(period_duration_days(Difficulty(d), HashRate(h),
                                                   params))
                  .epsilon(1e-12));
    }
}

TEST_CASE("reference frame closes a period in exactly the target days") {
    const EconomicParams params;
    const ReferenceFrame frame = ReferenceFrame::of(params);
    CHECK(period_duration_days(frame.difficulty, frame.hash_rate, params) ==
          frame.target_period_days);
    CHECK(frame.ref_cost.str() == "11.5");
}

TEST_CASE("a single-period dip with full recovery restores the difficulty") {
    const EconomicParams params;
    for (double dip = 0.05; dip < 1.0; dip += 0.05) {
        const HashRate reduced(1.0 - dip);
        const double dip_days =
            period_duration_days(Difficulty{}, reduced, params);
        const Difficulty lowered = retarget(Difficulty{}, dip_days);
        const double recovery_days =
            period_duration_days(lowered, HashRate(1.0), params);
        const Difficulty restored = retarget(lowered, recovery_days);
        CHECK(restored.value() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mining cost is linear in difficulty and exact in satoshis") {
    const ReferenceFrame frame = ReferenceFrame::of(EconomicParams{});
    CHECK(mining_cost(Difficulty(0.9), frame).sats() == 1'035'000'000); // 10.35
    CHECK(mining_cost(Difficulty{}, frame).sats() == 1'150'000'000);    // 11.50
    CHECK(mining_cost(Difficulty(2.0), frame).sats() == 2'300'000'000); // 23.00

    // Degree-1 homogeneity, up to the closing satoshi rounding.
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> positive(0.05, 8.0);
    for (int i = 0; i < 100; ++i) {
        const double d = positive(rng), k = positive(rng);
        const double scaled = mining_cost(Difficulty(k * d), frame).btc();
        const double reference = k * mining_cost(Difficulty(d), frame).btc();
        CHECK(std::abs(scaled - reference) <= 2e-8 * (1.0 + k));
    }
}
