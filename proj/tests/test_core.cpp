#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pooltactics/core.hpp"

using namespace pooltactics;

namespace {

std::vector<Pool> five_equal_pools() {
    std::vector<Pool> pools;
    for (const char* id : {"A", "B", "C", "D", "E"}) {
        pools.push_back(Pool{id, std::string("Pool ") + id, HashRate(0.2)});
    }
    return pools;
}

std::vector<std::vector<double>> rows(std::initializer_list<std::vector<double>> r) {
    return {r};
}

} // namespace

TEST_CASE("btc parses and prints exact decimals") {
    CHECK(Btc::parse("12.5").sats() == 1'250'000'000);
    CHECK(Btc::parse("11.5").sats() == 1'150'000'000);
    CHECK(Btc::parse("10.35").sats() == 1'035'000'000);
    CHECK(Btc::parse("-0.00000001").sats() == -1);
    CHECK(Btc::parse("40").sats() == 4'000'000'000);
    CHECK(Btc::parse("0.00000001").str() == "0.00000001");
    CHECK(Btc::parse("10.35").str() == "10.35");
    CHECK(Btc::parse("12.5").str() == "12.5");
    CHECK(Btc::parse("-3").str() == "-3");
    CHECK(Btc{}.str() == "0");
}

TEST_CASE("btc rejects malformed amounts") {
    CHECK_THROWS_AS(Btc::parse(""), ValidationError);
    CHECK_THROWS_AS(Btc::parse("abc"), ValidationError);
    CHECK_THROWS_AS(Btc::parse("1.2.3"), ValidationError);
    CHECK_THROWS_AS(Btc::parse("0.123456789"), ValidationError); // sub-satoshi
    CHECK_THROWS_AS(Btc::parse("-"), ValidationError);
    CHECK_THROWS_AS(Btc::from_btc(std::numeric_limits<double>::quiet_NaN()),
                    DomainError);
    CHECK_THROWS_AS(Btc::from_btc(1e15), DomainError);
}

TEST_CASE("btc arithmetic is exact at satoshi resolution") {
    const Btc reward = Btc::parse("12.5");
    const Btc cost = Btc::parse("11.5");
    CHECK((reward - cost).sats() == 100'000'000);
    CHECK((reward + cost).str() == "24");
    CHECK((cost * 2016).sats() == 1'150'000'000LL * 2016);
    CHECK(Btc::from_btc(10.35).sats() == 1'035'000'000); // binary 10.35 rounds clean
    CHECK(-Btc::parse("8").sats() == -800'000'000);
    CHECK(Btc::parse("1.00000001") > Btc::parse("1"));
}

TEST_CASE("rates and difficulties validate their range") {
    CHECK_THROWS_AS(HashRate(-0.1), DomainError);
    CHECK_THROWS_AS(HashRate(std::numeric_limits<double>::infinity()), DomainError);
    CHECK(HashRate(0.0).value() == 0.0);
    CHECK_THROWS_AS(Difficulty(0.0), DomainError);
    CHECK_THROWS_AS(Difficulty(-1.0), DomainError);
    CHECK(Difficulty{}.value() == 1.0);
}

TEST_CASE("economic params stay internally consistent") {
    const EconomicParams params;
    CHECK(params.reward().str() == "12.5");
    CHECK(params.reference_cost().str() == "11.5");
    CHECK(params.blocks_per_period() == 2016);
    CHECK(params.target_period_days() == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(params.blocks_per_period() * params.target_block_minutes() ==
          doctest::Approx(params.target_period_days() * 1440.0).epsilon(1e-15));

    const EconomicParams hourly(Btc::parse("1"), Btc::parse("1"), 144, 10.0);
    CHECK(hourly.target_period_days() == doctest::Approx(1.0));

    CHECK_THROWS_AS(EconomicParams(Btc{}, Btc{}, 0, 10.0), ValidationError);
    CHECK_THROWS_AS(EconomicParams(Btc{}, Btc{}, 2016, 0.0), ValidationError);
}

TEST_CASE("schedule construction validates pools and multipliers") {
    CHECK_THROWS_AS(HashSchedule({}, {}), ValidationError);

    auto dup = five_equal_pools();
    dup[1].id = "A";
    CHECK_THROWS_AS(HashSchedule(dup, rows({{1, 1, 1, 1, 1}})), ValidationError);

    auto zero = five_equal_pools();
    zero[0].base_hash = HashRate(0.0);
    CHECK_THROWS_AS(HashSchedule(zero, rows({{1, 1, 1, 1, 1}})), ValidationError);

    CHECK_THROWS_AS(HashSchedule(five_equal_pools(), rows({{1, 1, 1}})),
                    ValidationError);
    CHECK_THROWS_AS(HashSchedule(five_equal_pools(), rows({{1, 1, 1, 1, 1.5}})),
                    ValidationError);
    CHECK_THROWS_AS(HashSchedule(five_equal_pools(), rows({{1, 1, 1, 1, -0.1}})),
                    ValidationError);
}

TEST_CASE("total hash sums scheduled capacity") {
    const HashSchedule schedule(
        five_equal_pools(),
        rows({{1, 1, 1, 1, 1}, {0.5, 1, 1, 1, 1}, {0, 0, 0, 0, 0}}));

    CHECK(schedule.total_hash(0).value() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(schedule.total_hash(1).value() == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(schedule.total_hash(2).value() == 0.0);
    CHECK_THROWS_AS(schedule.total_hash(3), ScheduleBoundsError);
    CHECK_THROWS_AS(schedule.total_hash(-1), ScheduleBoundsError);
}

TEST_CASE("hash share follows the period's capacity split") {
    const HashSchedule schedule(
        five_equal_pools(),
        rows({{1, 1, 1, 1, 1}, {0.5, 1, 1, 1, 1}, {0, 0, 0, 0, 0}}));

    CHECK(schedule.hash_share(0, "C") == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(schedule.hash_share(1, "A") == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(schedule.hash_share(1, "B") == doctest::Approx(2.0 / 9.0).epsilon(1e-14));

    // Division-degenerate is reported distinctly from a bounds problem.
    CHECK_THROWS_AS(schedule.hash_share(2, "A"), DegenerateNetworkError);
    CHECK_THROWS_AS(schedule.hash_share(0, "Z"), ScheduleBoundsError);
    CHECK_THROWS_AS(schedule.hash_share(7, "A"), ScheduleBoundsError);

    const HashSchedule solo({Pool{"S", "Solo", HashRate(0.35)}}, rows({{0.8}}));
    CHECK(solo.hash_share(0, "S") == 1.0);
}

TEST_CASE("shares sum to one for every period with positive hash") {
    std::mt19937 rng(20260808);
    std::uniform_real_distribution<double> base(0.05, 3.0);
    std::uniform_real_distribution<double> mult(0.0, 1.0);
    std::uniform_int_distribution<int> pool_count(1, 10);

    for (int iteration = 0; iteration < 200; ++iteration) {
        const int pools = pool_count(rng);
        std::vector<Pool> roster;
        for (int i = 0; i < pools; ++i) {
            roster.push_back(Pool{"p" + std::to_string(i), "", HashRate(base(rng))});
        }
        std::vector<double> row;
        for (int i = 0; i < pools; ++i) row.push_back(mult(rng));
        const HashSchedule schedule(roster, {row});
        if (schedule.total_hash(0).value() <= 0.0) continue;

        double sum = 0.0;
        for (int i = 0; i < pools; ++i) sum += schedule.hash_share(0, i);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("shares are invariant under uniform capacity scaling") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> base(0.05, 2.0);
    std::uniform_real_distribution<double> scale(0.01, 100.0);

    for (int iteration = 0; iteration < 100; ++iteration) {
        std::vector<Pool> roster;
        std::vector<Pool> scaled;
        const double k = scale(rng);
        std::vector<double> row;
        for (int i = 0; i < 6; ++i) {
            const double h = base(rng);
            roster.push_back(Pool{"p" + std::to_string(i), "", HashRate(h)});
            scaled.push_back(Pool{"p" + std::to_string(i), "", HashRate(k * h)});
            row.push_back(0.25 + 0.5 * (i % 2));
        }
        const HashSchedule a(roster, {row});
        const HashSchedule b(scaled, {row});
        for (int i = 0; i < 6; ++i) {
            CHECK(a.hash_share(0, i) ==
                  doctest::Approx(b.hash_share(0, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("total hash is additive over disjoint pool subsets") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> base(0.05, 2.0);
    std::uniform_real_distribution<double> mult(0.0, 1.0);

    for (int iteration = 0; iteration < 100; ++iteration) {
        std::vector<Pool> left, right, all;
        std::vector<double> left_row, right_row, all_row;
        for (int i = 0; i < 8; ++i) {
            Pool pool{"p" + std::to_string(i), "", HashRate(base(rng))};
            const double m = mult(rng);
            all.push_back(pool);
            all_row.push_back(m);
            if (i % 2 == 0) {
                left.push_back(pool);
                left_row.push_back(m);
            } else {
                right.push_back(pool);
                right_row.push_back(m);
            }
        }
        const double split_total =
            HashSchedule(left, {left_row}).total_hash(0).value() +
            HashSchedule(right, {right_row}).total_hash(0).value();
        const double whole = HashSchedule(all, {all_row}).total_hash(0).value();
        CHECK(whole == doctest::Approx(split_total).epsilon(1e-12));
    }
}
