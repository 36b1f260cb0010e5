#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// Golden tests: the bundled scenario files against their expected-output
// fixtures. Numeric fields compare at 1e-9; the race compares its empirical
// columns against the analytic values at 3-sigma binomial tolerance.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "pooltactics/runner.hpp"

using namespace pooltactics;

namespace {

std::filesystem::path scenario_dir() { return SCENARIO_DIR; }

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing fixture ", path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        std::vector<std::string> fields;
        std::istringstream cells(line);
        std::string field;
        while (std::getline(cells, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

bool is_number(const std::string& text) {
    if (text.empty()) return false;
    char* end = nullptr;
    std::strtod(text.c_str(), &end);
    return end == text.c_str() + text.size();
}

void compare_csv(const std::string& actual, const std::string& expected) {
    const auto got = parse_csv(actual);
    const auto want = parse_csv(expected);
    REQUIRE(got.size() == want.size());
    for (std::size_t r = 0; r < want.size(); ++r) {
        REQUIRE(got[r].size() == want[r].size());
        for (std::size_t c = 0; c < want[r].size(); ++c) {
            if (is_number(want[r][c]) && is_number(got[r][c])) {
                const double w = std::stod(want[r][c]);
                const double g = std::stod(got[r][c]);
                CHECK_MESSAGE(std::abs(w - g) <= 1e-9 + 1e-12 * std::abs(w),
                              "row ", r, " column ", c, ": ", got[r][c], " vs ",
                              want[r][c]);
            } else {
                CHECK(got[r][c] == want[r][c]);
            }
        }
    }
}

std::string csv_for(const std::string& scenario_name) {
    const ScenarioFile scenario =
        load_scenario(scenario_dir() / (scenario_name + ".json"));
    return render_csv(execute(scenario));
}

} // namespace

TEST_CASE("shutdown_half matches its fixture") {
    compare_csv(csv_for("shutdown_half"),
                slurp(scenario_dir() / "expected" / "shutdown_half.csv"));
}

TEST_CASE("split_towing matches its fixture") {
    compare_csv(csv_for("split_towing"),
                slurp(scenario_dir() / "expected" / "split_towing.csv"));
}

TEST_CASE("shutdown_sweep matches its fixture") {
    compare_csv(csv_for("shutdown_sweep"),
                slurp(scenario_dir() / "expected" / "shutdown_sweep.csv"));
}

TEST_CASE("race_million stays within binomial bounds of its fixture") {
    const ScenarioFile scenario = load_scenario(scenario_dir() / "race_million.json");
    const RunReport report = execute(scenario);
    REQUIRE(report.race.has_value());
    const RaceOutcome& outcome = report.race->outcome;

    // The fixture freezes the analytic columns; empirical columns float
    // within 3 sigma of them.
    const auto fixture =
        parse_csv(slurp(scenario_dir() / "expected" / "race_million.csv"));
    REQUIRE(fixture.size() == 1 + report.race->raced.branches.size());
    for (std::size_t r = 1; r < fixture.size(); ++r) {
        const std::string& branch = fixture[r][0];
        const double analytic = std::stod(fixture[r][1]);
        const long trials = std::stol(fixture[r][4]);
        CHECK(outcome.trials == trials);
        CHECK(std::abs(outcome.analytic_win_prob.at(branch) - analytic) <= 1e-9);
        const double sigma =
            std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(trials));
        CHECK(std::abs(outcome.empirical_win_freq.at(branch) - analytic) <=
              3.0 * sigma);
    }

    // Same config, same seed: the emitted CSV is byte-identical across runs.
    const std::string once = render_csv(report);
    const std::string twice = render_csv(execute(scenario));
    CHECK(once == twice);
}

TEST_CASE("bundled scenarios round-trip through the normalized dump") {
    for (const char* name :
         {"shutdown_half", "split_towing", "shutdown_sweep", "race_million"}) {
        const ScenarioFile scenario =
            load_scenario(scenario_dir() / (std::string(name) + ".json"));
        const std::string dumped = dump_scenario(scenario);
        CHECK(dump_scenario(parse_scenario(dumped)) == dumped);
    }
}
