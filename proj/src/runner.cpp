#include "pooltactics/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace pooltactics {

using nlohmann::json;

namespace {

/// Shortest decimal that parses back to the same double.
std::string num(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, result.ptr);
}

std::string fixed(double value, int places) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", places, value);
    return buffer;
}

std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string pad_left(const std::string& text, std::size_t width) {
    if (text.size() >= width) return text;
    return std::string(width - text.size(), ' ') + text;
}

void write_file(const std::filesystem::path& path, const std::string& payload) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    file << payload;
    file.flush();
    if (!file) {
        throw IoError("cannot write '" + path.string() + "'");
    }
}

SplitView view_of(const SplitScenario& scenario, bool include_at_risk) {
    SplitView view;
    view.allocation = scenario.allocation;
    view.branch_hash = branch_hash(scenario);
    view.win_prob = branch_win_probability(scenario);
    view.branch_utility = expected_branch_utility(scenario);
    view.pool_utility = per_pool_expected_utility(scenario, include_at_risk);
    return view;
}

PeriodRange default_window(const PeriodsConfig& config) {
    return config.window.value_or(PeriodRange{
        config.first_period,
        config.first_period + static_cast<int>(config.multipliers.size()) - 1});
}

SimulationOptions simulation_options(const PeriodsConfig& config,
                                     const Overrides& overrides) {
    SimulationOptions options;
    options.initial_difficulty = Difficulty(config.initial_difficulty);
    options.first_period = config.first_period;
    options.clamp = config.clamp || overrides.clamp;
    return options;
}

// ---------------------------------------------------------------- CSV

std::string csv_periods(const ScenarioReport& report) {
    std::string out =
        "period,pool,hash_multiplier,share,difficulty,duration_days,"
        "cost_per_block,deu,period_total\n";
    for (const PeriodResult& period : report.periods) {
        for (const PoolPeriodStats& stats : period.pools) {
            out += std::to_string(period.period) + ',' + csv_field(stats.pool_id) +
                   ',' + num(stats.multiplier) + ',' + num(stats.share) + ',' +
                   num(period.difficulty.value()) + ',' + num(period.duration_days) +
                   ',' + period.cost_per_block.str() + ',' + num(stats.deu) + ',' +
                   num(stats.period_total) + '\n';
        }
    }
    return out;
}

std::string csv_sweep(const SweepResult& sweep) {
    std::string out = "fraction,pool,avg_deu,baseline_deu,improvement_pct\n";
    for (const SweepPoint& point : sweep.points) {
        for (const PoolWindowStats& stats : point.pools) {
            out += num(point.fraction) + ',' + csv_field(stats.pool_id) + ',' +
                   num(stats.avg_deu) + ',' + num(stats.baseline_deu) + ',' +
                   num(stats.improvement_pct) + '\n';
        }
    }
    return out;
}

void csv_split_phase(std::string& out, const SplitScenario& scenario,
                     const SplitView& view, const char* phase) {
    for (const Pool& pool : scenario.pools) {
        const std::string& branch = view.allocation.at(pool.id);
        out += std::string(phase) + ',' + csv_field(pool.id) + ',' +
               csv_field(branch) + ',' + num(pool.base_hash.value()) + ',' +
               num(view.win_prob.at(branch)) + ',' +
               num(view.branch_utility.at(branch)) + ',' +
               num(view.pool_utility.at(pool.id)) + '\n';
    }
}

std::string csv_split(const SplitReport& report) {
    std::string out =
        "phase,pool,branch,base_hash,branch_win_prob,branch_expected_btc,"
        "pool_expected_btc\n";
    csv_split_phase(out, report.scenario, report.before, "no_towing");
    csv_split_phase(out, report.scenario, report.after, "towing");
    return out;
}

std::string csv_race(const RaceReport& report) {
    std::string out =
        "branch,analytic_win_prob,empirical_win_freq,wins,trials,seed,"
        "expected_branch_btc\n";
    for (const std::string& branch : report.raced.branches) {
        out += csv_field(branch) + ',' +
               num(report.outcome.analytic_win_prob.at(branch)) + ',' +
               num(report.outcome.empirical_win_freq.at(branch)) + ',' +
               std::to_string(report.outcome.wins.at(branch)) + ',' +
               std::to_string(report.outcome.trials) + ',' +
               std::to_string(report.outcome.seed) + ',' +
               num(report.outcome.expected_branch_utility.at(branch)) + '\n';
    }
    return out;
}

// ---------------------------------------------------------------- JSON

json json_window_stats(const std::vector<PoolWindowStats>& stats) {
    json rows = json::array();
    for (const PoolWindowStats& row : stats) {
        rows.push_back({{"pool", row.pool_id},
                        {"avg_deu", row.avg_deu},
                        {"baseline_deu", row.baseline_deu},
                        {"improvement_pct", row.improvement_pct}});
    }
    return rows;
}

json json_periods(const ScenarioReport& report) {
    json periods = json::array();
    for (const PeriodResult& period : report.periods) {
        json pools = json::array();
        for (const PoolPeriodStats& stats : period.pools) {
            pools.push_back({{"pool", stats.pool_id},
                             {"multiplier", stats.multiplier},
                             {"hash", stats.hash.value()},
                             {"share", stats.share},
                             {"deu", stats.deu},
                             {"period_total", stats.period_total}});
        }
        periods.push_back({{"period", period.period},
                           {"difficulty", period.difficulty.value()},
                           {"duration_days", period.duration_days},
                           {"cost_per_block", period.cost_per_block.btc()},
                           {"total_hash", period.total_hash.value()},
                           {"pools", std::move(pools)}});
    }
    json roster = json::array();
    for (const Pool& pool : report.pools) {
        roster.push_back({{"id", pool.id},
                          {"name", pool.name},
                          {"base_hash", pool.base_hash.value()}});
    }
    return json{{"mode", "periods"},
                {"pools", std::move(roster)},
                {"window", {{"first", report.window.first}, {"last", report.window.last}}},
                {"periods", std::move(periods)},
                {"window_stats", json_window_stats(report.window_stats)}};
}

json json_sweep(const SweepResult& sweep) {
    json points = json::array();
    for (const SweepPoint& point : sweep.points) {
        points.push_back(
            {{"fraction", point.fraction}, {"pools", json_window_stats(point.pools)}});
    }
    return json{{"mode", "sweep"},
                {"shutdown_pool", sweep.shutdown_pool},
                {"dip_period", sweep.dip_period},
                {"window", {{"first", sweep.window.first}, {"last", sweep.window.last}}},
                {"best_fraction", sweep.best_fraction},
                {"best_avg_deu", sweep.best_avg_deu},
                {"points", std::move(points)}};
}

json json_split_view(const SplitView& view) {
    return json{{"allocation", view.allocation},
                {"branch_hash", view.branch_hash},
                {"win_prob", view.win_prob},
                {"branch_utility", view.branch_utility},
                {"pool_utility", view.pool_utility}};
}

json json_split(const SplitReport& report) {
    return json{{"mode", "split"},
                {"branches", report.scenario.branches},
                {"reward_btc", report.scenario.reward.btc()},
                {"cost_btc", report.scenario.cost.btc()},
                {"include_at_risk", report.include_at_risk},
                {"before", json_split_view(report.before)},
                {"after", json_split_view(report.after)}};
}

json json_race(const RaceReport& report) {
    return json{{"mode", "race"},
                {"branches", report.raced.branches},
                {"allocation", report.raced.allocation},
                {"trials", report.outcome.trials},
                {"seed", report.outcome.seed},
                {"delay_minutes", report.params.delay_minutes
                                      ? json(*report.params.delay_minutes)
                                      : json()},
                {"round_cap", report.params.round_cap},
                {"include_at_risk", report.params.include_at_risk},
                {"analytic_win_prob", report.outcome.analytic_win_prob},
                {"empirical_win_freq", report.outcome.empirical_win_freq},
                {"wins", report.outcome.wins},
                {"expected_branch_utility", report.outcome.expected_branch_utility},
                {"per_pool_expected", report.outcome.per_pool_expected}};
}

// ---------------------------------------------------------------- tables

std::string table_periods(const ScenarioReport& report) {
    std::ostringstream out;
    out << "Mining periods\n";
    out << "  period  difficulty  duration_days  cost_per_block  total_hash\n";
    for (const PeriodResult& period : report.periods) {
        out << pad_left(std::to_string(period.period), 8)
            << pad_left(fixed(period.difficulty.value(), 6), 12)
            << pad_left(fixed(period.duration_days, 4), 15)
            << pad_left(fixed(period.cost_per_block.btc(), 2), 16)
            << pad_left(fixed(period.total_hash.value(), 4), 12) << '\n';
    }

    out << "\nDaily expected utility (BTC/day)\n  period";
    const auto& pools = report.periods.front().pools;
    for (const PoolPeriodStats& stats : pools) {
        out << pad_left(stats.pool_id, 9);
    }
    out << '\n';
    for (const PeriodResult& period : report.periods) {
        out << pad_left(std::to_string(period.period), 8);
        for (const PoolPeriodStats& stats : period.pools) {
            out << pad_left(fixed(stats.deu, 2), 9);
        }
        out << '\n';
    }

    out << "\nWindow " << report.window.first << "-" << report.window.last
        << " (time-weighted)\n";
    out << "  pool  capacity_pct  window_hash_pct  avg_deu  baseline_deu  "
           "improvement_pct\n";
    double capacity_total = 0.0;
    for (const Pool& pool : report.pools) capacity_total += pool.base_hash.value();
    for (std::size_t i = 0; i < report.window_stats.size(); ++i) {
        const PoolWindowStats& stats = report.window_stats[i];
        // Both H presentations: the pool's standing capacity share and its
        // lowest in-window hash-rate (the dip itself for a shutdown run).
        const double capacity =
            report.pools[i].base_hash.value() / capacity_total * 100.0;
        double min_hash = std::numeric_limits<double>::infinity();
        for (const PeriodResult& period : report.periods) {
            if (period.period < report.window.first ||
                period.period > report.window.last) {
                continue;
            }
            min_hash = std::min(min_hash, period.pool(stats.pool_id).hash.value());
        }
        out << pad_left(stats.pool_id, 6) << pad_left(fixed(capacity, 1), 14)
            << pad_left(fixed(min_hash * 100.0, 1), 17)
            << pad_left(fixed(stats.avg_deu, 2), 9)
            << pad_left(fixed(stats.baseline_deu, 2), 14)
            << pad_left(fixed(stats.improvement_pct, 1), 17) << '\n';
    }
    return out.str();
}

std::string table_sweep(const SweepResult& sweep) {
    std::ostringstream out;
    out << "Shutdown sweep: pool " << sweep.shutdown_pool << " dips in period "
        << sweep.dip_period << " (window " << sweep.window.first << "-"
        << sweep.window.last << ")\n";
    out << "  fraction  shutdown_avg_deu  shutdown_iv_pct  others_iv_min  "
           "others_iv_max\n";
    for (const SweepPoint& point : sweep.points) {
        double own_deu = 0.0;
        double own_iv = 0.0;
        double iv_min = std::numeric_limits<double>::infinity();
        double iv_max = -std::numeric_limits<double>::infinity();
        for (const PoolWindowStats& stats : point.pools) {
            if (stats.pool_id == sweep.shutdown_pool) {
                own_deu = stats.avg_deu;
                own_iv = stats.improvement_pct;
            } else {
                iv_min = std::min(iv_min, stats.improvement_pct);
                iv_max = std::max(iv_max, stats.improvement_pct);
            }
        }
        if (point.pools.size() == 1) iv_min = iv_max = 0.0;
        out << pad_left(fixed(point.fraction, 2), 10)
            << pad_left(fixed(own_deu, 2), 18) << pad_left(fixed(own_iv, 1), 17)
            << pad_left(fixed(iv_min, 1), 15) << pad_left(fixed(iv_max, 1), 15)
            << '\n';
    }
    out << "Best fraction for pool " << sweep.shutdown_pool << ": "
        << num(sweep.best_fraction) << " (avg DEU " << fixed(sweep.best_avg_deu, 2)
        << " BTC/day)\n";
    return out.str();
}

void table_split_phase(std::ostringstream& out, const SplitScenario& scenario,
                       const SplitView& view) {
    out << "  branch  hash   win_prob  expected_btc\n";
    for (const std::string& branch : scenario.branches) {
        out << pad_left(branch, 8) << pad_left(fixed(view.branch_hash.at(branch), 2), 6)
            << pad_left(fixed(view.win_prob.at(branch), 4), 11)
            << pad_left(fixed(view.branch_utility.at(branch), 2), 14) << '\n';
    }
    out << "  pool  branch  expected_btc\n";
    for (const Pool& pool : scenario.pools) {
        out << pad_left(pool.id, 6) << pad_left(view.allocation.at(pool.id), 8)
            << pad_left(fixed(view.pool_utility.at(pool.id), 2), 14) << '\n';
    }
}

std::string table_split(const SplitReport& report) {
    std::ostringstream out;
    out << "Chain split: reward " << report.scenario.reward.str() << " BTC, cost "
        << report.scenario.cost.str() << " BTC per block, at-risk stakes "
        << (report.include_at_risk ? "included" : "excluded") << "\n\n";
    out << "No towing:\n";
    table_split_phase(out, report.scenario, report.before);
    out << "\nTowing applied";
    if (report.scenario.agreements.empty()) {
        out << " (no agreements):\n";
    } else {
        out << " (";
        for (std::size_t i = 0; i < report.scenario.agreements.size(); ++i) {
            if (i) out << ", ";
            out << report.scenario.agreements[i].helper << " -> "
                << report.scenario.agreements[i].beneficiary;
        }
        out << "):\n";
    }
    table_split_phase(out, report.scenario, report.after);
    return out.str();
}

std::string table_race(const RaceReport& report) {
    std::ostringstream out;
    out << "Fork race: " << report.outcome.trials << " trials, seed "
        << report.outcome.seed << ", delay ";
    if (report.params.delay_minutes) {
        out << num(*report.params.delay_minutes) << " min";
    } else {
        out << "none";
    }
    out << ", round cap " << report.params.round_cap << "\n";
    out << "  branch  analytic_p  empirical_p        wins  expected_btc\n";
    for (const std::string& branch : report.raced.branches) {
        out << pad_left(branch, 8)
            << pad_left(fixed(report.outcome.analytic_win_prob.at(branch), 6), 12)
            << pad_left(fixed(report.outcome.empirical_win_freq.at(branch), 6), 13)
            << pad_left(std::to_string(report.outcome.wins.at(branch)), 12)
            << pad_left(fixed(report.outcome.expected_branch_utility.at(branch), 2), 14)
            << '\n';
    }
    out << "Per-pool expected (BTC):";
    bool first = true;
    for (const Pool& pool : report.raced.pools) {
        out << (first ? " " : ", ") << pool.id << " "
            << fixed(report.outcome.per_pool_expected.at(pool.id), 2);
        first = false;
    }
    out << '\n';
    return out.str();
}

} // namespace

OutputFormat format_from_string(std::string_view text) {
    if (text == "table") return OutputFormat::table;
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw ValidationError("format: expected one of table, csv, json");
}

RunReport execute(const ScenarioFile& scenario, const Overrides& overrides) {
    RunReport report;
    report.mode = scenario.mode;
    switch (scenario.mode) {
        case Mode::periods: {
            const HashSchedule schedule = make_schedule(scenario);
            const PeriodsConfig& config = *scenario.periods;
            report.periods = run_report(schedule, scenario.economics,
                                        simulation_options(config, overrides),
                                        default_window(config));
            break;
        }
        case Mode::sweep: {
            const HashSchedule schedule = make_schedule(scenario);
            const PeriodsConfig& config = *scenario.periods;
            const SweepConfig& sweep = *scenario.sweep;
            report.sweep = sweep_shutdown_fraction(
                schedule, scenario.economics, simulation_options(config, overrides),
                sweep.pool, sweep.dip_period, sweep.fractions,
                default_window(config));
            break;
        }
        case Mode::split: {
            SplitReport split;
            split.scenario = make_split(scenario);
            split.include_at_risk =
                scenario.split->include_at_risk || overrides.include_at_risk;
            split.before = view_of(split.scenario, split.include_at_risk);
            split.after = view_of(apply_towing(split.scenario), split.include_at_risk);
            report.split = std::move(split);
            break;
        }
        case Mode::race: {
            RaceReport race;
            race.raced = apply_towing(make_split(scenario));
            race.params.trials = overrides.trials.value_or(scenario.race->trials);
            race.params.seed = overrides.seed.value_or(scenario.race->seed);
            race.params.delay_minutes = scenario.race->delay_minutes;
            race.params.round_cap = scenario.race->round_cap;
            race.params.block_time_ref_minutes =
                scenario.economics.target_block_minutes();
            race.params.include_at_risk =
                scenario.split->include_at_risk || overrides.include_at_risk;
            race.outcome = monte_carlo_race(race.raced, race.params);
            report.race = std::move(race);
            break;
        }
    }
    return report;
}

std::string render_csv(const RunReport& report) {
    switch (report.mode) {
        case Mode::periods: return csv_periods(*report.periods);
        case Mode::sweep: return csv_sweep(*report.sweep);
        case Mode::split: return csv_split(*report.split);
        case Mode::race: return csv_race(*report.race);
    }
    throw Error("unreachable");
}

std::string render_json(const RunReport& report) {
    json payload;
    switch (report.mode) {
        case Mode::periods: payload = json_periods(*report.periods); break;
        case Mode::sweep: payload = json_sweep(*report.sweep); break;
        case Mode::split: payload = json_split(*report.split); break;
        case Mode::race: payload = json_race(*report.race); break;
    }
    return payload.dump(2) + "\n";
}

std::string render_table(const RunReport& report) {
    switch (report.mode) {
        case Mode::periods: return table_periods(*report.periods);
        case Mode::sweep: return table_sweep(*report.sweep);
        case Mode::split: return table_split(*report.split);
        case Mode::race: return table_race(*report.race);
    }
    throw Error("unreachable");
}

int run(const std::filesystem::path& config_path, const RunOptions& options,
        std::ostream& out, std::ostream& err) {
    try {
        const ScenarioFile scenario = load_scenario(config_path);
        if (options.dump_config_path) {
            write_file(*options.dump_config_path, dump_scenario(scenario));
        }
        const RunReport report = execute(scenario, options.overrides);

        std::string payload;
        switch (options.format) {
            case OutputFormat::table: payload = render_table(report); break;
            case OutputFormat::csv: payload = render_csv(report); break;
            case OutputFormat::json: payload = render_json(report); break;
        }
        if (options.out_path) {
            write_file(*options.out_path, payload);
            out << render_table(report);
        } else {
            out << payload;
        }
        return kExitOk;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    } catch (const DegenerateNetworkError& e) {
        err << "degenerate scenario: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace pooltactics
