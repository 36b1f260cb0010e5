#include "pooltactics/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pooltactics {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& context, const std::string& message) {
    throw ValidationError(context + ": " + message);
}

void check_keys(const json& node, const std::string& context,
                std::initializer_list<const char*> allowed) {
    if (!node.is_object()) fail(context, "expected an object");
    for (const auto& item : node.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(context, "unknown field '" + item.key() + "'");
    }
}

const json* find(const json& node, const char* key) {
    auto it = node.find(key);
    if (it == node.end() || it->is_null()) return nullptr;
    return &*it;
}

const json& require(const json& node, const std::string& context, const char* key) {
    const json* value = find(node, key);
    if (value == nullptr) fail(context, "missing field '" + std::string(key) + "'");
    return *value;
}

std::string get_string(const json& node, const std::string& context, const char* key) {
    const json& value = require(node, context, key);
    if (!value.is_string()) fail(context + "." + key, "expected a string");
    return value.get<std::string>();
}

double as_double(const json& value, const std::string& context) {
    if (!value.is_number()) fail(context, "expected a number");
    return value.get<double>();
}

double get_double(const json& node, const std::string& context, const char* key) {
    return as_double(require(node, context, key), context + "." + key);
}

double get_double_or(const json& node, const std::string& context, const char* key,
                     double fallback) {
    const json* value = find(node, key);
    return value ? as_double(*value, context + "." + key) : fallback;
}

long get_int_or(const json& node, const std::string& context, const char* key,
                long fallback) {
    const json* value = find(node, key);
    if (!value) return fallback;
    if (!value->is_number_integer() && !value->is_number_unsigned()) {
        fail(context + "." + key, "expected an integer");
    }
    return value->get<long>();
}

bool get_bool_or(const json& node, const std::string& context, const char* key,
                 bool fallback) {
    const json* value = find(node, key);
    if (!value) return fallback;
    if (!value->is_boolean()) fail(context + "." + key, "expected a boolean");
    return value->get<bool>();
}

Btc get_btc(const json& node, const std::string& context, const char* key) {
    const double coins = get_double(node, context, key);
    try {
        return Btc::from_btc(coins);
    } catch (const Error& e) {
        fail(context + "." + key, e.what());
    }
}

Btc get_btc_or(const json& node, const std::string& context, const char* key,
               Btc fallback) {
    return find(node, key) ? get_btc(node, context, key) : fallback;
}

EconomicParams parse_economics(const json* node) {
    const EconomicParams defaults;
    if (!node) return defaults;
    const std::string context = "economics";
    check_keys(*node, context,
               {"reward_btc", "reference_cost_btc", "blocks_per_period",
                "target_block_minutes"});
    try {
        return EconomicParams(
            get_btc_or(*node, context, "reward_btc", defaults.reward()),
            get_btc_or(*node, context, "reference_cost_btc", defaults.reference_cost()),
            static_cast<int>(get_int_or(*node, context, "blocks_per_period",
                                        defaults.blocks_per_period())),
            get_double_or(*node, context, "target_block_minutes",
                          defaults.target_block_minutes()));
    } catch (const ValidationError& e) {
        fail(context, e.what());
    }
}

std::vector<Pool> parse_pools(const json& node) {
    if (!node.is_array() || node.empty()) {
        fail("pools", "expected a non-empty array");
    }
    std::vector<Pool> pools;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const std::string context = "pools[" + std::to_string(i) + "]";
        check_keys(node[i], context, {"id", "name", "base_hash"});
        Pool pool;
        pool.id = get_string(node[i], context, "id");
        pool.name = find(node[i], "name") ? get_string(node[i], context, "name")
                                          : pool.id;
        const double hash = get_double(node[i], context, "base_hash");
        if (!(hash > 0.0)) fail(context + ".base_hash", "must be > 0");
        pool.base_hash = HashRate(hash);
        pools.push_back(std::move(pool));
    }
    return pools;
}

PeriodsConfig parse_periods(const json& node) {
    const std::string context = "periods";
    check_keys(node, context,
               {"first_period", "initial_difficulty", "clamp", "multipliers",
                "window"});
    PeriodsConfig config;
    config.first_period =
        static_cast<int>(get_int_or(node, context, "first_period", 1));
    config.initial_difficulty =
        get_double_or(node, context, "initial_difficulty", 1.0);
    if (!(config.initial_difficulty > 0.0)) {
        fail(context + ".initial_difficulty", "must be > 0");
    }
    config.clamp = get_bool_or(node, context, "clamp", false);

    const json& rows = require(node, context, "multipliers");
    if (!rows.is_array() || rows.empty()) {
        fail(context + ".multipliers", "expected a non-empty array of rows");
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array()) {
            fail(context + ".multipliers[" + std::to_string(r) + "]",
                 "expected an array of numbers");
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            row.push_back(as_double(rows[r][c], context + ".multipliers[" +
                                                    std::to_string(r) + "][" +
                                                    std::to_string(c) + "]"));
        }
        config.multipliers.push_back(std::move(row));
    }

    if (const json* window = find(node, "window")) {
        if (!window->is_array() || window->size() != 2) {
            fail(context + ".window", "expected [first_period, last_period]");
        }
        PeriodRange range;
        range.first = static_cast<int>(as_double((*window)[0], context + ".window[0]"));
        range.last = static_cast<int>(as_double((*window)[1], context + ".window[1]"));
        const int last_label =
            config.first_period + static_cast<int>(config.multipliers.size()) - 1;
        if (range.first > range.last || range.first < config.first_period ||
            range.last > last_label) {
            fail(context + ".window", "must lie within the scheduled periods " +
                                          std::to_string(config.first_period) + "-" +
                                          std::to_string(last_label));
        }
        config.window = range;
    }
    return config;
}

SweepConfig parse_sweep(const json& node, const PeriodsConfig& periods) {
    const std::string context = "sweep";
    check_keys(node, context, {"pool", "dip_period", "fractions"});
    SweepConfig config;
    config.pool = get_string(node, context, "pool");
    const json& dip = require(node, context, "dip_period");
    if (!dip.is_number_integer() && !dip.is_number_unsigned()) {
        fail(context + ".dip_period", "expected an integer period label");
    }
    config.dip_period = dip.get<int>();
    const int last_label =
        periods.first_period + static_cast<int>(periods.multipliers.size()) - 1;
    if (config.dip_period < periods.first_period || config.dip_period > last_label) {
        fail(context + ".dip_period", "must lie within the scheduled periods");
    }
    const json& fractions = require(node, context, "fractions");
    if (!fractions.is_array() || fractions.empty()) {
        fail(context + ".fractions", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < fractions.size(); ++i) {
        const double f =
            as_double(fractions[i], context + ".fractions[" + std::to_string(i) + "]");
        if (!(f >= 0.0 && f <= 1.0)) {
            fail(context + ".fractions[" + std::to_string(i) + "]",
                 "must lie in [0, 1]");
        }
        config.fractions.push_back(f);
    }
    return config;
}

SplitConfig parse_split(const json& node) {
    const std::string context = "split";
    check_keys(node, context,
               {"branches", "allocation", "agreements", "stakes", "reward_btc",
                "cost_btc", "include_at_risk"});
    SplitConfig config;

    const json& branches = require(node, context, "branches");
    if (!branches.is_array()) fail(context + ".branches", "expected an array");
    for (const json& branch : branches) {
        if (!branch.is_string()) fail(context + ".branches", "expected strings");
        config.branches.push_back(branch.get<std::string>());
    }

    const json& allocation = require(node, context, "allocation");
    if (!allocation.is_object()) {
        fail(context + ".allocation", "expected an object mapping pool to branch");
    }
    for (const auto& item : allocation.items()) {
        if (!item.value().is_string()) {
            fail(context + ".allocation." + item.key(), "expected a branch id");
        }
        config.allocation[item.key()] = item.value().get<std::string>();
    }

    if (const json* agreements = find(node, "agreements")) {
        if (!agreements->is_array()) fail(context + ".agreements", "expected an array");
        for (std::size_t i = 0; i < agreements->size(); ++i) {
            const std::string agreement_context =
                context + ".agreements[" + std::to_string(i) + "]";
            check_keys((*agreements)[i], agreement_context, {"helper", "beneficiary"});
            config.agreements.push_back(TowingAgreement{
                get_string((*agreements)[i], agreement_context, "helper"),
                get_string((*agreements)[i], agreement_context, "beneficiary")});
        }
    }

    if (const json* stakes = find(node, "stakes")) {
        if (!stakes->is_object()) {
            fail(context + ".stakes", "expected an object keyed by branch");
        }
        for (const auto& item : stakes->items()) {
            const std::string stake_context = context + ".stakes." + item.key();
            check_keys(item.value(), stake_context, {"proposer", "at_risk_btc"});
            BranchStake stake;
            stake.proposer = get_string(item.value(), stake_context, "proposer");
            stake.at_risk = get_btc(item.value(), stake_context, "at_risk_btc");
            config.stakes[item.key()] = std::move(stake);
        }
    }

    config.reward = get_btc(node, context, "reward_btc");
    config.cost = get_btc(node, context, "cost_btc");
    config.include_at_risk = get_bool_or(node, context, "include_at_risk", false);
    return config;
}

RaceSection parse_race(const json& node) {
    const std::string context = "race";
    check_keys(node, context, {"trials", "seed", "delay_minutes", "round_cap"});
    RaceSection config;
    config.trials = get_int_or(node, context, "trials", config.trials);
    if (config.trials < 1) fail(context + ".trials", "must be >= 1");
    const json* seed = find(node, "seed");
    if (seed) {
        if (!seed->is_number_integer() && !seed->is_number_unsigned()) {
            fail(context + ".seed", "expected an integer");
        }
        config.seed = seed->get<std::uint64_t>();
    }
    if (const json* delay = find(node, "delay_minutes")) {
        const double minutes = as_double(*delay, context + ".delay_minutes");
        if (!(minutes >= 0.0)) fail(context + ".delay_minutes", "must be >= 0");
        config.delay_minutes = minutes;
    }
    config.round_cap =
        static_cast<int>(get_int_or(node, context, "round_cap", config.round_cap));
    if (config.round_cap < 1) fail(context + ".round_cap", "must be >= 1");
    return config;
}

} // namespace

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::periods: return "periods";
        case Mode::sweep: return "sweep";
        case Mode::split: return "split";
        case Mode::race: return "race";
    }
    return "periods";
}

Mode mode_from_string(std::string_view text) {
    if (text == "periods") return Mode::periods;
    if (text == "sweep") return Mode::sweep;
    if (text == "split") return Mode::split;
    if (text == "race") return Mode::race;
    throw ValidationError("mode: expected one of periods, sweep, split, race");
}

ScenarioFile parse_scenario(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
    check_keys(root, "scenario",
               {"mode", "economics", "pools", "periods", "sweep", "split", "race"});

    ScenarioFile scenario;
    scenario.mode = mode_from_string(get_string(root, "scenario", "mode"));
    scenario.economics = parse_economics(find(root, "economics"));
    scenario.pools = parse_pools(require(root, "scenario", "pools"));

    const bool wants_periods =
        scenario.mode == Mode::periods || scenario.mode == Mode::sweep;
    const bool wants_split =
        scenario.mode == Mode::split || scenario.mode == Mode::race;

    if (const json* node = find(root, "periods")) {
        if (!wants_periods) fail("periods", "section is not used in mode '" +
                                                to_string(scenario.mode) + "'");
        scenario.periods = parse_periods(*node);
    } else if (wants_periods) {
        fail("scenario", "mode '" + to_string(scenario.mode) +
                             "' requires a 'periods' section");
    }

    if (const json* node = find(root, "sweep")) {
        if (scenario.mode != Mode::sweep) {
            fail("sweep", "section is not used in mode '" + to_string(scenario.mode) + "'");
        }
        scenario.sweep = parse_sweep(*node, *scenario.periods);
    } else if (scenario.mode == Mode::sweep) {
        fail("scenario", "mode 'sweep' requires a 'sweep' section");
    }

    if (const json* node = find(root, "split")) {
        if (!wants_split) fail("split", "section is not used in mode '" +
                                            to_string(scenario.mode) + "'");
        scenario.split = parse_split(*node);
    } else if (wants_split) {
        fail("scenario", "mode '" + to_string(scenario.mode) +
                             "' requires a 'split' section");
    }

    if (const json* node = find(root, "race")) {
        if (scenario.mode != Mode::race) {
            fail("race", "section is not used in mode '" + to_string(scenario.mode) + "'");
        }
        scenario.race = parse_race(*node);
    } else if (scenario.mode == Mode::race) {
        scenario.race = RaceSection{};
    }

    // Force the full structural validation before any computation runs.
    if (wants_periods) {
        const HashSchedule schedule = make_schedule(scenario);
        if (scenario.sweep) schedule.pool_index(scenario.sweep->pool);
    }
    if (wants_split) make_split(scenario);
    return scenario;
}

ScenarioFile load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("cannot read scenario file '" + path.string() + "'");
    }
    return parse_scenario(buffer.str());
}

std::string dump_scenario(const ScenarioFile& scenario) {
    json root;
    root["mode"] = to_string(scenario.mode);
    root["economics"] = {
        {"reward_btc", scenario.economics.reward().btc()},
        {"reference_cost_btc", scenario.economics.reference_cost().btc()},
        {"blocks_per_period", scenario.economics.blocks_per_period()},
        {"target_block_minutes", scenario.economics.target_block_minutes()},
    };
    root["pools"] = json::array();
    for (const Pool& pool : scenario.pools) {
        root["pools"].push_back({{"id", pool.id},
                                 {"name", pool.name},
                                 {"base_hash", pool.base_hash.value()}});
    }
    if (scenario.periods) {
        const PeriodsConfig& periods = *scenario.periods;
        PeriodRange window = periods.window.value_or(PeriodRange{
            periods.first_period,
            periods.first_period + static_cast<int>(periods.multipliers.size()) - 1});
        root["periods"] = {
            {"first_period", periods.first_period},
            {"initial_difficulty", periods.initial_difficulty},
            {"clamp", periods.clamp},
            {"multipliers", periods.multipliers},
            {"window", {window.first, window.last}},
        };
    }
    if (scenario.sweep) {
        root["sweep"] = {
            {"pool", scenario.sweep->pool},
            {"dip_period", scenario.sweep->dip_period},
            {"fractions", scenario.sweep->fractions},
        };
    }
    if (scenario.split) {
        const SplitConfig& split = *scenario.split;
        json stakes = json::object();
        for (const auto& [branch, stake] : split.stakes) {
            stakes[branch] = {{"proposer", stake.proposer},
                              {"at_risk_btc", stake.at_risk.btc()}};
        }
        json agreements = json::array();
        for (const TowingAgreement& agreement : split.agreements) {
            agreements.push_back(
                {{"helper", agreement.helper}, {"beneficiary", agreement.beneficiary}});
        }
        root["split"] = {
            {"branches", split.branches},
            {"allocation", split.allocation},
            {"agreements", std::move(agreements)},
            {"stakes", std::move(stakes)},
            {"reward_btc", split.reward.btc()},
            {"cost_btc", split.cost.btc()},
            {"include_at_risk", split.include_at_risk},
        };
    }
    if (scenario.race) {
        root["race"] = {
            {"trials", scenario.race->trials},
            {"seed", scenario.race->seed},
            {"delay_minutes", scenario.race->delay_minutes
                                  ? json(*scenario.race->delay_minutes)
                                  : json()},
            {"round_cap", scenario.race->round_cap},
        };
    }
    return root.dump(2) + "\n";
}

HashSchedule make_schedule(const ScenarioFile& scenario) {
    if (!scenario.periods) {
        throw ValidationError("scenario has no 'periods' section");
    }
    return HashSchedule(scenario.pools, scenario.periods->multipliers);
}

SplitScenario make_split(const ScenarioFile& scenario) {
    if (!scenario.split) {
        throw ValidationError("scenario has no 'split' section");
    }
    const SplitConfig& config = *scenario.split;
    SplitScenario split;
    split.branches = config.branches;
    split.pools = scenario.pools;
    split.allocation = config.allocation;
    split.agreements = config.agreements;
    split.stakes = config.stakes;
    split.reward = config.reward;
    split.cost = config.cost;
    validate(split);
    return split;
}

} // namespace pooltactics
