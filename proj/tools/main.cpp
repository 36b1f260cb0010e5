#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pooltactics/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pooltactics: mining-pool tactic simulator for difficulty-shutdown "
                 "scenarios, shutdown-fraction sweeps, chain-split towing analysis "
                 "and Monte Carlo fork races"};
    app.set_version_flag("--version", "pooltactics 1.0.0");
    app.require_subcommand(1);

    std::string config_path;
    std::string format = "table";
    std::string out_path;
    std::string dump_config_path;
    long trials = 0;
    std::uint64_t seed = 0;
    bool clamp = false;
    bool at_risk = false;

    CLI::App* run_cmd = app.add_subcommand("run", "Execute a scenario file");
    run_cmd->add_option("config", config_path, "Scenario JSON file")->required();
    run_cmd->add_option("--format", format, "Report format: table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    run_cmd->add_option("--out", out_path,
                        "Write the report to this file (the human table still "
                        "goes to stdout)");
    run_cmd->add_option("--dump-config", dump_config_path,
                        "Write the normalized scenario back out to this file");
    run_cmd->add_option("--trials", trials, "Override the race trial count");
    run_cmd->add_option("--seed", seed, "Override the race seed");
    run_cmd->add_flag("--clamp", clamp, "Bound each retarget to [1/4, 4]");
    run_cmd->add_flag("--at-risk", at_risk,
                      "Include the contested block's at-risk stake in pool "
                      "expectations");

    CLI11_PARSE(app, argc, argv);

    pooltactics::RunOptions options;
    options.format = pooltactics::format_from_string(format);
    if (!out_path.empty()) options.out_path = out_path;
    if (!dump_config_path.empty()) options.dump_config_path = dump_config_path;
    if (run_cmd->count("--trials")) options.overrides.trials = trials;
    if (run_cmd->count("--seed")) options.overrides.seed = seed;
    options.overrides.clamp = clamp;
    options.overrides.include_at_risk = at_risk;

    return pooltactics::run(config_path, options, std::cout, std::cerr);
}
