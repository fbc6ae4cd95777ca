#include <CLI11.hpp>

#include <iostream>

#include "mixsteady/commands.hpp"

int main(int argc, char** argv) {
    using namespace mixsteady;
    CLI::App app{"Steady compressible reacting mixture solver"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    CommandOptions opt;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "output directory")->required();
        sub->add_option("--jobs", opt.jobs, "parallel runs (sweep only)")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "reserved for randomized tests; solves are deterministic");
    };

    auto* solve = app.add_subcommand("solve", "run the continuation and write the final state");
    common(solve);

    std::string axis = "delta";
    std::vector<double> values;
    auto* sweep = app.add_subcommand("sweep", "one construction per value of delta or M");
    common(sweep);
    sweep->add_option("--axis", axis, "delta or M")->check(CLI::IsMember({"delta", "M"}));
    sweep->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

    std::string mms_case = "thermal";
    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence table");
    common(mms);
    mms->add_option("--case", mms_case, "thermal, species, flow or coupled");

    std::string state_dir;
    auto* check = app.add_subcommand("check", "recompute diagnostics from saved field files");
    common(check);
    check->add_option("--state", state_dir, "directory written by solve")->required()->check(CLI::ExistingDirectory);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_code::ok : exit_code::usage;
    }

    if (*solve) return cmd_solve(opt, std::cerr);
    if (*sweep) return cmd_sweep(opt, axis, values, std::cerr);
    if (*mms) return cmd_mms(opt, mms_case, std::cerr);
    return cmd_check(opt, state_dir, std::cerr);
}
