#include <iostream>

#include <CLI11.hpp>

#include "qswarm/qswarm.hpp"

int main(int argc, char **argv) {
    using namespace qswarm;

    CLI::App app{"Density-matrix swarm toolkit"};
    app.require_subcommand(1);

    CommandOptions opts;
    std::string scenario, scenario1;
    std::uint64_t seed = 0;

    auto *density = app.add_subcommand("density", "swarm density, purity, barycenter and reduced matrices");
    density->add_option("scenario", scenario, "scenario JSON")->required();
    density->add_option("--out", opts.out, "output path (CSV: base path for one file per matrix)");
    density->add_option("--format", opts.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto *evolve = app.add_subcommand("evolve", "recover the evolution operator between two snapshots");
    evolve->add_option("scenario0", scenario, "earlier snapshot")->required();
    evolve->add_option("scenario1", scenario1, "later snapshot")->required();
    evolve->add_option("--out", opts.out, "output path");

    auto *mission = app.add_subcommand("mission", "run the target-reaching loop");
    mission->add_option("scenario", scenario, "scenario JSON with a mission block")->required();
    mission->add_option("--out", opts.out, "write the JSON-lines trace here");
    mission->add_flag("--summary", opts.summary, "print iterations and final distance");
    auto *seed_opt = mission->add_option("--seed", seed, "override the sensor seed");

    auto *surface = app.add_subcommand("surface", "CSV amplitude surfaces for plotting");
    surface->add_option("scenario", scenario, "scenario JSON")->required();
    surface->add_option("--out", opts.out, "output path");
    surface->add_option("--resolution", opts.resolution, "samples per axis")->check(CLI::Range(2, 100000));

    auto *check = app.add_subcommand("paper-check", "re-derive the published examples");
    check->add_option("--out", opts.out, "output path");
    check->add_flag("--strict-paper", opts.strict_paper, "fail on any divergence");
    check->add_flag("--json", opts.json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::Ok : ExitCode::Validation;
    }

    return run_guarded(
        [&]() -> int {
            if (auto env = tolerances_from_env()) opts.tol = *env;
            if (seed_opt->count()) opts.seed = seed;
            if (*density) return cmd_density(load_scenario(scenario, opts.tol), opts, std::cout);
            if (*evolve)
                return cmd_evolve(load_scenario(scenario, opts.tol), load_scenario(scenario1, opts.tol), opts, std::cout);
            if (*mission) return cmd_mission(load_scenario(scenario, opts.tol), opts, std::cout);
            if (*surface) return cmd_surface(load_scenario(scenario, opts.tol), opts, std::cout);
            return cmd_paper_check(opts, std::cout);
        },
        std::cerr);
}
