#include <cstdint>
#include <string>

#include <CLI11.hpp>

#include "modalshift/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"modal-shift simulator: single runs, grid sweeps, NSGA-II "
                 "optimisation, and plots"};
    app.require_subcommand(1);

    modalshift::RunOptions run_options;
    std::uint64_t run_seed = 0;
    CLI::App* run = app.add_subcommand("run", "simulate once and write one result row");
    run->add_option("--config", run_options.config_path, "model configuration file");
    CLI::Option* run_seed_option =
        run->add_option("--seed", run_seed, "override the configured seed");
    run->add_option("--out", run_options.out, "result CSV path (default result.csv)");
    run->add_option("--trace", run_options.trace_path,
                    "also write a per-minute occupancy trace CSV");

    modalshift::SweepOptions sweep_options;
    std::uint64_t sweep_seed = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter grid with replications");
    sweep->add_option("--config", sweep_options.config_path, "base configuration file");
    sweep->add_option("--sweep", sweep_options.sweep_path, "sweep specification file");
    CLI::Option* sweep_seed_option =
        sweep->add_option("--seed", sweep_seed, "override the sweep master seed");
    sweep->add_option("--parallelism", sweep_options.parallelism, "worker thread count")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_options.out, "sweep CSV path (default sweep.csv)");

    modalshift::OptimizeOptions optimize_options;
    std::uint64_t optimize_seed = 0;
    CLI::App* optimize =
        app.add_subcommand("optimize", "search the congestion trade-off with NSGA-II");
    optimize->add_option("--config", optimize_options.config_path,
                         "base configuration file (default: congested scenario)");
    optimize->add_option("--opt", optimize_options.opt_path,
                         "optimizer specification file");
    CLI::Option* optimize_seed_option =
        optimize->add_option("--seed", optimize_seed, "override the optimizer master seed");
    optimize
        ->add_option("--parallelism", optimize_options.parallelism, "worker thread count")
        ->check(CLI::PositiveNumber);
    optimize->add_option("--out", optimize_options.out,
                         "front CSV path (default front.csv)");
    optimize->add_option("--trace", optimize_options.log_path,
                         "also write a per-generation convergence log CSV");

    modalshift::PlotOptions plot_options;
    CLI::App* plot = app.add_subcommand("plot", "render a sweep or front CSV to SVG");
    plot->add_option("input", plot_options.input, "CSV file to render")->required();
    plot->add_option("--kind", plot_options.kind, "sweep, front, or auto (default)")
        ->check(CLI::IsMember({"auto", "sweep", "front"}));
    plot->add_option("--out", plot_options.out, "SVG path (default plot.svg)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        run_options.seed_set = run_seed_option->count() > 0;
        run_options.seed = run_seed;
        return modalshift::cmd_run(run_options);
    }
    if (sweep->parsed()) {
        sweep_options.seed_set = sweep_seed_option->count() > 0;
        sweep_options.seed = sweep_seed;
        return modalshift::cmd_sweep(sweep_options);
    }
    if (optimize->parsed()) {
        optimize_options.seed_set = optimize_seed_option->count() > 0;
        optimize_options.seed = optimize_seed;
        return modalshift::cmd_optimize(optimize_options);
    }
    return modalshift::cmd_plot(plot_options);
}
