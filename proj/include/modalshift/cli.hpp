#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "modalshift/config_io.hpp"
#include "modalshift/indicators.hpp"
#include "modalshift/model.hpp"
#include "modalshift/nsga2.hpp"
#include "modalshift/plot.hpp"
#include "modalshift/sweep.hpp"

namespace modalshift {

/// Writes through a temp file and renames, so a failed write never leaves
/// a truncated artifact behind.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            std::remove(tmp.c_str());
            throw std::runtime_error("cannot write '" + tmp + "'");
        }
        out << content;
        out.flush();
        if (!out.good()) {
            out.close();
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed for '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

/// Worker count: the explicit flag wins, then MODALSHIFT_THREADS, then the
/// hardware thread count.
inline int resolve_parallelism(int flag_value) {
    if (flag_value >= 1)
        return flag_value;
    if (const char* env = std::getenv("MODALSHIFT_THREADS")) {
        try {
            std::size_t used = 0;
            const std::string text(env);
            const long parsed = std::stol(text, &used);
            if (used != text.size() || parsed < 1)
                throw std::invalid_argument(text);
            return static_cast<int>(parsed);
        } catch (const std::exception&) {
            throw std::runtime_error(
                "MODALSHIFT_THREADS must be a positive integer, got '" +
                std::string(env) + "'");
        }
    }
    const unsigned hardware = std::thread::hardware_concurrency();
    return hardware > 0 ? static_cast<int>(hardware) : 1;
}

struct RunOptions {
    std::string config_path;
    bool seed_set = false;
    std::uint64_t seed = 0;
    std::string out = "result.csv";
    std::string trace_path;
};

struct SweepOptions {
    std::string config_path;
    std::string sweep_path;
    bool seed_set = false;
    std::uint64_t seed = 0;
    int parallelism = 0; // 0 = unset, fall back to env then hardware
    std::string out = "sweep.csv";
};

struct OptimizeOptions {
    std::string config_path;
    std::string opt_path;
    bool seed_set = false;
    std::uint64_t seed = 0;
    int parallelism = 0;
    std::string out = "front.csv";
    std::string log_path; // optional per-generation convergence log
};

struct PlotOptions {
    std::string input;
    std::string kind = "auto"; // auto | sweep | front
    std::string out = "plot.svg";
};

inline int cmd_run(const RunOptions& options) {
    try {
        SimulationConfig config = options.config_path.empty()
                                      ? default_config()
                                      : load_config(options.config_path);
        if (options.seed_set)
            config.seed = options.seed;
        const RunOutput output = run(config);

        std::ostringstream result;
        write_result_csv(result, output.result);
        write_file_atomic(options.out, result.str());
        if (!options.trace_path.empty()) {
            std::ostringstream trace;
            write_trace_csv(trace, output.state.traces);
            write_file_atomic(options.trace_path, trace.str());
        }
        return 0;
    } catch (const std::exception& error) {
        std::cerr << "modalshift run: " << error.what() << '\n';
        return 1;
    }
}

inline int cmd_sweep(const SweepOptions& options) {
    try {
        const SimulationConfig base = options.config_path.empty()
                                          ? default_config()
                                          : load_config(options.config_path);
        SweepSpec spec = options.sweep_path.empty()
                             ? default_sweep_spec(base)
                             : load_sweep_spec(options.sweep_path, base);
        if (options.seed_set)
            spec.master_seed = options.seed;
        const int parallelism = resolve_parallelism(options.parallelism);
        const std::vector<SweepRow> rows = run_sweep(spec, parallelism);

        std::ostringstream csv;
        write_sweep_csv(csv, rows);
        write_file_atomic(options.out, csv.str());
        return 0;
    } catch (const std::exception& error) {
        std::cerr << "modalshift sweep: " << error.what() << '\n';
        return 1;
    }
}

inline int cmd_optimize(const OptimizeOptions& options) {
    try {
        // Without an explicit config the optimizer targets the congested
        // scenario, which is where the congestion trade-off lives.
        const SimulationConfig base = options.config_path.empty()
                                          ? congested_config()
                                          : load_config(options.config_path);
        OptimizeSpec spec;
        if (options.opt_path.empty()) {
            spec.base = base;
            validated_optimize(spec);
        } else {
            spec = load_optimize_spec(options.opt_path, base);
        }
        if (options.seed_set)
            spec.master_seed = options.seed;
        const int parallelism = resolve_parallelism(options.parallelism);

        std::ostringstream log;
        GenerationCallback on_generation;
        if (!options.log_path.empty()) {
            log << "generation,front_size,best_f1,best_f2\n";
            on_generation = [&log](int generation, const std::vector<Individual>& pop) {
                int front_size = 0;
                double best_f1 = std::numeric_limits<double>::infinity();
                double best_f2 = std::numeric_limits<double>::infinity();
                for (const Individual& individual : pop) {
                    if (individual.rank == 0)
                        ++front_size;
                    best_f1 = std::min(best_f1, individual.objectives[0]);
                    best_f2 = std::min(best_f2, individual.objectives[1]);
                }
                log << generation << ',' << front_size << ',' << format_double(best_f1)
                    << ',' << format_double(best_f2) << '\n';
            };
        }

        const std::vector<Individual> front =
            nsga2(spec, make_simulator_objective(spec), parallelism, on_generation);

        std::ostringstream csv;
        write_front_csv(csv, front);
        write_file_atomic(options.out, csv.str());
        if (!options.log_path.empty())
            write_file_atomic(options.log_path, log.str());
        return 0;
    } catch (const std::exception& error) {
        std::cerr << "modalshift optimize: " << error.what() << '\n';
        return 1;
    }
}

inline int cmd_plot(const PlotOptions& options) {
    try {
        std::ifstream in(options.input, std::ios::binary);
        if (!in)
            throw std::runtime_error("cannot open '" + options.input + "'");
        const std::vector<std::vector<std::string>> rows = read_csv(in);
        if (rows.empty())
            throw std::runtime_error("'" + options.input + "' is empty");

        std::string kind = options.kind;
        if (kind == "auto")
            kind = detect_plot_kind(rows[0]);
        std::string svg;
        if (kind == "sweep")
            svg = render_sweep_svg(rows);
        else if (kind == "front")
            svg = render_front_svg(rows);
        else
            throw std::runtime_error("unknown plot kind '" + kind + "'");
        write_file_atomic(options.out, svg);
        return 0;
    } catch (const std::exception& error) {
        std::cerr << "modalshift plot: " << error.what() << '\n';
        return 1;
    }
}

} // namespace modalshift
