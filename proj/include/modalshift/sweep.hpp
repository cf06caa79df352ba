#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "modalshift/csv.hpp"
#include "modalshift/indicators.hpp"
#include "modalshift/model.hpp"
#include "modalshift/parallel.hpp"
#include "modalshift/rng.hpp"

namespace modalshift {

/// Cartesian grid over the two behavioural coefficients and the two service
/// levers, with stochastic replications per grid point.
struct SweepSpec {
    SimulationConfig base = default_config();
    std::vector<double> beta_c_values;
    std::vector<double> beta_tau_values;
    std::vector<int> capacity_values;
    std::vector<int> interval_values;
    int replications = 10;
    std::uint64_t master_seed = 0;
};

/// Default grid: betas -5..+4 in unit steps, four capacities, six
/// intervals, ten replications (2400 points, 24000 runs).
inline SweepSpec default_sweep_spec(SimulationConfig base = default_config()) {
    SweepSpec spec;
    spec.base = base;
    for (int b = -5; b <= 4; ++b) {
        spec.beta_c_values.push_back(static_cast<double>(b));
        spec.beta_tau_values.push_back(static_cast<double>(b));
    }
    spec.capacity_values = {500, 1000, 1500, 2000};
    spec.interval_values = {2, 3, 4, 5, 8, 10};
    return spec;
}

inline std::vector<std::string> validate_sweep_spec(const SweepSpec& spec) {
    std::vector<std::string> errors = validate_config(spec.base);
    auto require = [&errors](bool ok, const char* message) {
        if (!ok)
            errors.push_back(message);
    };
    require(!spec.beta_c_values.empty(), "sweep.beta_c must list at least one value");
    require(!spec.beta_tau_values.empty(), "sweep.beta_tau must list at least one value");
    require(!spec.capacity_values.empty(),
            "sweep.train_capacity must list at least one value");
    require(!spec.interval_values.empty(),
            "sweep.train_interval must list at least one value");
    for (const double value : spec.beta_c_values)
        require(std::isfinite(value), "sweep.beta_c values must be finite");
    for (const double value : spec.beta_tau_values)
        require(std::isfinite(value), "sweep.beta_tau values must be finite");
    for (const int value : spec.capacity_values)
        require(value >= 1, "sweep.train_capacity values must be >= 1");
    for (const int value : spec.interval_values)
        require(value >= 1, "sweep.train_interval values must be >= 1");
    require(spec.replications >= 1, "sweep.replications must be >= 1");
    return errors;
}

inline const SweepSpec& validated_sweep(const SweepSpec& spec) {
    const std::vector<std::string> errors = validate_sweep_spec(spec);
    if (!errors.empty()) {
        std::string message = "invalid sweep specification:";
        for (const std::string& error : errors)
            message += "\n  - " + error;
        throw ConfigError(message);
    }
    return spec;
}

struct ParamTuple {
    double beta_c = 0.0;
    double beta_tau = 0.0;
    int train_capacity = 0;
    int train_interval = 0;
};

/// Grid order: full cartesian product, beta_c outermost through
/// train_interval innermost, each list in its given order.
inline std::vector<ParamTuple> build_grid(const SweepSpec& spec) {
    validated_sweep(spec);
    std::vector<ParamTuple> grid;
    grid.reserve(spec.beta_c_values.size() * spec.beta_tau_values.size() *
                 spec.capacity_values.size() * spec.interval_values.size());
    for (const double beta_c : spec.beta_c_values)
        for (const double beta_tau : spec.beta_tau_values)
            for (const int capacity : spec.capacity_values)
                for (const int interval : spec.interval_values)
                    grid.push_back({beta_c, beta_tau, capacity, interval});
    return grid;
}

inline SimulationConfig apply_tuple(const SimulationConfig& base, const ParamTuple& tuple) {
    SimulationConfig config = base;
    config.behavioural.beta_c = tuple.beta_c;
    config.behavioural.beta_tau = tuple.beta_tau;
    config.service.train_capacity = tuple.train_capacity;
    config.service.train_interval = tuple.train_interval;
    return config;
}

inline constexpr int kSweepIndicatorCount = 10;

inline const std::array<std::string, kSweepIndicatorCount>& sweep_indicator_names() {
    static const std::array<std::string, kSweepIndicatorCount> names = {
        "avg_travel_time", "rer_congestion",  "metro_congestion", "bus_congestion",
        "taxi_congestion", "bike_congestion", "walk_congestion",  "avg_congestion_other",
        "completed",       "uncompleted",
    };
    return names;
}

inline std::array<double, kSweepIndicatorCount> indicator_values(const SimResult& result) {
    std::array<double, kSweepIndicatorCount> values{};
    values[0] = result.avg_travel_time;
    for (int m = 0; m < kModeCount; ++m)
        values[1 + m] = result.congestion[m];
    values[7] = result.avg_congestion_other;
    values[8] = static_cast<double>(result.completed);
    values[9] = static_cast<double>(result.uncompleted);
    return values;
}

/// One grid point's aggregate: per-indicator mean and sample standard
/// deviation (zero when there is a single replication).
struct SweepRow {
    ParamTuple params;
    int replications = 0;
    std::array<double, kSweepIndicatorCount> mean{};
    std::array<double, kSweepIndicatorCount> sd{};
};

inline SweepRow aggregate_tuple(const ParamTuple& params,
                                const std::vector<SimResult>& results) {
    SweepRow row;
    row.params = params;
    row.replications = static_cast<int>(results.size());
    const double n = static_cast<double>(results.size());
    for (const SimResult& result : results) {
        const std::array<double, kSweepIndicatorCount> values = indicator_values(result);
        for (int i = 0; i < kSweepIndicatorCount; ++i)
            row.mean[i] += values[i];
    }
    for (int i = 0; i < kSweepIndicatorCount; ++i)
        row.mean[i] /= n;
    if (results.size() > 1) {
        for (const SimResult& result : results) {
            const std::array<double, kSweepIndicatorCount> values = indicator_values(result);
            for (int i = 0; i < kSweepIndicatorCount; ++i) {
                const double d = values[i] - row.mean[i];
                row.sd[i] += d * d;
            }
        }
        for (int i = 0; i < kSweepIndicatorCount; ++i)
            row.sd[i] = std::sqrt(row.sd[i] / (n - 1.0));
    }
    return row;
}

/// Runs the whole grid. Every (tuple, replication) pair gets the seed
/// derive_seed(master_seed, tuple_index, replication) and lands in its own
/// result slot, so the output is identical at any parallelism level.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec, int parallelism) {
    const std::vector<ParamTuple> grid = build_grid(spec);
    const std::size_t reps = static_cast<std::size_t>(spec.replications);
    std::vector<SimResult> results(grid.size() * reps);

    parallel_for(results.size(), parallelism, [&](std::size_t task) {
        const std::size_t tuple_index = task / reps;
        const std::size_t replication = task % reps;
        const ParamTuple& tuple = grid[tuple_index];
        const SimulationConfig config = apply_tuple(spec.base, tuple);
        const std::uint64_t seed = derive_seed(spec.master_seed, tuple_index, replication);
        try {
            results[task] = run(config, seed).result;
        } catch (const ConfigError& error) {
            throw ConfigError("grid point " + std::to_string(tuple_index) +
                              " (beta_c=" + format_double(tuple.beta_c) +
                              ", beta_tau=" + format_double(tuple.beta_tau) +
                              ", C=" + std::to_string(tuple.train_capacity) +
                              ", I=" + std::to_string(tuple.train_interval) +
                              "): " + error.what());
        }
    });

    std::vector<SweepRow> rows;
    rows.reserve(grid.size());
    std::vector<SimResult> bucket(reps);
    for (std::size_t t = 0; t < grid.size(); ++t) {
        for (std::size_t r = 0; r < reps; ++r)
            bucket[r] = results[t * reps + r];
        rows.push_back(aggregate_tuple(grid[t], bucket));
    }
    return rows;
}

inline std::string sweep_csv_header() {
    std::string header = "beta_c,beta_tau,train_capacity,train_interval,replications";
    for (const std::string& name : sweep_indicator_names())
        header += "," + name + "_mean," + name + "_sd";
    return header;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << sweep_csv_header() << '\n';
    for (const SweepRow& row : rows) {
        out << format_double(row.params.beta_c) << ',' << format_double(row.params.beta_tau)
            << ',' << row.params.train_capacity << ',' << row.params.train_interval << ','
            << row.replications;
        for (int i = 0; i < kSweepIndicatorCount; ++i)
            out << ',' << format_double(row.mean[i]) << ',' << format_double(row.sd[i]);
        out << '\n';
    }
}

} // namespace modalshift
