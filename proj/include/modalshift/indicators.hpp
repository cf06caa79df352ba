#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "modalshift/csv.hpp"
#include "modalshift/engine.hpp"
#include "modalshift/model.hpp"

namespace modalshift {

/// Scalar outcome of one simulation run, in result-CSV column order.
struct SimResult {
    std::uint64_t seed = 0;
    double beta_c = 0.0;
    double beta_tau = 0.0;
    int train_interval = 0;
    int train_capacity = 0;
    double avg_travel_time = 0.0; // NaN when nobody completed a trip
    std::array<double, kModeCount> congestion{};
    double avg_congestion_other = 0.0;
    std::int64_t completed = 0;
    std::int64_t uncompleted = 0;
    std::int64_t total_created = 0; // == completed + uncompleted; not a CSV column
};

/// Mean door-to-door minutes over completed trips; NaN if there were none.
inline double average_travel_time(const std::vector<ArrivedTrip>& arrived) {
    if (arrived.empty())
        return std::numeric_limits<double>::quiet_NaN();
    double total = 0.0;
    for (const ArrivedTrip& trip : arrived)
        total += static_cast<double>(trip.arrival_time - trip.entry_time);
    return total / static_cast<double>(arrived.size());
}

/// Time-averaged occupancy over capacity for one mode. The main mode is
/// measured at the platform; alternatives at their queue plus the line
/// waiting to enter it.
inline double mode_congestion(const std::vector<StepTrace>& traces,
                              const SimulationConfig& config, ModeId mode) {
    if (traces.empty())
        return 0.0;
    double total = 0.0;
    if (mode == ModeId::Rer) {
        for (const StepTrace& trace : traces)
            total += static_cast<double>(trace.platform) / config.service.platform_capacity;
    } else {
        std::size_t position = 0;
        for (std::size_t a = 0; a < kAlternativeModes.size(); ++a)
            if (kAlternativeModes[a] == mode)
                position = a;
        for (const StepTrace& trace : traces)
            total += static_cast<double>(trace.alt_occupancy[position]) /
                     config.mode(mode).queue_capacity;
    }
    return total / static_cast<double>(traces.size());
}

inline SimResult summarize(const SimState& state, const SimulationConfig& config,
                           std::uint64_t seed) {
    SimResult result;
    result.seed = seed;
    result.beta_c = config.behavioural.beta_c;
    result.beta_tau = config.behavioural.beta_tau;
    result.train_interval = config.service.train_interval;
    result.train_capacity = config.service.train_capacity;
    result.avg_travel_time = average_travel_time(state.arrived);
    for (int m = 0; m < kModeCount; ++m)
        result.congestion[m] = mode_congestion(state.traces, config, static_cast<ModeId>(m));

    if (config.demand_weighted_other) {
        double weighted = 0.0;
        double rate_total = 0.0;
        for (ModeId m : kAlternativeModes) {
            weighted += result.congestion[mode_index(m)] * config.mode(m).arrival_rate;
            rate_total += config.mode(m).arrival_rate;
        }
        result.avg_congestion_other = rate_total > 0.0 ? weighted / rate_total : 0.0;
    } else {
        double total = 0.0;
        for (ModeId m : kAlternativeModes)
            total += result.congestion[mode_index(m)];
        result.avg_congestion_other = total / static_cast<double>(kAlternativeModes.size());
    }

    result.completed = static_cast<std::int64_t>(state.arrived.size());
    result.total_created = state.counters.created_total;
    result.uncompleted = result.total_created - result.completed;
    return result;
}

struct RunOutput {
    SimResult result;
    SimState state;
};

/// Runs one full simulation under the given seed and reports both the
/// scalar indicators and the final state (for traces and audits).
inline RunOutput run(const SimulationConfig& config, std::uint64_t seed,
                     bool audit = false) {
    RunOutput output;
    output.state = init_state(config, seed);
    output.state.audit = audit;
    run_steps(output.state, config);
    output.result = summarize(output.state, config, seed);
    return output;
}

inline RunOutput run(const SimulationConfig& config) { return run(config, config.seed); }

inline std::string result_csv_header() {
    return "seed,beta_c,beta_tau,train_interval,train_capacity,avg_travel_time,"
           "rer_congestion,metro_congestion,bus_congestion,taxi_congestion,"
           "bike_congestion,walk_congestion,avg_congestion_other,completed,uncompleted";
}

inline std::string result_csv_row(const SimResult& result) {
    std::vector<std::string> cells;
    cells.push_back(std::to_string(result.seed));
    cells.push_back(format_double(result.beta_c));
    cells.push_back(format_double(result.beta_tau));
    cells.push_back(std::to_string(result.train_interval));
    cells.push_back(std::to_string(result.train_capacity));
    cells.push_back(format_double(result.avg_travel_time));
    for (int m = 0; m < kModeCount; ++m)
        cells.push_back(format_double(result.congestion[m]));
    cells.push_back(format_double(result.avg_congestion_other));
    cells.push_back(std::to_string(result.completed));
    cells.push_back(std::to_string(result.uncompleted));
    return join_row(cells);
}

inline void write_result_csv(std::ostream& out, const SimResult& result) {
    out << result_csv_header() << '\n' << result_csv_row(result) << '\n';
}

inline std::string trace_csv_header() {
    return "t,platform,rer_onboard,metro,bus,taxi,bike,walk,arrived";
}

/// One row per simulated minute with end-of-step occupancies and the
/// cumulative completed-trip count.
inline void write_trace_csv(std::ostream& out, const std::vector<StepTrace>& traces) {
    out << trace_csv_header() << '\n';
    for (std::size_t t = 0; t < traces.size(); ++t) {
        const StepTrace& trace = traces[t];
        out << t << ',' << trace.platform << ',' << trace.rer_onboard;
        for (const int occupancy : trace.alt_occupancy)
            out << ',' << occupancy;
        out << ',' << trace.arrived_total << '\n';
    }
}

} // namespace modalshift
