#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "modalshift/rng.hpp"

namespace modalshift {

/// Transport modes on the simulated segment. Rer is the main mode (full
/// train dynamics); the five others are alternatives simulated as
/// capacity-constrained queues. The enumeration order is the canonical
/// iteration order everywhere randomness or output is involved.
enum class ModeId : int { Rer = 0, Metro, Bus, Taxi, Bike, Walk };

inline constexpr int kModeCount = 6;
inline constexpr std::array<ModeId, 5> kAlternativeModes = {
    ModeId::Metro, ModeId::Bus, ModeId::Taxi, ModeId::Bike, ModeId::Walk};

inline constexpr int mode_index(ModeId m) noexcept { return static_cast<int>(m); }

inline const char* mode_name(ModeId m) noexcept {
    switch (m) {
    case ModeId::Rer: return "rer";
    case ModeId::Metro: return "metro";
    case ModeId::Bus: return "bus";
    case ModeId::Taxi: return "taxi";
    case ModeId::Bike: return "bike";
    case ModeId::Walk: return "walk";
    }
    return "?";
}

/// Sensitivity of waiting users to perceived congestion (per unit of
/// normalized platform occupancy) and to perceived time (per minute).
/// Either sign is meaningful; sweeps cover both.
struct BehaviouralParams {
    double beta_c = 0.0;
    double beta_tau = 0.0;

    bool operator==(const BehaviouralParams&) const = default;
};

/// Which probability the logistic choice maps to. `Complement` (default)
/// reads the utility difference so that larger values mean more shifting:
/// p_shift = 1/(1+exp(-dU)). `Literal` uses 1/(1+exp(dU)) as the shift
/// probability directly, for sensitivity checks of the opposite reading.
enum class ShiftConvention { Complement, Literal };

struct ModeSpec {
    int traversal_time = 1;    // minutes to cross the segment on this mode
    int queue_capacity = 1;    // users simultaneously in the mode queue
    double arrival_rate = 0.0; // users/minute entering on this mode
    double shift_share = 0.0;  // nested choice probability once a shift is decided

    bool operator==(const ModeSpec&) const = default;
};

struct ServiceParams {
    int train_interval = 5;       // minutes between consecutive train releases
    int train_capacity = 2600;    // max users on board one train
    int boarding_rate = 1000;     // users boarding per minute while at station
    int max_dwell = 2;            // minutes a train boards before departing
    int segment_slots = 4;        // segment length in one-minute slots
    int platform_capacity = 2000; // normalization constant for perceived congestion

    bool operator==(const ServiceParams&) const = default;
};

struct SimulationConfig {
    BehaviouralParams behavioural;
    ServiceParams service;
    std::array<ModeSpec, kModeCount> modes{};
    int horizon = 240;      // minutes simulated
    int transfer_time = 5;  // minutes to move between modes after a shift
    std::uint64_t seed = 0;
    ShiftConvention shift_convention = ShiftConvention::Complement;
    bool allow_reshift = false;          // blocked shifted users may pick another mode
    bool demand_weighted_other = false;  // weight other-mode congestion by arrival rates

    const ModeSpec& mode(ModeId m) const { return modes[mode_index(m)]; }
    ModeSpec& mode(ModeId m) { return modes[mode_index(m)]; }

    bool operator==(const SimulationConfig&) const = default;
};

/// Defaults: service values follow the real-world segment (1000 users/min
/// boarding, 2-minute dwell, 4-minute segment, 100 users/min main-mode
/// demand, 5-minute transfers); alternative-mode traversal times, arrival
/// rates and nested shares are plausible uncongested values for the same
/// corridor and are meant to be overridden per scenario.
inline SimulationConfig default_config() {
    SimulationConfig config;
    config.mode(ModeId::Rer) = {4, 2000, 100.0, 0.0};
    config.mode(ModeId::Metro) = {10, 3500, 40.0, 0.55};
    config.mode(ModeId::Bus) = {25, 300, 10.0, 0.20};
    config.mode(ModeId::Taxi) = {15, 50, 2.0, 0.05};
    config.mode(ModeId::Bike) = {20, 200, 5.0, 0.10};
    config.mode(ModeId::Walk) = {60, 10000, 3.0, 0.10};
    return config;
}

/// The disrupted scenario used for optimization runs: reduced train
/// capacity with a stretched interval, main-mode demand at 100 users/min.
inline SimulationConfig congested_config() {
    SimulationConfig config = default_config();
    config.service.train_capacity = 500;
    config.service.train_interval = 5;
    return config;
}

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Every violated invariant, one message per violation; empty when valid.
inline std::vector<std::string> validate_config(const SimulationConfig& config) {
    std::vector<std::string> violations;
    auto require = [&](bool ok, const std::string& message) {
        if (!ok)
            violations.push_back(message);
    };

    require(std::isfinite(config.behavioural.beta_c), "behaviour.beta_c must be finite");
    require(std::isfinite(config.behavioural.beta_tau), "behaviour.beta_tau must be finite");
    require(config.horizon >= 1, "sim.horizon must be >= 1");
    require(config.transfer_time >= 0, "sim.transfer_time must be >= 0");

    const ServiceParams& s = config.service;
    require(s.train_interval >= 1, "service.train_interval must be >= 1");
    require(s.train_capacity >= 1, "service.train_capacity must be >= 1");
    require(s.boarding_rate >= 1, "service.boarding_rate must be >= 1");
    require(s.max_dwell >= 1, "service.max_dwell must be >= 1");
    require(s.segment_slots >= 1, "service.segment_slots must be >= 1");
    require(s.platform_capacity >= 1, "service.platform_capacity must be >= 1");

    double share_sum = 0.0;
    for (int i = 0; i < kModeCount; ++i) {
        const ModeSpec& m = config.modes[i];
        const std::string prefix = std::string("modes.") + mode_name(static_cast<ModeId>(i));
        require(m.traversal_time >= 1, prefix + ".traversal_time must be >= 1");
        require(m.queue_capacity >= 1, prefix + ".queue_capacity must be >= 1");
        require(m.arrival_rate >= 0.0 && std::isfinite(m.arrival_rate),
                prefix + ".arrival_rate must be finite and >= 0");
        require(m.shift_share >= 0.0 && m.shift_share <= 1.0,
                prefix + ".shift_share must be in [0, 1]");
        if (static_cast<ModeId>(i) == ModeId::Rer)
            require(m.shift_share == 0.0, prefix + ".shift_share must be 0 for the main mode");
        else
            share_sum += m.shift_share;
    }
    require(std::abs(share_sum - 1.0) <= 1e-9,
            "modes.*.shift_share of alternatives must sum to 1 (got " +
                std::to_string(share_sum) + ")");
    return violations;
}

/// Throws ConfigError listing every violation; returns the config otherwise.
inline const SimulationConfig& validated(const SimulationConfig& config) {
    const std::vector<std::string> violations = validate_config(config);
    if (!violations.empty()) {
        std::string message = "invalid configuration:";
        for (const std::string& v : violations)
            message += "\n  - " + v;
        throw ConfigError(message);
    }
    return config;
}

/// Platform occupancy normalized by platform capacity. May exceed 1.
inline double perceived_congestion(int waiting_count, int platform_capacity) {
    return static_cast<double>(waiting_count) / static_cast<double>(platform_capacity);
}

/// Time term of the choice utility: minutes already spent on the trip plus
/// minutes until the next train can be boarded. The proportionality
/// constant is 1; beta_tau absorbs any rescaling.
inline double perceived_time(int elapsed, int wait_to_next_train) {
    return static_cast<double>(elapsed + wait_to_next_train);
}

inline double delta_utility(const BehaviouralParams& params, double congestion,
                            double perceived_minutes) {
    return params.beta_c * congestion + params.beta_tau * perceived_minutes;
}

/// Logistic probability of shifting away from the train, increasing in the
/// utility difference. Two-branch form keeps it exact in both tails, so
/// arbitrarily large |delta_u| saturates to 0/1 instead of overflowing.
inline double shift_probability(double delta_u) {
    if (delta_u >= 0.0)
        return 1.0 / (1.0 + std::exp(-delta_u));
    const double e = std::exp(delta_u);
    return e / (1.0 + e);
}

/// Shift probability under the configured convention.
inline double shift_probability(double delta_u, ShiftConvention convention) {
    return shift_probability(convention == ShiftConvention::Complement ? delta_u : -delta_u);
}

/// Cumulative-interval categorical pick over the fixed alternative order,
/// from a uniform draw in [0, 1). Exposed separately so interval boundaries
/// are testable without a generator.
inline ModeId pick_alternative(const std::array<ModeSpec, kModeCount>& modes, double u) {
    double cumulative = 0.0;
    ModeId last_positive = ModeId::Walk;
    for (ModeId m : kAlternativeModes) {
        const double share = modes[mode_index(m)].shift_share;
        if (share <= 0.0)
            continue;
        cumulative += share;
        last_positive = m;
        if (u < cumulative)
            return m;
    }
    // u landed past the accumulated total (shares summing to 1 - eps).
    return last_positive;
}

/// Draws the alternative mode a shifting user moves to. Never returns Rer.
inline ModeId choose_alternative(const std::array<ModeSpec, kModeCount>& modes, Rng& rng) {
    return pick_alternative(modes, rng.next_double());
}

} // namespace modalshift
