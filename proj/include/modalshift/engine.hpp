#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "modalshift/model.hpp"
#include "modalshift/rng.hpp"

namespace modalshift {

enum class UserPhase : std::uint8_t {
    WaitingPlatform,
    Transferring,
    PendingQueue,
    InQueue,
    InTrain,
    Arrived,
};

struct User {
    std::uint32_t id = 0;
    int entry_time = 0;
    ModeId mode = ModeId::Rer; // current mode; the shift target once shifted
    UserPhase phase = UserPhase::WaitingPlatform;
    int remaining = 0;   // transfer or queue countdown, minutes
    int arrival_time = -1;
    int train_id = -1;
    bool shifted = false;
};

/// slot == kStationSlot while boarding, 0..segment_slots-1 on the segment,
/// segment_slots at the terminus.
inline constexpr int kStationSlot = -1;

struct Train {
    int id = 0;
    int slot = kStationSlot;
    int dwell = 0;         // boarding minutes spent at the station
    bool departing = false; // finished boarding, waiting for the first slot
    std::vector<std::uint32_t> passengers;
};

struct ArrivedTrip {
    std::uint32_t user_id;
    int entry_time;
    int arrival_time;
};

/// End-of-step occupancy snapshot, one row per simulated minute.
struct StepTrace {
    int platform = 0;
    int rer_onboard = 0;
    std::array<int, 5> alt_occupancy{}; // queue + pending, kAlternativeModes order
    int arrived_total = 0;
};

struct Counters {
    std::int64_t created_total = 0;
    std::int64_t created_rer = 0;
    std::int64_t shifted = 0;
    std::int64_t reshifted = 0;
    std::int64_t boarded = 0;
    std::int64_t alighted = 0;
};

/// Independent draw streams per randomness source, so changing one demand
/// stream (e.g. main-mode arrivals) leaves the others bit-identical.
struct EngineRng {
    std::array<Rng, kModeCount> arrivals;
    Rng choice; // per-user shift decision
    Rng target; // alternative-mode pick
};

struct SimState {
    int clock = 0;
    std::vector<User> users;
    std::vector<std::uint32_t> platform;     // FIFO by entry
    std::vector<std::uint32_t> transferring; // in shift order
    std::array<std::deque<std::uint32_t>, kModeCount> pending;
    std::array<std::deque<std::uint32_t>, kModeCount> queues;
    std::vector<Train> trains;
    int due_trains = 0; // released but not yet able to enter the station
    int next_train_id = 0;
    int boarded_this_step = 0;
    std::vector<ArrivedTrip> arrived;
    std::vector<StepTrace> traces;
    Counters counters;
    EngineRng rng;

    // Audit mode: when enabled, invariants are checked at every phase
    // boundary and failures recorded rather than thrown.
    bool audit = false;
    std::int64_t audit_checks = 0;
    std::vector<std::string> audit_failures;
};

namespace detail {

inline void audit_fail(SimState& state, const std::string& message) {
    if (state.audit_failures.size() < 32)
        state.audit_failures.push_back("t=" + std::to_string(state.clock) + ": " + message);
    else
        state.audit_failures.back() = "...more failures suppressed";
}

inline void audit_conservation(SimState& state, const char* phase) {
    if (!state.audit)
        return;
    ++state.audit_checks;
    std::int64_t accounted = static_cast<std::int64_t>(state.platform.size()) +
                             static_cast<std::int64_t>(state.transferring.size()) +
                             static_cast<std::int64_t>(state.arrived.size());
    for (int m = 0; m < kModeCount; ++m)
        accounted += static_cast<std::int64_t>(state.pending[m].size()) +
                     static_cast<std::int64_t>(state.queues[m].size());
    for (const Train& train : state.trains)
        accounted += static_cast<std::int64_t>(train.passengers.size());
    if (accounted != state.counters.created_total)
        audit_fail(state, std::string(phase) + ": accounted " + std::to_string(accounted) +
                              " != created " + std::to_string(state.counters.created_total));
}

inline void audit_end_of_step(SimState& state, const SimulationConfig& config) {
    if (!state.audit)
        return;
    ++state.audit_checks;
    for (ModeId m : kAlternativeModes) {
        if (static_cast<int>(state.queues[mode_index(m)].size()) >
            config.mode(m).queue_capacity)
            audit_fail(state, std::string(mode_name(m)) + " queue above capacity");
    }
    int station_trains = 0;
    std::vector<int> seen_slots;
    for (const Train& train : state.trains) {
        if (train.slot == kStationSlot)
            ++station_trains;
        else if (std::find(seen_slots.begin(), seen_slots.end(), train.slot) !=
                 seen_slots.end())
            audit_fail(state, "two trains in slot " + std::to_string(train.slot));
        else
            seen_slots.push_back(train.slot);
        if (static_cast<int>(train.passengers.size()) > config.service.train_capacity)
            audit_fail(state, "train above capacity");
    }
    if (station_trains > 1)
        audit_fail(state, "more than one train at the station");
    if (state.boarded_this_step > config.service.boarding_rate)
        audit_fail(state, "boarded more than boarding_rate in one step");
}

inline Train* station_train(SimState& state) {
    for (Train& train : state.trains)
        if (train.slot == kStationSlot)
            return &train;
    return nullptr;
}

inline bool slot_occupied(const SimState& state, int slot) {
    for (const Train& train : state.trains)
        if (train.slot == slot)
            return true;
    return false;
}

inline std::uint32_t create_user(SimState& state, ModeId mode) {
    const auto id = static_cast<std::uint32_t>(state.users.size());
    User user;
    user.id = id;
    user.entry_time = state.clock;
    user.mode = mode;
    user.phase = mode == ModeId::Rer ? UserPhase::WaitingPlatform : UserPhase::PendingQueue;
    state.users.push_back(user);
    ++state.counters.created_total;
    if (mode == ModeId::Rer)
        ++state.counters.created_rer;
    return id;
}

inline void begin_transfer(SimState& state, const SimulationConfig& config, User& user,
                           ModeId target) {
    user.mode = target;
    user.phase = UserPhase::Transferring;
    user.remaining = config.transfer_time;
    user.shifted = true;
    state.transferring.push_back(user.id);
}

} // namespace detail

/// Minutes until a train can next be boarded, as perceived from the
/// platform: 0 while a train is boarding (or one is released and waiting to
/// enter), otherwise the time to the next scheduled release. Always < the
/// train interval.
inline int minutes_to_next_train(SimState& state, const ServiceParams& service) {
    if (const Train* train = detail::station_train(state); train && !train->departing)
        return 0;
    if (state.due_trains > 0)
        return 0;
    return (service.train_interval - state.clock % service.train_interval) %
           service.train_interval;
}

/// Fresh state at minute 0: nobody in the network, no trains on the
/// segment, the first train released at t = 0. Throws ConfigError listing
/// every violated invariant.
inline SimState init_state(const SimulationConfig& config, std::uint64_t seed) {
    validated(config);
    SimState state;
    for (int m = 0; m < kModeCount; ++m)
        state.rng.arrivals[m] = Rng(derive_seed(seed, 1, static_cast<std::uint64_t>(m)));
    state.rng.choice = Rng(derive_seed(seed, 2));
    state.rng.target = Rng(derive_seed(seed, 3));

    double total_rate = 0.0;
    for (const ModeSpec& mode : config.modes)
        total_rate += mode.arrival_rate;
    state.users.reserve(static_cast<std::size_t>(total_rate * config.horizon * 1.1) + 64);
    state.traces.reserve(static_cast<std::size_t>(config.horizon));
    return state;
}

/// Draws this minute's arrivals, mode by mode in the fixed order. Main-mode
/// users join the platform; others queue up behind their mode's entrance.
inline void spawn_arrivals(SimState& state, const SimulationConfig& config) {
    for (int m = 0; m < kModeCount; ++m) {
        const std::uint64_t count =
            state.rng.arrivals[m].poisson(config.modes[m].arrival_rate);
        for (std::uint64_t i = 0; i < count; ++i) {
            const std::uint32_t id = detail::create_user(state, static_cast<ModeId>(m));
            if (static_cast<ModeId>(m) == ModeId::Rer)
                state.platform.push_back(id);
            else
                state.pending[m].push_back(id);
        }
    }
}

/// Every waiting platform user decides whether to abandon the train, in
/// FIFO order, against a congestion level snapshotted at phase start.
/// Shifting users pick an alternative and start their transfer.
inline void evaluate_choices(SimState& state, const SimulationConfig& config) {
    const int wait = minutes_to_next_train(state, config.service);
    if (!state.platform.empty()) {
        const double congestion = perceived_congestion(
            static_cast<int>(state.platform.size()), config.service.platform_capacity);
        std::size_t keep = 0;
        for (std::size_t i = 0; i < state.platform.size(); ++i) {
            const std::uint32_t id = state.platform[i];
            User& user = state.users[id];
            const double tau = perceived_time(state.clock - user.entry_time, wait);
            const double du = delta_utility(config.behavioural, congestion, tau);
            const double p = shift_probability(du, config.shift_convention);
            if (state.rng.choice.bernoulli(p)) {
                const ModeId target = choose_alternative(config.modes, state.rng.target);
                detail::begin_transfer(state, config, user, target);
                ++state.counters.shifted;
            } else {
                state.platform[keep++] = id;
            }
        }
        state.platform.resize(keep);
    }

    // Optional second-chance behaviour: users stuck behind a full queue may
    // abandon that mode the same way, paying the transfer again.
    if (config.allow_reshift) {
        for (ModeId m : kAlternativeModes) {
            auto& pending = state.pending[mode_index(m)];
            if (pending.empty())
                continue;
            const int occupancy = static_cast<int>(pending.size()) +
                                  static_cast<int>(state.queues[mode_index(m)].size());
            const double congestion =
                static_cast<double>(occupancy) / config.mode(m).queue_capacity;
            std::deque<std::uint32_t> kept;
            for (const std::uint32_t id : pending) {
                User& user = state.users[id];
                const double tau = perceived_time(state.clock - user.entry_time, 0);
                const double du = delta_utility(config.behavioural, congestion, tau);
                const double p = shift_probability(du, config.shift_convention);
                if (state.rng.choice.bernoulli(p)) {
                    const ModeId target = choose_alternative(config.modes, state.rng.target);
                    if (target == m) {
                        kept.push_back(id); // drew its own mode: stays put
                        continue;
                    }
                    detail::begin_transfer(state, config, user, target);
                    ++state.counters.reshifted;
                } else {
                    kept.push_back(id);
                }
            }
            pending.swap(kept);
        }
    }
}

/// Station work for this minute: admit a released train if the station is
/// free, board FIFO from the platform at the boarding rate up to train
/// capacity, and alight every train that reached the terminus.
inline void train_phase(SimState& state, const SimulationConfig& config) {
    const ServiceParams& service = config.service;
    state.boarded_this_step = 0;

    if (state.clock % service.train_interval == 0)
        ++state.due_trains;
    if (state.due_trains > 0 && detail::station_train(state) == nullptr) {
        Train train;
        train.id = state.next_train_id++;
        state.trains.push_back(std::move(train));
        --state.due_trains;
    }

    if (Train* train = detail::station_train(state); train && !train->departing) {
        const int room = service.train_capacity - static_cast<int>(train->passengers.size());
        const int available = static_cast<int>(state.platform.size());
        const int count = std::min({service.boarding_rate, room, available});
        for (int i = 0; i < count; ++i) {
            const std::uint32_t id = state.platform[static_cast<std::size_t>(i)];
            User& user = state.users[id];
            user.phase = UserPhase::InTrain;
            user.train_id = train->id;
            train->passengers.push_back(id);
        }
        state.platform.erase(state.platform.begin(), state.platform.begin() + count);
        state.boarded_this_step = count;
        state.counters.boarded += count;
        ++train->dwell;
        if (static_cast<int>(train->passengers.size()) == service.train_capacity ||
            train->dwell >= service.max_dwell)
            train->departing = true;
    }

    for (Train& train : state.trains) {
        if (train.slot != service.segment_slots || train.passengers.empty())
            continue;
        for (const std::uint32_t id : train.passengers) {
            User& user = state.users[id];
            user.phase = UserPhase::Arrived;
            user.arrival_time = state.clock;
            state.arrived.push_back({id, user.entry_time, state.clock});
        }
        state.counters.alighted += static_cast<std::int64_t>(train.passengers.size());
        train.passengers.clear();
    }
}

/// Moves every train one slot toward the terminus where the next slot is
/// free, terminus-nearest first so a platoon advances together. Alighted
/// terminus trains leave the system.
inline void advance_trains(SimState& state, const SimulationConfig& config) {
    const int terminus = config.service.segment_slots;
    std::sort(state.trains.begin(), state.trains.end(),
              [](const Train& a, const Train& b) { return a.slot > b.slot; });
    for (std::size_t i = 0; i < state.trains.size();) {
        Train& train = state.trains[i];
        if (train.slot == terminus && train.passengers.empty()) {
            state.trains.erase(state.trains.begin() + static_cast<std::ptrdiff_t>(i));
            continue;
        }
        if (train.slot == kStationSlot) {
            if (train.departing && !detail::slot_occupied(state, 0))
                train.slot = 0;
        } else if (train.slot < terminus && !detail::slot_occupied(state, train.slot + 1)) {
            ++train.slot;
        }
        ++i;
    }
}

/// Queue tick for every alternative mode in the fixed order: riders count
/// down and leave on reaching the far end, finished transfers line up, and
/// the line is admitted while the queue has room.
inline void advance_mode_queues(SimState& state, const SimulationConfig& config) {
    // Transfers tick once globally; completions are handed to their target
    // mode in shift order.
    std::array<std::vector<std::uint32_t>, kModeCount> transfer_done;
    {
        std::size_t keep = 0;
        for (std::size_t i = 0; i < state.transferring.size(); ++i) {
            const std::uint32_t id = state.transferring[i];
            User& user = state.users[id];
            if (user.remaining > 0)
                --user.remaining;
            if (user.remaining == 0) {
                user.phase = UserPhase::PendingQueue;
                transfer_done[mode_index(user.mode)].push_back(id);
            } else {
                state.transferring[keep++] = id;
            }
        }
        state.transferring.resize(keep);
    }

    for (ModeId m : kAlternativeModes) {
        const int index = mode_index(m);
        auto& queue = state.queues[index];
        auto& pending = state.pending[index];

        for (const std::uint32_t id : queue)
            --state.users[id].remaining;
        while (!queue.empty() && state.users[queue.front()].remaining == 0) {
            const std::uint32_t id = queue.front();
            queue.pop_front();
            User& user = state.users[id];
            user.phase = UserPhase::Arrived;
            user.arrival_time = state.clock;
            state.arrived.push_back({id, user.entry_time, state.clock});
        }

        for (const std::uint32_t id : transfer_done[index])
            pending.push_back(id);

        const int capacity = config.mode(m).queue_capacity;
        while (static_cast<int>(queue.size()) < capacity && !pending.empty()) {
            const std::uint32_t id = pending.front();
            pending.pop_front();
            User& user = state.users[id];
            user.phase = UserPhase::InQueue;
            user.remaining = config.mode(m).traversal_time;
            queue.push_back(id);
        }
    }
}

/// One simulated minute: arrivals, platform choices, station work, train
/// movement, mode queues, then the occupancy trace row.
inline void step(SimState& state, const SimulationConfig& config) {
    spawn_arrivals(state, config);
    detail::audit_conservation(state, "spawn_arrivals");
    evaluate_choices(state, config);
    detail::audit_conservation(state, "evaluate_choices");
    train_phase(state, config);
    detail::audit_conservation(state, "train_phase");
    advance_trains(state, config);
    detail::audit_conservation(state, "advance_trains");
    advance_mode_queues(state, config);
    detail::audit_conservation(state, "advance_mode_queues");
    detail::audit_end_of_step(state, config);

    StepTrace trace;
    trace.platform = static_cast<int>(state.platform.size());
    for (const Train& train : state.trains)
        trace.rer_onboard += static_cast<int>(train.passengers.size());
    for (std::size_t a = 0; a < kAlternativeModes.size(); ++a) {
        const int index = mode_index(kAlternativeModes[a]);
        trace.alt_occupancy[a] = static_cast<int>(state.queues[index].size()) +
                                 static_cast<int>(state.pending[index].size());
    }
    trace.arrived_total = static_cast<int>(state.arrived.size());
    state.traces.push_back(trace);
    ++state.clock;
}

/// Runs the clock from the state's current minute to the horizon.
inline void run_steps(SimState& state, const SimulationConfig& config) {
    while (state.clock < config.horizon)
        step(state, config);
}

} // namespace modalshift
