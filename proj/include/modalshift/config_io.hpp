#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modalshift/model.hpp"
#include "modalshift/nsga2.hpp"
#include "modalshift/sweep.hpp"

namespace modalshift {
namespace detail {

inline std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
        ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1])))
        --end;
    return text.substr(begin, end - begin);
}

struct FlatEntry {
    int line = 0;
    std::string key;
    std::string value;
};

/// Tokenizes the flat format: one `section.key = value` per line, `#`
/// starting a comment anywhere, blank lines ignored. Malformed lines and
/// duplicate keys go to `errors` with their line number.
inline std::vector<FlatEntry> scan_flat(const std::string& text,
                                        std::vector<std::string>& errors) {
    std::vector<FlatEntry> entries;
    std::set<std::string> seen;
    std::istringstream stream(text);
    std::string line;
    int number = 0;
    while (std::getline(stream, line)) {
        ++number;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::size_t equals = line.find('=');
        if (equals == std::string::npos) {
            errors.push_back("line " + std::to_string(number) +
                             ": expected 'section.key = value'");
            continue;
        }
        FlatEntry entry;
        entry.line = number;
        entry.key = trim(line.substr(0, equals));
        entry.value = trim(line.substr(equals + 1));
        if (entry.key.empty()) {
            errors.push_back("line " + std::to_string(number) + ": empty key");
            continue;
        }
        if (!seen.insert(entry.key).second) {
            errors.push_back("line " + std::to_string(number) + ": duplicate key '" +
                             entry.key + "'");
            continue;
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

inline long long parse_int_value(const std::string& value) {
    std::size_t used = 0;
    long long parsed = 0;
    try {
        parsed = std::stoll(value, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("expected an integer, got '" + value + "'");
    }
    if (used != value.size())
        throw std::runtime_error("expected an integer, got '" + value + "'");
    return parsed;
}

inline std::uint64_t parse_u64_value(const std::string& value) {
    std::size_t used = 0;
    unsigned long long parsed = 0;
    try {
        parsed = std::stoull(value, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("expected an unsigned integer, got '" + value + "'");
    }
    if (used != value.size() || value.find('-') != std::string::npos)
        throw std::runtime_error("expected an unsigned integer, got '" + value + "'");
    return parsed;
}

inline double parse_double_value(const std::string& value) {
    std::size_t used = 0;
    double parsed = 0.0;
    try {
        parsed = std::stod(value, &used);
    } catch (const std::exception&) {
        throw std::runtime_error("expected a number, got '" + value + "'");
    }
    if (used != value.size())
        throw std::runtime_error("expected a number, got '" + value + "'");
    return parsed;
}

inline bool parse_bool_value(const std::string& value) {
    if (value == "true")
        return true;
    if (value == "false")
        return false;
    throw std::runtime_error("expected true or false, got '" + value + "'");
}

inline std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string item = trim(
            comma == std::string::npos ? value.substr(start)
                                       : value.substr(start, comma - start));
        if (item.empty())
            throw std::runtime_error("empty item in list '" + value + "'");
        items.push_back(item);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return items;
}

inline std::vector<double> parse_double_list(const std::string& value) {
    std::vector<double> values;
    for (const std::string& item : split_list(value))
        values.push_back(parse_double_value(item));
    return values;
}

inline std::vector<int> parse_int_list(const std::string& value) {
    std::vector<int> values;
    for (const std::string& item : split_list(value))
        values.push_back(static_cast<int>(parse_int_value(item)));
    return values;
}

inline bool mode_from_name(const std::string& name, ModeId& mode) {
    for (int m = 0; m < kModeCount; ++m) {
        if (name == mode_name(static_cast<ModeId>(m))) {
            mode = static_cast<ModeId>(m);
            return true;
        }
    }
    return false;
}

/// Applies one config key. Throws std::runtime_error on an unknown key or
/// unparseable value; the caller adds the line number.
inline void apply_config_key(SimulationConfig& config, const std::string& key,
                             const std::string& value) {
    auto as_int = [&value] { return static_cast<int>(parse_int_value(value)); };

    if (key == "behaviour.beta_c") {
        config.behavioural.beta_c = parse_double_value(value);
    } else if (key == "behaviour.beta_tau") {
        config.behavioural.beta_tau = parse_double_value(value);
    } else if (key == "service.train_interval") {
        config.service.train_interval = as_int();
    } else if (key == "service.train_capacity") {
        config.service.train_capacity = as_int();
    } else if (key == "service.boarding_rate") {
        config.service.boarding_rate = as_int();
    } else if (key == "service.max_dwell") {
        config.service.max_dwell = as_int();
    } else if (key == "service.segment_slots") {
        config.service.segment_slots = as_int();
    } else if (key == "service.platform_capacity") {
        config.service.platform_capacity = as_int();
    } else if (key == "sim.horizon") {
        config.horizon = as_int();
    } else if (key == "sim.transfer_time") {
        config.transfer_time = as_int();
    } else if (key == "sim.seed") {
        config.seed = parse_u64_value(value);
    } else if (key == "sim.shift_convention") {
        if (value == "complement")
            config.shift_convention = ShiftConvention::Complement;
        else if (value == "literal")
            config.shift_convention = ShiftConvention::Literal;
        else
            throw std::runtime_error("expected complement or literal, got '" + value + "'");
    } else if (key == "sim.allow_reshift") {
        config.allow_reshift = parse_bool_value(value);
    } else if (key == "sim.demand_weighted_other") {
        config.demand_weighted_other = parse_bool_value(value);
    } else if (key.rfind("modes.", 0) == 0) {
        const std::size_t dot = key.find('.', 6);
        if (dot == std::string::npos)
            throw std::runtime_error("unknown key '" + key + "'");
        ModeId mode_id{};
        if (!mode_from_name(key.substr(6, dot - 6), mode_id))
            throw std::runtime_error("unknown mode in key '" + key + "'");
        ModeSpec& mode = config.modes[mode_index(mode_id)];
        const std::string field = key.substr(dot + 1);
        if (field == "traversal_time")
            mode.traversal_time = as_int();
        else if (field == "queue_capacity")
            mode.queue_capacity = as_int();
        else if (field == "arrival_rate")
            mode.arrival_rate = parse_double_value(value);
        else if (field == "shift_share")
            mode.shift_share = parse_double_value(value);
        else
            throw std::runtime_error("unknown key '" + key + "'");
    } else {
        throw std::runtime_error("unknown key '" + key + "'");
    }
}

inline void throw_if_errors(const std::vector<std::string>& errors, const char* what) {
    if (errors.empty())
        return;
    std::string message = std::string("cannot parse ") + what + ":";
    for (const std::string& error : errors)
        message += "\n  - " + error;
    throw ConfigError(message);
}

/// Shortest decimal form that parses back to exactly the same double, so
/// serialized configs round-trip bit for bit.
inline std::string format_exact(double value) {
    char buffer[64];
    // integral values read best undecorated ("100" rather than "1e+02")
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        std::snprintf(buffer, sizeof(buffer), "%.0f", value);
        return buffer;
    }
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
        if (std::strtod(buffer, nullptr) == value)
            break;
    }
    return buffer;
}

} // namespace detail

/// Parses the flat key-value format into a full configuration: missing
/// keys keep their defaults, unknown keys are rejected, and the result is
/// validated. Errors carry line numbers.
inline SimulationConfig parse_config(const std::string& text) {
    SimulationConfig config = default_config();
    std::vector<std::string> errors;
    const std::vector<detail::FlatEntry> entries = detail::scan_flat(text, errors);
    for (const detail::FlatEntry& entry : entries) {
        try {
            detail::apply_config_key(config, entry.key, entry.value);
        } catch (const std::runtime_error& error) {
            errors.push_back("line " + std::to_string(entry.line) + ": " + error.what());
        }
    }
    detail::throw_if_errors(errors, "configuration");
    validated(config);
    return config;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad())
        throw ConfigError("cannot read '" + path + "'");
    return buffer.str();
}

inline SimulationConfig load_config(const std::string& path) {
    try {
        return parse_config(read_text_file(path));
    } catch (const ConfigError& error) {
        throw ConfigError(path + ": " + error.what());
    }
}

/// Canonical text form listing every key; parses back to an equal config.
inline std::string serialize_config(const SimulationConfig& config) {
    using detail::format_exact;
    std::ostringstream out;
    out << "# behavioural coefficients\n";
    out << "behaviour.beta_c = " << format_exact(config.behavioural.beta_c) << '\n';
    out << "behaviour.beta_tau = " << format_exact(config.behavioural.beta_tau) << '\n';
    out << '\n';
    out << "# train service\n";
    out << "service.train_interval = " << config.service.train_interval << '\n';
    out << "service.train_capacity = " << config.service.train_capacity << '\n';
    out << "service.boarding_rate = " << config.service.boarding_rate << '\n';
    out << "service.max_dwell = " << config.service.max_dwell << '\n';
    out << "service.segment_slots = " << config.service.segment_slots << '\n';
    out << "service.platform_capacity = " << config.service.platform_capacity << '\n';
    out << '\n';
    out << "# run control\n";
    out << "sim.horizon = " << config.horizon << '\n';
    out << "sim.transfer_time = " << config.transfer_time << '\n';
    out << "sim.seed = " << config.seed << '\n';
    out << "sim.shift_convention = "
        << (config.shift_convention == ShiftConvention::Complement ? "complement"
                                                                   : "literal")
        << '\n';
    out << "sim.allow_reshift = " << (config.allow_reshift ? "true" : "false") << '\n';
    out << "sim.demand_weighted_other = "
        << (config.demand_weighted_other ? "true" : "false") << '\n';
    for (int m = 0; m < kModeCount; ++m) {
        const char* name = mode_name(static_cast<ModeId>(m));
        const ModeSpec& mode = config.modes[m];
        out << '\n';
        out << "modes." << name << ".traversal_time = " << mode.traversal_time << '\n';
        out << "modes." << name << ".queue_capacity = " << mode.queue_capacity << '\n';
        out << "modes." << name << ".arrival_rate = " << format_exact(mode.arrival_rate)
            << '\n';
        out << "modes." << name << ".shift_share = " << format_exact(mode.shift_share)
            << '\n';
    }
    return out.str();
}

/// Sweep file: only sweep.* keys; everything else about the model comes
/// from the base configuration.
inline SweepSpec parse_sweep_spec(const std::string& text, const SimulationConfig& base) {
    SweepSpec spec = default_sweep_spec(base);
    std::vector<std::string> errors;
    const std::vector<detail::FlatEntry> entries = detail::scan_flat(text, errors);
    for (const detail::FlatEntry& entry : entries) {
        try {
            if (entry.key == "sweep.beta_c")
                spec.beta_c_values = detail::parse_double_list(entry.value);
            else if (entry.key == "sweep.beta_tau")
                spec.beta_tau_values = detail::parse_double_list(entry.value);
            else if (entry.key == "sweep.train_capacity")
                spec.capacity_values = detail::parse_int_list(entry.value);
            else if (entry.key == "sweep.train_interval")
                spec.interval_values = detail::parse_int_list(entry.value);
            else if (entry.key == "sweep.replications")
                spec.replications = static_cast<int>(detail::parse_int_value(entry.value));
            else if (entry.key == "sweep.master_seed")
                spec.master_seed = detail::parse_u64_value(entry.value);
            else
                throw std::runtime_error("unknown key '" + entry.key + "'");
        } catch (const std::runtime_error& error) {
            errors.push_back("line " + std::to_string(entry.line) + ": " + error.what());
        }
    }
    detail::throw_if_errors(errors, "sweep specification");
    validated_sweep(spec);
    return spec;
}

inline SweepSpec load_sweep_spec(const std::string& path, const SimulationConfig& base) {
    try {
        return parse_sweep_spec(read_text_file(path), base);
    } catch (const ConfigError& error) {
        throw ConfigError(path + ": " + error.what());
    }
}

/// Optimizer file: only opt.* keys, applied over the documented defaults.
inline OptimizeSpec parse_optimize_spec(const std::string& text,
                                        const SimulationConfig& base) {
    OptimizeSpec spec;
    spec.base = base;
    std::vector<std::string> errors;
    const std::vector<detail::FlatEntry> entries = detail::scan_flat(text, errors);
    for (const detail::FlatEntry& entry : entries) {
        try {
            if (entry.key == "opt.population")
                spec.population = static_cast<int>(detail::parse_int_value(entry.value));
            else if (entry.key == "opt.generations")
                spec.generations = static_cast<int>(detail::parse_int_value(entry.value));
            else if (entry.key == "opt.replications")
                spec.replications = static_cast<int>(detail::parse_int_value(entry.value));
            else if (entry.key == "opt.beta_c_low")
                spec.lower[0] = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.beta_c_high")
                spec.upper[0] = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.beta_tau_low")
                spec.lower[1] = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.beta_tau_high")
                spec.upper[1] = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.crossover_probability")
                spec.crossover_probability = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.eta_c")
                spec.eta_c = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.mutation_probability")
                spec.mutation_probability = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.eta_m")
                spec.eta_m = detail::parse_double_value(entry.value);
            else if (entry.key == "opt.master_seed")
                spec.master_seed = detail::parse_u64_value(entry.value);
            else
                throw std::runtime_error("unknown key '" + entry.key + "'");
        } catch (const std::runtime_error& error) {
            errors.push_back("line " + std::to_string(entry.line) + ": " + error.what());
        }
    }
    detail::throw_if_errors(errors, "optimizer specification");
    validated_optimize(spec);
    return spec;
}

inline OptimizeSpec load_optimize_spec(const std::string& path,
                                       const SimulationConfig& base) {
    try {
        return parse_optimize_spec(read_text_file(path), base);
    } catch (const ConfigError& error) {
        throw ConfigError(path + ": " + error.what());
    }
}

} // namespace modalshift
