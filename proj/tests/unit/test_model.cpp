#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "modalshift/model.hpp"
#include "modalshift/rng.hpp"

using namespace modalshift;

TEST_CASE("default configuration carries the documented values") {
    const SimulationConfig config = default_config();
    CHECK(config.horizon == 240);
    CHECK(config.transfer_time == 5);
    CHECK(config.service.train_interval == 5);
    CHECK(config.service.train_capacity == 2600);
    CHECK(config.service.boarding_rate == 1000);
    CHECK(config.service.max_dwell == 2);
    CHECK(config.service.segment_slots == 4);
    CHECK(config.service.platform_capacity == 2000);
    CHECK(config.mode(ModeId::Rer).arrival_rate == 100.0);
    CHECK(config.mode(ModeId::Rer).shift_share == 0.0);
    CHECK(config.mode(ModeId::Metro).queue_capacity == 3500);
    CHECK(config.mode(ModeId::Metro).traversal_time == 10);
    CHECK(config.mode(ModeId::Metro).shift_share == 0.55);
    CHECK(config.mode(ModeId::Bus).shift_share == 0.20);
    CHECK(config.mode(ModeId::Taxi).shift_share == 0.05);
    CHECK(config.mode(ModeId::Bike).shift_share == 0.10);
    CHECK(config.mode(ModeId::Walk).shift_share == 0.10);
    CHECK(validate_config(config).empty());
}

TEST_CASE("congested scenario differs from the default only in C and I") {
    SimulationConfig expected = default_config();
    expected.service.train_capacity = 500;
    expected.service.train_interval = 5;
    CHECK(congested_config() == expected);
}

TEST_CASE("validation collects every violation") {
    SimulationConfig config = default_config();
    config.horizon = 0;
    config.transfer_time = -1;
    config.service.train_capacity = 0;
    config.modes[mode_index(ModeId::Metro)].shift_share = 1.5;
    const std::vector<std::string> errors = validate_config(config);
    CHECK(errors.size() >= 4);
    CHECK_THROWS_AS(validated(config), ConfigError);
}

TEST_CASE("shares summing away from one are rejected and name shift_share") {
    SimulationConfig config = default_config();
    config.modes[mode_index(ModeId::Metro)].shift_share = 0.45; // sums to 0.9
    bool mentions_share = false;
    for (const std::string& error : validate_config(config))
        mentions_share = mentions_share || error.find("shift_share") != std::string::npos;
    CHECK(mentions_share);
    config.modes[mode_index(ModeId::Rer)].shift_share = 0.1;
    CHECK_FALSE(validate_config(config).empty());
}

TEST_CASE("perceived congestion is the plain occupancy ratio") {
    CHECK(perceived_congestion(0, 2000) == 0.0);
    CHECK(perceived_congestion(1000, 2000) == 0.5);
    CHECK(perceived_congestion(3000, 2000) == 1.5);
    // exact scaling invariance: same ratio under k-fold rescaling
    for (int k = 1; k <= 7; ++k)
        CHECK(perceived_congestion(100 * k, 2000 * k) == perceived_congestion(100, 2000));
}

TEST_CASE("perceived time adds elapsed and wait") {
    CHECK(perceived_time(0, 0) == 0.0);
    CHECK(perceived_time(10, 3) == 13.0);
    CHECK(perceived_time(7, 0) == 7.0);
}

TEST_CASE("delta utility equals the direct linear form") {
    CHECK(delta_utility({0.0, 0.0}, 0.8, 12.0) == 0.0);
    CHECK(delta_utility({1.0, 0.0}, 0.5, 99.0) == 0.5);
    CHECK(delta_utility({2.0, 0.1}, 0.5, 10.0) == 2.0);

    Rng rng(404);
    for (int i = 0; i < 1000; ++i) {
        const BehaviouralParams params{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        const double c = rng.uniform(0.0, 3.0);
        const double tau = rng.uniform(0.0, 240.0);
        const double direct = params.beta_c * c + params.beta_tau * tau;
        CHECK(std::abs(delta_utility(params, c, tau) - direct) <= 1e-12);
    }
}

TEST_CASE("delta utility is scale-linear") {
    Rng rng(405);
    for (int i = 0; i < 200; ++i) {
        const BehaviouralParams params{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
        const double c = rng.uniform(0.0, 2.0);
        const double tau = rng.uniform(0.0, 100.0);
        const double a = rng.uniform(0.5, 4.0);
        const BehaviouralParams scaled{params.beta_c / a, params.beta_tau / a};
        CHECK(delta_utility(scaled, a * c, a * tau) ==
              Catch::Approx(delta_utility(params, c, tau)).margin(1e-12));
    }
}

TEST_CASE("shift probability is the logistic of the utility difference") {
    CHECK(shift_probability(0.0) == 0.5);
    CHECK(std::abs(shift_probability(std::log(3.0)) - 0.75) <= 1e-12);
    CHECK(std::abs(shift_probability(-std::log(3.0)) - 0.25) <= 1e-12);
    CHECK(shift_probability(-1000.0) <= 1e-12);
    CHECK(shift_probability(1000.0) >= 1.0 - 1e-12);
    CHECK(std::isfinite(shift_probability(700.0)));
    CHECK(std::isfinite(shift_probability(-700.0)));
}

TEST_CASE("shift probability is strictly increasing and complementary") {
    double previous = 0.0;
    for (double x = -30.0; x <= 30.0; x += 0.25) {
        const double p = shift_probability(x);
        CHECK(p > 0.0);
        CHECK(p < 1.0);
        if (x > -30.0)
            CHECK(p > previous);
        previous = p;
        CHECK(std::abs(shift_probability(x) + shift_probability(-x) - 1.0) <= 1e-12);
    }
}

TEST_CASE("the literal convention mirrors the default one") {
    for (double x = -5.0; x <= 5.0; x += 0.5) {
        CHECK(shift_probability(x, ShiftConvention::Complement) == shift_probability(x));
        CHECK(shift_probability(x, ShiftConvention::Literal) ==
              Catch::Approx(shift_probability(-x)).margin(1e-15));
    }
}

TEST_CASE("alternative choice follows cumulative intervals in fixed order") {
    const auto& modes = default_config().modes;
    // shares: Metro .55, Bus .20, Taxi .05, Bike .10, Walk .10
    CHECK(pick_alternative(modes, 0.0) == ModeId::Metro);
    CHECK(pick_alternative(modes, 0.5499) == ModeId::Metro);
    CHECK(pick_alternative(modes, 0.5501) == ModeId::Bus);
    CHECK(pick_alternative(modes, 0.7499) == ModeId::Bus);
    CHECK(pick_alternative(modes, 0.7501) == ModeId::Taxi);
    CHECK(pick_alternative(modes, 0.8001) == ModeId::Bike);
    CHECK(pick_alternative(modes, 0.9001) == ModeId::Walk);
    CHECK(pick_alternative(modes, 0.999999) == ModeId::Walk);
}

TEST_CASE("degenerate share distribution always picks its single mode") {
    SimulationConfig config = default_config();
    for (ModeId m : kAlternativeModes)
        config.modes[mode_index(m)].shift_share = 0.0;
    config.modes[mode_index(ModeId::Metro)].shift_share = 1.0;
    Rng rng(31);
    for (int i = 0; i < 1000; ++i)
        CHECK(choose_alternative(config.modes, rng) == ModeId::Metro);
}

TEST_CASE("boundary draws split adjacent cumulative intervals") {
    SimulationConfig config = default_config();
    for (ModeId m : kAlternativeModes)
        config.modes[mode_index(m)].shift_share = 0.0;
    config.modes[mode_index(ModeId::Metro)].shift_share = 0.5;
    config.modes[mode_index(ModeId::Bus)].shift_share = 0.5;
    CHECK(pick_alternative(config.modes, 0.4999) == ModeId::Metro);
    CHECK(pick_alternative(config.modes, 0.5001) == ModeId::Bus);
}

TEST_CASE("uniform shares draw each alternative at its frequency") {
    SimulationConfig config = default_config();
    for (ModeId m : kAlternativeModes)
        config.modes[mode_index(m)].shift_share = 0.2;
    Rng rng(37);
    int counts[kModeCount] = {};
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        ++counts[mode_index(choose_alternative(config.modes, rng))];
    CHECK(counts[mode_index(ModeId::Rer)] == 0);
    for (ModeId m : kAlternativeModes) {
        const double frequency = static_cast<double>(counts[mode_index(m)]) / n;
        CHECK(std::abs(frequency - 0.2) < 0.01);
    }
}

TEST_CASE("choose_alternative never returns the main mode") {
    Rng rng(41);
    const auto& modes = default_config().modes;
    for (int i = 0; i < 10000; ++i)
        CHECK(choose_alternative(modes, rng) != ModeId::Rer);
}
