#include <doctest.h>

#include "chemotaxis/errors.hpp"
#include "chemotaxis/export.hpp"
#include "chemotaxis/perception.hpp"
#include "chemotaxis/random.hpp"

#include <cmath>
#include <numbers>

using namespace chemotaxis;
using std::numbers::pi;

namespace {

const ActionSet kActions = ActionSet::constant_speed(3.0, 5.0, 1.0);

PerceptionHistory history_of(const std::vector<double>& c_newest_first, const std::vector<double>& kappa) {
    const int n = static_cast<int>(c_newest_first.size());
    PerceptionHistory h(n, {c_newest_first.back(), kappa.back()});
    for (int i = n - 1; i >= 0; --i) h.push({c_newest_first[static_cast<std::size_t>(i)],
                                             kappa[static_cast<std::size_t>(i)]});
    return h;
}

PerceptionHistory random_history(Rng& rng, int n_t) {
    PerceptionHistory h(n_t, {rng.uniform(0, 40), 3.0});
    for (int i = 0; i < n_t + 3; ++i) {
        h.push({rng.uniform(-10, 60), rng.uniform() < 0.5 ? 3.0 : 5.0, rng.uniform(-0.1, 0.1),
                rng.uniform(-0.1, 0.1), rng.uniform(-0.03, 0.03)});
    }
    return h;
}

}  // namespace

TEST_CASE("history is padded and newest-first") {
    PerceptionHistory h(4, {7.0, 3.0});
    for (int i = 0; i < 4; ++i) CHECK(h.at(i).c == 7.0);
    h.push({8.0, 5.0});
    h.push({9.0, 3.0});
    CHECK(h.newest().c == 9.0);
    CHECK(h.at(1).c == 8.0);
    CHECK(h.at(2).c == 7.0);
    CHECK(h.oldest().c == 7.0);
    h.push({10.0, 3.0});
    h.push({11.0, 3.0});
    CHECK(h.oldest().c == 8.0);
    CHECK_THROWS(h.at(4));
}

TEST_CASE("average period and action interval") {
    CHECK(average_period(kActions, 1.0) == doctest::Approx(pi / 2));
    CHECK(average_period(ActionSet::constant_speed(4, 4, 2), 2.0) == doctest::Approx(pi / 4));
    CHECK(average_period(kActions, 1.1) == doctest::Approx(1.427997).epsilon(1e-6));

    const double t = pi / 2;
    CHECK(action_interval_steps(t, 4, 0.02) == 19);
    CHECK(action_interval_steps(t, 2, 0.02) == 39);
    CHECK(action_interval_steps(t, 8, 0.02) == 9);
    CHECK(action_interval(t, 4, 0.02) == doctest::Approx(0.38));
    CHECK(action_interval(t, 2, 0.02) == doctest::Approx(0.78));
    CHECK(action_interval(t, 8, 0.02) == doctest::Approx(0.18));
    CHECK_THROWS_AS(action_interval_steps(t, 8, 0.5), ConfigError);
}

TEST_CASE("input normalization examples") {
    const auto h = history_of({21.0, 20.0}, {3.0, 5.0});
    const auto in = normalize_input(h, kActions, 1.0, FlowFieldSpec::none(), false);
    REQUIRE(in.size() == 4);
    CHECK(in[0] == doctest::Approx(2.0));
    CHECK(in[1] == -1.0);
    CHECK(in[2] == doctest::Approx(-2.0));
    CHECK(in[3] == 1.0);

    const auto flat = history_of({4.0, 4.0, 4.0, 4.0}, {3, 5, 3, 5});
    for (std::size_t i = 0; i < 8; i += 2) {
        CHECK(normalize_input(flat, kActions, 1.0, FlowFieldSpec::none(), false)[i] == 0.0);
    }

    CHECK_THROWS_AS(normalize_input(h, kActions, 0.0, FlowFieldSpec::none(), false), ConfigError);
}

TEST_CASE("flow-aware input at a Taylor-Green sample point") {
    const auto tg = FlowFieldSpec::taylor_green(0.1, pi / 10);
    // (x, y) = (0, 5) and (5, 0) sampled into one record: u* = (1, -1), omega0* = 0
    const FlowSample a = flow_at(tg, {0, 5});
    const FlowSample b = flow_at(tg, {5, 0});
    const FlowSample f{a.ux, b.uy, a.omega0};
    const PerceptionHistory h(2, {20.0, 3.0, f.ux, f.uy, f.omega0});
    const auto in = normalize_input(h, kActions, 1.0, tg, true);
    REQUIRE(in.size() == 10);
    CHECK(in[2] == doctest::Approx(1.0));
    CHECK(in[3] == doctest::Approx(-1.0));
    CHECK(std::abs(in[4]) < 1e-14);
    CHECK(input_dimension(4, true) == 20);

    CHECK_THROWS_AS(normalize_input(h, kActions, 1.0, FlowFieldSpec::none(), true), ConfigError);
}

TEST_CASE("reward examples") {
    const auto h2 = history_of({4.5, 4.0}, {3, 5});
    CHECK(compute_reward(5.0, h2, kActions, 1.0) == doctest::Approx(3.75));
    CHECK(compute_reward(4.0, h2, kActions, 1.0) == 0.0);

    const auto h4 = history_of({1, 2, 3, 5.0}, {3, 3, 3, 3});
    CHECK(compute_reward(4.5, h4, kActions, 1.0) == doctest::Approx(-0.9375));

    CHECK_THROWS_AS(compute_reward(1.0, h2, ActionSet::constant_speed(3, 3, 1), 1.0), ConfigError);
}

TEST_CASE("normalization and reward identities on random histories") {
    Rng rng(2024);
    const auto tg = FlowFieldSpec::taylor_green(0.1, pi / 10);
    for (int trial = 0; trial < 500; ++trial) {
        const int n_t = 2 << static_cast<int>(rng.below(3));
        const PerceptionHistory h = random_history(rng, n_t);
        const bool aware = rng.uniform() < 0.5;
        const auto in = normalize_input(h, kActions, 1.0, tg, aware);
        const std::size_t stride = aware ? 5 : 2;
        REQUIRE(in.size() == stride * static_cast<std::size_t>(n_t));

        double sum = 0.0;
        for (std::size_t i = 0; i < in.size(); i += stride) {
            sum += in[i];
            CHECK((in[i + 1] == -1.0 || in[i + 1] == 1.0));
            CHECK((in[i + 1] > 0) == (h.at(static_cast<int>(i / stride)).kappa == 5.0));
            if (aware) {
                const auto& rec = h.at(static_cast<int>(i / stride));
                CHECK(std::abs(in[i + 2] - rec.ux / 0.1) < 1e-12);
                CHECK(std::abs(in[i + 4] - rec.omega0 / (0.1 * pi / 10)) < 1e-12);
            }
        }
        CHECK(std::abs(sum) < 1e-12);

        const double c_new = rng.uniform(-10, 60);
        const double r = compute_reward(c_new, h, kActions, 1.0);

        // telescoped mean-difference form
        double new_window = c_new;
        double old_window = 0.0;
        for (int j = 0; j < n_t; ++j) old_window += h.at(j).c;
        for (int j = 0; j < n_t - 1; ++j) new_window += h.at(j).c;
        const double telescoped = (new_window / n_t - old_window / n_t) / (2.0 / 15.0);
        CHECK(std::abs(r - telescoped) < 1e-12);

        // shift invariance
        const double shift = rng.uniform(-100, 100);
        PerceptionHistory shifted(n_t, {h.oldest().c + shift, h.oldest().kappa});
        for (int j = n_t - 2; j >= 0; --j) shifted.push({h.at(j).c + shift, h.at(j).kappa});
        CHECK(std::abs(compute_reward(c_new + shift, shifted, kActions, 1.0) - r) < 1e-12);

        // serialized input vector reads back bit-identically
        CHECK(parse_row(format_row(in)) == in);
    }
}
