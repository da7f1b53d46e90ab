#include <doctest.h>

#include "oracles.hpp"

#include "chemotaxis/errors.hpp"
#include "chemotaxis/policies.hpp"

#include <cmath>
#include <numbers>

using namespace chemotaxis;

namespace {

const ActionSet kActions = ActionSet::constant_speed(3.0, 5.0, 1.0);

PerceptionHistory window(const std::vector<double>& newest_first) {
    PerceptionHistory h(static_cast<int>(newest_first.size()), {newest_first.back(), 3.0});
    for (auto it = newest_first.rbegin() + 1; it != newest_first.rend(); ++it) h.push({*it, 3.0});
    return h;
}

}  // namespace

TEST_CASE("argmax breaks ties toward the lower index") {
    CHECK(argmax(std::vector<double>{1.0, 3.0}) == 1);
    CHECK(argmax(std::vector<double>{2.0, 2.0}) == 0);
    CHECK(argmax(std::vector<double>{0.0, 0.0, 0.0}) == 0);
}

TEST_CASE("epsilon-greedy limits") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const auto d = epsilon_greedy(std::vector<double>{1.0, 3.0}, 0.0, rng);
        CHECK(d.action == 1);
        CHECK_FALSE(d.exploratory);
        REQUIRE(d.q_values.has_value());
        CHECK((*d.q_values)[1] == 3.0);
    }
    CHECK_THROWS(epsilon_greedy(std::vector<double>{1.0}, 0.1, rng));
    CHECK_THROWS(epsilon_greedy(std::vector<double>{1.0, 2.0}, 1.5, rng));
}

TEST_CASE("epsilon-greedy frequencies match the selection probabilities") {
    for (double eps : {0.1, 0.5, 1.0}) {
        Rng rng(42);
        const int draws = 100000;
        int greedy_picks = 0;
        for (int i = 0; i < draws; ++i) {
            greedy_picks += epsilon_greedy(std::vector<double>{0.2, -0.4}, eps, rng).action == 0;
        }
        const double p = eps / 2.0 + 1.0 - eps;
        const double sigma = std::sqrt(draws * p * (1.0 - p));
        CAPTURE(eps);
        CHECK(std::abs(greedy_picks - draws * p) <= 4.0 * std::max(sigma, 1.0));
    }
}

TEST_CASE("greedy strategy") {
    CHECK(greedy_strategy(window({2.0, 1.0, 1.5, 1.8}), kActions, 3.0) == 5.0);
    CHECK(greedy_strategy(window({0.5, 1.0, 1.5, 1.8}), kActions, 5.0) == 3.0);
    CHECK(greedy_strategy(window({1.6, 1.0, 1.5, 1.8}), kActions, 3.0) == 3.0);
    CHECK(greedy_strategy(window({1.6, 1.0, 1.5, 1.8}), kActions, 5.0) == 5.0);
    // all equal: the maximum clause wins
    CHECK(greedy_strategy(window({1.0, 1.0, 1.0, 1.0}), kActions, 3.0) == 5.0);
}

TEST_CASE("greedy strategy is shift invariant") {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> c(4);
        for (double& x : c) x = std::round(rng.uniform(0, 8));  // integers keep shifts exact
        const double shift = std::round(rng.uniform(-50, 50));
        std::vector<double> shifted = c;
        for (double& x : shifted) x += shift;
        const double kappa = rng.uniform() < 0.5 ? 3.0 : 5.0;
        CHECK(greedy_strategy(window(c), kActions, kappa) == greedy_strategy(window(shifted), kActions, kappa));
    }
}

TEST_CASE("swinging pattern") {
    const std::vector<double> expected{3, 3, 5, 5, 3, 3, 5, 5};
    for (int i = 0; i < 8; ++i) CHECK(swinging_pattern(i, 4, kActions) == expected[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 6; ++i) CHECK(swinging_pattern(i, 2, kActions) == (i % 2 == 0 ? 3.0 : 5.0));
    CHECK(swinging_pattern(100, 8, kActions) == 5.0);
    CHECK_THROWS_AS(swinging_pattern(0, 3, kActions), ConfigError);
}

TEST_CASE("open-loop swinging centerline lies on a circle") {
    for (int n_t : {2, 4}) {
        const int interval = action_interval_steps(average_period(kActions, 1.0), n_t, 0.02);
        SwimmerState s;
        s.position = {1.0, -2.0};
        s.heading = 0.4;
        s.speed = 1.0;
        std::vector<Vec2> centers;
        for (long long a = 0; a < 4000 / interval; ++a) {
            s.curvature = swinging_pattern(a, n_t, kActions);
            centers.push_back(curvature_center(s));
            for (int i = 0; i < interval; ++i) s = step_swimmer(s, {}, 0.02);
        }
        const auto circle = oracle::fit_circle(centers);
        CAPTURE(n_t);
        CAPTURE(circle.radius);
        CHECK(oracle::max_radial_deviation(centers, circle) < 0.05 * circle.radius);
    }
}

TEST_CASE("swinging centers split into two concentric circles, one per curvature") {
    // each switch shifts the center along the normal; a full cycle is a rigid
    // rotation, so centers after each kind of switch share one fixed point
    for (int n_t : {2, 4, 8}) {
        const int interval = action_interval_steps(average_period(kActions, 1.0), n_t, 0.02);
        SwimmerState s;
        s.heading = 1.1;
        s.speed = 1.0;
        std::vector<Vec2> on_k1, on_k2;
        for (long long a = 0; a < 8000 / interval; ++a) {
            s.curvature = swinging_pattern(a, n_t, kActions);
            (s.curvature == 3.0 ? on_k1 : on_k2).push_back(curvature_center(s));
            for (int i = 0; i < interval; ++i) s = step_swimmer(s, {}, 0.02);
        }
        const auto c1 = oracle::fit_circle(on_k1);
        const auto c2 = oracle::fit_circle(on_k2);
        CAPTURE(n_t);
        CHECK(oracle::max_radial_deviation(on_k1, c1) < 1e-6 * c1.radius);
        CHECK(oracle::max_radial_deviation(on_k2, c2) < 1e-6 * c2.radius);
        CHECK((c1.center - c2.center).norm() < 1e-6);
    }
}
