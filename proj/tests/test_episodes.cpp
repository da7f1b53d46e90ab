#include <doctest.h>

#include "chemotaxis/episodes.hpp"
#include "chemotaxis/errors.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace chemotaxis;

namespace {

EpisodeConfig linear_config(int n_t, double t_life) {
    EpisodeConfig c;
    c.n_t = n_t;
    c.t_life = t_life;
    return c;
}

}  // namespace

TEST_CASE("spawn positions cover the region uniformly") {
    const SpawnRegion region = SpawnRect{{-10, -10}, {10, 10}};
    Rng rng(1);
    std::vector<int> grid(16, 0);
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Vec2 p = sample_spawn(region, rng);
        REQUIRE(p.x >= -10);
        REQUIRE(p.x < 10);
        const int gx = std::min(3, static_cast<int>((p.x + 10) / 5));
        const int gy = std::min(3, static_cast<int>((p.y + 10) / 5));
        grid[static_cast<std::size_t>(gy * 4 + gx)]++;
    }
    double chi2 = 0.0;
    for (int c : grid) chi2 += (c - n / 16.0) * (c - n / 16.0) / (n / 16.0);
    // 15 degrees of freedom, 5 sigma
    CHECK(chi2 < 15.0 + 5.0 * std::sqrt(30.0));

    Rng ring_rng(2);
    const SpawnRegion circle = SpawnCircle{{0, 0}, 20.0};
    for (int i = 0; i < 100; ++i) CHECK(sample_spawn(circle, ring_rng).norm() == doctest::Approx(20.0));
}

TEST_CASE("swinging episode returns near its start") {
    EpisodeConfig c = linear_config(4, 200.0);
    Rng spawn(3), explore(4);
    const EpisodeResult r = run_episode(c, SwingingPolicy{}, nullptr, spawn, explore);
    CHECK(std::abs(r.gain) < 2.0);
}

TEST_CASE("swinging gain is bounded by the centerline circle") {
    for (int n_t : {2, 4, 8}) {
        EpisodeConfig c = linear_config(n_t, 200.0);
        const CohortResult cohort = evaluate_cohort(SwingingPolicy{}, c, 20, 5);
        for (const auto& ep : cohort.episodes) {
            const std::vector<Vec2>& centers = ep.centerline;
            const auto circle = oracle::fit_circle(centers);
            // swimmer sits 1/kappa from its center at both ends
            CAPTURE(n_t);
            CHECK(std::abs(ep.gain) <= 2.0 * circle.radius * 1.05 + 2.0 / 3.0);
        }
    }
}

TEST_CASE("zero network with no exploration always picks kappa1") {
    EpisodeConfig c = linear_config(4, 200.0);
    const QNetwork zero = QNetwork::make(c.input_dim(), 3, 24);
    Rng spawn(5), explore(6);
    const EpisodeResult r = run_episode(c, QNetPolicy{&zero, 0.0}, nullptr, spawn, explore);
    for (const auto& d : r.actions) CHECK(d.action == 0);
    for (const auto& s : r.trajectory) CHECK(s.kappa == 3.0);

    // 200 time units at v kappa1 = 3 is 600/(2 pi) ~ 95.5 turns; every full
    // turn returns to the start, so only the fractional turn contributes.
    const double turns = 200.0 * 3.0 / (2.0 * std::numbers::pi);
    const double frac = turns - std::floor(turns);
    const SwimmerState& s0 = r.initial;
    SwimmerState partial = s0;
    partial.curvature = 3.0;
    partial.speed = 1.0;
    partial = step_swimmer(partial, {}, frac * 2.0 * std::numbers::pi / 3.0);
    CHECK(r.gain == doctest::Approx(partial.position.y - s0.position.y).epsilon(1e-9));
    CHECK(std::abs(r.gain) <= 2.0 / 3.0 + 1e-12);
}

TEST_CASE("clock, gain and centerline bookkeeping") {
    EpisodeConfig c = linear_config(4, 80.0);
    const int interval = action_interval_steps(average_period(c.actions, 1.0), 4, c.dt);
    Rng spawn(7), explore(8);
    const EpisodeResult r = run_episode(c, GreedyPolicy{}, nullptr, spawn, explore);

    REQUIRE(!r.action_steps.empty());
    for (std::size_t k = 0; k < r.action_steps.size(); ++k) {
        CHECK(r.action_steps[k] == static_cast<long long>(k) * interval);
    }
    for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
        CHECK(r.trajectory[i].t == static_cast<double>(i) * c.dt);
    }
    CHECK(r.trajectory.size() == 4001);
    CHECK(r.trajectory.back().t == doctest::Approx(80.0));
    CHECK(r.gain == r.trajectory.back().c - r.trajectory.front().c);
    CHECK(r.centerline.size() == r.actions.size());
    CHECK(r.termination == Termination::LifespanEnd);
}

TEST_CASE("stored transitions chain state to next state") {
    EpisodeConfig c = linear_config(4, 80.0);
    QNetwork net = QNetwork::make(c.input_dim(), 3, 24);
    Rng init(9);
    net.init_glorot(init);
    ReplayBuffer buffer(10000);
    Rng spawn(10), explore(11);
    const EpisodeResult r = run_episode(c, QNetPolicy{&net, 0.5}, &buffer, spawn, explore);

    REQUIRE(buffer.size() == r.transitions_stored);
    // every full interval yields one transition: floor(4000 / 19)
    CHECK(buffer.size() == 4000 / 19);
    for (std::size_t i = 0; i + 1 < buffer.size(); ++i) {
        CHECK(buffer.at(i).next_state == buffer.at(i + 1).state);
        CHECK(buffer.at(i).state.size() == 8);
    }
    // first state is the padded history: every concentration entry is zero
    for (std::size_t i = 0; i < 8; i += 2) CHECK(buffer.at(0).state[i] == 0.0);
    for (std::size_t i = 0; i < buffer.size(); ++i) CHECK(buffer.at(i).action == r.actions[i].action);
}

TEST_CASE("adaptive speed recomputes the action interval from the current speed") {
    EpisodeConfig c = linear_config(4, 80.0);
    c.actions = ActionSet::adaptive(3.0, 5.0, 1.1, 0.9);
    Rng spawn(12), explore(13);
    const EpisodeResult r = run_episode(c, SwingingPolicy{}, nullptr, spawn, explore);
    const int fast = action_interval_steps(average_period(c.actions, 1.1), 4, c.dt);
    const int slow = action_interval_steps(average_period(c.actions, 0.9), 4, c.dt);
    CHECK(fast == 17);
    CHECK(slow == 21);
    for (std::size_t k = 0; k + 1 < r.action_steps.size(); ++k) {
        const long long gap = r.action_steps[k + 1] - r.action_steps[k];
        CHECK(gap == (r.actions[k].action == 0 ? fast : slow));
    }
    for (const auto& s : r.trajectory) CHECK(s.speed == (s.kappa == 3.0 ? 1.1 : 0.9));
}

TEST_CASE("radial field stops at the source") {
    EpisodeConfig c = linear_config(4, 1000.0);
    c.field = ConcentrationField::radial(1.0, 100.0);
    c.spawn = SpawnCircle{{0, 0}, 1.0};
    Rng spawn(14), explore(15);
    const EpisodeResult r = run_episode(c, GreedyPolicy{}, nullptr, spawn, explore);
    if (r.termination == Termination::ReachedSource) {
        CHECK(r.final_state.position.norm() < 0.5);
        CHECK(r.final_state.time < 1000.0);
    }
    // a swimmer spawned on the source circle with a huge stop radius ends at once
    c.source_radius = 5.0;
    Rng spawn2(16), explore2(17);
    const EpisodeResult first = run_episode(c, GreedyPolicy{}, nullptr, spawn2, explore2);
    CHECK(first.termination == Termination::ReachedSource);
    CHECK(first.final_state.time == doctest::Approx(c.dt));
}

TEST_CASE("radial episodes never exceed the time cap") {
    EpisodeConfig c = linear_config(4, 5000.0);
    c.field = ConcentrationField::radial(1.0, 100.0);
    c.spawn = SpawnCircle{{0, 0}, 20.0};
    c.radial_time_cap = 30.0;
    c.record_trajectory = false;
    Rng spawn(18), explore(19);
    const EpisodeResult r = run_episode(c, SwingingPolicy{}, nullptr, spawn, explore);
    CHECK(r.final_state.time == doctest::Approx(30.0));
}

TEST_CASE("evaluation does not touch the network and pairs spawns") {
    EpisodeConfig c = linear_config(2, 40.0);
    QNetwork net = QNetwork::make(c.input_dim(), 3, 24);
    Rng init(20);
    net.init_glorot(init);
    const QNetwork snapshot = net;
    const CohortResult a = evaluate_cohort(QNetPolicy{&net, 0.7}, c, 6, 99);
    CHECK(net == snapshot);
    for (const auto& ep : a.episodes)
        for (const auto& d : ep.actions) CHECK_FALSE(d.exploratory);

    const CohortResult g = evaluate_cohort(GreedyPolicy{}, c, 6, 99);
    const CohortResult threaded = evaluate_cohort(GreedyPolicy{}, c, 6, 99, 3);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(a.episodes[i].initial.position == g.episodes[i].initial.position);
        CHECK(a.episodes[i].initial.heading == g.episodes[i].initial.heading);
    }
    CHECK(threaded.gains == g.gains);
    CHECK(g.mean == doctest::Approx(mean_of(g.gains)));
}

TEST_CASE("training smoke run") {
    EpisodeConfig c = linear_config(4, 80.0);
    TrainingSchedule s;
    s.epochs = 50;
    const TrainingResult t = train_agent(s, c, 7);
    CHECK(t.curve.size() == 50);
    CHECK(t.final_epsilon == doctest::Approx(std::pow(0.998, 50)));
    CHECK(t.final_epsilon == doctest::Approx(0.905).epsilon(1e-3));
    CHECK(t.curve.front().epsilon == 1.0);
    CHECK(std::isnan(t.curve.front().mean_loss) == false);
    CHECK(t.net.input_dim() == 8);

    const TrainingResult again = train_agent(s, c, 7);
    CHECK(again.net == t.net);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(again.curve[i].gain == t.curve[i].gain);
        CHECK(again.curve[i].mean_loss == t.curve[i].mean_loss);
    }

    const TrainingResult other = train_agent(s, c, 8);
    CHECK_FALSE(other.net == t.net);
}

TEST_CASE("training skips learning until one minibatch is stored") {
    EpisodeConfig c = linear_config(4, 5.0);  // 13 transitions per episode
    TrainingSchedule s;
    s.epochs = 3;
    const TrainingResult t = train_agent(s, c, 1);
    CHECK(std::isnan(t.curve[0].mean_loss));
    CHECK(std::isnan(t.curve[1].mean_loss));
    CHECK_FALSE(std::isnan(t.curve[2].mean_loss));
}

TEST_CASE("configuration errors") {
    EpisodeConfig c = linear_config(3, 80.0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.n_t = 4;
    c.flow_aware = true;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.flow_aware = false;
    c.t_life = 0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);

    TrainingSchedule s;
    s.epochs = 0;
    CHECK_THROWS_AS(s.validate(), ConfigError);

    const QNetwork wrong = QNetwork::make(20, 1, 4);
    EpisodeConfig ok = linear_config(4, 80.0);
    Rng a(1), b(2);
    CHECK_THROWS_AS(run_episode(ok, QNetPolicy{&wrong, 0.0}, nullptr, a, b), ConfigError);
}
