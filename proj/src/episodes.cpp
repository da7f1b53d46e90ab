#include "chemotaxis/episodes.hpp"

#include "chemotaxis/errors.hpp"
#include "chemotaxis/perception.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace chemotaxis {

Vec2 sample_spawn(const SpawnRegion& region, Rng& rng) {
    if (const auto* rect = std::get_if<SpawnRect>(&region)) {
        const double x = rng.uniform(rect->lo.x, rect->hi.x);
        const double y = rng.uniform(rect->lo.y, rect->hi.y);
        return {x, y};
    }
    const auto& circle = std::get<SpawnCircle>(region);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return circle.center + circle.radius * unit_from_angle(angle);
}

std::size_t EpisodeConfig::input_dim() const { return input_dimension(n_t, flow_aware); }

long long EpisodeConfig::total_steps() const {
    double t_end = t_life;
    if (field.kind == FieldKind::Radial) t_end = std::min(t_end, radial_time_cap);
    return std::llround(t_end / dt);
}

void EpisodeConfig::validate() const {
    if (n_t != 2 && n_t != 4 && n_t != 8) throw ConfigError("N_T must be 2, 4 or 8");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    actions.validate();
    field.validate();
    flow.validate();
    if (flow_aware && flow.kind != FlowKind::TaylorGreen) {
        throw ConfigError("flow-aware input requires the Taylor-Green flow");
    }
    if (flow_aware && !(flow.u0 > 0.0)) throw ConfigError("flow-aware input requires u0 > 0");
    if (!(c_k > 0.0)) throw ConfigError("typical gradient c_k must be positive");
    const double slowest = std::min(actions.v1, actions.v2);
    const double interval = action_interval(average_period(actions, slowest), n_t, dt);
    if (!(t_life > interval)) throw ConfigError("t_life must exceed the action interval");
    if (const auto* rect = std::get_if<SpawnRect>(&spawn)) {
        if (!(rect->hi.x > rect->lo.x) || !(rect->hi.y > rect->lo.y)) {
            throw ConfigError("spawn rectangle is empty");
        }
    } else if (!(std::get<SpawnCircle>(spawn).radius >= 0.0)) {
        throw ConfigError("spawn radius must be non-negative");
    }
}

namespace {

PerceptionRecord sense(const EpisodeConfig& config, const SwimmerState& state) {
    const FlowSample flow = flow_at(config.flow, state.position);
    return {concentration_at(config.field, state.position), state.curvature, flow.ux, flow.uy,
            flow.omega0};
}

bool finite_state(const SwimmerState& s) {
    return std::isfinite(s.position.x) && std::isfinite(s.position.y) && std::isfinite(s.heading);
}

}  // namespace

EpisodeResult run_episode(const EpisodeConfig& config, const Policy& policy, ReplayBuffer* buffer,
                          Rng& spawn_rng, Rng& explore_rng) {
    const auto* qpolicy = std::get_if<QNetPolicy>(&policy);
    if (qpolicy != nullptr) {
        if (qpolicy->net == nullptr) throw std::invalid_argument("q-network policy without a network");
        if (qpolicy->net->input_dim() != config.input_dim()) {
            throw ConfigError("network input dimension " + std::to_string(qpolicy->net->input_dim()) +
                              " does not match configured input dimension " +
                              std::to_string(config.input_dim()));
        }
    }
    if (buffer != nullptr && qpolicy == nullptr) {
        throw std::invalid_argument("experience is only collected for the q-network policy");
    }

    const ActionSet& actions = config.actions;
    const bool radial = config.field.kind == FieldKind::Radial;
    const double stop_radius2 = config.source_radius * config.source_radius;
    const long long total_steps = config.total_steps();
    const int fixed_interval =
        action_interval_steps(average_period(actions, actions.v1), config.n_t, config.dt);

    SwimmerState state;
    state.position = sample_spawn(config.spawn, spawn_rng);
    state.heading = spawn_rng.uniform(0.0, 2.0 * std::numbers::pi);
    state.curvature = actions.kappa1;
    state.speed = speed_for_curvature(actions, state.curvature);
    state.time = 0.0;

    EpisodeResult result;
    result.initial = state;
    const PerceptionRecord first = sense(config, state);
    result.c_start = first.c;
    PerceptionHistory history(config.n_t, first);

    auto build_input = [&] {
        return normalize_input(history, actions, config.c_k, config.flow, config.flow_aware);
    };
    std::vector<double> input;
    if (qpolicy != nullptr) input = build_input();

    int current_action = 0;
    auto record = [&](double c) {
        if (!config.record_trajectory) return;
        result.trajectory.push_back(
            {state.time, state.position, state.curvature, state.speed, c, current_action});
    };
    record(first.c);

    long long step = 0;
    long long action_counter = 0;
    double c_now = first.c;
    while (true) {
        PolicyDecision decision;
        if (qpolicy != nullptr) {
            const std::vector<double> q = qpolicy->net->forward(input);
            decision = epsilon_greedy(q, qpolicy->epsilon, explore_rng);
        } else if (std::holds_alternative<GreedyPolicy>(policy)) {
            decision.action = actions.action_index(greedy_strategy(history, actions, state.curvature));
        } else {
            decision.action = actions.action_index(swinging_pattern(action_counter, config.n_t, actions));
        }
        current_action = decision.action;
        state.curvature = actions.curvature(decision.action);
        state.speed = speed_for_curvature(actions, state.curvature);
        result.actions.push_back(decision);
        result.action_steps.push_back(step);
        result.centerline.push_back(curvature_center(state));
        ++action_counter;

        // with adaptive speed the interval follows the speed just selected
        const int interval = actions.adaptive_speed
                                 ? action_interval_steps(average_period(actions, state.speed),
                                                         config.n_t, config.dt)
                                 : fixed_interval;
        const long long run = std::min<long long>(interval, total_steps - step);
        bool reached = false;
        for (long long i = 0; i < run; ++i) {
            const FlowSample flow = flow_at(config.flow, state.position);
            state = step_swimmer(state, flow, config.dt);
            ++step;
            state.time = static_cast<double>(step) * config.dt;
            if (!finite_state(state)) {
                throw TrainingFault("non-finite swimmer state at t=" + std::to_string(state.time));
            }
            c_now = concentration_at(config.field, state.position);
            record(c_now);
            if (radial) {
                const Vec2 p = state.position;
                if (p.x * p.x + p.y * p.y < stop_radius2) {
                    reached = true;
                    break;
                }
            }
        }
        if (reached) {
            result.termination = Termination::ReachedSource;
            break;
        }
        if (run < interval) break;  // lifespan ended mid-interval

        const PerceptionRecord now = sense(config, state);
        double reward = 0.0;
        if (buffer != nullptr) reward = compute_reward(now.c, history, actions, config.c_k);
        history.push(now);
        if (qpolicy != nullptr) {
            std::vector<double> next_input = build_input();
            if (buffer != nullptr) {
                buffer->push({input, decision.action, reward, next_input});
                ++result.transitions_stored;
            }
            input = std::move(next_input);
        }
        if (step >= total_steps) break;
    }

    result.final_state = state;
    result.c_end = c_now;
    result.gain = result.c_end - result.c_start;
    return result;
}

void TrainingSchedule::validate() const {
    if (epochs <= 0) throw ConfigError("nothing to train: epochs must be positive");
    if (!(epsilon_start >= epsilon_floor) || epsilon_floor < 0.0 || epsilon_start > 1.0) {
        throw ConfigError("need 0 <= epsilon_floor <= epsilon_start <= 1");
    }
    if (!(epsilon_decay > 0.0 && epsilon_decay < 1.0)) throw ConfigError("epsilon decay must lie in (0, 1)");
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("learning-rate decay must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("discount gamma must lie in [0, 1)");
    if (hidden_layers < 1 || hidden_nodes < 1) throw ConfigError("network needs hidden layers and nodes");
    if (batch_size == 0 || buffer_capacity < batch_size) {
        throw ConfigError("replay capacity must hold at least one minibatch");
    }
    if (updates_per_epoch < 0) throw ConfigError("updates per epoch must be non-negative");
}

TrainingResult train_agent(const TrainingSchedule& schedule, const EpisodeConfig& config,
                           std::uint64_t seed, const EpochCallback& on_epoch) {
    schedule.validate();
    config.validate();

    EpisodeConfig episode = config;
    episode.record_trajectory = false;

    Rng init_rng(seed, Stream::Init);
    Rng spawn_rng(seed, Stream::Spawn);
    Rng explore_rng(seed, Stream::Exploration);
    Rng sampling_rng(seed, Stream::Sampling);

    TrainingResult result;
    result.net = QNetwork::make(config.input_dim(), static_cast<std::size_t>(schedule.hidden_layers),
                                static_cast<std::size_t>(schedule.hidden_nodes), 2);
    result.net.init_glorot(init_rng);
    AdamOptimizer optimizer(result.net, AdamConfig{schedule.learning_rate});
    ReplayBuffer buffer(schedule.buffer_capacity);
    const int decay_epoch = schedule.lr_decay_epoch >= 0 ? schedule.lr_decay_epoch : schedule.epochs / 2;

    double epsilon = schedule.epsilon_start;
    result.curve.reserve(static_cast<std::size_t>(schedule.epochs));
    for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
        try {
            if (epoch == decay_epoch) optimizer.set_learning_rate(schedule.learning_rate * schedule.lr_decay);

            const EpisodeResult ep =
                run_episode(episode, QNetPolicy{&result.net, epsilon}, &buffer, spawn_rng, explore_rng);

            double loss_sum = 0.0;
            int updates = 0;
            for (int u = 0; u < schedule.updates_per_epoch; ++u) {
                auto batch = buffer.sample(schedule.batch_size, sampling_rng);
                if (!batch) break;
                loss_sum += train_minibatch(result.net, optimizer, *batch, schedule.gamma);
                ++updates;
            }
            const EpochRecord rec{epoch, ep.gain,
                                  updates > 0 ? loss_sum / updates
                                              : std::numeric_limits<double>::quiet_NaN(),
                                  epsilon};
            result.curve.push_back(rec);
            if (on_epoch) on_epoch(rec);
        } catch (const TrainingFault& e) {
            throw TrainingFault("epoch " + std::to_string(epoch) + ": " + e.what());
        }
        epsilon = std::max(schedule.epsilon_floor, epsilon * schedule.epsilon_decay);
    }
    result.final_epsilon = epsilon;
    return result;
}

double mean_of(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double variance_of(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double m = mean_of(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

CohortResult evaluate_cohort(const Policy& policy, const EpisodeConfig& config, int n_cells,
                             std::uint64_t seed, int threads) {
    config.validate();
    if (n_cells < 0) throw ConfigError("cell count must be non-negative");

    Policy eval_policy = policy;
    if (auto* q = std::get_if<QNetPolicy>(&eval_policy)) q->epsilon = 0.0;

    CohortResult result;
    result.episodes.resize(static_cast<std::size_t>(n_cells));
    auto run_cell = [&](int cell) {
        Rng spawn_rng(seed, Stream::Spawn, static_cast<std::uint64_t>(cell));
        Rng explore_rng(seed, Stream::Exploration, static_cast<std::uint64_t>(cell));
        result.episodes[static_cast<std::size_t>(cell)] =
            run_episode(config, eval_policy, nullptr, spawn_rng, explore_rng);
    };

    const int workers = std::clamp(threads, 1, std::max(1, n_cells));
    if (workers == 1) {
        for (int cell = 0; cell < n_cells; ++cell) run_cell(cell);
    } else {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        {
            std::vector<std::jthread> pool;
            for (int w = 0; w < workers; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (int cell = w; cell < n_cells; cell += workers) run_cell(cell);
                    } catch (...) {
                        errors[static_cast<std::size_t>(w)] = std::current_exception();
                    }
                });
            }
        }
        for (const auto& err : errors) {
            if (err) std::rethrow_exception(err);
        }
    }

    for (const EpisodeResult& ep : result.episodes) result.gains.push_back(ep.gain);
    result.mean = mean_of(result.gains);
    result.variance = variance_of(result.gains);
    return result;
}

}  // namespace chemotaxis
