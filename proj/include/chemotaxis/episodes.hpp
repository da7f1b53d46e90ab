#pragma once

#include "chemotaxis/environment.hpp"
#include "chemotaxis/geometry.hpp"
#include "chemotaxis/policies.hpp"
#include "chemotaxis/qnet.hpp"
#include "chemotaxis/random.hpp"
#include "chemotaxis/replay.hpp"

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

namespace chemotaxis {

struct SpawnRect {
    Vec2 lo{-10.0, -10.0};
    Vec2 hi{10.0, 10.0};
};

// Spawn uniformly on a circle (radial-field tests start on one).
struct SpawnCircle {
    Vec2 center{};
    double radius = 20.0;
};

using SpawnRegion = std::variant<SpawnRect, SpawnCircle>;

Vec2 sample_spawn(const SpawnRegion& region, Rng& rng);

struct EpisodeConfig {
    int n_t = 4;
    double dt = 0.02;
    double t_life = 80.0;
    ConcentrationField field = ConcentrationField::linear();
    FlowFieldSpec flow = FlowFieldSpec::none();
    bool flow_aware = false;
    ActionSet actions = ActionSet::constant_speed(3.0, 5.0, 1.0);
    SpawnRegion spawn = SpawnRect{};
    // typical gradient used to normalize inputs and rewards
    double c_k = 1.0;
    // radial field only: stop once this close to the source, and never run
    // past radial_time_cap
    double source_radius = 0.5;
    double radial_time_cap = 1000.0;
    bool record_trajectory = true;

    std::size_t input_dim() const;
    long long total_steps() const;
    void validate() const;
};

struct QNetPolicy {
    const QNetwork* net = nullptr;
    double epsilon = 0.0;
};
struct GreedyPolicy {};
struct SwingingPolicy {};

using Policy = std::variant<QNetPolicy, GreedyPolicy, SwingingPolicy>;

enum class Termination { LifespanEnd, ReachedSource };

struct TrajectorySample {
    double t = 0.0;
    Vec2 position;
    double kappa = 0.0;
    double speed = 0.0;
    double c = 0.0;
    int action = 0;
};

struct EpisodeResult {
    SwimmerState initial;
    SwimmerState final_state;
    std::vector<TrajectorySample> trajectory;
    std::vector<PolicyDecision> actions;
    std::vector<long long> action_steps;  // integration step index of each decision
    std::vector<Vec2> centerline;         // curvature center after each decision
    double c_start = 0.0;
    double c_end = 0.0;
    double gain = 0.0;
    std::size_t transitions_stored = 0;
    Termination termination = Termination::LifespanEnd;
};

/// Runs one swimmer from a random spawn through its lifespan.
///
/// Every action interval the swimmer senses (c, kappa[, flow]), the policy
/// picks a curvature, and the path is integrated for the interval. From the
/// second sense on, a transition (s, a, r, s') is pushed to `buffer` when
/// one is given (q-network policy only).
EpisodeResult run_episode(const EpisodeConfig& config, const Policy& policy, ReplayBuffer* buffer,
                          Rng& spawn_rng, Rng& explore_rng);

struct TrainingSchedule {
    int epochs = 1600;
    double epsilon_start = 1.0;
    double epsilon_floor = 0.1;
    double epsilon_decay = 0.998;
    double learning_rate = 0.01;
    double lr_decay = 0.1;
    int lr_decay_epoch = -1;  // -1: halfway through training
    double gamma = 0.98;
    int hidden_layers = 3;
    int hidden_nodes = 24;
    std::size_t buffer_capacity = 50'000;
    std::size_t batch_size = 32;
    int updates_per_epoch = 64;

    void validate() const;
};

struct EpochRecord {
    int epoch = 0;
    double gain = 0.0;
    double mean_loss = 0.0;  // NaN when learning was skipped
    double epsilon = 0.0;    // exploration rate used during the epoch
};

struct TrainingResult {
    QNetwork net;
    std::vector<EpochRecord> curve;
    double final_epsilon = 0.0;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainingResult train_agent(const TrainingSchedule& schedule, const EpisodeConfig& config,
                           std::uint64_t seed, const EpochCallback& on_epoch = {});

struct CohortResult {
    std::vector<EpisodeResult> episodes;
    std::vector<double> gains;
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
};

/// nCells independent episodes with exploration off and no experience
/// storage. Cell i uses spawn stream (seed, i), so two calls with the same
/// seed start every policy from identical initial conditions.
CohortResult evaluate_cohort(const Policy& policy, const EpisodeConfig& config, int n_cells,
                             std::uint64_t seed, int threads = 1);

double mean_of(const std::vector<double>& values);
double variance_of(const std::vector<double>& values);

}  // namespace chemotaxis
