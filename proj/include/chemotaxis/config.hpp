#pragma once

#include "chemotaxis/episodes.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chemotaxis {

enum class PolicyKind { QNet, Greedy, Swinging };

PolicyKind policy_from_name(const std::string& name);
std::string policy_name(PolicyKind kind);

/// Every simulation and training parameter of a run. Defaults are the
/// reference values; the three entries that differ between plain and
/// Taylor-Green trainings stay unset until resolved against `flow`.
struct RunConfig {
    // swimmer and fields
    double v = 1.0;
    double kappa1 = 3.0;
    double kappa2 = 5.0;
    double v1 = 1.1;  // speed on kappa1 when adaptive
    double v2 = 0.9;  // speed on kappa2 when adaptive
    bool adaptive_speed = false;
    double dt = 0.02;
    double t_life_train = 80.0;
    std::optional<double> t_life;  // evaluation lifespan: 200, or 400 with flow
    double c_k_linear = 1.0;
    double c0_linear = 20.0;
    double c_k_radial = 1.0;
    double c0_radial = 100.0;
    FieldKind field = FieldKind::Linear;
    FlowKind flow = FlowKind::None;
    double u0 = 0.1;
    double k = 0.31415926535897931;  // pi / 10
    bool flow_aware = false;
    int n_t = 4;
    double spawn_half_width = 10.0;  // linear field, no flow
    double spawn_radius = 20.0;      // radial field
    double source_radius = 0.5;
    double radial_time_cap = 1000.0;

    // training
    double learning_rate = 0.01;
    double lr_decay = 0.1;
    double gamma = 0.98;
    double epsilon = 0.1;  // floor of the annealed exploration rate
    double epsilon_start = 1.0;
    std::optional<double> epsilon_decay;  // 0.998, or 0.9996 with flow
    int hidden_layers = 3;
    std::optional<int> hidden_nodes;  // 24, or 36 with flow
    std::optional<int> epochs;        // 1600, or 6000 with flow
    int buffer_capacity = 50'000;
    int batch_size = 32;
    int updates_per_epoch = 64;

    // run control
    std::uint64_t seed = 1;
    int cells = 40;
    PolicyKind policy = PolicyKind::QNet;
    std::string out_dir = "out";
    std::string weights;
    int threads = 1;

    double resolved_t_life() const;
    double resolved_epsilon_decay() const;
    int resolved_hidden_nodes() const;
    int resolved_epochs() const;

    ActionSet action_set() const;
    ConcentrationField concentration_field() const;
    FlowFieldSpec flow_spec() const;

    EpisodeConfig training_episode() const;
    EpisodeConfig evaluation_episode() const;
    TrainingSchedule training_schedule() const;

    void validate() const;
};

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Flat `key = value` document, `#` starts a comment. Overrides are applied
/// after the document; both reject unknown keys with a ConfigError naming
/// the key.
RunConfig parse_config(const std::string& document, const Overrides& overrides = {});
RunConfig load_config(const std::string& path, const Overrides& overrides = {});

void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

// Names accepted by apply_setting, in documentation order.
const std::vector<std::string>& config_keys();

// Key = value dump of a resolved configuration (parse_config round-trips it).
std::string format_config(const RunConfig& config);

}  // namespace chemotaxis
