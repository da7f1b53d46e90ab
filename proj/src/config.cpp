#include "chemotaxis/config.hpp"

#include "chemotaxis/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace chemotaxis {

PolicyKind policy_from_name(const std::string& name) {
    if (name == "qnet") return PolicyKind::QNet;
    if (name == "greedy") return PolicyKind::Greedy;
    if (name == "swinging") return PolicyKind::Swinging;
    throw ConfigError("policy: expected qnet, greedy or swinging, got '" + name + "'");
}

std::string policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::QNet: return "qnet";
        case PolicyKind::Greedy: return "greedy";
        case PolicyKind::Swinging: return "swinging";
    }
    return "qnet";
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(d)) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
    return d;
}

long long parse_integer(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long n = std::strtoll(value.c_str(), &end, 10);
    if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    }
    return n;
}

int parse_int(const std::string& key, const std::string& value) {
    const long long n = parse_integer(key, value);
    if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
        throw ConfigError(key + ": integer out of range");
    }
    return static_cast<int>(n);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

Setter real(double RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); };
}
Setter opt_real(std::optional<double> RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_double(k, v); };
}
Setter integer(int RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_int(k, v); };
}
Setter opt_integer(std::optional<int> RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_int(k, v); };
}
Setter flag(bool RunConfig::*field) {
    return [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = parse_bool(k, v); };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"v", real(&RunConfig::v)},
        {"kappa1", real(&RunConfig::kappa1)},
        {"kappa2", real(&RunConfig::kappa2)},
        {"v1", real(&RunConfig::v1)},
        {"v2", real(&RunConfig::v2)},
        {"adaptive_speed", flag(&RunConfig::adaptive_speed)},
        {"dt", real(&RunConfig::dt)},
        {"t_life_train", real(&RunConfig::t_life_train)},
        {"t_life", opt_real(&RunConfig::t_life)},
        {"c_k_linear", real(&RunConfig::c_k_linear)},
        {"c0_linear", real(&RunConfig::c0_linear)},
        {"c_k_radial", real(&RunConfig::c_k_radial)},
        {"c0_radial", real(&RunConfig::c0_radial)},
        {"field",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "linear") c.field = FieldKind::Linear;
             else if (v == "radial") c.field = FieldKind::Radial;
             else throw ConfigError(k + ": expected linear or radial, got '" + v + "'");
         }},
        {"flow",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (v == "none") c.flow = FlowKind::None;
             else if (v == "tg") c.flow = FlowKind::TaylorGreen;
             else throw ConfigError(k + ": expected none or tg, got '" + v + "'");
         }},
        {"u0", real(&RunConfig::u0)},
        {"k", real(&RunConfig::k)},
        {"flow_aware", flag(&RunConfig::flow_aware)},
        {"n_t", integer(&RunConfig::n_t)},
        {"spawn_half_width", real(&RunConfig::spawn_half_width)},
        {"spawn_radius", real(&RunConfig::spawn_radius)},
        {"source_radius", real(&RunConfig::source_radius)},
        {"radial_time_cap", real(&RunConfig::radial_time_cap)},
        {"learning_rate", real(&RunConfig::learning_rate)},
        {"lr_decay", real(&RunConfig::lr_decay)},
        {"gamma", real(&RunConfig::gamma)},
        {"epsilon", real(&RunConfig::epsilon)},
        {"epsilon_start", real(&RunConfig::epsilon_start)},
        {"epsilon_decay", opt_real(&RunConfig::epsilon_decay)},
        {"hidden_layers", integer(&RunConfig::hidden_layers)},
        {"hidden_nodes", opt_integer(&RunConfig::hidden_nodes)},
        {"epochs", opt_integer(&RunConfig::epochs)},
        {"buffer_capacity", integer(&RunConfig::buffer_capacity)},
        {"batch_size", integer(&RunConfig::batch_size)},
        {"updates_per_epoch", integer(&RunConfig::updates_per_epoch)},
        {"seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const long long s = parse_integer(k, v);
             if (s < 0) throw ConfigError(k + ": seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"cells", integer(&RunConfig::cells)},
        {"policy", [](RunConfig& c, const std::string&, const std::string& v) { c.policy = policy_from_name(v); }},
        {"out_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
        {"weights", [](RunConfig& c, const std::string&, const std::string& v) { c.weights = v; }},
        {"threads", integer(&RunConfig::threads)},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [name, setter] : setters()) out.push_back(name);
        return out;
    }();
    return keys;
}

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
    for (const auto& [name, setter] : setters()) {
        if (name == key) {
            setter(config, key, value);
            return;
        }
    }
    throw ConfigError("unknown configuration key '" + key + "'");
}

RunConfig parse_config(const std::string& document, const Overrides& overrides) {
    RunConfig config;
    std::istringstream in(document);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
        apply_setting(config, key, value);
    }
    for (const auto& [key, value] : overrides) apply_setting(config, key, value);
    config.validate();
    return config;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

double RunConfig::resolved_t_life() const {
    if (t_life) return *t_life;
    return flow == FlowKind::TaylorGreen ? 400.0 : 200.0;
}

double RunConfig::resolved_epsilon_decay() const {
    if (epsilon_decay) return *epsilon_decay;
    return flow == FlowKind::TaylorGreen ? 0.9996 : 0.998;
}

int RunConfig::resolved_hidden_nodes() const {
    if (hidden_nodes) return *hidden_nodes;
    return flow == FlowKind::TaylorGreen ? 36 : 24;
}

int RunConfig::resolved_epochs() const {
    if (epochs) return *epochs;
    return flow == FlowKind::TaylorGreen ? 6000 : 1600;
}

ActionSet RunConfig::action_set() const {
    return adaptive_speed ? ActionSet::adaptive(kappa1, kappa2, v1, v2)
                          : ActionSet::constant_speed(kappa1, kappa2, v);
}

ConcentrationField RunConfig::concentration_field() const {
    return field == FieldKind::Linear ? ConcentrationField::linear(c_k_linear, c0_linear)
                                      : ConcentrationField::radial(c_k_radial, c0_radial);
}

FlowFieldSpec RunConfig::flow_spec() const {
    return flow == FlowKind::TaylorGreen ? FlowFieldSpec::taylor_green(u0, k) : FlowFieldSpec::none();
}

namespace {

EpisodeConfig base_episode(const RunConfig& rc) {
    EpisodeConfig ep;
    ep.n_t = rc.n_t;
    ep.dt = rc.dt;
    ep.field = rc.concentration_field();
    ep.flow = rc.flow_spec();
    ep.flow_aware = rc.flow_aware;
    ep.actions = rc.action_set();
    // inputs and rewards are always scaled by the training gradient
    ep.c_k = rc.c_k_linear;
    ep.source_radius = rc.source_radius;
    ep.radial_time_cap = rc.radial_time_cap;
    if (rc.field == FieldKind::Radial) {
        ep.spawn = SpawnCircle{{0.0, 0.0}, rc.spawn_radius};
    } else if (rc.flow == FlowKind::TaylorGreen) {
        // one full flow period in each direction
        const double period = 2.0 * std::numbers::pi / rc.k;
        ep.spawn = SpawnRect{{0.0, 0.0}, {period, period}};
    } else {
        ep.spawn = SpawnRect{{-rc.spawn_half_width, -rc.spawn_half_width},
                             {rc.spawn_half_width, rc.spawn_half_width}};
    }
    return ep;
}

}  // namespace

EpisodeConfig RunConfig::training_episode() const {
    EpisodeConfig ep = base_episode(*this);
    // training always happens in the linear field
    ep.field = ConcentrationField::linear(c_k_linear, c0_linear);
    if (flow != FlowKind::TaylorGreen) {
        ep.spawn = SpawnRect{{-spawn_half_width, -spawn_half_width}, {spawn_half_width, spawn_half_width}};
    } else {
        const double period = 2.0 * std::numbers::pi / k;
        ep.spawn = SpawnRect{{0.0, 0.0}, {period, period}};
    }
    ep.t_life = t_life_train;
    ep.record_trajectory = false;
    return ep;
}

EpisodeConfig RunConfig::evaluation_episode() const {
    EpisodeConfig ep = base_episode(*this);
    ep.t_life = field == FieldKind::Radial && !t_life ? radial_time_cap : resolved_t_life();
    return ep;
}

TrainingSchedule RunConfig::training_schedule() const {
    TrainingSchedule s;
    s.epochs = resolved_epochs();
    s.epsilon_start = epsilon_start;
    s.epsilon_floor = epsilon;
    s.epsilon_decay = resolved_epsilon_decay();
    s.learning_rate = learning_rate;
    s.lr_decay = lr_decay;
    s.gamma = gamma;
    s.hidden_layers = hidden_layers;
    s.hidden_nodes = resolved_hidden_nodes();
    s.buffer_capacity = static_cast<std::size_t>(buffer_capacity);
    s.batch_size = static_cast<std::size_t>(batch_size);
    s.updates_per_epoch = updates_per_epoch;
    return s;
}

void RunConfig::validate() const {
    auto positive = [](const char* key, double value) {
        if (!(value > 0.0)) throw ConfigError(std::string(key) + ": must be positive");
    };
    positive("v", v);
    positive("kappa1", kappa1);
    positive("kappa2", kappa2);
    positive("v1", v1);
    positive("v2", v2);
    positive("dt", dt);
    positive("t_life_train", t_life_train);
    if (t_life) positive("t_life", *t_life);
    positive("c_k_linear", c_k_linear);
    positive("c_k_radial", c_k_radial);
    positive("k", k);
    positive("spawn_half_width", spawn_half_width);
    positive("source_radius", source_radius);
    positive("radial_time_cap", radial_time_cap);
    positive("learning_rate", learning_rate);
    if (u0 < 0.0) throw ConfigError("u0: must be non-negative");
    if (spawn_radius < 0.0) throw ConfigError("spawn_radius: must be non-negative");
    if (!(kappa1 < kappa2)) throw ConfigError("kappa1: must be smaller than kappa2");
    if (n_t != 2 && n_t != 4 && n_t != 8) {
        throw ConfigError("n_t: must be one of 2, 4, 8 (got " + std::to_string(n_t) + ")");
    }
    if (flow_aware && flow != FlowKind::TaylorGreen) throw ConfigError("flow_aware: requires flow = tg");
    if (flow_aware && !(u0 > 0.0)) throw ConfigError("flow_aware: requires u0 > 0");
    if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("lr_decay: must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw ConfigError("gamma: must lie in [0, 1)");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon: must lie in [0, 1]");
    if (!(epsilon_start >= epsilon && epsilon_start <= 1.0)) {
        throw ConfigError("epsilon_start: must lie in [epsilon, 1]");
    }
    const double decay = resolved_epsilon_decay();
    if (!(decay > 0.0 && decay < 1.0)) throw ConfigError("epsilon_decay: must lie in (0, 1)");
    if (hidden_layers < 1) throw ConfigError("hidden_layers: must be at least 1");
    if (resolved_hidden_nodes() < 1) throw ConfigError("hidden_nodes: must be at least 1");
    if (resolved_epochs() < 0) throw ConfigError("epochs: must be non-negative");
    if (batch_size < 1) throw ConfigError("batch_size: must be at least 1");
    if (buffer_capacity < batch_size) throw ConfigError("buffer_capacity: must hold one minibatch");
    if (updates_per_epoch < 0) throw ConfigError("updates_per_epoch: must be non-negative");
    if (cells < 1) throw ConfigError("cells: must be at least 1");
    if (threads < 1) throw ConfigError("threads: must be at least 1");
    // the action interval must be at least one integration step
    const ActionSet actions = action_set();
    const double fastest = adaptive_speed ? std::max(v1, v2) : v;
    if (std::floor(2.0 * std::numbers::pi / (actions.mean_curvature() * fastest) / (n_t * dt)) < 1.0) {
        throw ConfigError("dt: too coarse for the action interval");
    }
}

namespace {

// shortest decimal that parses back to the same double
struct Shortest {
    double value;
};

std::ostream& operator<<(std::ostream& out, Shortest s) {
    char buf[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, s.value);
        if (std::strtod(buf, nullptr) == s.value) break;
    }
    return out << buf;
}

}  // namespace

std::string format_config(const RunConfig& config) {
    std::ostringstream out;
    auto b = [](bool x) { return x ? "true" : "false"; };
    const auto& c = config;
    out << "v = " << Shortest{c.v} << '\n'
        << "kappa1 = " << Shortest{c.kappa1} << '\n'
        << "kappa2 = " << Shortest{c.kappa2} << '\n'
        << "v1 = " << Shortest{c.v1} << '\n'
        << "v2 = " << Shortest{c.v2} << '\n'
        << "adaptive_speed = " << b(c.adaptive_speed) << '\n'
        << "dt = " << Shortest{c.dt} << '\n'
        << "t_life_train = " << Shortest{c.t_life_train} << '\n'
        << "t_life = " << Shortest{c.resolved_t_life()} << '\n'
        << "c_k_linear = " << Shortest{c.c_k_linear} << '\n'
        << "c0_linear = " << Shortest{c.c0_linear} << '\n'
        << "c_k_radial = " << Shortest{c.c_k_radial} << '\n'
        << "c0_radial = " << Shortest{c.c0_radial} << '\n'
        << "field = " << (c.field == FieldKind::Linear ? "linear" : "radial") << '\n'
        << "flow = " << (c.flow == FlowKind::None ? "none" : "tg") << '\n'
        << "u0 = " << Shortest{c.u0} << '\n'
        << "k = " << Shortest{c.k} << '\n'
        << "flow_aware = " << b(c.flow_aware) << '\n'
        << "n_t = " << c.n_t << '\n'
        << "spawn_half_width = " << Shortest{c.spawn_half_width} << '\n'
        << "spawn_radius = " << Shortest{c.spawn_radius} << '\n'
        << "source_radius = " << Shortest{c.source_radius} << '\n'
        << "radial_time_cap = " << Shortest{c.radial_time_cap} << '\n'
        << "learning_rate = " << Shortest{c.learning_rate} << '\n'
        << "lr_decay = " << Shortest{c.lr_decay} << '\n'
        << "gamma = " << Shortest{c.gamma} << '\n'
        << "epsilon = " << Shortest{c.epsilon} << '\n'
        << "epsilon_start = " << Shortest{c.epsilon_start} << '\n'
        << "epsilon_decay = " << Shortest{c.resolved_epsilon_decay()} << '\n'
        << "hidden_layers = " << c.hidden_layers << '\n'
        << "hidden_nodes = " << c.resolved_hidden_nodes() << '\n'
        << "epochs = " << c.resolved_epochs() << '\n'
        << "buffer_capacity = " << c.buffer_capacity << '\n'
        << "batch_size = " << c.batch_size << '\n'
        << "updates_per_epoch = " << c.updates_per_epoch << '\n'
        << "seed = " << c.seed << '\n'
        << "cells = " << c.cells << '\n'
        << "policy = " << policy_name(c.policy) << '\n'
        << "out_dir = " << c.out_dir << '\n';
    if (!c.weights.empty()) out << "weights = " << c.weights << '\n';
    out << "threads = " << c.threads << '\n';
    return out.str();
}

}  // namespace chemotaxis
