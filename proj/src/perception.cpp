#include "chemotaxis/perception.hpp"

#include "chemotaxis/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chemotaxis {

PerceptionHistory::PerceptionHistory(int n_t, const PerceptionRecord& initial)
    : n_t_(n_t) {
    if (n_t < 1) throw ConfigError("history length must be at least 1");
    ring_.assign(static_cast<std::size_t>(n_t), initial);
}

void PerceptionHistory::push(const PerceptionRecord& record) {
    head_ = (head_ + n_t_ - 1) % n_t_;
    ring_[static_cast<std::size_t>(head_)] = record;
}

const PerceptionRecord& PerceptionHistory::at(int age) const {
    if (age < 0 || age >= n_t_) throw std::out_of_range("history age out of range");
    return ring_[static_cast<std::size_t>((head_ + age) % n_t_)];
}

double average_period(const ActionSet& actions, double speed) {
    if (!(speed > 0.0)) throw ConfigError("swimming speed must be positive");
    return 2.0 * std::numbers::pi / (actions.mean_curvature() * speed);
}

int action_interval_steps(double period, int n_t, double dt) {
    if (!(period > 0.0) || !(dt > 0.0) || n_t < 1) {
        throw ConfigError("action interval needs positive period, N_T and dt");
    }
    const double steps = std::floor(period / (n_t * dt));
    if (steps < 1.0) {
        throw ConfigError("integration step too coarse: action interval rounds to zero steps");
    }
    return static_cast<int>(steps);
}

double action_interval(double period, int n_t, double dt) {
    return action_interval_steps(period, n_t, dt) * dt;
}

std::vector<double> normalize_input(const PerceptionHistory& history, const ActionSet& actions,
                                    double c_k, const FlowFieldSpec& flow, bool flow_aware) {
    if (!(c_k > 0.0)) throw ConfigError("typical gradient c_k must be positive");
    if (flow_aware && (flow.kind != FlowKind::TaylorGreen || !(flow.u0 > 0.0) || !(flow.k > 0.0))) {
        throw ConfigError("flow-aware input needs a Taylor-Green flow with u0 > 0 and k > 0");
    }

    const int n_t = history.size();
    double mean_c = 0.0;
    for (int i = 0; i < n_t; ++i) mean_c += history.at(i).c;
    mean_c /= n_t;

    const double kappa_bar = actions.mean_curvature();
    const double c_scale = kappa_bar / c_k;
    const double kappa_scale = 2.0 / std::abs(actions.kappa1 - actions.kappa2);

    std::vector<double> input;
    input.reserve(input_dimension(n_t, flow_aware));
    for (int i = 0; i < n_t; ++i) {
        const PerceptionRecord& rec = history.at(i);
        input.push_back((rec.c - mean_c) * c_scale);
        input.push_back((rec.kappa - kappa_bar) * kappa_scale);
        if (flow_aware) {
            input.push_back(rec.ux / flow.u0);
            input.push_back(rec.uy / flow.u0);
            input.push_back(rec.omega0 / (flow.u0 * flow.k));
        }
    }
    return input;
}

double compute_reward(double c_new, const PerceptionHistory& history, const ActionSet& actions,
                      double c_k) {
    const double radius_gap = std::abs(1.0 / actions.kappa1 - 1.0 / actions.kappa2);
    if (!(radius_gap > 0.0)) throw ConfigError("reward undefined for kappa1 == kappa2");
    if (!(c_k > 0.0)) throw ConfigError("typical gradient c_k must be positive");
    return (c_new - history.oldest().c) / (history.size() * c_k * radius_gap);
}

}  // namespace chemotaxis
