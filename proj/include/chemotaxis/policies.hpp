#pragma once

#include "chemotaxis/geometry.hpp"
#include "chemotaxis/perception.hpp"
#include "chemotaxis/random.hpp"

#include <array>
#include <optional>
#include <span>

namespace chemotaxis {

struct PolicyDecision {
    int action = 0;  // 0 -> kappa1, 1 -> kappa2
    bool exploratory = false;
    std::optional<std::array<double, 2>> q_values;
};

// Index of the largest value; ties go to the lower index.
int argmax(std::span<const double> values);

/// With probability epsilon a uniformly random action, otherwise the argmax.
/// One uniform draw is consumed per call, plus one more when exploring.
PolicyDecision epsilon_greedy(std::span<const double> q_values, double epsilon, Rng& rng);

/// Hand-written baseline: kappa2 when the newest concentration is the window
/// maximum, kappa1 when it is the minimum, otherwise keep the current
/// curvature. The maximum test is applied first.
double greedy_strategy(const PerceptionHistory& history, const ActionSet& actions, double current_kappa);

/// Open-loop baseline: kappa1 for N_T/2 actions, then kappa2 for N_T/2.
double swinging_pattern(long long action_counter, int n_t, const ActionSet& actions);

}  // namespace chemotaxis
