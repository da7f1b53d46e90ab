#include "chemotaxis/policies.hpp"

#include "chemotaxis/errors.hpp"

#include <stdexcept>

namespace chemotaxis {

int argmax(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("argmax of an empty range");
    int best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

PolicyDecision epsilon_greedy(std::span<const double> q_values, double epsilon, Rng& rng) {
    if (q_values.size() < 2) throw std::invalid_argument("epsilon-greedy needs at least two actions");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");

    PolicyDecision decision;
    if (q_values.size() == 2) decision.q_values = std::array<double, 2>{q_values[0], q_values[1]};
    if (rng.uniform() < epsilon) {
        decision.action = static_cast<int>(rng.below(q_values.size()));
        decision.exploratory = true;
    } else {
        decision.action = argmax(q_values);
    }
    return decision;
}

double greedy_strategy(const PerceptionHistory& history, const ActionSet& actions, double current_kappa) {
    const double newest = history.newest().c;
    bool is_max = true;
    bool is_min = true;
    for (int i = 1; i < history.size(); ++i) {
        const double c = history.at(i).c;
        if (c > newest) is_max = false;
        if (c < newest) is_min = false;
    }
    if (is_max) return actions.kappa2;
    if (is_min) return actions.kappa1;
    return current_kappa;
}

double swinging_pattern(long long action_counter, int n_t, const ActionSet& actions) {
    if (n_t < 2 || n_t % 2 != 0) throw ConfigError("swinging pattern needs an even N_T");
    if (action_counter < 0) throw std::invalid_argument("action counter must be non-negative");
    const long long phase = action_counter % n_t;
    return phase < n_t / 2 ? actions.kappa1 : actions.kappa2;
}

}  // namespace chemotaxis
