#pragma once

#include "chemotaxis/environment.hpp"
#include "chemotaxis/geometry.hpp"

#include <cstddef>
#include <vector>

namespace chemotaxis {

/// One sensed sample. The flow entries are only fed to flow-aware networks.
struct PerceptionRecord {
    double c = 0.0;
    double kappa = 0.0;
    double ux = 0.0;
    double uy = 0.0;
    double omega0 = 0.0;
};

/// Fixed window of the last N_T records, index 0 is the newest.
///
/// The window is created full: every slot holds the initial record, so the
/// first network input is defined and its concentration entries are zero.
class PerceptionHistory {
public:
    PerceptionHistory(int n_t, const PerceptionRecord& initial);

    void push(const PerceptionRecord& record);

    int size() const { return n_t_; }
    // age 0 = newest, age size()-1 = oldest
    const PerceptionRecord& at(int age) const;
    const PerceptionRecord& newest() const { return at(0); }
    const PerceptionRecord& oldest() const { return at(n_t_ - 1); }

private:
    int n_t_;
    int head_ = 0;  // slot of the newest record
    std::vector<PerceptionRecord> ring_;
};

double average_period(const ActionSet& actions, double speed);

// Number of integration steps in one action interval: floor(T / (N_T dt)).
// Throws ConfigError when that is zero.
int action_interval_steps(double period, int n_t, double dt);
double action_interval(double period, int n_t, double dt);

inline std::size_t input_dimension(int n_t, bool flow_aware) {
    return static_cast<std::size_t>(n_t) * (flow_aware ? 5 : 2);
}

/// Network input, newest slice first. Each slice is (c*, kappa*) or, when
/// flow_aware, (c*, kappa*, ux*, uy*, omega0*).
std::vector<double> normalize_input(const PerceptionHistory& history, const ActionSet& actions,
                                    double c_k, const FlowFieldSpec& flow, bool flow_aware);

/// (c_new - c_oldest) / (N_T c_k |1/kappa1 - 1/kappa2|)
double compute_reward(double c_new, const PerceptionHistory& history, const ActionSet& actions,
                      double c_k);

}  // namespace chemotaxis
