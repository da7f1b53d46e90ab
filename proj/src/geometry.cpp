#include "chemotaxis/geometry.hpp"

#include "chemotaxis/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace chemotaxis {

double ActionSet::curvature(int action_index) const {
    switch (action_index) {
        case 0: return kappa1;
        case 1: return kappa2;
        default: throw std::invalid_argument("action index must be 0 or 1");
    }
}

int ActionSet::action_index(double kappa) const {
    if (kappa == kappa1) return 0;
    if (kappa == kappa2) return 1;
    throw std::invalid_argument("curvature is not one of the two legal values");
}

void ActionSet::validate() const {
    if (!(kappa1 > 0.0) || !(kappa2 > kappa1)) {
        throw ConfigError("curvatures must satisfy 0 < kappa1 < kappa2");
    }
    if (!(v1 > 0.0) || !(v2 > 0.0)) {
        throw ConfigError("swimming speeds must be positive");
    }
    if (!adaptive_speed && v1 != v2) {
        throw ConfigError("constant-speed action set requires v1 == v2");
    }
}

double speed_for_curvature(const ActionSet& actions, double kappa) {
    return actions.action_index(kappa) == 0 ? actions.v1 : actions.v2;
}

SwimmerState step_swimmer(const SwimmerState& state, const FlowSample& flow, double dt) {
    const double turn = state.speed * state.curvature * dt;
    const double chord = 2.0 / state.curvature * std::sin(0.5 * turn);

    SwimmerState next = state;
    next.position += chord * unit_from_angle(state.heading + 0.5 * turn);
    next.position += dt * Vec2{flow.ux, flow.uy};
    next.heading = state.heading + (turn + flow.omega0 * dt);
    next.time = state.time + dt;
    return next;
}

Vec2 curvature_center(const SwimmerState& state) {
    return state.position + (1.0 / state.curvature) * state.normal();
}

}  // namespace chemotaxis
