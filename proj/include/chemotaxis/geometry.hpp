#pragma once

#include "chemotaxis/environment.hpp"
#include "chemotaxis/vec2.hpp"

namespace chemotaxis {

/// The two steering actions (path curvatures) and their swimming speeds.
/// With adaptive speed off, v1 == v2 == v.
struct ActionSet {
    double kappa1 = 3.0;
    double kappa2 = 5.0;
    double v1 = 1.0;
    double v2 = 1.0;
    bool adaptive_speed = false;

    static ActionSet constant_speed(double kappa1, double kappa2, double v) {
        return {kappa1, kappa2, v, v, false};
    }
    static ActionSet adaptive(double kappa1, double kappa2, double v1, double v2) {
        return {kappa1, kappa2, v1, v2, true};
    }

    double mean_curvature() const { return 0.5 * (kappa1 + kappa2); }
    double curvature(int action_index) const;
    int action_index(double kappa) const;

    void validate() const;
};

/// Frenet frame is held as one heading angle, so the tangent (cos, sin) and
/// normal (-sin, cos) stay orthonormal.
struct SwimmerState {
    Vec2 position;
    double heading = 0.0;
    double curvature = 3.0;
    double speed = 1.0;
    double time = 0.0;

    Vec2 tangent() const { return unit_from_angle(heading); }
    Vec2 normal() const { return {-std::sin(heading), std::cos(heading)}; }
};

// Returns v1 for kappa1 and v2 for kappa2; throws std::invalid_argument for
// any other curvature.
double speed_for_curvature(const ActionSet& actions, double kappa);

// One integration step. Self-propulsion follows the exact circular arc of
// angle v*kappa*dt; the flow rotates the heading by omega0*dt and advects the
// position by u*dt (explicit Euler, flow sampled at the pre-step position).
SwimmerState step_swimmer(const SwimmerState& state, const FlowSample& flow, double dt);

Vec2 curvature_center(const SwimmerState& state);

}  // namespace chemotaxis
