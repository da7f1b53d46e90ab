#pragma once

#include "chemotaxis/vec2.hpp"

namespace chemotaxis {

enum class FieldKind { Linear, Radial };

/// Static chemoattractant concentration.
///   linear: c = gradient * y + offset
///   radial: c = offset - gradient * |r|
struct ConcentrationField {
    FieldKind kind = FieldKind::Linear;
    double gradient = 1.0;
    double offset = 20.0;

    static ConcentrationField linear(double gradient = 1.0, double offset = 20.0) {
        return {FieldKind::Linear, gradient, offset};
    }
    static ConcentrationField radial(double gradient = 1.0, double offset = 100.0) {
        return {FieldKind::Radial, gradient, offset};
    }

    void validate() const;
};

enum class FlowKind { None, TaylorGreen };

struct FlowFieldSpec {
    FlowKind kind = FlowKind::None;
    double u0 = 0.1;
    double k = 0.0;

    static FlowFieldSpec none() { return {FlowKind::None, 0.0, 0.0}; }
    static FlowFieldSpec taylor_green(double u0, double k) {
        return {FlowKind::TaylorGreen, u0, k};
    }

    void validate() const;
};

/// Background velocity and the rotation rate it imposes on the swimmer.
struct FlowSample {
    double ux = 0.0;
    double uy = 0.0;
    double omega0 = 0.0;
};

double concentration_at(const ConcentrationField& field, Vec2 point);

// Taylor-Green cell flow; omega0 = -u0 k cos(kx) cos(ky) is half the vorticity.
FlowSample flow_at(const FlowFieldSpec& spec, Vec2 point);

}  // namespace chemotaxis
