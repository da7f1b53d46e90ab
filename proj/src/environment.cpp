#include "chemotaxis/environment.hpp"

#include "chemotaxis/errors.hpp"

#include <cmath>

namespace chemotaxis {

void ConcentrationField::validate() const {
    if (!(gradient > 0.0) || !std::isfinite(gradient)) {
        throw ConfigError("concentration gradient must be positive");
    }
    if (!std::isfinite(offset)) {
        throw ConfigError("concentration offset must be finite");
    }
}

void FlowFieldSpec::validate() const {
    if (kind == FlowKind::None) return;
    if (!(u0 >= 0.0) || !std::isfinite(u0)) {
        throw ConfigError("flow amplitude u0 must be non-negative");
    }
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ConfigError("flow wavenumber k must be positive");
    }
}

double concentration_at(const ConcentrationField& field, Vec2 point) {
    switch (field.kind) {
        case FieldKind::Linear:
            return field.gradient * point.y + field.offset;
        case FieldKind::Radial:
            return field.offset - field.gradient * point.norm();
    }
    return 0.0;
}

FlowSample flow_at(const FlowFieldSpec& spec, Vec2 point) {
    if (spec.kind == FlowKind::None) return {};
    const double cx = std::cos(spec.k * point.x);
    const double sx = std::sin(spec.k * point.x);
    const double cy = std::cos(spec.k * point.y);
    const double sy = std::sin(spec.k * point.y);
    return {spec.u0 * cx * sy, -spec.u0 * sx * cy, -spec.u0 * spec.k * cx * cy};
}

}  // namespace chemotaxis
