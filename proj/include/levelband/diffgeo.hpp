#pragma once

#include "levelband/geometry.hpp"

namespace levelband {

/// Default absolute gradient tolerance below which the level frame is
/// declared undefined.
inline constexpr double kGradTolDefault = 1e-8;

/// Unit tangent/normal frame of a level curve. N = -grad/|grad| and
/// T = (-f_y, f_x)/|grad|, so (T, N) is positively oriented.
struct Frame {
    Vec2 T;
    Vec2 N;
    double grad_norm = 0.0;
};

/// Frame of the level curve through the jet's base point.
/// Throws NearCriticalPoint when |grad| < grad_tol.
Frame level_frame(const Jet2& jet, double grad_tol = kGradTolDefault);

/// Second-order directional derivative v.(H v) for unit v.
/// Throws NonUnitDirection when |v| deviates from 1 by more than 1e-9.
double second_directional(const Jet2& jet, const Vec2& v);

/// Signed curvature of the level curve: D_T^2 f / |grad f|.
double level_curvature(const Jet2& jet, double grad_tol = kGradTolDefault);

} // namespace levelband
