#include "levelband/diffgeo.hpp"

#include <cmath>

#include "levelband/errors.hpp"

namespace levelband {

Frame level_frame(const Jet2& jet, double grad_tol) {
    const double g = jet.grad.norm();
    if (!(g >= grad_tol))
        throw NearCriticalPoint(g);
    Frame f;
    f.grad_norm = g;
    f.N = -jet.grad / g;
    f.T = f.N.rot_cw();
    return f;
}

double second_directional(const Jet2& jet, const Vec2& v) {
    if (std::fabs(v.norm() - 1.0) > 1e-9)
        throw NonUnitDirection("direction must be a unit vector");
    return jet.hess.quad(v);
}

double level_curvature(const Jet2& jet, double grad_tol) {
    const Frame f = level_frame(jet, grad_tol);
    return second_directional(jet, f.T) / f.grad_norm;
}

} // namespace levelband
