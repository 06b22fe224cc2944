#pragma once

#include <iosfwd>
#include <vector>

#include "levelband/diffgeo.hpp"
#include "levelband/field.hpp"

namespace levelband {

/// Default relative tolerance on |f(vertex) - level|.
inline constexpr double kLevelTolDefault = 1e-9;

/// Oriented polyline approximating one component of f^-1[t]. Closed
/// contours are stored without repeating the first vertex and are oriented
/// counterclockwise (signed_area > 0).
struct Contour {
    std::vector<Point2> vertices;
    bool closed = false;
    double signed_area = 0.0; // shoelace; meaningful for closed contours
    double arc_length = 0.0;
    double level = 0.0;
};

/// What to integrate along a contour. Curvature integrates kappa ds;
/// CoareaWeighted integrates D_T^2 f / |grad f| ds. The two coincide
/// pointwise (curvature lemma); both exist for cross-checking.
enum class Integrand { Curvature, CoareaWeighted };

/// Marching squares on a res x res cell grid over the window, edge
/// crossings refined by bisection to |f - t| <= 1e-10*(1+|t|), segments
/// chained into polylines. Contours that touch the window boundary come
/// back with closed=false; closed contours are CCW-normalized.
///
/// Throws AmbiguousSaddleCell when a saddle cell's center value lies within
/// level_tol_rel*(1+|t|) of t. An empty level set returns an empty list.
std::vector<Contour> extract_level_set(const ScalarField& field, double t,
                                       const Window& window, int res,
                                       double level_tol_rel = kLevelTolDefault);

/// Orientation indicator sigma = n . N at the contour's most regular vertex
/// (n = inward polyline normal, N = -grad/|grad|), cross-checked at 16
/// evenly spaced vertices. Returns +1 or -1.
///
/// Throws OpenContour for open input and InconsistentSigma when the sampled
/// signs disagree.
int contour_sigma(const ScalarField& field, const Contour& c,
                  double grad_tol = kGradTolDefault);

/// Composite midpoint rule along the polyline; each segment midpoint is
/// projected back onto the level set by one Newton step along the gradient
/// before the integrand is evaluated.
double contour_integral(const ScalarField& field, const Contour& c, Integrand kind,
                        double grad_tol = kGradTolDefault);

/// Segment-pair check that the polyline has no self-intersections.
bool is_simple(const Contour& c);

/// CSV dump with header level,component,vertex_index,x,y.
void write_contour_csv(std::ostream& out, const std::vector<Contour>& contours);

/// SVG with the window mapped to a 1024-px-wide viewport, one path per contour.
void write_contour_svg(std::ostream& out, const std::vector<Contour>& contours,
                       const Window& window);

namespace detail {

/// extract_level_set with an explicit cell visit order (cell id = cy*res+cx);
/// used to assert that chaining and orientation are order-independent.
std::vector<Contour> extract_level_set_ordered(const ScalarField& field, double t,
                                               const Window& window, int res,
                                               const std::vector<int>& cell_order,
                                               double level_tol_rel = kLevelTolDefault);

} // namespace detail

} // namespace levelband
