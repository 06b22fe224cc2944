#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "levelband/geometry.hpp"

namespace levelband {

/// Evaluatable scalar field on a rectangular window. Implementations must be
/// pure: two jet() calls with the same point return bit-identical results,
/// which also makes concurrent read-only use safe.
class ScalarField {
public:
    virtual ~ScalarField() = default;

    /// Value, gradient and Hessian at p. p is expected inside window().
    virtual Jet2 jet(const Point2& p) const = 0;

    virtual const Window& window() const = 0;

    /// Short human-readable identity, used in reports ("builtin:paraboloid", ...).
    virtual std::string description() const = 0;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

/// Analytic test fields with exact jets.
///
/// Catalog: paraboloid f=x^2+y^2; gaussian f=exp(-x^2-y^2);
/// two_bump f=exp(-((x-c)^2+y^2))+exp(-((x+c)^2+y^2)) with c=params[0];
/// linear f=x; ellipse_quadratic f=x^2/p0^2+y^2/p1^2.
///
/// Throws UnknownField for a name outside the catalog and BadParamArity when
/// params does not match the entry.
FieldPtr builtin_field(const std::string& name, const std::vector<double>& params = {});
FieldPtr builtin_field(const std::string& name, const std::vector<double>& params,
                       const Window& window);

/// Names of all catalog fields, in catalog order.
std::vector<std::string> builtin_field_names();

/// Row-major samples of a field on a regular grid; row 0 is the ymin row.
struct GridData {
    int nx = 0;
    int ny = 0;
    Window window;
    std::vector<double> samples;
};

/// Field backed by sampled data. Derivative grids (f_x, f_y, f_xx, f_xy,
/// f_yy) are precomputed with second-order central differences (one-sided
/// second-order at edges); value and derivative grids are then interpolated
/// bilinearly at query points.
///
/// Throws GridTooSmall when nx or ny < 4 and NonFiniteSample on bad data.
FieldPtr grid_field(const GridData& data);

/// Parses the plain-text grid format: line 1 "nx ny", line 2
/// "xmin xmax ymin ymax", then ny rows of nx samples (row 0 = ymin row).
GridData read_grid(std::istream& in);
GridData load_grid_file(const std::string& path);

} // namespace levelband
