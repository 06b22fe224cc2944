#include "levelband/field.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "levelband/errors.hpp"

namespace levelband {

namespace {

enum class BuiltinKind { Paraboloid, Gaussian, TwoBump, Linear, EllipseQuadratic };

struct CatalogEntry {
    const char* name;
    BuiltinKind kind;
    int arity;
};

constexpr CatalogEntry kCatalog[] = {
    {"paraboloid", BuiltinKind::Paraboloid, 0},
    {"gaussian", BuiltinKind::Gaussian, 0},
    {"two_bump", BuiltinKind::TwoBump, 1},
    {"linear", BuiltinKind::Linear, 0},
    {"ellipse_quadratic", BuiltinKind::EllipseQuadratic, 2},
};

Window default_window(BuiltinKind kind, const std::vector<double>& params) {
    switch (kind) {
    case BuiltinKind::TwoBump: {
        const double c = std::fabs(params[0]) + 3.0;
        return {-c, c, -c, c};
    }
    case BuiltinKind::EllipseQuadratic: {
        const double ax = 3.0 * std::fabs(params[0]);
        const double ay = 3.0 * std::fabs(params[1]);
        return {-ax, ax, -ay, ay};
    }
    default:
        return {-3.0, 3.0, -3.0, 3.0};
    }
}

// One isotropic gaussian bump exp(-((x-cx)^2+y^2)), accumulated into a jet.
void add_bump(Jet2& j, double x, double y, double cx) {
    const double dx = x - cx;
    const double e = std::exp(-(dx * dx + y * y));
    j.value += e;
    j.grad.x += -2.0 * dx * e;
    j.grad.y += -2.0 * y * e;
    j.hess.xx += (4.0 * dx * dx - 2.0) * e;
    j.hess.xy += 4.0 * dx * y * e;
    j.hess.yy += (4.0 * y * y - 2.0) * e;
}

class AnalyticField final : public ScalarField {
public:
    AnalyticField(const CatalogEntry& entry, std::vector<double> params, Window window)
        : entry_(entry), params_(std::move(params)), window_(window) {}

    Jet2 jet(const Point2& p) const override {
        Jet2 j;
        switch (entry_.kind) {
        case BuiltinKind::Paraboloid:
            j.value = p.x * p.x + p.y * p.y;
            j.grad = {2.0 * p.x, 2.0 * p.y};
            j.hess = {2.0, 0.0, 2.0};
            break;
        case BuiltinKind::Gaussian:
            add_bump(j, p.x, p.y, 0.0);
            break;
        case BuiltinKind::TwoBump:
            add_bump(j, p.x, p.y, params_[0]);
            add_bump(j, p.x, p.y, -params_[0]);
            break;
        case BuiltinKind::Linear:
            j.value = p.x;
            j.grad = {1.0, 0.0};
            break;
        case BuiltinKind::EllipseQuadratic: {
            const double ia = 1.0 / (params_[0] * params_[0]);
            const double ib = 1.0 / (params_[1] * params_[1]);
            j.value = p.x * p.x * ia + p.y * p.y * ib;
            j.grad = {2.0 * p.x * ia, 2.0 * p.y * ib};
            j.hess = {2.0 * ia, 0.0, 2.0 * ib};
            break;
        }
        }
        return j;
    }

    const Window& window() const override { return window_; }

    std::string description() const override {
        std::string d = std::string("builtin:") + entry_.name;
        for (std::size_t i = 0; i < params_.size(); ++i)
            d += (i == 0 ? ":" : ",") + format_param(params_[i]);
        return d;
    }

private:
    static std::string format_param(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return buf;
    }

    CatalogEntry entry_;
    std::vector<double> params_;
    Window window_;
};

const CatalogEntry& lookup(const std::string& name, const std::vector<double>& params) {
    for (const auto& entry : kCatalog) {
        if (name == entry.name) {
            if (static_cast<int>(params.size()) != entry.arity)
                throw BadParamArity(name + " takes " + std::to_string(entry.arity) +
                                    " parameter(s), got " + std::to_string(params.size()));
            return entry;
        }
    }
    throw UnknownField(name);
}

} // namespace

FieldPtr builtin_field(const std::string& name, const std::vector<double>& params) {
    const CatalogEntry& entry = lookup(name, params);
    if (entry.kind == BuiltinKind::EllipseQuadratic && (params[0] == 0.0 || params[1] == 0.0))
        throw BadParamArity("ellipse_quadratic: semi-axes must be nonzero");
    return std::make_shared<AnalyticField>(entry, params, default_window(entry.kind, params));
}

FieldPtr builtin_field(const std::string& name, const std::vector<double>& params,
                       const Window& window) {
    const CatalogEntry& entry = lookup(name, params);
    if (entry.kind == BuiltinKind::EllipseQuadratic && (params[0] == 0.0 || params[1] == 0.0))
        throw BadParamArity("ellipse_quadratic: semi-axes must be nonzero");
    if (!window.valid())
        throw Error("invalid window");
    return std::make_shared<AnalyticField>(entry, params, window);
}

std::vector<std::string> builtin_field_names() {
    std::vector<std::string> names;
    for (const auto& entry : kCatalog)
        names.push_back(entry.name);
    return names;
}

namespace {

// 1D second-order stencils along one axis of a row-major grid.
// n: points along the axis, stride: index step along the axis.
void first_derivative(const std::vector<double>& g, std::vector<double>& out, int n,
                      int count, int stride, int cross_stride, double h) {
    for (int k = 0; k < count; ++k) {
        const double* src = g.data() + k * cross_stride;
        double* dst = out.data() + k * cross_stride;
        dst[0] = (-3.0 * src[0] + 4.0 * src[stride] - src[2 * stride]) / (2.0 * h);
        for (int i = 1; i + 1 < n; ++i)
            dst[i * stride] = (src[(i + 1) * stride] - src[(i - 1) * stride]) / (2.0 * h);
        dst[(n - 1) * stride] = (3.0 * src[(n - 1) * stride] - 4.0 * src[(n - 2) * stride] +
                                 src[(n - 3) * stride]) /
                                (2.0 * h);
    }
}

void second_derivative(const std::vector<double>& g, std::vector<double>& out, int n,
                       int count, int stride, int cross_stride, double h) {
    const double h2 = h * h;
    for (int k = 0; k < count; ++k) {
        const double* src = g.data() + k * cross_stride;
        double* dst = out.data() + k * cross_stride;
        dst[0] = (2.0 * src[0] - 5.0 * src[stride] + 4.0 * src[2 * stride] -
                  src[3 * stride]) / h2;
        for (int i = 1; i + 1 < n; ++i)
            dst[i * stride] =
                (src[(i + 1) * stride] - 2.0 * src[i * stride] + src[(i - 1) * stride]) / h2;
        dst[(n - 1) * stride] = (2.0 * src[(n - 1) * stride] - 5.0 * src[(n - 2) * stride] +
                                 4.0 * src[(n - 3) * stride] - src[(n - 4) * stride]) / h2;
    }
}

class GridField final : public ScalarField {
public:
    explicit GridField(const GridData& data)
        : nx_(data.nx), ny_(data.ny), window_(data.window), value_(data.samples) {
        hx_ = window_.width() / (nx_ - 1);
        hy_ = window_.height() / (ny_ - 1);
        fx_.resize(value_.size());
        fy_.resize(value_.size());
        fxx_.resize(value_.size());
        fxy_.resize(value_.size());
        fyy_.resize(value_.size());
        // x-axis: stride 1, one row per pass; y-axis: stride nx, one column per pass.
        first_derivative(value_, fx_, nx_, ny_, 1, nx_, hx_);
        first_derivative(value_, fy_, ny_, nx_, nx_, 1, hy_);
        second_derivative(value_, fxx_, nx_, ny_, 1, nx_, hx_);
        second_derivative(value_, fyy_, ny_, nx_, nx_, 1, hy_);
        first_derivative(fx_, fxy_, ny_, nx_, nx_, 1, hy_);
    }

    Jet2 jet(const Point2& p) const override {
        // Clamp to the window; downstream code never extrapolates.
        const Point2 q = window_.clamp(p);
        const double u = (q.x - window_.xmin) / hx_;
        const double v = (q.y - window_.ymin) / hy_;
        int i = static_cast<int>(u);
        int j = static_cast<int>(v);
        if (i > nx_ - 2) i = nx_ - 2;
        if (j > ny_ - 2) j = ny_ - 2;
        const double fu = u - i;
        const double fv = v - j;
        Jet2 out;
        out.value = bilinear(value_, i, j, fu, fv);
        out.grad = {bilinear(fx_, i, j, fu, fv), bilinear(fy_, i, j, fu, fv)};
        out.hess = {bilinear(fxx_, i, j, fu, fv), bilinear(fxy_, i, j, fu, fv),
                    bilinear(fyy_, i, j, fu, fv)};
        return out;
    }

    const Window& window() const override { return window_; }

    std::string description() const override {
        return "grid:" + std::to_string(nx_) + "x" + std::to_string(ny_);
    }

private:
    double bilinear(const std::vector<double>& g, int i, int j, double fu, double fv) const {
        const double g00 = g[j * nx_ + i];
        const double g10 = g[j * nx_ + i + 1];
        const double g01 = g[(j + 1) * nx_ + i];
        const double g11 = g[(j + 1) * nx_ + i + 1];
        return (1.0 - fv) * ((1.0 - fu) * g00 + fu * g10) +
               fv * ((1.0 - fu) * g01 + fu * g11);
    }

    int nx_, ny_;
    Window window_;
    double hx_, hy_;
    std::vector<double> value_, fx_, fy_, fxx_, fxy_, fyy_;
};

} // namespace

FieldPtr grid_field(const GridData& data) {
    if (data.nx < 4 || data.ny < 4)
        throw GridTooSmall("grid must be at least 4x4, got " + std::to_string(data.nx) + "x" +
                           std::to_string(data.ny));
    if (!data.window.valid())
        throw Error("invalid grid window");
    if (data.samples.size() != static_cast<std::size_t>(data.nx) * data.ny)
        throw Error("grid sample count mismatch");
    for (double s : data.samples)
        if (!std::isfinite(s))
            throw NonFiniteSample("grid contains a non-finite sample");
    return std::make_shared<GridField>(data);
}

GridData read_grid(std::istream& in) {
    GridData data;
    if (!(in >> data.nx >> data.ny))
        throw FileFormatError("grid file: expected 'nx ny' on line 1");
    if (!(in >> data.window.xmin >> data.window.xmax >> data.window.ymin >> data.window.ymax))
        throw FileFormatError("grid file: expected 'xmin xmax ymin ymax' on line 2");
    if (data.nx <= 0 || data.ny <= 0)
        throw FileFormatError("grid file: nx and ny must be positive");
    data.samples.resize(static_cast<std::size_t>(data.nx) * data.ny);
    for (double& s : data.samples)
        if (!(in >> s))
            throw FileFormatError("grid file: fewer samples than nx*ny");
    return data;
}

GridData load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FileFormatError("cannot open grid file: " + path);
    return read_grid(in);
}

} // namespace levelband
