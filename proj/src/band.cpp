#include "levelband/band.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "levelband/errors.hpp"
#include "levelband/quadrature.hpp"

namespace levelband {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void push_warning(std::vector<std::string>* sink, std::string msg) {
    if (sink) sink->push_back(std::move(msg));
}

void check_band(Band band) {
    if (!(std::isfinite(band.a) && std::isfinite(band.b) && band.a < band.b))
        throw Error("band requires finite a < b (got [" + num(band.a) + ", " + num(band.b) + "])");
}

} // namespace

const char* critical_kind_name(CriticalKind k) {
    switch (k) {
    case CriticalKind::Min: return "min";
    case CriticalKind::Max: return "max";
    case CriticalKind::Saddle: return "saddle";
    case CriticalKind::Degenerate: break;
    }
    return "degenerate";
}

bool BandComponent::contains_cell(int cell) const {
    return std::binary_search(cells.begin(), cells.end(), cell);
}

bool BandComponent::contains_point(const Point2& p) const {
    if (res <= 0 || !window.contains(p)) return false;
    const double dx = window.width() / res;
    const double dy = window.height() / res;
    const int ix = std::clamp(static_cast<int>((p.x - window.xmin) / dx), 0, res - 1);
    const int iy = std::clamp(static_cast<int>((p.y - window.ymin) / dy), 0, res - 1);
    return contains_cell(iy * res + ix);
}

// --- critical points ---

std::vector<CriticalPoint> find_critical_points(const ScalarField& field, const Window& window,
                                                int res, double critical_tol,
                                                int* dropped_seeds) {
    if (res < 16) throw Error("find_critical_points: res must be at least 16");
    if (!window.valid()) throw Error("find_critical_points: invalid window");
    if (dropped_seeds) *dropped_seeds = 0;

    const int n = res + 1;
    const double dx = window.width() / res;
    const double dy = window.height() / res;
    std::vector<double> gn(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Point2 p{window.xmin + i * dx, window.ymin + j * dy};
            gn[static_cast<std::size_t>(j) * n + i] = field.jet(p).grad.norm();
        }

    // Seeds: nodes no larger than any of their 8 neighbors and strictly
    // smaller than at least one. The strict half rejects flat plateaus
    // (a linear field yields no seeds at all).
    std::vector<Point2> seeds;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double v = gn[static_cast<std::size_t>(j) * n + i];
            bool le_all = true, lt_one = false;
            for (int oj = -1; oj <= 1 && le_all; ++oj)
                for (int oi = -1; oi <= 1; ++oi) {
                    if (oi == 0 && oj == 0) continue;
                    const int qi = i + oi, qj = j + oj;
                    if (qi < 0 || qi >= n || qj < 0 || qj >= n) continue;
                    const double w = gn[static_cast<std::size_t>(qj) * n + qi];
                    if (v > w) {
                        le_all = false;
                        break;
                    }
                    if (v < w) lt_one = true;
                }
            if (le_all && lt_one) seeds.push_back({window.xmin + i * dx, window.ymin + j * dy});
        }

    // A Hessian this close to singular cannot drive a Newton step, and a
    // "converged" point on it is indistinguishable from a flat patch.
    const auto singular = [](const SymMat2& h) {
        const double m = h.max_abs();
        return std::fabs(h.det()) <= 1e-12 * (1.0 + m * m);
    };

    struct Candidate {
        Point2 p;
        double value;
        double grad_norm;
        SymMat2 hess;
    };
    std::vector<Candidate> cands;

    for (const Point2& seed : seeds) {
        Point2 p = seed;
        bool ok = false;
        Jet2 jet;
        for (int it = 0; it < 50; ++it) {
            jet = field.jet(p);
            const double g = jet.grad.norm();
            if (g <= critical_tol) {
                ok = !singular(jet.hess);
                break;
            }
            const SymMat2& h = jet.hess;
            if (singular(h)) break;
            const double det = h.det();
            const Vec2 d{-(h.yy * jet.grad.x - h.xy * jet.grad.y) / det,
                         -(-h.xy * jet.grad.x + h.xx * jet.grad.y) / det};
            // Damped step: halve until the gradient norm actually drops and
            // the iterate stays inside the window.
            double s = 1.0;
            bool stepped = false;
            while (s >= 1.0 / 1024.0) {
                const Point2 q = p + d * s;
                if (window.contains(q) && field.jet(q).grad.norm() < g) {
                    p = q;
                    stepped = true;
                    break;
                }
                s *= 0.5;
            }
            if (!stepped) break;
        }
        if (!ok) {
            if (dropped_seeds) ++*dropped_seeds;
            continue;
        }
        cands.push_back({p, jet.value, jet.grad.norm(), jet.hess});
    }

    // Merge candidates that found the same point, keeping the most converged.
    const double merge_r2 = std::pow(1e-6 * window.diagonal(), 2);
    std::vector<Candidate> kept;
    for (const Candidate& c : cands) {
        bool merged = false;
        for (Candidate& k : kept) {
            if ((c.p - k.p).norm2() <= merge_r2) {
                if (c.grad_norm < k.grad_norm) k = c;
                merged = true;
                break;
            }
        }
        if (!merged) kept.push_back(c);
    }

    std::vector<CriticalPoint> out;
    out.reserve(kept.size());
    for (const Candidate& k : kept) {
        double lo, hi;
        k.hess.eigenvalues(lo, hi);
        const double etol = 1e-8 * (1.0 + k.hess.max_abs());
        CriticalKind kind;
        if (std::fabs(lo) < etol || std::fabs(hi) < etol)
            kind = CriticalKind::Degenerate;
        else if (lo > 0.0)
            kind = CriticalKind::Min;
        else if (hi < 0.0)
            kind = CriticalKind::Max;
        else
            kind = CriticalKind::Saddle;
        out.push_back({k.p, k.value, k.grad_norm, kind});
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.location.x != b.location.x) return a.location.x < b.location.x;
        return a.location.y < b.location.y;
    });
    return out;
}

// --- band decomposition ---

std::vector<BandComponent> decompose_band(const ScalarField& field, Band band,
                                          const Window& window, int res,
                                          const VerifyOptions& opt,
                                          std::vector<std::string>* warnings) {
    check_band(band);
    if (res < 32) throw Error("decompose_band: res must be at least 32");
    if (!window.valid()) throw Error("decompose_band: invalid window");

    const int n = res + 1;
    const double dx = window.width() / res;
    const double dy = window.height() / res;
    std::vector<double> value(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            value[static_cast<std::size_t>(j) * n + i] =
                field.jet({window.xmin + i * dx, window.ymin + j * dy}).value;

    // A cell belongs to the band region when its corner range overlaps [a,b].
    std::vector<char> marked(static_cast<std::size_t>(res) * res, 0);
    bool any = false;
    for (int cy = 0; cy < res; ++cy)
        for (int cx = 0; cx < res; ++cx) {
            const double v00 = value[static_cast<std::size_t>(cy) * n + cx];
            const double v10 = value[static_cast<std::size_t>(cy) * n + cx + 1];
            const double v01 = value[static_cast<std::size_t>(cy + 1) * n + cx];
            const double v11 = value[static_cast<std::size_t>(cy + 1) * n + cx + 1];
            const double lo = std::min(std::min(v00, v10), std::min(v01, v11));
            const double hi = std::max(std::max(v00, v10), std::max(v01, v11));
            if (lo <= band.b && hi >= band.a) {
                marked[static_cast<std::size_t>(cy) * res + cx] = 1;
                any = true;
            }
        }
    if (!any)
        throw BandEmpty("no grid cell overlaps band [" + num(band.a) + ", " + num(band.b) + "]");

    // 4-connected flood fill in scan order gives deterministic component ids.
    std::vector<int> comp_of(static_cast<std::size_t>(res) * res, -1);
    std::vector<BandComponent> comps;
    std::vector<int> stack;
    for (int start = 0; start < res * res; ++start) {
        if (!marked[start] || comp_of[start] >= 0) continue;
        BandComponent comp;
        comp.id = static_cast<int>(comps.size());
        comp.res = res;
        comp.window = window;
        stack.assign(1, start);
        comp_of[start] = comp.id;
        while (!stack.empty()) {
            const int cell = stack.back();
            stack.pop_back();
            comp.cells.push_back(cell);
            const int cx = cell % res, cy = cell / res;
            if (cx == 0 || cy == 0 || cx == res - 1 || cy == res - 1)
                comp.touches_boundary = true;
            const int neigh[4] = {cell - 1, cell + 1, cell - res, cell + res};
            const bool valid[4] = {cx > 0, cx < res - 1, cy > 0, cy < res - 1};
            for (int k = 0; k < 4; ++k) {
                if (!valid[k]) continue;
                const int q = neigh[k];
                if (marked[q] && comp_of[q] < 0) {
                    comp_of[q] = comp.id;
                    stack.push_back(q);
                }
            }
        }
        std::sort(comp.cells.begin(), comp.cells.end());
        comps.push_back(std::move(comp));
    }

    // Orientation per component, measured at the mid level and cross-checked
    // at three more interior levels; the closed-curve count per level is
    // tracked as well, since one component must carry a fixed number of
    // curves when the band is critical-free.
    // Sign state: 0 = no sign yet, 1 = +1, 2 = -1, 3 = conflict.
    constexpr int kLevels = 4;
    const double fracs[kLevels] = {0.5, 0.25, 0.75, 0.4};
    std::vector<int> state(comps.size(), 0);
    std::vector<std::array<int, kLevels>> count(comps.size());
    for (auto& c : count) c.fill(-1);

    for (int li = 0; li < kLevels; ++li) {
        const double t = band.a + fracs[li] * (band.b - band.a);
        std::vector<Contour> contours;
        try {
            contours = extract_level_set(field, t, window, res, opt.level_tol_rel);
        } catch (const AmbiguousSaddleCell&) {
            push_warning(warnings, "level " + num(t) + " skipped for orientation: ambiguous saddle cell");
            continue;
        }
        for (auto& c : count)
            if (c[li] < 0) c[li] = 0;
        for (const Contour& c : contours) {
            if (!c.closed || c.vertices.empty()) continue;
            int owner = -1;
            for (std::size_t probe : {std::size_t{0}, c.vertices.size() / 2}) {
                const Point2& p = c.vertices[probe];
                const int ix = std::clamp(static_cast<int>((p.x - window.xmin) / dx), 0, res - 1);
                const int iy = std::clamp(static_cast<int>((p.y - window.ymin) / dy), 0, res - 1);
                const int id = comp_of[static_cast<std::size_t>(iy) * res + ix];
                if (id >= 0) {
                    owner = id;
                    break;
                }
            }
            if (owner < 0) continue;
            ++count[owner][li];
            int s;
            try {
                s = contour_sigma(field, c, opt.grad_tol);
            } catch (const InconsistentSigma&) {
                state[owner] = 3;
                continue;
            } catch (const NearCriticalPoint&) {
                continue;
            }
            const int code = s > 0 ? 1 : 2;
            if (state[owner] == 0)
                state[owner] = code;
            else if (state[owner] != code)
                state[owner] = 3;
        }
    }
    for (std::size_t k = 0; k < comps.size(); ++k) {
        int m = -1;
        bool steady = true;
        for (int li = 0; li < kLevels; ++li) {
            if (count[k][li] < 0) continue;
            if (m < 0)
                m = count[k][li];
            else if (count[k][li] != m)
                steady = false;
        }
        if (state[k] == 1)
            comps[k].sigma = +1;
        else if (state[k] == 2)
            comps[k].sigma = -1;
        if (state[k] == 3 || !steady || m <= 0) {
            comps[k].sigma = 0;
            if (state[k] == 3)
                push_warning(warnings, "component " + std::to_string(k) +
                                           ": orientation sign disagrees across levels");
            else if (!steady)
                push_warning(warnings, "component " + std::to_string(k) +
                                           ": closed level curve count varies across levels");
            else
                push_warning(warnings, "component " + std::to_string(k) +
                                           ": orientation undetermined (no closed level curve)");
            continue;
        }
        comps[k].multiplicity = m;
        if (m > 1)
            push_warning(warnings, "component " + std::to_string(k) + " carries " +
                                       std::to_string(m) +
                                       " closed level curves (sub-components merged at this "
                                       "resolution)");
    }
    return comps;
}

// --- direct (area) integral ---

namespace {

struct Rect {
    double x0, y0, x1, y1;
};

// 1 = all five probes strictly inside (a,b); -1 = all outside on one side;
// 0 = straddles.
int classify_rect(const ScalarField& field, const Rect& r, Band band) {
    const Point2 probes[5] = {{r.x0, r.y0},
                              {r.x1, r.y0},
                              {r.x0, r.y1},
                              {r.x1, r.y1},
                              {0.5 * (r.x0 + r.x1), 0.5 * (r.y0 + r.y1)}};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Point2& p : probes) {
        const double v = field.jet(p).value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > band.a && hi < band.b) return 1;
    if (hi < band.a || lo > band.b) return -1;
    return 0;
}

void gl_rect(const ScalarField& field, const Rect& r, Band band, bool indicator,
             double grad_tol, const GaussRule& rule, KahanSum& sum, int& excluded) {
    const double hx = 0.5 * (r.x1 - r.x0), cx = 0.5 * (r.x0 + r.x1);
    const double hy = 0.5 * (r.y1 - r.y0), cy = 0.5 * (r.y0 + r.y1);
    for (std::size_t jy = 0; jy < rule.nodes.size(); ++jy)
        for (std::size_t jx = 0; jx < rule.nodes.size(); ++jx) {
            const Point2 p{cx + hx * rule.nodes[jx], cy + hy * rule.nodes[jy]};
            const Jet2 jet = field.jet(p);
            if (indicator && !(jet.value >= band.a && jet.value <= band.b)) continue;
            const double g = jet.grad.norm();
            if (!(g >= grad_tol)) {
                ++excluded;
                continue;
            }
            const Vec2 T = (-jet.grad / g).rot_cw();
            sum.add(hx * hy * rule.weights[jx] * rule.weights[jy] * jet.hess.quad(T));
        }
}

void integrate_rect(const ScalarField& field, const Rect& r, Band band, int depth,
                    double grad_tol, const GaussRule& rule, KahanSum& sum, int& excluded) {
    const int c = classify_rect(field, r, band);
    if (c == -1) return;
    if (c == 1) {
        gl_rect(field, r, band, false, grad_tol, rule, sum, excluded);
        return;
    }
    if (depth == 0) {
        gl_rect(field, r, band, true, grad_tol, rule, sum, excluded);
        return;
    }
    const double mx = 0.5 * (r.x0 + r.x1), my = 0.5 * (r.y0 + r.y1);
    integrate_rect(field, {r.x0, r.y0, mx, my}, band, depth - 1, grad_tol, rule, sum, excluded);
    integrate_rect(field, {mx, r.y0, r.x1, my}, band, depth - 1, grad_tol, rule, sum, excluded);
    integrate_rect(field, {r.x0, my, mx, r.y1}, band, depth - 1, grad_tol, rule, sum, excluded);
    integrate_rect(field, {mx, my, r.x1, r.y1}, band, depth - 1, grad_tol, rule, sum, excluded);
}

} // namespace

double integrate_direct(const ScalarField& field, const BandComponent& comp, Band band,
                        int subdiv_depth, double grad_tol, int* excluded_nodes) {
    check_band(band);
    if (comp.res <= 0 || !comp.window.valid())
        throw Error("integrate_direct: component lacks its grid geometry");
    if (subdiv_depth < 0 || subdiv_depth > 12)
        throw Error("integrate_direct: subdiv_depth out of range");

    const GaussRule rule = gauss_legendre(3);
    const double dx = comp.window.width() / comp.res;
    const double dy = comp.window.height() / comp.res;
    KahanSum sum;
    int excluded = 0;
    for (int cell : comp.cells) {
        const int cx = cell % comp.res, cy = cell / comp.res;
        const Rect r{comp.window.xmin + cx * dx, comp.window.ymin + cy * dy,
                     comp.window.xmin + (cx + 1) * dx, comp.window.ymin + (cy + 1) * dy};
        integrate_rect(field, r, band, subdiv_depth, grad_tol, rule, sum, excluded);
    }
    if (excluded_nodes) *excluded_nodes = excluded;
    return sum.value();
}

// --- coarea integral ---

double integrate_coarea(const ScalarField& field, const BandComponent& comp, Band band,
                        int n_levels, int res, const VerifyOptions& opt,
                        std::vector<std::string>* warnings) {
    check_band(band);
    if (n_levels < 2) throw Error("integrate_coarea: n_levels must be at least 2");

    const GaussRule rule = gauss_legendre(n_levels);
    const double mid = 0.5 * (band.a + band.b);
    const double half = 0.5 * (band.b - band.a);
    KahanSum sum;
    for (int k = 0; k < n_levels; ++k) {
        const double t = mid + half * rule.nodes[k];
        const std::vector<Contour> contours =
            extract_level_set(field, t, comp.window, res, opt.level_tol_rel);
        bool found = false;
        KahanSum inner;
        for (const Contour& c : contours) {
            bool mine = false;
            for (std::size_t probe : {std::size_t{0}, c.vertices.size() / 2})
                if (probe < c.vertices.size() && comp.contains_point(c.vertices[probe])) {
                    mine = true;
                    break;
                }
            if (!mine) continue;
            if (!c.closed)
                throw NonCompactLevel("level " + num(t) +
                                      " leaves the window inside component " +
                                      std::to_string(comp.id));
            found = true;
            inner.add(contour_integral(field, c, Integrand::CoareaWeighted, opt.grad_tol));
        }
        if (!found)
            push_warning(warnings, "component " + std::to_string(comp.id) + ": no level curve at " +
                                       num(t) + "; contribution treated as zero");
        sum.add(half * rule.weights[k] * inner.value());
    }
    return sum.value();
}

// --- prediction ---

double rhs_prediction(const std::vector<BandComponent>& components, Band band) {
    check_band(band);
    const double two_pi = 2.0 * std::acos(-1.0);
    KahanSum sum;
    for (const BandComponent& c : components) {
        if (c.sigma == 0)
            throw SigmaUnknown("component " + std::to_string(c.id) +
                               " has undetermined orientation");
        sum.add(two_pi * c.sigma * c.multiplicity * (band.b - band.a));
    }
    return sum.value();
}

// --- vanishing-gradient endpoint limit ---

namespace {

// Least-squares line v = L + C*eps through the last three samples; L is the
// extrapolated eps -> 0 value.
double extrapolate_last3(const std::vector<double>& eps, const std::vector<double>& val) {
    const std::size_t n = val.size();
    if (n < 3) return kNaN;
    double se = 0, sv = 0, see = 0, sev = 0;
    for (std::size_t k = n - 3; k < n; ++k) {
        if (!std::isfinite(val[k])) return kNaN;
        se += eps[k];
        sv += val[k];
        see += eps[k] * eps[k];
        sev += eps[k] * val[k];
    }
    const double denom = 3.0 * see - se * se;
    if (denom == 0.0) return kNaN;
    const double slope = (3.0 * sev - se * sv) / denom;
    return (sv - slope * se) / 3.0;
}

bool differences_shrink(const std::vector<double>& val) {
    if (val.size() < 3) return false;
    double prev = -1.0;
    for (std::size_t k = 1; k < val.size(); ++k) {
        if (!std::isfinite(val[k]) || !std::isfinite(val[k - 1])) return false;
        const double d = std::fabs(val[k] - val[k - 1]);
        if (prev >= 0.0 && d > prev) return false;
        prev = d;
    }
    return true;
}

} // namespace

LimitEstimate eps_limit(const ScalarField& field, Band band, CriticalEnd end,
                        const std::vector<double>& schedule, const Window& window,
                        const VerifyOptions& opt, std::vector<BandComponent>* components_out,
                        std::vector<std::string>* warnings) {
    check_band(band);
    if (schedule.size() < 3) throw Error("eps_limit: schedule needs at least 3 entries");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (!(schedule[k] > 0.0)) throw Error("eps_limit: schedule entries must be positive");
        if (k > 0 && !(schedule[k] < schedule[k - 1]))
            throw Error("eps_limit: schedule must be strictly decreasing");
    }

    LimitEstimate est;
    for (double eps : schedule) {
        Band sub = band;
        if (end == CriticalEnd::AtA || end == CriticalEnd::Both) sub.a = band.a + eps;
        if (end == CriticalEnd::AtB || end == CriticalEnd::Both) sub.b = band.b - eps;
        if (!(sub.a < sub.b))
            throw Error("eps_limit: schedule entry " + num(eps) + " swallows band [" +
                        num(band.a) + ", " + num(band.b) + "]");

        std::vector<BandComponent> comps = decompose_band(field, sub, window, opt.res, opt, warnings);
        KahanSum direct;
        for (const BandComponent& c : comps) {
            int excl = 0;
            direct.add(integrate_direct(field, c, sub, opt.subdiv_depth, opt.grad_tol, &excl));
            if (excl > 0)
                push_warning(warnings, "eps " + num(eps) + ": " + std::to_string(excl) +
                                           " near-critical quadrature nodes skipped");
        }
        double coarea = 0.0;
        bool coarea_ok = true;
        {
            KahanSum cs;
            for (const BandComponent& c : comps) {
                try {
                    cs.add(integrate_coarea(field, c, sub, opt.n_levels, opt.res, opt, warnings));
                } catch (const NonCompactLevel&) {
                    coarea_ok = false;
                    break;
                }
            }
            coarea = coarea_ok ? cs.value() : kNaN;
        }
        est.epsilons.push_back(eps);
        est.values.push_back(direct.value());
        est.coarea_values.push_back(coarea);
        if (eps == schedule.back() && components_out) *components_out = std::move(comps);
    }

    est.limit = extrapolate_last3(est.epsilons, est.values);
    est.coarea_limit = extrapolate_last3(est.epsilons, est.coarea_values);
    est.converged = differences_shrink(est.values);
    return est;
}

// --- full pipeline ---

namespace {

void fill_errors(BandReport& r) {
    auto errs = [](double lhs, double rhs, double& abs_e, double& rel_e) {
        if (std::isfinite(lhs) && std::isfinite(rhs)) {
            abs_e = std::fabs(lhs - rhs);
            rel_e = rhs != 0.0 ? abs_e / std::fabs(rhs) : abs_e;
        } else {
            abs_e = kNaN;
            rel_e = kNaN;
        }
    };
    errs(r.lhs_direct, r.rhs, r.abs_error_direct, r.rel_error_direct);
    errs(r.lhs_coarea, r.rhs, r.abs_error_coarea, r.rel_error_coarea);
}

BandReport verify_band_impl(const ScalarField& field, Band band, const Window& window,
                            const VerifyOptions& opt, int depth) {
    check_band(band);
    if (!window.valid()) throw Error("verify_band: invalid window");
    if (depth > 8) throw Error("verify_band: too many interior critical values");

    BandReport report;
    report.field_desc = field.description();
    report.band = band;
    report.window = window;

    int dropped = 0;
    const std::vector<CriticalPoint> cps =
        find_critical_points(field, window, opt.res, opt.critical_tol, &dropped);
    if (dropped > 0)
        report.warnings.push_back(std::to_string(dropped) +
                                  " critical-point seeds dropped (no convergence or singular "
                                  "curvature)");

    const auto vtol = [&](double v) { return opt.critical_tol * (1.0 + std::fabs(v)); };
    bool at_a = false, at_b = false;
    std::vector<double> interior;
    for (const CriticalPoint& cp : cps) {
        const double v = cp.value;
        if (v < band.a - vtol(v) || v > band.b + vtol(v)) continue;
        report.critical_points.push_back(cp);
        if (std::fabs(v - band.a) <= vtol(v))
            at_a = true;
        else if (std::fabs(v - band.b) <= vtol(v))
            at_b = true;
        else
            interior.push_back(v);
    }

    if (!interior.empty()) {
        // Split at the smallest interior critical value; each half sees it
        // as an endpoint and the right half re-splits if more remain.
        std::sort(interior.begin(), interior.end());
        const double c = interior.front();
        report.case_label = "case2";
        report.warnings.push_back("interior critical value " + num(c) +
                                  ": band split into [" + num(band.a) + ", " + num(c) +
                                  "] and [" + num(c) + ", " + num(band.b) + "]");
        const BandReport left = verify_band_impl(field, {band.a, c}, window, opt, depth + 1);
        const BandReport right = verify_band_impl(field, {c, band.b}, window, opt, depth + 1);
        for (const BandReport* part : {&left, &right}) {
            const char* tag = part == &left ? "left" : "right";
            for (const ComponentResult& cr : part->components) {
                ComponentResult copy = cr;
                copy.id = static_cast<int>(report.components.size());
                report.components.push_back(copy);
            }
            for (const std::string& w : part->warnings)
                report.warnings.push_back(std::string(tag) + " half: " + w);
            report.eps_limits.insert(report.eps_limits.end(), part->eps_limits.begin(),
                                     part->eps_limits.end());
        }
        report.lhs_direct = left.lhs_direct + right.lhs_direct;
        report.lhs_coarea = left.lhs_coarea + right.lhs_coarea;
        report.rhs = left.rhs + right.rhs;
        fill_errors(report);
        return report;
    }

    if (at_a || at_b) {
        report.case_label = "case2";
        const CriticalEnd end =
            at_a && at_b ? CriticalEnd::Both : (at_a ? CriticalEnd::AtA : CriticalEnd::AtB);
        report.warnings.push_back(std::string("critical value at band ") +
                                  (end == CriticalEnd::Both ? "endpoints a and b"
                                   : at_a                   ? "endpoint a"
                                                            : "endpoint b") +
                                  ": integrals taken as a vanishing-margin limit");
        // The schedule is absolute; for a band narrower than its first entry
        // scale the whole ladder down so every shrunken band stays nonempty.
        std::vector<double> schedule = opt.eps_schedule;
        const double cap = (band.b - band.a) / (end == CriticalEnd::Both ? 8.0 : 4.0);
        if (!schedule.empty() && schedule.front() > cap) {
            const double scale = cap / schedule.front();
            for (double& e : schedule) e *= scale;
            report.warnings.push_back("margin schedule scaled by " + num(scale) +
                                      " to fit band width " + num(band.b - band.a));
        }
        std::vector<BandComponent> comps;
        LimitEstimate est =
            eps_limit(field, band, end, schedule, window, opt, &comps, &report.warnings);
        if (!est.converged)
            report.warnings.push_back("margin refinement differences do not shrink "
                                      "monotonically; limit is unreliable");
        report.lhs_direct = est.limit;
        report.lhs_coarea = est.coarea_limit;

        // Orientations come from the tightest shrunken band; the prediction
        // still uses the full band width.
        bool sigma_ok = true;
        KahanSum rhs;
        const double two_pi = 2.0 * std::acos(-1.0);
        for (const BandComponent& c : comps) {
            ComponentResult cr;
            cr.id = c.id;
            cr.sigma = c.sigma;
            cr.touches_boundary = c.touches_boundary;
            report.components.push_back(cr);
            if (c.sigma == 0)
                sigma_ok = false;
            else
                rhs.add(two_pi * c.sigma * c.multiplicity * (band.b - band.a));
        }
        if (sigma_ok && !comps.empty()) {
            report.rhs = rhs.value();
        } else {
            report.warnings.push_back("orientation undetermined: no prediction");
        }
        report.eps_limits.push_back(std::move(est));
        fill_errors(report);
        return report;
    }

    std::vector<BandComponent> comps =
        decompose_band(field, band, window, opt.res, opt, &report.warnings);
    bool non_compact = false;
    bool touches = false;
    int excluded_total = 0;
    KahanSum direct_sum;
    KahanSum coarea_sum;
    bool coarea_all = true;
    for (const BandComponent& c : comps) {
        ComponentResult cr;
        cr.id = c.id;
        cr.sigma = c.sigma;
        cr.touches_boundary = c.touches_boundary;
        touches |= c.touches_boundary;

        int excl = 0;
        cr.lhs_direct = integrate_direct(field, c, band, opt.subdiv_depth, opt.grad_tol, &excl);
        excluded_total += excl;
        direct_sum.add(cr.lhs_direct);

        try {
            cr.lhs_coarea =
                integrate_coarea(field, c, band, opt.n_levels, opt.res, opt, &report.warnings);
            coarea_sum.add(cr.lhs_coarea);
        } catch (const NonCompactLevel& e) {
            non_compact = true;
            coarea_all = false;
            report.warnings.push_back(e.what());
        }
        report.components.push_back(cr);
    }
    if (excluded_total > 0)
        report.warnings.push_back(std::to_string(excluded_total) +
                                  " near-critical quadrature nodes skipped");

    report.lhs_direct = direct_sum.value();
    report.lhs_coarea = coarea_all ? coarea_sum.value() : kNaN;

    if (non_compact) {
        report.case_label = "case3";
        report.warnings.push_back("band region is not compact within the window; the direct "
                                  "integral is window-truncated and no prediction applies");
    } else {
        report.case_label = comps.size() > 1 ? "case1" : "main";
        if (touches)
            report.warnings.push_back("band region touches the window boundary; results may be "
                                      "window-truncated");
        try {
            report.rhs = rhs_prediction(comps, band);
        } catch (const SigmaUnknown& e) {
            report.warnings.push_back(std::string("no prediction: ") + e.what());
        }
    }
    fill_errors(report);
    return report;
}

} // namespace

namespace {

// Collapses repeated warning lines into one line with a repeat count.
void dedup_warnings(std::vector<std::string>& warnings) {
    std::vector<std::string> unique;
    std::vector<int> counts;
    for (const std::string& w : warnings) {
        bool found = false;
        for (std::size_t i = 0; i < unique.size(); ++i)
            if (unique[i] == w) {
                ++counts[i];
                found = true;
                break;
            }
        if (!found) {
            unique.push_back(w);
            counts.push_back(1);
        }
    }
    warnings.clear();
    for (std::size_t i = 0; i < unique.size(); ++i)
        warnings.push_back(counts[i] == 1
                               ? unique[i]
                               : unique[i] + " (x" + std::to_string(counts[i]) + ")");
}

} // namespace

BandReport verify_band(const ScalarField& field, Band band, const Window& window,
                       const VerifyOptions& opt) {
    BandReport report = verify_band_impl(field, band, window, opt, 0);
    dedup_warnings(report.warnings);
    return report;
}

} // namespace levelband
