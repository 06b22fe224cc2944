#include "levelband/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <unordered_map>

#include "levelband/errors.hpp"
#include "levelband/quadrature.hpp"

namespace levelband {

namespace {

// Node values are classified by the strict predicate f > t; every edge whose
// endpoints classify differently carries exactly one refined crossing.
struct Grid {
    int res = 0;
    Window window;
    double dx = 0.0, dy = 0.0;
    std::vector<double> value; // (res+1)*(res+1), row-major, row 0 = ymin

    Point2 node(int i, int j) const {
        return {window.xmin + i * dx, window.ymin + j * dy};
    }
    double at(int i, int j) const { return value[static_cast<std::size_t>(j) * (res + 1) + i]; }
    bool inside(int i, int j, double t) const { return at(i, j) > t; }
};

// Edge ids: horizontal edge (i,j)-(i+1,j) -> j*res + i, then vertical edge
// (i,j)-(i,j+1) -> res*(res+1) + j*(res+1) + i.
int h_edge(const Grid& g, int i, int j) { return j * g.res + i; }
int v_edge(const Grid& g, int i, int j) { return g.res * (g.res + 1) + j * (g.res + 1) + i; }

bool edge_on_boundary(const Grid& g, int id) {
    const int hcount = g.res * (g.res + 1);
    if (id < hcount) {
        const int j = id / g.res;
        return j == 0 || j == g.res;
    }
    const int i = (id - hcount) % (g.res + 1);
    return i == 0 || i == g.res;
}

struct EdgeCrossings {
    std::vector<char> computed;
    std::vector<Point2> point;

    explicit EdgeCrossings(std::size_t n) : computed(n, 0), point(n) {}
};

Point2 refine_crossing(const ScalarField& field, double t, Point2 p0, double g0,
                       Point2 p1, double g1) {
    // g = f - t at the bracket ends; the ends classify differently so the
    // signs (with g > 0 meaning inside) differ by construction.
    const double tol = 1e-10 * (1.0 + std::fabs(t));
    const bool in0 = g0 > 0.0;
    (void)g1;
    Point2 lo = p0, hi = p1;
    Point2 m = lo;
    for (int it = 0; it < 40; ++it) {
        m = {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
        const double gm = field.jet(m).value - t;
        if (std::fabs(gm) <= tol) return m;
        if ((gm > 0.0) == in0)
            lo = m;
        else
            hi = m;
    }
    return m;
}

const Point2& crossing(const ScalarField& field, const Grid& g, double t,
                       EdgeCrossings& memo, int id) {
    if (!memo.computed[id]) {
        const int hcount = g.res * (g.res + 1);
        int i0, j0, i1, j1;
        if (id < hcount) {
            j0 = id / g.res;
            i0 = id % g.res;
            i1 = i0 + 1;
            j1 = j0;
        } else {
            const int vid = id - hcount;
            j0 = vid / (g.res + 1);
            i0 = vid % (g.res + 1);
            i1 = i0;
            j1 = j0 + 1;
        }
        memo.point[id] = refine_crossing(field, t, g.node(i0, j0), g.at(i0, j0) - t,
                                         g.node(i1, j1), g.at(i1, j1) - t);
        memo.computed[id] = 1;
    }
    return memo.point[id];
}

struct Segment {
    int e0 = -1, e1 = -1;
};

// Marching-squares case table. Corner bits: 1=bl, 2=br, 4=tr, 8=tl.
// Saddle masks 5 and 10 are resolved by the cell-center sample.
void emit_cell(const ScalarField& field, const Grid& g, double t, double level_tol_rel,
               int cx, int cy, std::vector<Segment>& segs) {
    const int mask = (g.inside(cx, cy, t) ? 1 : 0) | (g.inside(cx + 1, cy, t) ? 2 : 0) |
                     (g.inside(cx + 1, cy + 1, t) ? 4 : 0) | (g.inside(cx, cy + 1, t) ? 8 : 0);
    if (mask == 0 || mask == 15) return;

    const int B = h_edge(g, cx, cy);
    const int T = h_edge(g, cx, cy + 1);
    const int L = v_edge(g, cx, cy);
    const int R = v_edge(g, cx + 1, cy);

    auto add = [&](int a, int b) { segs.push_back({a, b}); };

    switch (mask) {
    case 1: case 14: add(L, B); break;
    case 2: case 13: add(B, R); break;
    case 3: case 12: add(L, R); break;
    case 4: case 11: add(T, R); break;
    case 6: case 9: add(B, T); break;
    case 8: case 7: add(T, L); break;
    case 5: case 10: {
        const Point2 center{g.window.xmin + (cx + 0.5) * g.dx,
                            g.window.ymin + (cy + 0.5) * g.dy};
        const double cv = field.jet(center).value;
        if (std::fabs(cv - t) <= level_tol_rel * (1.0 + std::fabs(t)))
            throw AmbiguousSaddleCell(cx, cy);
        const bool center_in = cv > t;
        // Joined along the diagonal through the center iff the center
        // classifies with the mask's inside corners.
        const bool diag = (mask == 5) ? center_in : !center_in;
        if (diag) {
            add(B, R);
            add(T, L);
        } else {
            add(L, B);
            add(T, R);
        }
        break;
    }
    default: break;
    }
}

double polyline_length(const std::vector<Point2>& v, bool closed) {
    double s = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) s += (v[k] - v[k - 1]).norm();
    if (closed && v.size() > 2) s += (v.front() - v.back()).norm();
    return s;
}

double shoelace(const std::vector<Point2>& v) {
    double a = 0.0;
    const std::size_t n = v.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Point2& p = v[k];
        const Point2& q = v[(k + 1) % n];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

void push_vertex(std::vector<Point2>& out, const Point2& p) {
    if (!out.empty() && out.back().x == p.x && out.back().y == p.y) return;
    out.push_back(p);
}

std::vector<Contour> extract_impl(const ScalarField& field, double t, const Window& window,
                                  int res, const std::vector<int>* cell_order,
                                  double level_tol_rel) {
    if (res < 16) throw Error("extract_level_set: res must be at least 16");
    if (!window.valid()) throw Error("extract_level_set: invalid window");

    Grid g;
    g.res = res;
    g.window = window;
    g.dx = window.width() / res;
    g.dy = window.height() / res;
    g.value.resize(static_cast<std::size_t>(res + 1) * (res + 1));
    for (int j = 0; j <= res; ++j)
        for (int i = 0; i <= res; ++i)
            g.value[static_cast<std::size_t>(j) * (res + 1) + i] = field.jet(g.node(i, j)).value;

    std::vector<Segment> segs;
    if (cell_order) {
        for (int id : *cell_order) {
            if (id < 0 || id >= res * res) throw Error("extract_level_set: bad cell id");
            emit_cell(field, g, t, level_tol_rel, id % res, id / res, segs);
        }
    } else {
        for (int cy = 0; cy < res; ++cy)
            for (int cx = 0; cx < res; ++cx) emit_cell(field, g, t, level_tol_rel, cx, cy, segs);
    }
    if (segs.empty()) return {};

    // Interior crossed edges have exactly two incident segments, boundary
    // ones exactly one, so chains are unambiguous.
    std::unordered_map<int, std::array<int, 2>> incident;
    incident.reserve(segs.size() * 2);
    auto attach = [&](int edge, int seg) {
        auto [it, fresh] = incident.try_emplace(edge, std::array<int, 2>{-1, -1});
        auto& slots = it->second;
        (void)fresh;
        if (slots[0] < 0)
            slots[0] = seg;
        else if (slots[1] < 0)
            slots[1] = seg;
        else
            throw Error("extract_level_set: edge with more than two segments");
    };
    for (std::size_t s = 0; s < segs.size(); ++s) {
        attach(segs[s].e0, static_cast<int>(s));
        attach(segs[s].e1, static_cast<int>(s));
    }

    std::vector<char> used(segs.size(), 0);
    EdgeCrossings memo(static_cast<std::size_t>(2 * res * (res + 1)));
    std::vector<Contour> out;

    auto walk = [&](int start_edge) {
        std::vector<Point2> verts;
        int edge = start_edge;
        push_vertex(verts, crossing(field, g, t, memo, edge));
        for (;;) {
            const auto it = incident.find(edge);
            int next_seg = -1;
            if (it != incident.end())
                for (int s : it->second)
                    if (s >= 0 && !used[s]) { next_seg = s; break; }
            if (next_seg < 0) break;
            used[next_seg] = 1;
            edge = (segs[next_seg].e0 == edge) ? segs[next_seg].e1 : segs[next_seg].e0;
            if (edge == start_edge) break;
            push_vertex(verts, crossing(field, g, t, memo, edge));
        }
        return std::pair<std::vector<Point2>, bool>{std::move(verts), edge == start_edge};
    };

    // Open chains first: walk inward from every boundary edge that carries a
    // pending segment, in ascending edge id for determinism.
    std::vector<int> boundary_starts;
    for (const auto& [edge, slots] : incident)
        if (edge_on_boundary(g, edge) && slots[1] < 0) boundary_starts.push_back(edge);
    std::sort(boundary_starts.begin(), boundary_starts.end());
    for (int start : boundary_starts) {
        const auto& slots = incident[start];
        if (slots[0] >= 0 && used[slots[0]]) continue;
        auto [verts, cycled] = walk(start);
        (void)cycled;
        if (verts.size() < 2) continue;
        Contour c;
        c.vertices = std::move(verts);
        c.closed = false;
        c.level = t;
        c.arc_length = polyline_length(c.vertices, false);
        out.push_back(std::move(c));
    }

    // Remaining segments form cycles.
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        auto [verts, cycled] = walk(segs[s].e0);
        if (!verts.empty() && verts.front().x == verts.back().x &&
            verts.front().y == verts.back().y)
            verts.pop_back();
        if (verts.size() < 3) continue;
        if (!cycled) throw Error("extract_level_set: non-boundary open chain");
        Contour c;
        c.vertices = std::move(verts);
        c.closed = true;
        c.level = t;
        double area = shoelace(c.vertices);
        if (area < 0.0) {
            std::reverse(c.vertices.begin(), c.vertices.end());
            area = -area;
        }
        c.signed_area = area;
        c.arc_length = polyline_length(c.vertices, true);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace

std::vector<Contour> extract_level_set(const ScalarField& field, double t,
                                       const Window& window, int res, double level_tol_rel) {
    return extract_impl(field, t, window, res, nullptr, level_tol_rel);
}

std::vector<Contour> detail::extract_level_set_ordered(const ScalarField& field, double t,
                                                       const Window& window, int res,
                                                       const std::vector<int>& cell_order,
                                                       double level_tol_rel) {
    return extract_impl(field, t, window, res, &cell_order, level_tol_rel);
}

int contour_sigma(const ScalarField& field, const Contour& c, double grad_tol) {
    if (!c.closed) throw OpenContour("contour_sigma requires a closed contour");
    const auto& v = c.vertices;
    const std::size_t n = v.size();
    if (n < 3) throw Error("contour_sigma: degenerate contour");

    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double gn = field.jet(v[k]).grad.norm();
        if (gn > best) {
            best = gn;
            imax = k;
        }
    }

    auto sign_at = [&](std::size_t k) {
        const Point2& prev = v[(k + n - 1) % n];
        const Point2& next = v[(k + 1) % n];
        const Vec2 tau = (next - prev).normalized();
        // CCW-normalized contours keep the enclosed region on the left, so
        // the inward normal is the CCW rotation of the tangent.
        const Vec2 inward = tau.rot_ccw();
        const Jet2 jet = field.jet(v[k]);
        const Frame frame = level_frame(jet, grad_tol);
        const double d = inward.dot(frame.N);
        if (d > 0.0) return +1;
        if (d < 0.0) return -1;
        throw InconsistentSigma("normal alignment vanished at a vertex");
    };

    const int s0 = sign_at(imax);
    for (int k = 0; k < 16; ++k) {
        const std::size_t idx = (n * static_cast<std::size_t>(k)) / 16;
        if (sign_at(idx) != s0)
            throw InconsistentSigma("orientation sign flips along the contour");
    }
    return s0;
}

double contour_integral(const ScalarField& field, const Contour& c, Integrand kind,
                        double grad_tol) {
    if (kind == Integrand::Curvature && !c.closed)
        throw OpenContour("total curvature requires a closed contour");
    const auto& v = c.vertices;
    const std::size_t n = v.size();
    const std::size_t nseg = c.closed ? n : n - 1;
    if (n < 2) return 0.0;

    KahanSum sum;
    for (std::size_t k = 0; k < nseg; ++k) {
        const Point2& a = v[k];
        const Point2& b = v[(k + 1) % n];
        const double len = (b - a).norm();
        if (len == 0.0) continue;
        Point2 m{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};

        // One Newton step pulls the midpoint back onto f = level before the
        // integrand is sampled; this is what restores O(h^2) for the
        // composite midpoint rule on a polygonal approximation.
        const Jet2 jm = field.jet(m);
        const double g2 = jm.grad.norm2();
        if (!(g2 >= grad_tol * grad_tol)) throw NearCriticalPoint(std::sqrt(g2), m.x, m.y);
        const double step = (jm.value - c.level) / g2;
        m = {m.x - step * jm.grad.x, m.y - step * jm.grad.y};

        const Jet2 jet = field.jet(m);
        const Frame frame = level_frame(jet, grad_tol);
        double integrand;
        if (kind == Integrand::Curvature) {
            integrand = level_curvature(jet, grad_tol);
        } else {
            integrand = second_directional(jet, frame.T) / frame.grad_norm;
        }
        sum.add(integrand * len);
    }
    return sum.value();
}

namespace {

double orient(const Point2& a, const Point2& b, const Point2& c) {
    return (b - a).cross(c - a);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_cross(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
    const double o1 = orient(a, b, c);
    const double o2 = orient(a, b, d);
    const double o3 = orient(c, d, a);
    const double o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
        o4 != 0)
        return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

} // namespace

bool is_simple(const Contour& c) {
    const auto& v = c.vertices;
    const std::size_t n = v.size();
    const std::size_t nseg = c.closed ? n : n - 1;
    if (nseg < 2) return true;
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % n];
        for (std::size_t j = i + 1; j < nseg; ++j) {
            // Segments sharing an endpoint (neighbors along the chain) touch
            // by construction and are skipped.
            const bool adjacent = (j == i + 1) || (c.closed && i == 0 && j == nseg - 1);
            if (adjacent) continue;
            if (segments_cross(a, b, v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

void write_contour_csv(std::ostream& out, const std::vector<Contour>& contours) {
    out << "level,component,vertex_index,x,y\n";
    char buf[96];
    for (std::size_t ci = 0; ci < contours.size(); ++ci) {
        const Contour& c = contours[ci];
        for (std::size_t k = 0; k < c.vertices.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.12g,%zu,%zu,%.12g,%.12g", c.level, ci, k,
                          c.vertices[k].x, c.vertices[k].y);
            out << buf << '\n';
        }
    }
}

void write_contour_svg(std::ostream& out, const std::vector<Contour>& contours,
                       const Window& window) {
    if (!window.valid()) throw Error("write_contour_svg: invalid window");
    const double W = 1024.0;
    const double H = std::round(W * window.height() / window.width());
    auto sx = [&](double x) { return (x - window.xmin) / window.width() * W; };
    auto sy = [&](double y) { return (window.ymax - y) / window.height() * H; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "  <rect width=\"" << W << "\" height=\"" << H
        << "\" fill=\"white\" stroke=\"#ccc\"/>\n";
    char buf[64];
    for (const Contour& c : contours) {
        if (c.vertices.size() < 2) continue;
        out << "  <path d=\"";
        for (std::size_t k = 0; k < c.vertices.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%c%.2f %.2f", k == 0 ? 'M' : 'L',
                          sx(c.vertices[k].x), sy(c.vertices[k].y));
            out << (k == 0 ? "" : " ") << buf;
        }
        if (c.closed) out << " Z";
        out << "\" fill=\"none\" stroke=\"#1f3a93\" stroke-width=\"1.5\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace levelband
