#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levelband/band.hpp"
#include "levelband/contour.hpp"
#include "levelband/diffgeo.hpp"
#include "levelband/errors.hpp"
#include "levelband/fieldspec.hpp"
#include "levelband/report.hpp"

namespace {

using namespace levelband;

int usage_error(const std::string& flag, const std::string& msg) {
    std::cerr << "usage error (" << flag << "): " << msg << "\n";
    return 1;
}

// All construction errors trace back to the field designator; everything
// else that goes wrong mid-pipeline is a computational failure (exit 2).
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const UnknownField& e) {
        return usage_error("--field", e.what());
    } catch (const BadParamArity& e) {
        return usage_error("--field", e.what());
    } catch (const SyntaxError& e) {
        return usage_error("--field", e.what());
    } catch (const UnknownFunction& e) {
        return usage_error("--field", e.what());
    } catch (const UnknownVariable& e) {
        return usage_error("--field", e.what());
    } catch (const GridTooSmall& e) {
        return usage_error("--field", e.what());
    } catch (const NonFiniteSample& e) {
        return usage_error("--field", e.what());
    } catch (const FileFormatError& e) {
        return usage_error("--field", e.what());
    } catch (const NonCompactLevel& e) {
        std::cerr << "NonCompactLevel: " << e.what() << "\n";
        return 2;
    } catch (const BandEmpty& e) {
        std::cerr << "BandEmpty: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

std::optional<Window> parse_window(const std::string& text, int& rc) {
    if (text.empty()) return std::nullopt;
    double v[4];
    int consumed = -1;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf%n", &v[0], &v[1], &v[2], &v[3], &consumed) !=
            4 ||
        consumed != static_cast<int>(text.size())) {
        rc = usage_error("--window", "expected x0,x1,y0,y1 (got '" + text + "')");
        return std::nullopt;
    }
    const Window w{v[0], v[1], v[2], v[3]};
    if (!w.valid()) {
        rc = usage_error("--window", "window must satisfy x0 < x1 and y0 < y1");
        return std::nullopt;
    }
    return w;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw Error("cannot write file: " + path);
}

struct VerifyArgs {
    std::string field;
    double a = 0.0, b = 1.0;
    std::string window;
    int res = 256;
    int levels = 16;
    int subdiv = 4;
    double grad_tol = kGradTolDefault;
    double critical_tol = kCriticalTolDefault;
    double level_tol = kLevelTolDefault;
    std::string out;
    std::string format = "json";
};

int run_verify(const VerifyArgs& args) {
    if (!(args.a < args.b)) return usage_error("--a/--b", "band requires a < b");
    if (args.res < 32) return usage_error("--res", "verification needs res >= 32");
    int rc = 0;
    const std::optional<Window> window = parse_window(args.window, rc);
    if (rc) return rc;

    return guarded([&] {
        const FieldPtr field = make_field(args.field, window);
        VerifyOptions opt;
        opt.res = args.res;
        opt.n_levels = args.levels;
        opt.subdiv_depth = args.subdiv;
        opt.grad_tol = args.grad_tol;
        opt.critical_tol = args.critical_tol;
        opt.level_tol_rel = args.level_tol;
        const BandReport report = verify_band(*field, {args.a, args.b}, field->window(), opt);
        const std::string rendered =
            args.format == "json" ? report_to_json(report) : report_to_text(report);
        if (!args.out.empty())
            write_file(args.out, rendered);
        else if (report.case_label != "case3")
            std::cout << rendered;
        if (report.case_label == "case3" && args.out.empty()) {
            std::cerr << "NonCompactLevel: band region is not compact within the window "
                         "(pass --out to keep the partial report)\n";
            return 2;
        }
        return 0;
    });
}

struct ContourArgs {
    std::string field;
    double level = 0.0;
    std::string window;
    int res = 256;
    std::string csv;
    std::string svg;
};

int run_contour(const ContourArgs& args) {
    if (args.res < 16) return usage_error("--res", "contour extraction needs res >= 16");
    int rc = 0;
    const std::optional<Window> window = parse_window(args.window, rc);
    if (rc) return rc;

    return guarded([&] {
        const FieldPtr field = make_field(args.field, window);
        const std::vector<Contour> contours =
            extract_level_set(*field, args.level, field->window(), args.res);
        {
            std::ostringstream buf;
            write_contour_csv(buf, contours);
            write_file(args.csv, buf.str());
        }
        if (!args.svg.empty()) {
            std::ostringstream buf;
            write_contour_svg(buf, contours, field->window());
            write_file(args.svg, buf.str());
        }
        return 0;
    });
}

struct CurvatureArgs {
    std::string field;
    std::string at;
    std::string window;
    double grad_tol = kGradTolDefault;
};

int run_curvature(const CurvatureArgs& args) {
    double x = 0.0, y = 0.0;
    int consumed = -1;
    if (std::sscanf(args.at.c_str(), "%lf,%lf%n", &x, &y, &consumed) != 2 ||
        consumed != static_cast<int>(args.at.size()))
        return usage_error("--at", "expected x,y (got '" + args.at + "')");
    int rc = 0;
    const std::optional<Window> window = parse_window(args.window, rc);
    if (rc) return rc;

    return guarded([&] {
        const FieldPtr field = make_field(args.field, window);
        const Jet2 jet = field->jet({x, y});
        const Frame frame = level_frame(jet, args.grad_tol);
        const double d2t = second_directional(jet, frame.T);
        const auto z = [](double v) { return v == 0.0 ? 0.0 : v; };
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "kappa=%.12g\nT=(%.12g, %.12g)\nN=(%.12g, %.12g)\nd2_T_f=%.12g\n"
                      "grad_norm=%.12g\n",
                      z(d2t / frame.grad_norm), z(frame.T.x), z(frame.T.y), z(frame.N.x),
                      z(frame.N.y), z(d2t), z(frame.grad_norm));
        std::cout << buf;
        return 0;
    });
}

struct CriticalArgs {
    std::string field;
    std::string window;
    int res = 256;
    double tol = kCriticalTolDefault;
};

int run_critical_points(const CriticalArgs& args) {
    if (args.res < 16) return usage_error("--res", "critical-point scan needs res >= 16");
    int rc = 0;
    const std::optional<Window> window = parse_window(args.window, rc);
    if (rc) return rc;

    return guarded([&] {
        const FieldPtr field = make_field(args.field, window);
        const std::vector<CriticalPoint> cps =
            find_critical_points(*field, field->window(), args.res, args.tol);
        if (cps.empty()) {
            std::cout << "no critical points found\n";
            return 0;
        }
        char buf[160];
        for (const CriticalPoint& cp : cps) {
            std::snprintf(buf, sizeof buf, "(%.12g, %.12g) value=%.12g kind=%s grad_norm=%.3g\n",
                          cp.location.x, cp.location.y, cp.value, critical_kind_name(cp.kind),
                          cp.grad_norm);
            std::cout << buf;
        }
        return 0;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical check of the level-band curvature identity: the integral of\n"
                 "D_T^2 f over f^-1[[a,b]] against sigma*2*pi*(b-a).",
                 "levelband"};
    app.require_subcommand(1);
    app.fallthrough(true);
    app.set_config("--config", "",
                   "Key=value config file; subcommand options go in a [verify] (etc.) "
                   "section and explicit flags override the file");

    const char* field_help = "Field: builtin name (paraboloid, gaussian, two_bump:c, linear, "
                             "ellipse_quadratic:p,q), an expression in x and y, a grid file "
                             "path, or an explicit builtin:/expr:/grid: prefix";
    const char* window_help = "Evaluation window x0,x1,y0,y1 (default: the field's own window)";

    VerifyArgs v;
    CLI::App* verify = app.add_subcommand("verify", "Verify the band identity and emit a report");
    verify->add_option("--field", v.field, field_help)->required();
    verify->add_option("--a", v.a, "Band lower value")->required()->capture_default_str();
    verify->add_option("--b", v.b, "Band upper value")->required()->capture_default_str();
    verify->add_option("--window", v.window, window_help);
    verify->add_option("--res", v.res, "Grid resolution (cells per side)")->capture_default_str();
    verify->add_option("--levels", v.levels, "Gauss-Legendre level count for the coarea form")
        ->capture_default_str();
    verify->add_option("--subdiv", v.subdiv, "Subdivision depth for band-edge cells")
        ->capture_default_str();
    verify->add_option("--grad-tol", v.grad_tol, "Gradient norm below which the frame is undefined")
        ->capture_default_str();
    verify->add_option("--critical-tol", v.critical_tol, "Critical value matching tolerance")
        ->capture_default_str();
    verify->add_option("--level-tol", v.level_tol, "Relative tolerance on level-set refinement")
        ->capture_default_str();
    verify->add_option("--out", v.out, "Write the report to this file instead of stdout");
    verify->add_option("--format", v.format, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    ContourArgs c;
    CLI::App* contour = app.add_subcommand("contour", "Extract one level set to CSV (and SVG)");
    contour->add_option("--field", c.field, field_help)->required();
    contour->add_option("--level", c.level, "Level value t")->required()->capture_default_str();
    contour->add_option("--window", c.window, window_help);
    contour->add_option("--res", c.res, "Grid resolution (cells per side)")->capture_default_str();
    contour->add_option("--csv", c.csv, "CSV output path")->required();
    contour->add_option("--svg", c.svg, "SVG output path");

    CurvatureArgs k;
    CLI::App* curvature =
        app.add_subcommand("curvature", "Print the level-curve frame and curvature at a point");
    curvature->add_option("--field", k.field, field_help)->required();
    curvature->add_option("--at", k.at, "Evaluation point x,y")->required();
    curvature->add_option("--window", k.window, window_help);
    curvature->add_option("--grad-tol", k.grad_tol, "Gradient norm below which the frame is undefined")
        ->capture_default_str();

    CriticalArgs p;
    CLI::App* critical =
        app.add_subcommand("critical-points", "List critical points inside the window");
    critical->add_option("--field", p.field, field_help)->required();
    critical->add_option("--window", p.window, window_help);
    critical->add_option("--res", p.res, "Seeding grid resolution")->capture_default_str();
    critical->add_option("--tol", p.tol, "Gradient norm convergence tolerance")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    if (*verify) return run_verify(v);
    if (*contour) return run_contour(c);
    if (*curvature) return run_curvature(k);
    if (*critical) return run_critical_points(p);
    return 1;
}
