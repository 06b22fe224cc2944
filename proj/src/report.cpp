#include "levelband/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

namespace levelband {

namespace {

using ordered_json = nlohmann::ordered_json;

// Round-trips through %.12g so the JSON encoder sees the same double no
// matter how the value was accumulated; keeps reports byte-stable.
double round12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

ordered_json jnum(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round12(v);
}

std::string tnum(double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string report_to_json(const BandReport& r) {
    ordered_json j;
    j["field"] = r.field_desc;
    j["band"] = {{"a", jnum(r.band.a)}, {"b", jnum(r.band.b)}};
    j["window"] = {{"xmin", jnum(r.window.xmin)},
                   {"xmax", jnum(r.window.xmax)},
                   {"ymin", jnum(r.window.ymin)},
                   {"ymax", jnum(r.window.ymax)}};
    j["components"] = ordered_json::array();
    for (const ComponentResult& c : r.components) {
        ordered_json jc;
        jc["id"] = c.id;
        jc["sigma"] = c.sigma == 0 ? ordered_json(nullptr) : ordered_json(c.sigma);
        jc["lhs_direct"] = jnum(c.lhs_direct);
        jc["lhs_coarea"] = jnum(c.lhs_coarea);
        jc["touches_boundary"] = c.touches_boundary;
        j["components"].push_back(std::move(jc));
    }
    j["lhs_direct"] = jnum(r.lhs_direct);
    j["lhs_coarea"] = jnum(r.lhs_coarea);
    j["rhs"] = jnum(r.rhs);
    j["abs_error_direct"] = jnum(r.abs_error_direct);
    j["rel_error_direct"] = jnum(r.rel_error_direct);
    j["abs_error_coarea"] = jnum(r.abs_error_coarea);
    j["rel_error_coarea"] = jnum(r.rel_error_coarea);
    j["critical_points"] = ordered_json::array();
    for (const CriticalPoint& cp : r.critical_points) {
        ordered_json jp;
        jp["x"] = jnum(cp.location.x);
        jp["y"] = jnum(cp.location.y);
        jp["value"] = jnum(cp.value);
        jp["kind"] = critical_kind_name(cp.kind);
        j["critical_points"].push_back(std::move(jp));
    }
    j["warnings"] = r.warnings;
    if (!r.eps_limits.empty()) {
        j["eps_limits"] = ordered_json::array();
        for (const LimitEstimate& e : r.eps_limits) {
            ordered_json je;
            je["epsilons"] = ordered_json::array();
            for (double v : e.epsilons) je["epsilons"].push_back(jnum(v));
            je["values"] = ordered_json::array();
            for (double v : e.values) je["values"].push_back(jnum(v));
            je["coarea_values"] = ordered_json::array();
            for (double v : e.coarea_values) je["coarea_values"].push_back(jnum(v));
            je["limit"] = jnum(e.limit);
            je["coarea_limit"] = jnum(e.coarea_limit);
            je["converged"] = e.converged;
            j["eps_limits"].push_back(std::move(je));
        }
    }
    j["case"] = r.case_label;
    return j.dump(2) + "\n";
}

std::string report_to_text(const BandReport& r) {
    std::ostringstream out;
    out << "field: " << r.field_desc << "\n";
    out << "band: [" << tnum(r.band.a) << ", " << tnum(r.band.b) << "]\n";
    out << "window: [" << tnum(r.window.xmin) << ", " << tnum(r.window.xmax) << "] x ["
        << tnum(r.window.ymin) << ", " << tnum(r.window.ymax) << "]\n";
    out << "case: " << r.case_label << "\n";
    out << "components: " << r.components.size() << "\n";
    for (const ComponentResult& c : r.components) {
        out << "  component " << c.id << ": sigma=";
        if (c.sigma > 0)
            out << "+1";
        else if (c.sigma < 0)
            out << "-1";
        else
            out << "unknown";
        out << " lhs_direct=" << tnum(c.lhs_direct) << " lhs_coarea=" << tnum(c.lhs_coarea)
            << " touches_boundary=" << (c.touches_boundary ? "yes" : "no") << "\n";
    }
    if (r.critical_points.empty()) {
        out << "critical points in band: none\n";
    } else {
        out << "critical points in band:\n";
        for (const CriticalPoint& cp : r.critical_points)
            out << "  (" << tnum(cp.location.x) << ", " << tnum(cp.location.y)
                << ") value=" << tnum(cp.value) << " kind=" << critical_kind_name(cp.kind)
                << "\n";
    }
    if (r.warnings.empty()) {
        out << "warnings: none\n";
    } else {
        out << "warnings:\n";
        for (const std::string& w : r.warnings) out << "  - " << w << "\n";
    }
    out << "LHS=" << tnum(r.lhs_direct) << " RHS=" << tnum(r.rhs)
        << " rel.err=" << tnum(r.rel_error_direct) << "\n";
    return out.str();
}

} // namespace levelband
